#pragma once

#include "eik/symmetry.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace eik {

/// Operator catalog as stored on disk: named generators with expected
/// verdicts, all coefficients in the polynomial text format over x0..xn, u.
struct CatalogEntry {
  std::string name;
  VectorField field;
  bool expect_yes = true;
};
struct Catalog {
  int n = 0;
  int c = 1;
  std::string mode = "exact";  // or "sampled"
  int samples = 10000;
  std::vector<CatalogEntry> entries;
};

Catalog load_catalog(const std::filesystem::path& path);
void save_catalog(const Catalog& cat, const std::filesystem::path& path);

/// FNV-1a 64-bit over a byte string; hex-formatted configuration fingerprint.
std::uint64_t fnv1a64(std::string_view bytes);
std::string config_hash_hex(std::string_view canonical_json);

/// Write via temp file + rename so failures never leave partial outputs.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace eik
