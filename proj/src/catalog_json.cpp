#include "eik/catalog_json.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace eik {

using nlohmann::json;

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open catalog " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("catalog JSON parse error: " + std::string(e.what()));
  }

  Catalog cat;
  try {
    cat.n = j.at("n").get<int>();
    cat.c = j.at("c").get<int>();
    cat.mode = j.value("mode", "exact");
    cat.samples = j.value("samples", 10000);
    const auto names = xu_names(cat.n);
    for (const auto& op : j.at("operators")) {
      CatalogEntry e;
      e.name = op.at("name").get<std::string>();
      const auto& xi = op.at("xi");
      if (static_cast<int>(xi.size()) != cat.n + 1)
        throw std::invalid_argument("operator " + e.name + ": xi needs n+1 entries");
      std::vector<Poly> xiv;
      for (const auto& s : xi) xiv.push_back(Poly::parse(s.get<std::string>(), names));
      Poly eta = Poly::parse(op.at("eta").get<std::string>(), names);
      e.field = VectorField(cat.n, std::move(xiv), std::move(eta));
      e.expect_yes = op.value("expect", "yes") == "yes";
      cat.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument("catalog JSON shape error: " + std::string(e.what()));
  }
  if (cat.mode != "exact" && cat.mode != "sampled")
    throw std::invalid_argument("catalog mode must be exact or sampled");
  return cat;
}

void save_catalog(const Catalog& cat, const std::filesystem::path& path) {
  const auto names = xu_names(cat.n);
  json ops = json::array();
  for (const CatalogEntry& e : cat.entries) {
    json xi = json::array();
    for (const Poly& p : e.field.xi) xi.push_back(p.str(names));
    ops.push_back({{"name", e.name},
                   {"xi", xi},
                   {"eta", e.field.eta.str(names)},
                   {"expect", e.expect_yes ? "yes" : "no"}});
  }
  json j{{"n", cat.n}, {"c", cat.c}, {"mode", cat.mode}, {"operators", ops}};
  atomic_write_file(path, j.dump(2) + "\n");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(std::string_view canonical_json) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json)));
  return buf;
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace eik
