#include "eik/catalog_json.hpp"
#include "eik/symmetry.hpp"

#include <cstdio>
#include <filesystem>
#include <string>

// Regenerates the shipped operator catalogs. Usage: make_catalogs <out-dir>

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : ".";
  std::filesystem::create_directories(out_dir);
  for (int n = 2; n <= 4; ++n) {
    eik::Catalog cat;
    cat.n = n;
    cat.c = 1;
    cat.mode = "exact";
    for (auto& nf : eik::symmeik1_catalog(n))
      cat.entries.push_back({nf.name, nf.field, true});
    const auto path = out_dir / ("symmeik1_n" + std::to_string(n) + ".json");
    eik::save_catalog(cat, path);
    std::printf("%s: %zu operators\n", path.c_str(), cat.entries.size());
  }
  return 0;
}
