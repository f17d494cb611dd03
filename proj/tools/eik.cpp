#include "eik/catalog_json.hpp"
#include "eik/fmm.hpp"
#include "eik/solutions.hpp"
#include "eik/symmetry.hpp"
#include "eik/transforms.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef EIK_VERSION
#define EIK_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kVerifyFail = 1;
constexpr int kParseError = 2;

struct CommonOpts {
  std::string spec;
  std::string out;
  std::optional<std::int64_t> seed;
  std::optional<std::string> branch;
  std::optional<double> tol;
};

json load_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open spec file " + path);
  try {
    json j;
    is >> j;
    return j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("spec JSON parse error: " + std::string(e.what()));
  }
}

std::string fmt(double v) { return eik::format_double(v); }

std::string config_hash(const std::string& command, const json& spec,
                        std::int64_t seed, const std::string& branch,
                        const std::string& tol) {
  std::string canon = command;
  canon += '\n';
  canon += spec.dump();
  canon += '\n';
  canon += std::to_string(seed);
  canon += '\n';
  canon += branch;
  canon += '\n';
  canon += tol;
  return eik::config_hash_hex(canon);
}

std::string header(const std::string& command, const std::string& hash,
                   std::int64_t seed, const std::string& branch,
                   const std::string& tol, const std::string& columns) {
  std::string h;
  h += "# eik " + command + " v" + EIK_VERSION + "\n";
  h += "# config-hash " + hash + "\n";
  h += "# seed " + std::to_string(seed) + "\n";
  if (!branch.empty()) h += "# branch " + branch + "\n";
  h += "# tol " + tol + "\n";
  if (!columns.empty()) h += "# columns " + columns + "\n";
  return h;
}

void emit(const std::string& out_path, const std::string& content) {
  std::fputs(content.c_str(), stdout);
  if (!out_path.empty()) eik::atomic_write_file(out_path, content);
}

void write_grid(const eik::GridField& g, const std::string& path) {
  std::ostringstream ss;
  g.write(ss);
  eik::atomic_write_file(path, ss.str());
}

// ------------------------------------------------------------- verify-ops

int cmd_verify_ops(const CommonOpts& o) {
  const eik::Catalog cat = eik::load_catalog(o.spec);
  const eik::EikonalProblem problem(cat.n, cat.c);
  const auto names = eik::xu_names(cat.n);
  const std::int64_t seed = o.seed.value_or(0);
  const double tol = o.tol.value_or(1e-12);

  json spec_echo{{"catalog", o.spec}, {"n", cat.n},     {"c", cat.c},
                 {"mode", cat.mode},  {"samples", cat.samples}};
  const std::string hash =
      config_hash("verify-ops", spec_echo, seed, "", fmt(tol));

  std::string rep = header("verify-ops", hash, seed, "", fmt(tol), "");
  rep += "# catalog n=" + std::to_string(cat.n) + " c=" + std::to_string(cat.c) +
         " mode=" + cat.mode + " entries=" + std::to_string(cat.entries.size()) +
         "\n";

  int mismatches = 0;
  for (const auto& entry : cat.entries) {
    bool yes = false;
    std::string detail;
    if (cat.mode == "exact") {
      const auto v = eik::is_symmetry(entry.field, problem);
      yes = v.yes;
      if (v.yes) {
        detail = " lambda0=(" + v.lambda0.str(names) + ")";
        detail += " lambda1=[";
        for (int nu = 0; nu <= cat.n; ++nu) {
          if (nu) detail += "; ";
          detail += v.lambda1[nu].str(names);
        }
        detail += "]";
      } else {
        detail = " violated=" + v.violated;
      }
    } else {
      const double worst = eik::sampled_symmetry_check(
          eik::to_smooth(entry.field), problem, cat.samples,
          static_cast<std::uint64_t>(seed));
      yes = worst <= tol;
      detail = " max-residual=" + fmt(worst);
    }
    const bool ok = yes == entry.expect_yes;
    if (!ok) ++mismatches;
    rep += entry.name + " verdict=" + (yes ? "yes" : "no") + detail +
           (ok ? " expected" : " UNEXPECTED") + "\n";
  }
  rep += "# result " + std::string(mismatches == 0 ? "PASS" : "FAIL") + " (" +
         std::to_string(cat.entries.size() - mismatches) + "/" +
         std::to_string(cat.entries.size()) + " as expected)\n";
  emit(o.out, rep);
  return mismatches == 0 ? kOk : kVerifyFail;
}

// ------------------------------------------------------------------- eval

struct NodeRow {
  std::vector<double> x;
  double u = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  int branch_id = -1;
  int newton_iters = 0;
};

eik::GridField grid_from_spec(const json& g) {
  return eik::GridField(g.at("origin").get<std::vector<double>>(),
                        g.at("spacing").get<std::vector<double>>(),
                        g.at("shape").get<std::vector<int>>());
}

int cmd_eval(const CommonOpts& o) {
  const json spec = load_spec(o.spec);
  const std::string equation = spec.value("equation", "minkowski");
  const std::string branch = o.branch.value_or(spec.value("branch", "all"));
  if (branch != "all" && branch != "min-u" && branch != "max-u")
    throw std::invalid_argument("branch must be all, min-u or max-u");
  const std::int64_t seed =
      o.seed ? *o.seed : spec.value("seed", std::int64_t{0});
  const std::string tol_str = o.tol ? fmt(*o.tol) : "none";
  const std::string hash = config_hash("eval", spec, seed, branch, tol_str);

  eik::GridField grid = grid_from_spec(spec.at("grid"));
  const std::string grid_out = spec.value("grid_out", "");
  if (!grid_out.empty() && branch == "all")
    throw std::invalid_argument("grid_out needs a single-branch policy");

  std::vector<NodeRow> rows;
  int degenerate = 0, unconverged = 0;
  eik::GridField ugrid = grid;  // same geometry, holds selected-branch u

  auto push_roots = [&](const std::vector<double>& x,
                        const std::vector<eik::EnvelopeRoot>& roots,
                        const std::function<double(const eik::EnvelopeRoot&)>&
                            residual_of,
                        std::size_t flat_index) {
    if (roots.empty()) {
      ++unconverged;
      rows.push_back({x, std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN(), -1, 0});
      ugrid.values()[flat_index] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    auto emit_root = [&](const eik::EnvelopeRoot& r) {
      rows.push_back({x, r.u, residual_of(r), r.branch_id, r.newton_iters});
    };
    if (branch == "all") {
      for (const auto& r : roots) emit_root(r);
      ugrid.values()[flat_index] = roots.front().u;
    } else if (branch == "min-u") {
      emit_root(roots.front());
      ugrid.values()[flat_index] = roots.front().u;
    } else {
      emit_root(roots.back());
      ugrid.values()[flat_index] = roots.back().u;
    }
  };

  const int expected_dim = equation == "euclid2" ? 2 : spec.at("n").get<int>() + 1;
  if (grid.dim() != expected_dim)
    throw std::invalid_argument("grid dimension does not match the equation");

  if (equation == "euclid2") {
    eik::EnvelopeOptions opt = eik::euclid2_defaults();
    opt.seed = static_cast<std::uint64_t>(seed);
    if (spec.contains("box")) {
      opt.box_lo = spec.at("box").at(0).get<double>();
      opt.box_hi = spec.at("box").at(1).get<double>();
    }
    if (spec.contains("starts")) opt.starts_per_axis = spec.at("starts").get<int>();
    const eik::Poly psi =
        eik::Poly::parse(spec.value("psi", "0"), eik::tau_names(1));

    std::vector<int> idx(2, 0);
    std::size_t f = 0;
    bool more = true;
    for (; more; more = grid.next_index(idx), ++f) {
      const auto x = grid.coord(idx);
      std::vector<eik::EnvelopeRoot> roots;
      try {
        roots = eik::eval_euclid2(psi, x[0], x[1], opt);
      } catch (const eik::DegenerateEnvelopeError&) {
        ++degenerate;
        rows.push_back({x, std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN(), -1, 0});
        ugrid.values()[f] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      push_roots(
          x, roots,
          [](const eik::EnvelopeRoot& r) {
            const double t = r.tau[0];
            const double g2 = std::sqrt(1.0 - t * t);
            return std::abs(t * t + g2 * g2 - 1.0);
          },
          f);
    }
  } else if (equation == "minkowski") {
    const int n = spec.at("n").get<int>();
    const int c = spec.value("c", 1);
    const int rank = spec.at("rank").get<int>();
    const eik::EikonalProblem problem(n, c);

    if (rank == 0) {
      eik::Rank0Solution s;
      s.c = spec.at("c_mu").get<std::vector<double>>();
      s.c0 = spec.value("c0", 0.0);
      const double res =
          std::abs(eik::minkowski_dot(s.c, s.c) - static_cast<double>(c));
      std::vector<int> idx(grid.dim(), 0);
      std::size_t f = 0;
      bool more = true;
      for (; more; more = grid.next_index(idx), ++f) {
        const auto x = grid.coord(idx);
        const double u = eik::eval_rank0(s, x, problem);
        rows.push_back({x, u, res, 0, 0});
        ugrid.values()[f] = u;
      }
    } else {
      if (c != 1)
        throw std::invalid_argument("parametric solutions require c = 1");
      const auto tau = eik::tau_names(rank);
      std::vector<eik::Poly> w;
      for (const auto& ws : spec.value("w", std::vector<std::string>{}))
        w.push_back(eik::Poly::parse(ws, tau));
      const eik::ParametricSolution s(
          n, rank, eik::Poly::parse(spec.value("psi", "0"), tau), std::move(w));
      eik::EnvelopeOptions opt;
      opt.seed = static_cast<std::uint64_t>(seed);
      if (spec.contains("box")) {
        opt.box_lo = spec.at("box").at(0).get<double>();
        opt.box_hi = spec.at("box").at(1).get<double>();
      }
      if (spec.contains("starts"))
        opt.starts_per_axis = spec.at("starts").get<int>();

      std::vector<int> idx(grid.dim(), 0);
      std::size_t f = 0;
      bool more = true;
      for (; more; more = grid.next_index(idx), ++f) {
        const auto x = grid.coord(idx);
        std::vector<eik::EnvelopeRoot> roots;
        try {
          roots = eik::solve_envelope(s, x, opt);
        } catch (const eik::DegenerateEnvelopeError&) {
          ++degenerate;
          rows.push_back({x, std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN(), -1, 0});
          ugrid.values()[f] = std::numeric_limits<double>::quiet_NaN();
          continue;
        }
        push_roots(
            x, roots,
            [&](const eik::EnvelopeRoot& r) {
              const auto g = eik::envelope_gradient(s, r.tau);
              return std::abs(eik::minkowski_dot(g, g) -
                              static_cast<double>(c));
            },
            f);
      }
    }
  } else {
    throw std::invalid_argument("equation must be minkowski or euclid2");
  }

  std::string columns;
  if (equation == "euclid2") {
    columns = "x_1,x_2";
  } else {
    for (int mu = 0; mu < expected_dim; ++mu) {
      if (mu) columns += ",";
      columns += "x_" + std::to_string(mu);
    }
  }
  columns += ",u,residual,branch_id,newton_iters";

  double max_residual = 0;
  std::string csv = header("eval", hash, seed, branch, tol_str, columns);
  for (const NodeRow& r : rows) {
    std::string line;
    for (double xi : r.x) line += fmt(xi) + ",";
    line += fmt(r.u) + "," + fmt(r.residual) + "," +
            std::to_string(r.branch_id) + "," + std::to_string(r.newton_iters);
    csv += line + "\n";
    if (std::isfinite(r.residual))
      max_residual = std::max(max_residual, r.residual);
  }
  csv += "# max-residual " + fmt(max_residual) + "\n";
  csv += "# degenerate-nodes " + std::to_string(degenerate) + "\n";
  csv += "# unconverged-nodes " + std::to_string(unconverged) + "\n";
  emit(o.out, csv);
  if (!grid_out.empty()) write_grid(ugrid, grid_out);
  if (o.tol && max_residual > *o.tol) return kVerifyFail;
  return kOk;
}

// --------------------------------------------------------------- residual

int cmd_residual(const CommonOpts& o) {
  const json spec = load_spec(o.spec);
  const eik::GridField field =
      eik::GridField::read_file(spec.at("field").get<std::string>());
  const std::string equation = spec.at("equation").get<std::string>();
  const double tol = o.tol.value_or(1e-6);
  const std::string hash =
      config_hash("residual", spec, o.seed.value_or(0), "", fmt(tol));

  std::size_t evaluated = 0;
  double worst = 0;
  if (equation == "minkowski") {
    worst = eik::fd_residual_minkowski(field, spec.value("c", 1), &evaluated);
  } else if (equation == "euclid") {
    worst = eik::fd_residual_euclid(field, &evaluated);
  } else if (equation == "space-slices") {
    worst = eik::fd_residual_space_slices(field, &evaluated);
  } else if (equation == "hj") {
    worst = eik::fd_residual_hj(field, &evaluated);
  } else {
    throw std::invalid_argument(
        "equation must be minkowski, euclid, space-slices or hj");
  }

  std::string rep = header("residual", hash, o.seed.value_or(0), "", fmt(tol), "");
  rep += "max-residual " + fmt(worst) + "\n";
  rep += "evaluated-nodes " + std::to_string(evaluated) + "\n";
  emit(o.out, rep);
  return worst <= tol ? kOk : kVerifyFail;
}

// --------------------------------------------------------------- transform

int cmd_transform(const CommonOpts& o) {
  const json spec = load_spec(o.spec);
  const std::string kind = spec.at("kind").get<std::string>();
  const eik::GridField input =
      eik::GridField::read_file(spec.at("input").get<std::string>());
  if (o.out.empty()) throw std::invalid_argument("transform requires --out");

  eik::TransformOptions topt;
  if (spec.contains("target")) {
    const auto& t = spec.at("target");
    topt.target = eik::Axis{t.at("origin").get<double>(),
                            t.at("spacing").get<double>(),
                            t.at("count").get<int>()};
  }
  if (spec.contains("max_missing_frac"))
    topt.max_missing_frac = spec.at("max_missing_frac").get<double>();

  const std::string hash =
      config_hash("transform", spec, o.seed.value_or(0), "", "none");
  std::printf("# eik transform v%s\n# config-hash %s\n", EIK_VERSION,
              hash.c_str());

  try {
    if (kind == "legendre") {
      const eik::GridField H = eik::legendre_1var(input, topt);
      write_grid(H, o.out);
      std::printf("linearized-ode-deviation %s\n",
                  fmt(eik::verify_linearized_ode(H)).c_str());
    } else if (kind == "hodograph") {
      const eik::GridField w = eik::hodograph(input, topt);
      write_grid(w, o.out);
      std::printf("space-slices-deviation %s\n",
                  fmt(eik::fd_residual_space_slices(w)).c_str());
    } else {
      throw std::invalid_argument("kind must be legendre or hodograph");
    }
  } catch (const eik::MonotonicityError& e) {
    std::fprintf(stderr, "transform failed: %s (slice %d)\n", e.what(), e.slice);
    return kVerifyFail;
  } catch (const eik::MissingDataError& e) {
    if (e.slice >= 0)
      std::fprintf(stderr, "transform failed: %s (slice %d)\n", e.what(),
                   e.slice);
    else
      std::fprintf(stderr, "transform failed: %s\n", e.what());
    return kVerifyFail;
  }
  return kOk;
}

// ------------------------------------------------------------- fmm-compare

int cmd_fmm_compare(const CommonOpts& o) {
  const json spec = load_spec(o.spec);
  const auto lo = spec.at("domain").at("lo").get<std::vector<double>>();
  const auto hi = spec.at("domain").at("hi").get<std::vector<double>>();
  const auto resolutions = spec.at("resolutions").get<std::vector<int>>();
  const std::string analytic = spec.value("analytic", "none");
  const double seed_radius = spec.value("seed_radius", 0.0);
  const int d = static_cast<int>(lo.size());
  if (static_cast<int>(hi.size()) != d)
    throw std::invalid_argument("domain lo/hi dimension mismatch");
  if (resolutions.empty())
    throw std::invalid_argument("need at least one resolution");
  if (analytic == "cone" && d != 2)
    throw std::invalid_argument("cone analytic oracle is two-dimensional");
  if (analytic != "cone" && analytic != "none")
    throw std::invalid_argument("analytic must be cone or none");

  struct Src {
    std::vector<double> point;
    double value;
  };
  std::vector<Src> sources;
  for (const auto& s : spec.at("sources"))
    sources.push_back(
        {s.at("point").get<std::vector<double>>(), s.value("value", 0.0)});
  if (sources.empty()) throw std::invalid_argument("need at least one source");
  for (const auto& s : sources)
    if (static_cast<int>(s.point.size()) != d)
      throw std::invalid_argument("source point dimension mismatch");

  std::vector<double> linfs, l2s;
  for (int m : resolutions) {
    eik::FmmProblem p;
    p.origin = lo;
    p.shape.assign(d, m);
    p.spacing.resize(d);
    for (int a = 0; a < d; ++a) p.spacing[a] = (hi[a] - lo[a]) / (m - 1);

    if (seed_radius > 0) {
      std::vector<int> idx(d, 0);
      eik::GridField geom(p.origin, p.spacing, p.shape);
      bool more = true;
      for (; more; more = geom.next_index(idx)) {
        const auto x = geom.coord(idx);
        for (const Src& s : sources) {
          double r2 = 0;
          for (int a = 0; a < d; ++a)
            r2 += (x[a] - s.point[a]) * (x[a] - s.point[a]);
          const double r = std::sqrt(r2);
          if (r <= seed_radius) {
            p.sources.push_back({idx, s.value + r});
            break;
          }
        }
      }
    } else {
      for (const Src& s : sources) {
        std::vector<int> idx(d);
        for (int a = 0; a < d; ++a) {
          idx[a] = static_cast<int>(
              std::lround((s.point[a] - lo[a]) / p.spacing[a]));
          idx[a] = std::clamp(idx[a], 0, m - 1);
        }
        p.sources.push_back({idx, s.value});
      }
    }

    const eik::FmmResult r = eik::solve_fmm(p);
    if (analytic == "cone") {
      const auto norms =
          eik::compare(r.field, [&](std::span<const double> x) {
            double best = std::numeric_limits<double>::infinity();
            for (const Src& s : sources)
              best = std::min(best, s.value + eik::cone_distance_euclid2(
                                                  x[0], x[1], s.point[0],
                                                  s.point[1]));
            return best;
          });
      linfs.push_back(norms.linf);
      l2s.push_back(norms.l2);
    }
  }

  json report;
  report["linf"] = linfs;
  report["l2"] = l2s;
  if (linfs.size() >= 2) {
    report["order"] = eik::convergence_order(linfs[linfs.size() - 2],
                                             linfs[linfs.size() - 1]);
  } else {
    report["order"] = nullptr;
  }
  const std::string hash =
      config_hash("fmm-compare", spec, o.seed.value_or(0), "", "none");
  report["config_hash"] = hash;
  report["version"] = EIK_VERSION;

  const std::string text = report.dump(2) + "\n";
  if (!o.out.empty()) eik::atomic_write_file(o.out, text);
  std::fputs(text.c_str(), stdout);
  if (report["order"].is_null())
    std::printf("order none\n");
  else
    std::printf("order %s\n", fmt(report["order"].get<double>()).c_str());
  return kOk;
}

void add_common(CLI::App* sub, CommonOpts& o, bool spec_required = true) {
  auto* s = sub->add_option("--spec", o.spec, "problem/catalog spec file");
  if (spec_required) s->required();
  sub->add_option("--out", o.out, "output artifact path");
  sub->add_option("--seed", o.seed, "RNG seed (overrides the spec)");
  sub->add_option("--branch", o.branch, "branch policy: all|min-u|max-u");
  sub->add_option("--tol", o.tol, "tolerance override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eikonal symmetry and solution toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  CLI::App* verify = app.add_subcommand("verify-ops", "verify an operator catalog");
  add_common(verify, o);
  CLI::App* eval = app.add_subcommand("eval", "evaluate a solution over a grid");
  add_common(eval, o);
  CLI::App* residual =
      app.add_subcommand("residual", "finite-difference residual of a field");
  add_common(residual, o);
  CLI::App* transform =
      app.add_subcommand("transform", "legendre / hodograph transform");
  add_common(transform, o);
  CLI::App* fmm = app.add_subcommand("fmm-compare", "fast-marching comparison");
  add_common(fmm, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  try {
    if (app.got_subcommand(verify)) return cmd_verify_ops(o);
    if (app.got_subcommand(eval)) return cmd_eval(o);
    if (app.got_subcommand(residual)) return cmd_residual(o);
    if (app.got_subcommand(transform)) return cmd_transform(o);
    if (app.got_subcommand(fmm)) return cmd_fmm_compare(o);
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: spec shape: %s\n", e.what());
    return kParseError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kParseError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kParseError;
  }
  return kParseError;
}
