#include "eik/fmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace eik {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solve the upwind quadratic sum_i ((T - t_i)/h_i)^2 = 1 over the usable
// subset of per-axis upwind values (t_i sorted ascending, include while
// consistent). Returns +inf when no axis contributes.
double upwind_update(std::vector<std::pair<double, double>>& th) {
  std::sort(th.begin(), th.end());
  double best = kInf;
  double A = 0, B = 0, C = -1;
  for (std::size_t m = 0; m < th.size(); ++m) {
    const auto [t, h] = th[m];
    if (t == kInf || t >= best) break;
    const double w = 1.0 / (h * h);
    A += w;
    B += -2.0 * t * w;
    C += t * t * w;
    const double disc = B * B - 4 * A * C;
    if (disc < 0) break;
    const double T = (-B + std::sqrt(disc)) / (2 * A);
    if (T >= t) best = T;
  }
  return best;
}

}  // namespace

FmmResult solve_fmm(const FmmProblem& p) {
  if (p.sources.empty()) throw std::invalid_argument("solve_fmm: no sources");
  GridField field(p.origin, p.spacing, p.shape);
  const int d = field.dim();
  const std::size_t total = field.size();

  std::vector<std::size_t> stride(d, 1);
  for (int a = d - 2; a >= 0; --a)
    stride[a] = stride[a + 1] * static_cast<std::size_t>(p.shape[a + 1]);

  auto& val = field.values();
  std::fill(val.begin(), val.end(), kInf);
  enum class State : unsigned char { Far, Trial, Known };
  std::vector<State> state(total, State::Far);

  using Entry = std::pair<double, std::size_t>;  // (value, flat index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  for (const FmmSource& s : p.sources) {
    if (!std::isfinite(s.value))
      throw std::invalid_argument("solve_fmm: source value not finite");
    if (static_cast<int>(s.idx.size()) != d)
      throw std::invalid_argument("solve_fmm: source index dimension mismatch");
    for (int a = 0; a < d; ++a)
      if (s.idx[a] < 0 || s.idx[a] >= p.shape[a])
        throw std::invalid_argument("solve_fmm: source index out of range");
    const std::size_t f = field.flat(s.idx);
    val[f] = std::min(val[f], s.value);
    state[f] = State::Trial;
    heap.emplace(val[f], f);
  }

  auto decompose = [&](std::size_t f, std::vector<int>& idx) {
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(f % static_cast<std::size_t>(p.shape[a]));
      f /= static_cast<std::size_t>(p.shape[a]);
    }
  };

  std::vector<int> idx(d);
  std::vector<std::pair<double, double>> th(d);
  FmmResult out;
  double last_accepted = -kInf;

  while (!heap.empty()) {
    const auto [v, f] = heap.top();
    heap.pop();
    if (state[f] == State::Known || v != val[f]) continue;  // stale entry
    state[f] = State::Known;
    if (v < last_accepted)
      throw std::logic_error("solve_fmm: non-monotone acceptance");
    last_accepted = v;
    out.accepted.push_back(v);

    decompose(f, idx);
    for (int a = 0; a < d; ++a) {
      for (int dir = -1; dir <= 1; dir += 2) {
        const int ni = idx[a] + dir;
        if (ni < 0 || ni >= p.shape[a]) continue;
        const std::size_t nf =
            dir > 0 ? f + stride[a] : f - stride[a];
        if (state[nf] == State::Known) continue;
        // Upwind value per axis: smaller Known neighbor along that axis.
        std::vector<int> nidx = idx;
        nidx[a] = ni;
        for (int b = 0; b < d; ++b) {
          double t = kInf;
          if (nidx[b] > 0) {
            const std::size_t g = nf - stride[b];
            if (state[g] == State::Known) t = val[g];
          }
          if (nidx[b] + 1 < p.shape[b]) {
            const std::size_t g = nf + stride[b];
            if (state[g] == State::Known) t = std::min(t, val[g]);
          }
          th[b] = {t, p.spacing[b]};
        }
        const double T = upwind_update(th);
        if (T < val[nf]) {
          val[nf] = T;
          state[nf] = State::Trial;
          heap.emplace(T, nf);
        }
      }
    }
  }
  out.field = std::move(field);
  return out;
}

double fmm_update_residual(const FmmResult& r, const FmmProblem& p) {
  const GridField& g = r.field;
  const int d = g.dim();
  std::vector<std::size_t> stride(d, 1);
  for (int a = d - 2; a >= 0; --a)
    stride[a] = stride[a + 1] * static_cast<std::size_t>(p.shape[a + 1]);

  std::vector<bool> is_source(g.size(), false);
  for (const FmmSource& s : p.sources) is_source[g.flat(s.idx)] = true;

  const auto& val = g.values();
  double worst = 0;
  std::vector<int> idx(d, 0);
  std::vector<std::pair<double, double>> th(d);
  bool more = true;
  std::size_t f = 0;
  for (; more; more = g.next_index(idx), ++f) {
    if (is_source[f] || !std::isfinite(val[f])) continue;
    for (int b = 0; b < d; ++b) {
      double t = kInf;
      if (idx[b] > 0 && val[f - stride[b]] < val[f])
        t = val[f - stride[b]];
      if (idx[b] + 1 < p.shape[b] && val[f + stride[b]] < val[f])
        t = std::min(t, val[f + stride[b]]);
      th[b] = {t, p.spacing[b]};
    }
    const double T = upwind_update(th);
    worst = std::max(worst, std::abs(T - val[f]));
  }
  return worst;
}

ErrorNorms compare(const GridField& numeric,
                   const std::function<double(std::span<const double>)>& analytic) {
  ErrorNorms norms;
  double sumsq = 0;
  std::vector<int> idx(numeric.dim(), 0);
  bool more = true;
  for (; more; more = numeric.next_index(idx)) {
    const double v = numeric.at(idx);
    if (!std::isfinite(v)) continue;
    const auto x = numeric.coord(idx);
    const double e = std::abs(v - analytic(x));
    norms.linf = std::max(norms.linf, e);
    sumsq += e * e;
    ++norms.nodes;
  }
  if (norms.nodes == 0) throw std::runtime_error("compare: no finite nodes");
  norms.l2 = std::sqrt(sumsq / static_cast<double>(norms.nodes));
  return norms;
}

double linf_diff(const GridField& a, const GridField& b) {
  if (a.shape() != b.shape() || a.origin() != b.origin() ||
      a.spacing() != b.spacing())
    throw std::invalid_argument("linf_diff: geometry mismatch");
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double va = a.values()[i], vb = b.values()[i];
    if (!std::isfinite(va) || !std::isfinite(vb)) continue;
    worst = std::max(worst, std::abs(va - vb));
  }
  return worst;
}

double convergence_order(double err_coarse, double err_fine) {
  if (!(err_coarse > 0) || !(err_fine > 0))
    throw std::invalid_argument("convergence_order: errors must be positive");
  return std::log2(err_coarse / err_fine);
}

}  // namespace eik
