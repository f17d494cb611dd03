#include "eik/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eik {

Pchip Pchip::fit(std::vector<double> x, std::vector<double> f) {
  const int m = static_cast<int>(x.size());
  if (m < 3 || f.size() != x.size())
    throw std::invalid_argument("Pchip: need at least 3 samples");
  for (int i = 0; i + 1 < m; ++i)
    if (!(x[i + 1] > x[i])) throw std::invalid_argument("Pchip: x not increasing");

  std::vector<double> h(m - 1), delta(m - 1);
  for (int i = 0; i + 1 < m; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (f[i + 1] - f[i]) / h[i];
  }
  bool inc = delta[0] > 0;
  for (double d : delta)
    if (!(inc ? d > 0 : d < 0))
      throw std::invalid_argument("Pchip: data not strictly monotone");

  std::vector<double> d(m);
  for (int i = 1; i + 1 < m; ++i) {
    // Fritsch-Carlson weighted harmonic mean keeps the cubic monotone.
    const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0) return 0.0;
    if (d0 * d1 < 0 && std::abs(s) > 3 * std::abs(d0)) return 3 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[m - 1] = end_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);

  Pchip p;
  p.x_ = std::move(x);
  p.f_ = std::move(f);
  p.d_ = std::move(d);
  p.inc_ = inc;
  return p;
}

namespace {

double hermite_piece(double x0, double x1, double f0, double f1, double d0,
                     double d1, double at) {
  const double h = x1 - x0;
  const double t = (at - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return f0 * (2 * t3 - 3 * t2 + 1) + h * d0 * (t3 - 2 * t2 + t) +
         f1 * (-2 * t3 + 3 * t2) + h * d1 * (t3 - t2);
}

}  // namespace

double Pchip::eval(double at) const {
  const int m = static_cast<int>(x_.size());
  if (at < x_.front() || at > x_.back())
    throw std::domain_error("Pchip: evaluation outside data range");
  auto it = std::upper_bound(x_.begin(), x_.end(), at);
  int i = std::clamp(static_cast<int>(it - x_.begin()) - 1, 0, m - 2);
  return hermite_piece(x_[i], x_[i + 1], f_[i], f_[i + 1], d_[i], d_[i + 1], at);
}

double Pchip::invert(double target) const {
  const double lo_f = inc_ ? f_.front() : f_.back();
  const double hi_f = inc_ ? f_.back() : f_.front();
  if (target < lo_f || target > hi_f)
    throw std::domain_error("Pchip: inversion target outside attained range");

  // Bracketing interval by the node values, then safeguarded Newton.
  int i = 0;
  const int m = static_cast<int>(x_.size());
  for (; i + 2 < m; ++i) {
    const double a = f_[i], b = f_[i + 1];
    if (inc_ ? (target <= b) : (target >= b)) break;
    (void)a;
  }
  double lo = x_[i], hi = x_[i + 1];
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double fv = hermite_piece(x_[i], x_[i + 1], f_[i], f_[i + 1], d_[i],
                                    d_[i + 1], t) -
                      target;
    if (fv == 0.0) return t;
    if ((fv > 0) == inc_)
      hi = t;
    else
      lo = t;
    // Derivative of the Hermite piece.
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double dv = (f_[i] * (6 * s * s - 6 * s) + h * d_[i] * (3 * s * s - 4 * s + 1) +
                       f_[i + 1] * (-6 * s * s + 6 * s) + h * d_[i + 1] * (3 * s * s - 2 * s)) /
                      h;
    double next = (dv != 0.0) ? t - fv / dv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * (1.0 + std::abs(t))) return next;
    t = next;
  }
  return t;
}

double hermite_eval(const std::vector<double>& xs, const std::vector<double>& fs,
                    const std::vector<double>& slopes, double at) {
  const int m = static_cast<int>(xs.size());
  if (m < 2 || fs.size() != xs.size() || slopes.size() != xs.size())
    throw std::invalid_argument("hermite_eval: inconsistent sample arrays");
  if (at < xs.front() || at > xs.back())
    throw std::domain_error("hermite_eval: outside data range");
  auto it = std::upper_bound(xs.begin(), xs.end(), at);
  int i = std::clamp(static_cast<int>(it - xs.begin()) - 1, 0, m - 2);
  return hermite_piece(xs[i], xs[i + 1], fs[i], fs[i + 1], slopes[i],
                       slopes[i + 1], at);
}

namespace {

struct Run {
  int begin = 0;  // inclusive
  int end = 0;    // exclusive
  int length() const { return end - begin; }
};

// Longest contiguous finite run in a column of samples.
Run longest_finite_run(const std::vector<double>& col) {
  Run best, cur;
  const int m = static_cast<int>(col.size());
  for (int i = 0; i <= m; ++i) {
    if (i < m && std::isfinite(col[i])) {
      if (cur.end != i) cur = {i, i};
      cur.end = i + 1;
      if (cur.length() > best.length()) best = cur;
    }
  }
  return best;
}

// Second-order FD gradient on an equally spaced run (one-sided at the ends).
std::vector<double> fd_gradient(const std::vector<double>& f, double h) {
  const int m = static_cast<int>(f.size());
  std::vector<double> p(m);
  p[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  for (int i = 1; i + 1 < m; ++i) p[i] = (f[i + 1] - f[i - 1]) / (2 * h);
  p[m - 1] = (3 * f[m - 1] - 4 * f[m - 2] + f[m - 3]) / (2 * h);
  return p;
}

struct ColumnView {
  std::vector<double> coords;  // axis-0 coordinates of the run
  std::vector<double> values;  // u on the run
};

// Iterate columns along axis 0: passive index = flattened remaining axes.
template <class Fn>
void for_each_column(const GridField& g, Fn&& fn) {
  const auto& shape = g.shape();
  const int d = g.dim();
  std::vector<int> pass(d - 1, 0);
  int slice = 0;
  for (;;) {
    fn(slice, pass);
    ++slice;
    int a = d - 2;
    for (; a >= 0; --a) {
      if (++pass[a] < shape[a + 1]) break;
      pass[a] = 0;
    }
    if (a < 0) break;
  }
}

std::vector<double> extract_column(const GridField& g,
                                   const std::vector<int>& pass) {
  const int m = g.shape()[0];
  std::vector<int> idx(g.dim());
  std::copy(pass.begin(), pass.end(), idx.begin() + 1);
  std::vector<double> col(m);
  for (int i = 0; i < m; ++i) {
    idx[0] = i;
    col[i] = g.at(idx);
  }
  return col;
}

struct SliceData {
  Run run;
  std::vector<double> coords, values, grad;
};

}  // namespace

GridField legendre_1var(const GridField& u, const TransformOptions& opt) {
  if (u.dim() < 2)
    throw std::invalid_argument("legendre_1var: need at least 2 axes");
  const int m = u.shape()[0];
  const double h = u.spacing()[0];

  std::vector<SliceData> slices;
  double common_lo = -std::numeric_limits<double>::infinity();
  double common_hi = std::numeric_limits<double>::infinity();

  for_each_column(u, [&](int slice, const std::vector<int>& pass) {
    auto col = extract_column(u, pass);
    Run run = longest_finite_run(col);
    if (run.length() < m - static_cast<int>(opt.max_missing_frac * m) ||
        run.length() < 3)
      throw MissingDataError(slice, "legendre_1var: slice " +
                                        std::to_string(slice) +
                                        " has too many missing nodes");
    SliceData sd;
    sd.run = run;
    sd.values.assign(col.begin() + run.begin, col.begin() + run.end);
    for (int i = run.begin; i < run.end; ++i)
      sd.coords.push_back(u.axis_coord(0, i));
    sd.grad = fd_gradient(sd.values, h);
    for (int i = 0; i + 1 < run.length(); ++i) {
      const double step = sd.grad[i + 1] - sd.grad[i];
      if (!((sd.grad[1] > sd.grad[0]) ? step > 0 : step < 0))
        throw MonotonicityError(slice, "legendre_1var: gradient not strictly "
                                       "monotone in slice " +
                                           std::to_string(slice));
    }
    const auto [lo, hi] = std::minmax(sd.grad.front(), sd.grad.back());
    common_lo = std::max(common_lo, lo);
    common_hi = std::min(common_hi, hi);
    slices.push_back(std::move(sd));
  });

  Axis target;
  if (opt.target) {
    target = *opt.target;
  } else {
    if (!(common_hi > common_lo))
      throw MissingDataError(
          -1, "legendre_1var: slices share no common gradient range");
    target.count = m;
    target.origin = common_lo;
    target.spacing = (common_hi - common_lo) / (m - 1);
  }

  std::vector<double> origin{target.origin}, spacing{target.spacing};
  std::vector<int> shape{target.count};
  for (int a = 1; a < u.dim(); ++a) {
    origin.push_back(u.origin()[a]);
    spacing.push_back(u.spacing()[a]);
    shape.push_back(u.shape()[a]);
  }
  GridField H(origin, spacing, shape);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for_each_column(H, [&](int slice, const std::vector<int>& pass) {
    const SliceData& sd = slices[slice];
    Pchip inv = Pchip::fit(sd.coords, sd.grad);
    const double lo = std::min(sd.grad.front(), sd.grad.back());
    const double hi = std::max(sd.grad.front(), sd.grad.back());
    std::vector<int> idx(H.dim());
    std::copy(pass.begin(), pass.end(), idx.begin() + 1);
    for (int j = 0; j < target.count; ++j) {
      idx[0] = j;
      const double y1 = H.axis_coord(0, j);
      if (y1 < lo || y1 > hi) {
        H.at(idx) = nan;
        continue;
      }
      const double x1 = inv.invert(y1);
      const double uval = hermite_eval(sd.coords, sd.values, sd.grad, x1);
      H.at(idx) = x1 * y1 - uval;
    }
  });
  return H;
}

double verify_linearized_ode(const GridField& H) {
  if (H.dim() < 2)
    throw std::invalid_argument("verify_linearized_ode: need at least 2 axes");
  // Difference the passive axes only; y_1 enters through its coordinate.
  const int d = H.dim();
  std::vector<int> idx(d, 0);
  double worst = -1;
  bool more = true;
  for (; more; more = H.next_index(idx)) {
    bool interior = true;
    for (int a = 1; a < d; ++a)
      if (idx[a] == 0 || idx[a] == H.shape()[a] - 1) interior = false;
    if (!interior || std::isnan(H.at(idx))) continue;
    double acc = 0;
    bool ok = true;
    for (int a = 1; a < d; ++a) {
      std::vector<int> lo = idx, hi = idx;
      --lo[a];
      ++hi[a];
      const double fl = H.at(lo), fh = H.at(hi);
      if (std::isnan(fl) || std::isnan(fh)) {
        ok = false;
        break;
      }
      const double dv = (fh - fl) / (2 * H.spacing()[a]);
      acc += dv * dv;
    }
    if (!ok) continue;
    const double y1 = H.axis_coord(0, idx[0]);
    worst = std::max(worst, std::abs(acc + y1 * y1 - 1.0));
  }
  if (worst < 0)
    throw std::runtime_error("verify_linearized_ode: no usable nodes");
  return worst;
}

GridField hodograph(const GridField& u, const TransformOptions& opt) {
  if (u.dim() < 2)
    throw std::invalid_argument("hodograph: need at least 2 axes");
  const int m = u.shape()[0];

  std::vector<SliceData> slices;
  double common_lo = -std::numeric_limits<double>::infinity();
  double common_hi = std::numeric_limits<double>::infinity();

  for_each_column(u, [&](int slice, const std::vector<int>& pass) {
    auto col = extract_column(u, pass);
    Run run = longest_finite_run(col);
    if (run.length() < m - static_cast<int>(opt.max_missing_frac * m) ||
        run.length() < 3)
      throw MissingDataError(slice, "hodograph: slice " + std::to_string(slice) +
                                        " has too many missing nodes");
    SliceData sd;
    sd.run = run;
    sd.values.assign(col.begin() + run.begin, col.begin() + run.end);
    for (int i = run.begin; i < run.end; ++i)
      sd.coords.push_back(u.axis_coord(0, i));
    for (int i = 0; i + 1 < run.length(); ++i) {
      const double step = sd.values[i + 1] - sd.values[i];
      if (!((sd.values[1] > sd.values[0]) ? step > 0 : step < 0))
        throw MonotonicityError(slice, "hodograph: u not strictly monotone in "
                                       "x_0 in slice " +
                                           std::to_string(slice));
    }
    const auto [lo, hi] = std::minmax(sd.values.front(), sd.values.back());
    common_lo = std::max(common_lo, lo);
    common_hi = std::min(common_hi, hi);
    slices.push_back(std::move(sd));
  });

  Axis target;
  if (opt.target) {
    target = *opt.target;
  } else {
    if (!(common_hi > common_lo))
      throw std::runtime_error("hodograph: slices share no common u-range");
    target.count = m;
    target.origin = common_lo;
    target.spacing = (common_hi - common_lo) / (m - 1);
  }

  std::vector<double> origin{target.origin}, spacing{target.spacing};
  std::vector<int> shape{target.count};
  for (int a = 1; a < u.dim(); ++a) {
    origin.push_back(u.origin()[a]);
    spacing.push_back(u.spacing()[a]);
    shape.push_back(u.shape()[a]);
  }
  GridField w(origin, spacing, shape);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for_each_column(w, [&](int slice, const std::vector<int>& pass) {
    const SliceData& sd = slices[slice];
    Pchip inv = Pchip::fit(sd.coords, sd.values);
    const double lo = std::min(sd.values.front(), sd.values.back());
    const double hi = std::max(sd.values.front(), sd.values.back());
    std::vector<int> idx(w.dim());
    std::copy(pass.begin(), pass.end(), idx.begin() + 1);
    for (int j = 0; j < target.count; ++j) {
      idx[0] = j;
      const double y0 = w.axis_coord(0, j);
      w.at(idx) = (y0 < lo || y0 > hi) ? nan : inv.invert(y0);
    }
  });
  return w;
}

double verify_hj(const GridField& v) { return fd_residual_hj(v); }

}  // namespace eik
