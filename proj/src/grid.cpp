#include "eik/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace eik {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GridField::GridField(std::vector<double> origin, std::vector<double> spacing,
                     std::vector<int> shape)
    : origin_(std::move(origin)), spacing_(std::move(spacing)),
      shape_(std::move(shape)) {
  if (origin_.size() != shape_.size() || spacing_.size() != shape_.size() ||
      shape_.empty())
    throw std::invalid_argument("GridField: origin/spacing/shape sizes differ");
  std::size_t total = 1;
  for (std::size_t a = 0; a < shape_.size(); ++a) {
    if (shape_[a] < 3)
      throw std::invalid_argument("GridField: every axis needs at least 3 nodes");
    if (!(spacing_[a] > 0))
      throw std::invalid_argument("GridField: spacing must be positive");
    total *= static_cast<std::size_t>(shape_[a]);
  }
  values_.assign(total, 0.0);
}

std::size_t GridField::flat(std::span<const int> idx) const {
  if (idx.size() != shape_.size())
    throw std::invalid_argument("GridField: index dimension mismatch");
  std::size_t f = 0;
  for (std::size_t a = 0; a < shape_.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= shape_[a])
      throw std::out_of_range("GridField: index out of range");
    f = f * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(idx[a]);
  }
  return f;
}

std::vector<double> GridField::coord(std::span<const int> idx) const {
  std::vector<double> c(shape_.size());
  for (std::size_t a = 0; a < shape_.size(); ++a) c[a] = axis_coord(a, idx[a]);
  return c;
}

bool GridField::next_index(std::vector<int>& idx) const {
  for (int a = dim() - 1; a >= 0; --a) {
    if (++idx[a] < shape_[a]) return true;
    idx[a] = 0;
  }
  return false;
}

namespace {

template <class T>
std::string join_csv(const std::vector<T>& v,
                     const std::function<std::string(const T&)>& fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

void GridField::write(std::ostream& os) const {
  os << "# grid d=" << dim() << " origin="
     << join_csv<double>(origin_, format_double) << " spacing="
     << join_csv<double>(spacing_, format_double) << " shape="
     << join_csv<int>(shape_, [](const int& i) { return std::to_string(i); })
     << "\n";
  const int row = shape_.back();
  for (std::size_t i = 0; i < values_.size(); i += row) {
    std::string line;
    for (int j = 0; j < row; ++j) {
      if (j) line += ',';
      line += format_double(values_[i + j]);
    }
    os << line << "\n";
  }
}

void GridField::write_file(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write(os);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_value(const std::string& tok) {
  if (tok == "nan" || tok == "-nan")
    return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = std::stod(tok, &used);
  if (used != tok.size())
    throw std::runtime_error("bad numeric token '" + tok + "' in grid file");
  return v;
}

std::string header_field(const std::string& header, const std::string& key) {
  auto pos = header.find(key + "=");
  if (pos == std::string::npos)
    throw std::runtime_error("grid header missing " + key);
  pos += key.size() + 1;
  auto end = header.find(' ', pos);
  return header.substr(pos, end == std::string::npos ? end : end - pos);
}

}  // namespace

GridField GridField::read(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# grid ", 0) != 0)
    throw std::runtime_error("grid file must start with '# grid' header");

  const int d = std::stoi(header_field(header, "d"));
  std::vector<double> origin, spacing;
  std::vector<int> shape;
  for (const auto& tok : split(header_field(header, "origin"), ','))
    origin.push_back(parse_value(tok));
  for (const auto& tok : split(header_field(header, "spacing"), ','))
    spacing.push_back(parse_value(tok));
  for (const auto& tok : split(header_field(header, "shape"), ','))
    shape.push_back(std::stoi(tok));
  if (static_cast<int>(origin.size()) != d ||
      static_cast<int>(spacing.size()) != d ||
      static_cast<int>(shape.size()) != d)
    throw std::runtime_error("grid header fields disagree about dimension");

  GridField g(std::move(origin), std::move(spacing), std::move(shape));
  std::size_t filled = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (const auto& tok : split(line, ',')) {
      if (filled >= g.values_.size())
        throw std::runtime_error("grid file has more values than shape allows");
      g.values_[filled++] = parse_value(tok);
    }
  }
  if (filled != g.values_.size())
    throw std::runtime_error("grid file has fewer values than shape requires");
  return g;
}

GridField GridField::read_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read(is);
}

namespace {

// Walk interior nodes, hand central differences per axis to `residual`,
// track the max of |residual|. Axes listed in `diff_axes` are differenced;
// a NaN at the node or at any needed neighbor skips the node.
double fd_scan(const GridField& g, std::span<const int> diff_axes,
               const std::function<double(const std::vector<double>& deriv,
                                          const std::vector<int>& idx)>& residual,
               std::size_t* evaluated) {
  const int d = g.dim();
  std::vector<int> idx(d, 0);
  std::vector<double> deriv(d, 0.0);
  double worst = 0.0;
  std::size_t count = 0;
  bool more = true;
  // Interior only along differenced axes.
  for (; more; more = g.next_index(idx)) {
    bool interior = true;
    for (int a : diff_axes)
      if (idx[a] == 0 || idx[a] == g.shape()[a] - 1) {
        interior = false;
        break;
      }
    if (!interior) continue;
    if (std::isnan(g.at(idx))) continue;
    bool ok = true;
    for (int a : diff_axes) {
      std::vector<int> lo = idx, hi = idx;
      --lo[a];
      ++hi[a];
      const double fl = g.at(lo), fh = g.at(hi);
      if (std::isnan(fl) || std::isnan(fh)) {
        ok = false;
        break;
      }
      deriv[a] = (fh - fl) / (2.0 * g.spacing()[a]);
    }
    if (!ok) continue;
    worst = std::max(worst, std::abs(residual(deriv, idx)));
    ++count;
  }
  if (evaluated) *evaluated = count;
  if (count == 0)
    throw std::runtime_error("finite-difference check: no usable interior nodes");
  return worst;
}

std::vector<int> all_axes(int d) {
  std::vector<int> a(d);
  std::iota(a.begin(), a.end(), 0);
  return a;
}

}  // namespace

double fd_residual_minkowski(const GridField& u, int c, std::size_t* evaluated) {
  auto axes = all_axes(u.dim());
  return fd_scan(u, axes,
                 [&](const std::vector<double>& dv, const std::vector<int>&) {
                   double s = dv[0] * dv[0];
                   for (int a = 1; a < u.dim(); ++a) s -= dv[a] * dv[a];
                   return s - c;
                 },
                 evaluated);
}

double fd_residual_euclid(const GridField& u, std::size_t* evaluated) {
  auto axes = all_axes(u.dim());
  return fd_scan(u, axes,
                 [&](const std::vector<double>& dv, const std::vector<int>&) {
                   double s = 0;
                   for (int a = 0; a < u.dim(); ++a) s += dv[a] * dv[a];
                   return s - 1.0;
                 },
                 evaluated);
}

double fd_residual_space_slices(const GridField& w, std::size_t* evaluated) {
  std::vector<int> axes;
  for (int a = 1; a < w.dim(); ++a) axes.push_back(a);
  if (axes.empty())
    throw std::invalid_argument("space-slice residual needs dimension >= 2");
  return fd_scan(w, axes,
                 [&](const std::vector<double>& dv, const std::vector<int>&) {
                   double s = 0;
                   for (int a = 1; a < w.dim(); ++a) s += dv[a] * dv[a];
                   return s - 1.0;
                 },
                 evaluated);
}

double fd_residual_hj(const GridField& v, std::size_t* evaluated) {
  if (v.dim() < 2)
    throw std::invalid_argument("hj residual needs dimension >= 2");
  auto axes = all_axes(v.dim());
  return fd_scan(v, axes,
                 [&](const std::vector<double>& dv, const std::vector<int>&) {
                   double s = 0;
                   for (int a = 1; a < v.dim(); ++a) s += dv[a] * dv[a];
                   return s - 2.0 * dv[0];
                 },
                 evaluated);
}

}  // namespace eik
