#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace eik {

/// Regular tensor-product grid of doubles. Storage is row-major with the
/// last axis fastest; missing samples are NaN. File format: one comment
/// header line
///   # grid d=<dim> origin=<o0,o1,..> spacing=<h0,..> shape=<m0,..>
/// followed by the values as CSV, one innermost row per line, "nan" for
/// missing, floats printed with %.17g so rewrites are byte-identical.
class GridField {
 public:
  GridField() = default;
  GridField(std::vector<double> origin, std::vector<double> spacing,
            std::vector<int> shape);

  int dim() const { return static_cast<int>(shape_.size()); }
  const std::vector<double>& origin() const { return origin_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  std::size_t flat(std::span<const int> idx) const;
  double& at(std::span<const int> idx) { return values_[flat(idx)]; }
  double at(std::span<const int> idx) const { return values_[flat(idx)]; }

  double axis_coord(int axis, int i) const {
    return origin_[axis] + spacing_[axis] * i;
  }
  std::vector<double> coord(std::span<const int> idx) const;

  /// Advance a multi-index in row-major order; false after the last one.
  bool next_index(std::vector<int>& idx) const;

  void write(std::ostream& os) const;
  void write_file(const std::filesystem::path& path) const;
  static GridField read(std::istream& is);
  static GridField read_file(const std::filesystem::path& path);

 private:
  std::vector<double> origin_, spacing_;
  std::vector<int> shape_;
  std::vector<double> values_;
};

/// Format a double exactly as the file writers do (%.17g, "nan").
std::string format_double(double v);

/// Max |<grad u, grad u>_M - c| over interior nodes by central differences;
/// axis 0 is time. Nodes touching a missing sample are skipped; `evaluated`
/// (optional) receives the number of interior nodes that contributed.
double fd_residual_minkowski(const GridField& u, int c,
                             std::size_t* evaluated = nullptr);

/// Same with the all-space metric: max |sum_i (d_i u)^2 - 1|.
double fd_residual_euclid(const GridField& u, std::size_t* evaluated = nullptr);

/// Derivatives along axes 1.. only (axis 0 is a passive parameter):
/// max |sum_{i>=1} (d_i w)^2 - 1|.
double fd_residual_space_slices(const GridField& w,
                                std::size_t* evaluated = nullptr);

/// Hamilton-Jacobi normal form: max |sum_{i>=1} (d_i v)^2 - 2 d_0 v|.
double fd_residual_hj(const GridField& v, std::size_t* evaluated = nullptr);

}  // namespace eik
