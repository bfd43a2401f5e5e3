#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hsfw {

/// Dense symmetric d x d matrix, stored full and row-major.
///
/// Every mutating member writes both (i,j) and (j,i) with the same value, so
/// the two cells of a pair are always bitwise equal. Raw mutable access is
/// available for the kernels; callers using it must write symmetric data.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);

  static SymMatrix zeros(std::size_t dim) { return SymMatrix(dim); }
  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);
  /// Builds from a full row-major buffer; the upper triangle wins.
  static SymMatrix from_upper(std::size_t dim, std::span<const double> full);
  /// tau * v v^T, each cell computed as tau * (v_i * v_j).
  static SymMatrix outer(std::span<const double> v, double tau);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double value);
  /// Adds value to the pair (i,j),(j,i); a diagonal cell receives it once.
  void add(std::size_t i, std::size_t j, double value);

  std::span<const double> data() const { return data_; }
  std::span<double> raw() { return data_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  double trace() const;
  double frobenius_norm() const;
  /// Largest |X(i,j) - X(j,i)|; zero for anything built through this class.
  double max_asymmetry() const;

  void fill(double value);
  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double a);

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

/// Frobenius inner product <A, B>.
double inner(const SymMatrix& a, const SymMatrix& b);

/// (1 - gamma) x + gamma w. Throws on dimension mismatch or gamma outside [0,1].
SymMatrix convex_step(const SymMatrix& x, const SymMatrix& w, double gamma);

/// In-place form used by the solver loops.
void convex_step_inplace(SymMatrix& x, const SymMatrix& w, double gamma);

/// Throws std::invalid_argument when the dimensions differ.
void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what);

}  // namespace hsfw
