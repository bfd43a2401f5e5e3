#include "hsfw/core/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hsfw/simd/kernels.hpp"

namespace hsfw {

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.data_[i * m.dim_ + i] = diag[i];
  return m;
}

SymMatrix SymMatrix::from_upper(std::size_t dim, std::span<const double> full) {
  if (full.size() != dim * dim) throw std::invalid_argument("from_upper: buffer size != dim^2");
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) m.set(i, j, full[i * dim + j]);
  return m;
}

SymMatrix SymMatrix::outer(std::span<const double> v, double tau) {
  SymMatrix m(v.size());
  simd::kernels().outer(tau, v.data(), m.data_.data(), v.size());
  return m;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  data_[i * dim_ + j] = value;
  data_[j * dim_ + i] = value;
}

void SymMatrix::add(std::size_t i, std::size_t j, double value) {
  const double updated = data_[i * dim_ + j] + value;
  data_[i * dim_ + j] = updated;
  data_[j * dim_ + i] = updated;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

double SymMatrix::frobenius_norm() const { return std::sqrt(simd::dot(data_, data_)); }

double SymMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      worst = std::max(worst, std::abs(data_[i * dim_ + j] - data_[j * dim_ + i]));
  return worst;
}

void SymMatrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  require_same_dim(*this, other, "operator+=");
  simd::axpy(1.0, other.data_, data_);
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  require_same_dim(*this, other, "operator-=");
  simd::axpy(-1.0, other.data_, data_);
  return *this;
}

SymMatrix& SymMatrix::operator*=(double a) {
  simd::scale(a, data_);
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

double inner(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b, "inner");
  return simd::dot(a.data(), b.data());
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what) {
  if (a.dim() != b.dim())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}

void convex_step_inplace(SymMatrix& x, const SymMatrix& w, double gamma) {
  require_same_dim(x, w, "convex_step");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("convex_step: gamma must lie in [0, 1]");
  simd::lerp(gamma, w.data(), x.raw());
}

SymMatrix convex_step(const SymMatrix& x, const SymMatrix& w, double gamma) {
  SymMatrix out = x;
  convex_step_inplace(out, w, gamma);
  return out;
}

}  // namespace hsfw
