#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gyrokit/errors.hpp"

namespace gyrokit {

/// Dense n x n real matrix, row-major, n >= 2.
class LinearMap {
 public:
  LinearMap(std::size_t dim, std::vector<double> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (dim_ < 2) throw UnsupportedDimension(dim_);
    if (entries_.size() != dim_ * dim_) {
      throw std::invalid_argument("matrix must be square: expected " +
                                  std::to_string(dim_ * dim_) + " entries, got " +
                                  std::to_string(entries_.size()));
    }
    for (double e : entries_) {
      if (!std::isfinite(e)) throw std::invalid_argument("non-finite matrix entry");
    }
  }

  static LinearMap from_rows(const std::vector<std::vector<double>>& rows) {
    std::vector<double> entries;
    entries.reserve(rows.size() * rows.size());
    for (const auto& row : rows) {
      if (row.size() != rows.size()) {
        throw std::invalid_argument("matrix must be square");
      }
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return LinearMap(rows.size(), std::move(entries));
  }

  static LinearMap identity(std::size_t dim) { return scaled_identity(dim, 1.0); }

  static LinearMap scaled_identity(std::size_t dim, double s) {
    std::vector<double> e(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = s;
    return LinearMap(dim, std::move(e));
  }

  static LinearMap diagonal(const std::vector<double>& diag) {
    const std::size_t n = diag.size();
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = diag[i];
    return LinearMap(n, std::move(e));
  }

  /// Plane rotation by `angle` in coordinates (i, j), identity elsewhere.
  static LinearMap givens(std::size_t dim, std::size_t i, std::size_t j,
                          double angle) {
    LinearMap g = identity(dim);
    const double c = std::cos(angle), s = std::sin(angle);
    g.at(i, i) = c;
    g.at(j, j) = c;
    g.at(i, j) = -s;
    g.at(j, i) = s;
    return g;
  }

  std::size_t dim() const { return dim_; }
  std::span<const double> entries() const { return entries_; }

  double operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }
  double& at(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      out[r].assign(entries_.begin() + r * dim_, entries_.begin() + (r + 1) * dim_);
    }
    return out;
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
    std::vector<double> y(dim_, 0.0);
    for (std::size_t r = 0; r < dim_; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) s += (*this)(r, c) * x[c];
      y[r] = s;
    }
    return y;
  }

  LinearMap transpose() const {
    std::vector<double> e(entries_.size());
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) e[c * dim_ + r] = (*this)(r, c);
    return LinearMap(dim_, std::move(e));
  }

  friend LinearMap operator*(const LinearMap& a, const LinearMap& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch(a.dim_, b.dim_);
    const std::size_t n = a.dim_;
    std::vector<double> e(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < n; ++c) e[r * n + c] += a(r, k) * b(k, c);
    return LinearMap(n, std::move(e));
  }

  /// Largest |entry| of a - b.
  friend double max_entry_diff(const LinearMap& a, const LinearMap& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch(a.dim_, b.dim_);
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      m = std::max(m, std::abs(a.entries_[i] - b.entries_[i]));
    }
    return m;
  }

  friend bool operator==(const LinearMap&, const LinearMap&) = default;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

}  // namespace gyrokit
