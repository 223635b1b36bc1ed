#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gyrokit/errors.hpp"
#include "gyrokit/tolerance.hpp"

namespace gyrokit {

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline std::string format_coords(std::span<const double> c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(c[i]);
  }
  return out + ")";
}

}  // namespace detail

/// A point of the open unit ball B^n, the carrier set of Einstein addition.
/// Coordinates are velocities in units of the speed of light.
class GyroVector {
 public:
  /// Rejects empty or non-finite input and anything with |v| >= 1 - margin.
  explicit GyroVector(std::vector<double> coords,
                      double boundary_margin = kDefaultBoundaryMargin)
      : coords_(std::move(coords)) {
    check_shape();
    const double r = norm();
    if (!(r < 1.0 - boundary_margin)) {
      throw DomainError("vector " + detail::format_coords(coords_) +
                        " is not inside the unit ball (norm " +
                        std::to_string(r) + ")");
    }
  }

  GyroVector(std::initializer_list<double> coords)
      : GyroVector(std::vector<double>(coords)) {}

  static GyroVector zero(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("dimension must be >= 1");
    return GyroVector(std::vector<double>(dim, 0.0));
  }

  /// Wraps a computed point that is mathematically inside the ball. Only the
  /// strict bound |v| < 1 is enforced; the construction margin is for inputs.
  static GyroVector interior(std::vector<double> coords) {
    GyroVector v(Unchecked{}, std::move(coords));
    v.check_shape();
    if (!(v.norm() < 1.0)) {
      throw DomainError("result " + detail::format_coords(v.coords_) +
                        " reached the boundary of the ball");
    }
    return v;
  }

  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& to_vector() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  double norm_squared() const { return detail::dot(coords_, coords_); }
  double norm() const { return std::sqrt(norm_squared()); }
  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(),
                       [](double c) { return c == 0.0; });
  }

  friend bool operator==(const GyroVector&, const GyroVector&) = default;

 private:
  struct Unchecked {};
  GyroVector(Unchecked, std::vector<double> coords) : coords_(std::move(coords)) {}

  void check_shape() const {
    if (coords_.empty()) throw std::invalid_argument("dimension must be >= 1");
    for (double c : coords_) {
      if (!std::isfinite(c)) throw DomainError("non-finite coordinate");
    }
  }

  std::vector<double> coords_;
};

inline void require_same_dim(const GyroVector& a, const GyroVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
}

inline double dot(const GyroVector& u, const GyroVector& v) {
  require_same_dim(u, v);
  return detail::dot(u.coords(), v.coords());
}

/// Lorentz factor 1/sqrt(1-|u|^2).
inline double gamma(const GyroVector& u) {
  const double s2 = 1.0 - u.norm_squared();
  if (!(s2 > 0.0)) throw DomainError("gamma undefined on the boundary");
  return 1.0 / std::sqrt(s2);
}

/// Einstein velocity addition
///
///   u (+) v = 1/(1+(u,v)) * ( u + sqrt(1-|u|^2) v + (u,v)/(1+sqrt(1-|u|^2)) u ).
///
/// Transcribed term by term; the gamma-factor form is kept out of this path
/// so that it can serve as an independent check.
inline GyroVector einstein_add(const GyroVector& u, const GyroVector& v) {
  require_same_dim(u, v);
  const double uv = detail::dot(u.coords(), v.coords());
  const double s = std::sqrt(1.0 - u.norm_squared());
  const double denom = 1.0 + uv;
  const double tail = uv / (1.0 + s);
  std::vector<double> out(u.dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (u[i] + s * v[i] + tail * u[i]) / denom;
  }
  return GyroVector::interior(std::move(out));
}

inline GyroVector neg(const GyroVector& u) {
  std::vector<double> out(u.coords().begin(), u.coords().end());
  for (double& c : out) c = -c;
  return GyroVector::interior(std::move(out));
}

/// gyr[u,v]w = -(u (+) v) (+) (u (+) (v (+) w)), the defect of associativity.
inline GyroVector gyration(const GyroVector& u, const GyroVector& v,
                           const GyroVector& w) {
  require_same_dim(u, v);
  require_same_dim(v, w);
  return einstein_add(neg(einstein_add(u, v)),
                      einstein_add(u, einstein_add(v, w)));
}

/// Point of the diameter through x that corresponds to t under the
/// isomorphism of that diameter with (R, +) sending x to 1.
inline GyroVector line_param(const GyroVector& x, double t) {
  const double r = x.norm();
  if (r == 0.0) throw DomainError("line_param: direction vector is zero");
  if (!std::isfinite(t)) throw DomainError("line_param: non-finite parameter");
  const double scale = std::tanh(t * std::atanh(r)) / r;
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * x[i];
  return GyroVector::interior(std::move(out));
}

/// Componentwise |a_i - b_i| <= abs_tol + rel_tol * max(|a_i|, |b_i|).
inline bool approx_equal(std::span<const double> a, std::span<const double> b,
                         const ToleranceConfig& tol) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double bound =
        tol.abs_tol + tol.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
    if (!(std::abs(a[i] - b[i]) <= bound)) return false;
  }
  return true;
}

inline bool approx_equal(const GyroVector& a, const GyroVector& b,
                         const ToleranceConfig& tol = {}) {
  return approx_equal(a.coords(), b.coords(), tol);
}

/// Euclidean norm of a - b.
inline double euclidean_distance(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double euclidean_distance(const GyroVector& a, const GyroVector& b) {
  return euclidean_distance(a.coords(), b.coords());
}

}  // namespace gyrokit
