#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "gyrokit/gyrovector.hpp"
#include "gyrokit/tolerance.hpp"

namespace gyrokit {

/// Gram determinant |a|^2 |b|^2 - (a,b)^2, zero iff a and b are dependent.
inline double gram_determinant(std::span<const double> a,
                               std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  const double aa = detail::dot(a, a);
  const double bb = detail::dot(b, b);
  const double ab = detail::dot(a, b);
  return aa * bb - ab * ab;
}

/// Cayley-Klein distance, scaled so that d(0, u) = artanh|u|:
///
///   d(x, y) = arcosh( (1 - (x,y)) / sqrt((1-|x|^2)(1-|y|^2)) ).
///
/// Evaluated as asinh(sqrt(cosh^2 d - 1)) using
///   (1-(x,y))^2 - (1-|x|^2)(1-|y|^2) = |x-y|^2 - gram(x, y),
/// which keeps short distances accurate where arcosh(1 + tiny) would not.
inline double klein_distance(const GyroVector& x, const GyroVector& y) {
  require_same_dim(x, y);
  const double sx = 1.0 - x.norm_squared();
  const double sy = 1.0 - y.norm_squared();
  if (!(sx > 0.0) || !(sy > 0.0)) {
    throw DomainError("klein_distance: point on the boundary");
  }
  const double dxy = euclidean_distance(x, y);
  // Clamp plays the role of max(1, cosh d) for the arcosh form.
  const double excess =
      std::max(0.0, dxy * dxy - gram_determinant(x.coords(), y.coords()));
  return std::asinh(std::sqrt(excess / (sx * sy)));
}

/// True iff u (+) v and v (+) u agree within `tol`.
inline bool commutes(const GyroVector& u, const GyroVector& v,
                     const ToleranceConfig& tol = {}) {
  return approx_equal(einstein_add(u, v), einstein_add(v, u), tol);
}

inline bool linearly_dependent(std::span<const double> u,
                               std::span<const double> v,
                               const ToleranceConfig& tol = {}) {
  const double g = gram_determinant(u, v);
  const double scale = 1.0 + detail::dot(u, u) * detail::dot(v, v);
  return g <= tol.abs_tol * scale;
}

inline bool linearly_dependent(const GyroVector& u, const GyroVector& v,
                               const ToleranceConfig& tol = {}) {
  return linearly_dependent(u.coords(), v.coords(), tol);
}

/// Collinearity through the gyrogroup: x, y, z are collinear iff
/// ((-x) (+) y) (+) ((-x) (+) z) equals ((-x) (+) z) (+) ((-x) (+) y).
inline bool collinear_gyro(const GyroVector& x, const GyroVector& y,
                           const GyroVector& z, const ToleranceConfig& tol = {}) {
  require_same_dim(x, y);
  require_same_dim(x, z);
  const GyroVector mx = neg(x);
  const GyroVector a = einstein_add(mx, y);
  const GyroVector b = einstein_add(mx, z);
  return approx_equal(einstein_add(a, b), einstein_add(b, a), tol);
}

/// Euclidean chords: y - x and z - x are linearly dependent.
inline bool collinear_direct(const GyroVector& x, const GyroVector& y,
                             const GyroVector& z, const ToleranceConfig& tol = {}) {
  require_same_dim(x, y);
  require_same_dim(x, z);
  std::vector<double> a(x.dim()), b(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    a[i] = y[i] - x[i];
    b[i] = z[i] - x[i];
  }
  return linearly_dependent(a, b, tol);
}

}  // namespace gyrokit
