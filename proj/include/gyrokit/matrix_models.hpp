#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "gyrokit/errors.hpp"
#include "gyrokit/gyrovector.hpp"
#include "gyrokit/tolerance.hpp"

namespace gyrokit {

/// Hermitian 2x2 matrix [[a, b], [conj(b), d]] with b = re_b + i im_b.
struct Hermitian2 {
  double a = 0.0;
  double d = 0.0;
  double re_b = 0.0;
  double im_b = 0.0;

  static Hermitian2 identity() { return {1.0, 1.0, 0.0, 0.0}; }
  static Hermitian2 diagonal(double a, double d) { return {a, d, 0.0, 0.0}; }

  double trace() const { return a + d; }
  double det() const { return a * d - (re_b * re_b + im_b * im_b); }
  bool finite() const {
    return std::isfinite(a) && std::isfinite(d) && std::isfinite(re_b) &&
           std::isfinite(im_b);
  }
  bool positive_definite() const { return finite() && a > 0.0 && det() > 0.0; }

  Hermitian2 scaled(double s) const { return {a * s, d * s, re_b * s, im_b * s}; }

  friend bool operator==(const Hermitian2&, const Hermitian2&) = default;
};

inline double max_abs_diff(const Hermitian2& x, const Hermitian2& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.d - y.d),
                   std::abs(x.re_b - y.re_b), std::abs(x.im_b - y.im_b)});
}

namespace detail {

struct Cplx {
  double re = 0.0;
  double im = 0.0;
};

inline Cplx operator+(Cplx x, Cplx y) { return {x.re + y.re, x.im + y.im}; }
inline Cplx operator*(Cplx x, Cplx y) {
  return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}
inline Cplx conj(Cplx x) { return {x.re, -x.im}; }

/// General complex 2x2 matrix, row-major.
struct Mat2c {
  Cplx m00, m01, m10, m11;

  explicit Mat2c(const Hermitian2& h)
      : m00{h.a, 0.0}, m01{h.re_b, h.im_b}, m10{h.re_b, -h.im_b}, m11{h.d, 0.0} {}
  Mat2c(Cplx a, Cplx b, Cplx c, Cplx d) : m00(a), m01(b), m10(c), m11(d) {}

  friend Mat2c operator*(const Mat2c& x, const Mat2c& y) {
    return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
            x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
  }

  /// Hermitian part; exact for products of the form S B S with S, B Hermitian
  /// up to rounding.
  Hermitian2 hermitian() const {
    const Cplx b = m01 + conj(m10);
    return {m00.re, m11.re, 0.5 * b.re, 0.5 * b.im};
  }
};

/// S B S for Hermitian S, B.
inline Hermitian2 sandwich(const Hermitian2& s, const Hermitian2& b) {
  const Mat2c sm(s);
  return (sm * Mat2c(b) * sm).hermitian();
}

}  // namespace detail

/// Positive definite square root in closed form:
///   sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A)).
inline Hermitian2 sqrt_posdef2(const Hermitian2& m) {
  if (!m.positive_definite()) {
    throw DomainError("sqrt_posdef2: matrix is not positive definite");
  }
  const double sd = std::sqrt(m.det());
  const double norm = std::sqrt(m.trace() + 2.0 * sd);
  return {(m.a + sd) / norm, (m.d + sd) / norm, m.re_b / norm, m.im_b / norm};
}

/// Regular (positive definite) 2x2 density matrix: trace 1.
class DensityMatrix2 {
 public:
  explicit DensityMatrix2(const Hermitian2& h, const ToleranceConfig& tol = {})
      : h_(h) {
    if (!h_.positive_definite()) {
      throw DomainError("density matrix must be positive definite");
    }
    if (!(std::abs(h_.trace() - 1.0) <= tol.abs_tol)) {
      throw DomainError("density matrix must have trace 1 (got " +
                        std::to_string(h_.trace()) + ")");
    }
  }

  /// Wraps a computed matrix whose normalization holds mathematically; only
  /// positive definiteness is enforced.
  static DensityMatrix2 computed(const Hermitian2& h) {
    if (!h.positive_definite()) {
      throw DomainError("density matrix lost positive definiteness");
    }
    return DensityMatrix2(Unchecked{}, h);
  }

  const Hermitian2& matrix() const { return h_; }

  friend bool operator==(const DensityMatrix2&, const DensityMatrix2&) = default;

 private:
  struct Unchecked {};
  DensityMatrix2(Unchecked, const Hermitian2& h) : h_(h) {}

  Hermitian2 h_;
};

/// Positive definite 2x2 matrix with determinant 1.
class PosDef2Det1 {
 public:
  explicit PosDef2Det1(const Hermitian2& h, const ToleranceConfig& tol = {})
      : h_(h) {
    if (!h_.positive_definite()) {
      throw DomainError("matrix must be positive definite");
    }
    if (!(std::abs(h_.det() - 1.0) <= tol.rel_tol)) {
      throw DomainError("matrix must have determinant 1 (got " +
                        std::to_string(h_.det()) + ")");
    }
  }

  /// Wraps a computed matrix whose normalization holds mathematically; only
  /// positive definiteness is enforced.
  static PosDef2Det1 computed(const Hermitian2& h) {
    if (!h.positive_definite()) {
      throw DomainError("matrix lost positive definiteness");
    }
    return PosDef2Det1(Unchecked{}, h);
  }

  const Hermitian2& matrix() const { return h_; }

  friend bool operator==(const PosDef2Det1&, const PosDef2Det1&) = default;

 private:
  struct Unchecked {};
  PosDef2Det1(Unchecked, const Hermitian2& h) : h_(h) {}

  Hermitian2 h_;
};

/// A (.) B = sqrt(A) B sqrt(A) / tr(sqrt(A) B sqrt(A)).
inline DensityMatrix2 odot(const DensityMatrix2& x, const DensityMatrix2& y) {
  const Hermitian2 c = detail::sandwich(sqrt_posdef2(x.matrix()), y.matrix());
  return DensityMatrix2::computed(c.scaled(1.0 / c.trace()));
}

/// A [.] B = sqrt(A) B sqrt(A).
inline PosDef2Det1 boxdot(const PosDef2Det1& x, const PosDef2Det1& y) {
  const Hermitian2 c = detail::sandwich(sqrt_posdef2(x.matrix()), y.matrix());
  // det(c) = det(x) det(y) = 1; not renormalized so a broken product shows.
  return PosDef2Det1::computed(c);
}

/// (I + v_1 s_1 + v_2 s_2 + v_3 s_3) / 2 with the Pauli matrices s_k,
/// i.e. [[1+v3, v1 - i v2], [v1 + i v2, 1-v3]] / 2.
inline DensityMatrix2 bloch_to_density(const GyroVector& v) {
  if (v.dim() != 3) throw DimensionMismatch(3, v.dim());
  return DensityMatrix2::computed(
      Hermitian2{0.5 * (1.0 + v[2]), 0.5 * (1.0 - v[2]), 0.5 * v[0], -0.5 * v[1]});
}

inline GyroVector density_to_bloch(const DensityMatrix2& m) {
  const Hermitian2& h = m.matrix();
  return GyroVector::interior({2.0 * h.re_b, -2.0 * h.im_b, h.a - h.d});
}

/// A / sqrt(det A).
inline PosDef2Det1 normalize_det(const DensityMatrix2& m) {
  const Hermitian2& h = m.matrix();
  return PosDef2Det1::computed(h.scaled(1.0 / std::sqrt(h.det())));
}

/// A / tr A, the inverse of normalize_det.
inline DensityMatrix2 normalize_trace(const PosDef2Det1& m) {
  const Hermitian2& h = m.matrix();
  return DensityMatrix2::computed(h.scaled(1.0 / h.trace()));
}

}  // namespace gyrokit
