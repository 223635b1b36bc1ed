#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "gyrokit/matrix_models.hpp"

namespace {

using gyrokit::DensityMatrix2;
using gyrokit::GyroVector;
using gyrokit::Hermitian2;
using gyrokit::PosDef2Det1;

// Plain complex 2x2 product, independent of the library's helpers.
struct C2 {
  std::complex<double> m[2][2];
  explicit C2(const Hermitian2& h) {
    m[0][0] = h.a;
    m[0][1] = {h.re_b, h.im_b};
    m[1][0] = {h.re_b, -h.im_b};
    m[1][1] = h.d;
  }
  C2() = default;
  C2 operator*(const C2& o) const {
    C2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    return r;
  }
};

double max_diff(const C2& x, const Hermitian2& h) {
  const C2 y(h);
  double e = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) e = std::max(e, std::abs(x.m[i][j] - y.m[i][j]));
  return e;
}

void expect_near(const Hermitian2& x, const Hermitian2& y, double tol) {
  EXPECT_LE(max_abs_diff(x, y), tol) << "got {" << x.a << ", " << x.d << ", " << x.re_b
                                     << ", " << x.im_b << "}";
}

TEST(SqrtPosdef2, Examples) {
  expect_near(gyrokit::sqrt_posdef2(Hermitian2::identity()), Hermitian2::identity(), 1e-15);
  expect_near(gyrokit::sqrt_posdef2(Hermitian2::diagonal(4, 1)), Hermitian2::diagonal(2, 1),
              1e-15);
  const Hermitian2 m{2, 1, 1, 0};
  const Hermitian2 root = gyrokit::sqrt_posdef2(m);
  const double s5 = std::sqrt(5.0);
  expect_near(root, Hermitian2{3 / s5, 2 / s5, 1 / s5, 0}, 1e-15);
  EXPECT_LE(max_diff(C2(root) * C2(root), m), 1e-15);
}

TEST(SqrtPosdef2, ComplexOffDiagonalSquaresBack) {
  const Hermitian2 m{3.0, 2.0, 0.7, -1.1};
  const Hermitian2 root = gyrokit::sqrt_posdef2(m);
  EXPECT_TRUE(root.positive_definite());
  EXPECT_LE(max_diff(C2(root) * C2(root), m), 1e-14);
}

TEST(SqrtPosdef2, RejectsIndefinite) {
  EXPECT_THROW(gyrokit::sqrt_posdef2(Hermitian2{1, -1, 0, 0}), gyrokit::DomainError);
  EXPECT_THROW(gyrokit::sqrt_posdef2(Hermitian2{1, 1, 1, 0}), gyrokit::DomainError);
}

TEST(DensityMatrix2, Validation) {
  EXPECT_NO_THROW(DensityMatrix2(Hermitian2{0.8, 0.2, 0, 0}));
  EXPECT_THROW(DensityMatrix2(Hermitian2{0.8, 0.3, 0, 0}), gyrokit::DomainError);
  EXPECT_THROW(DensityMatrix2(Hermitian2{0.5, 0.5, 0.5, 0}), gyrokit::DomainError);
}

TEST(PosDef2Det1, Validation) {
  EXPECT_NO_THROW(PosDef2Det1(Hermitian2{2, 0.5, 0, 0}));
  EXPECT_THROW(PosDef2Det1(Hermitian2{2, 1, 0, 0}), gyrokit::DomainError);
}

TEST(Odot, HalfIdentityIsNeutral) {
  const DensityMatrix2 a(Hermitian2{0.7, 0.3, 0.1, -0.2});
  const DensityMatrix2 half(Hermitian2::diagonal(0.5, 0.5));
  expect_near(odot(a, half).matrix(), a.matrix(), 1e-15);
  expect_near(odot(half, a).matrix(), a.matrix(), 1e-15);
}

TEST(Odot, BlochLine) {
  const double expected = (0.5 + 0.3) / (1.0 + 0.5 * 0.3);
  const DensityMatrix2 r = odot(gyrokit::bloch_to_density(GyroVector{0, 0, 0.5}),
                                gyrokit::bloch_to_density(GyroVector{0, 0, 0.3}));
  expect_near(r.matrix(), gyrokit::bloch_to_density(GyroVector{0, 0, expected}).matrix(), 1e-15);
  EXPECT_NEAR(density_to_bloch(r)[2], 0.69565217, 1e-8);
}

TEST(Boxdot, Examples) {
  const PosDef2Det1 a(Hermitian2{1.25, 1.0, 0.4, 0.3});
  const PosDef2Det1 id(Hermitian2::identity());
  expect_near(boxdot(id, a).matrix(), a.matrix(), 1e-15);
  expect_near(boxdot(a, id).matrix(), a.matrix(), 1e-15);
  expect_near(boxdot(PosDef2Det1(Hermitian2::diagonal(2, 0.5)),
                     PosDef2Det1(Hermitian2::diagonal(3, 1.0 / 3)))
                  .matrix(),
              Hermitian2::diagonal(6, 1.0 / 6), 1e-14);
}

TEST(Boxdot, MatchesDirectProduct) {
  const Hermitian2 a{1.25, 1.0, 0.4, 0.3}, b{1.0, 1.13, -0.2, 0.3};
  const Hermitian2 expected_root = gyrokit::sqrt_posdef2(a);
  const C2 direct = C2(expected_root) * C2(b) * C2(expected_root);
  EXPECT_LE(max_diff(direct, boxdot(PosDef2Det1(a), PosDef2Det1(b))
                                 .matrix()),
            1e-14);
}

TEST(Bloch, Examples) {
  expect_near(gyrokit::bloch_to_density(GyroVector::zero(3)).matrix(),
              Hermitian2::diagonal(0.5, 0.5), 0.0);
  expect_near(gyrokit::bloch_to_density(GyroVector{0, 0, 0.6}).matrix(),
              Hermitian2::diagonal(0.8, 0.2), 1e-16);
  expect_near(gyrokit::bloch_to_density(GyroVector{0.6, 0, 0}).matrix(),
              Hermitian2{0.5, 0.5, 0.3, 0}, 0.0);
  EXPECT_THROW(gyrokit::bloch_to_density(GyroVector{0.1, 0.2}), gyrokit::DimensionMismatch);
}

TEST(Bloch, PauliExpansion) {
  // (I + v1 s1 + v2 s2 + v3 s3) / 2 with the standard Pauli matrices.
  const GyroVector v{0.3, -0.4, 0.2};
  const std::complex<double> i(0, 1);
  const std::complex<double> m01 = 0.5 * (v[0] - i * v[1]);
  const Hermitian2 h = gyrokit::bloch_to_density(v).matrix();
  EXPECT_NEAR(h.a, 0.5 * (1 + v[2]), 1e-16);
  EXPECT_NEAR(h.d, 0.5 * (1 - v[2]), 1e-16);
  EXPECT_NEAR(h.re_b, m01.real(), 1e-16);
  EXPECT_NEAR(h.im_b, m01.imag(), 1e-16);
}

TEST(Bloch, Inverse) {
  const GyroVector z = density_to_bloch(DensityMatrix2(Hermitian2::diagonal(0.5, 0.5)));
  EXPECT_EQ(z.norm(), 0.0);
  const GyroVector v = density_to_bloch(DensityMatrix2(Hermitian2::diagonal(0.8, 0.2)));
  EXPECT_NEAR(v[0], 0, 1e-16);
  EXPECT_NEAR(v[1], 0, 1e-16);
  EXPECT_NEAR(v[2], 0.6, 1e-15);
  const GyroVector w{0.3, -0.4, 0.2};
  EXPECT_TRUE(approx_equal(density_to_bloch(gyrokit::bloch_to_density(w)), w));
}

TEST(NormalizeDet, Examples) {
  expect_near(normalize_det(DensityMatrix2(Hermitian2::diagonal(0.5, 0.5))).matrix(),
              Hermitian2::identity(), 1e-15);
  const double root_det = std::sqrt(0.8 * 0.2);
  EXPECT_NEAR(root_det, 0.4, 1e-15);
  const Hermitian2 r = normalize_det(DensityMatrix2(Hermitian2::diagonal(0.8, 0.2))).matrix();
  expect_near(r, Hermitian2::diagonal(0.8 / root_det, 0.2 / root_det), 1e-15);
  expect_near(r, Hermitian2::diagonal(2, 0.5), 1e-15);
}

TEST(NormalizeDet, IsHomomorphismOnAPair) {
  const DensityMatrix2 a(Hermitian2{0.6, 0.4, 0.1, 0.2}), b(Hermitian2{0.3, 0.7, -0.2, 0.05});
  expect_near(normalize_det(odot(a, b)).matrix(),
              boxdot(normalize_det(a), normalize_det(b)).matrix(), 1e-14);
  expect_near(normalize_trace(normalize_det(a)).matrix(), a.matrix(), 1e-15);
}

}  // namespace
