#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

#include "gyrokit/gyrovector.hpp"
#include "gyrokit/linear_map.hpp"

namespace gyrokit {

/// splitmix64 finalizer; decorrelates nearby seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-stream seed from (master seed, name), independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix_seed(master ^ mix_seed(h));
}

/// Reproducible source of points in the ball of radius `rmax`.
///
/// Uniform and Gaussian variates are derived from raw mt19937_64 output by
/// hand (53-bit mantissa fill, Box-Muller) because the standard
/// distributions are implementation-defined and would break golden tests
/// across standard libraries.
class BallSampler {
 public:
  BallSampler(std::uint64_t seed, std::size_t dim, double rmax = 0.999)
      : rng_(seed), dim_(dim), rmax_(rmax) {
    if (dim_ == 0) throw std::invalid_argument("sampler dimension must be >= 1");
    if (!(rmax_ > 0.0 && rmax_ < 1.0)) {
      throw std::invalid_argument("sampler rmax must lie in (0, 1)");
    }
  }

  std::size_t dim() const { return dim_; }
  double rmax() const { return rmax_; }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform direction on the sphere of the sampler's dimension.
  std::vector<double> direction() {
    std::vector<double> d(dim_);
    double r = 0.0;
    do {
      for (double& c : d) c = normal();
      r = detail::norm(d);
    } while (r == 0.0);
    for (double& c : d) c /= r;
    return d;
  }

  /// Uniform in the ball of radius rmax.
  GyroVector point() { return point(rmax_); }

  GyroVector point(double radius_cap) {
    std::vector<double> d = direction();
    const double r = radius_cap * std::pow(uniform(), 1.0 / static_cast<double>(dim_));
    for (double& c : d) c *= r;
    return GyroVector::interior(std::move(d));
  }

 private:
  std::mt19937_64 rng_;
  std::size_t dim_;
  double rmax_;
};

inline GyroVector sample_ball(BallSampler& sampler) { return sampler.point(); }

/// Random orthogonal matrix: product of Givens rotations over every
/// coordinate plane with uniform angles, then a reflection of the first
/// axis with probability 1/2 so both components of O(n) are reached.
inline LinearMap random_orthogonal(std::size_t dim, BallSampler& rng) {
  LinearMap q = LinearMap::identity(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      q = LinearMap::givens(dim, i, j, rng.uniform(0.0, 2.0 * std::numbers::pi)) * q;
    }
  }
  if (rng.uniform() < 0.5) {
    for (std::size_t c = 0; c < dim; ++c) q.at(0, c) = -q(0, c);
  }
  return q;
}

}  // namespace gyrokit
