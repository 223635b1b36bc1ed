#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <future>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gyrokit/errors.hpp"
#include "gyrokit/geometry.hpp"
#include "gyrokit/gyrovector.hpp"
#include "gyrokit/matrix_models.hpp"
#include "gyrokit/morphisms.hpp"
#include "gyrokit/report.hpp"
#include "gyrokit/sampling.hpp"
#include "gyrokit/tolerance.hpp"

namespace gyrokit {

/// Inputs shared by every property run. `seed` is already specific to the
/// property (see derive_seed).
struct PropertyContext {
  std::size_t n_samples = 1000;
  std::uint64_t seed = 7;
  ToleranceConfig tol{};
};

namespace properties {

inline constexpr std::size_t kGyroDims[] = {2, 3, 5};
inline constexpr std::size_t kCollinearDims[] = {2, 3};
inline constexpr std::size_t kMapDims[] = {2, 3, 4, 5};

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

namespace detail {

inline PropertyReport start(const char* name, const PropertyContext& ctx) {
  PropertyReport r;
  r.name = name;
  r.seed = ctx.seed;
  return r;
}

inline BallSampler sampler_for(const PropertyContext& ctx, std::size_t dim,
                               const char* stream = "dim") {
  return BallSampler(derive_seed(ctx.seed, std::string(stream) + std::to_string(dim)),
                     dim, ctx.tol.sample_rmax);
}

inline double max_abs_diff(const GyroVector& a, const GyroVector& b) {
  require_same_dim(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Point on the diameter through x with |t| bounded so it stays inside
/// the sampling radius.
inline double max_line_parameter(const GyroVector& x, double rmax) {
  return std::atanh(rmax) / std::atanh(x.norm());
}

using Points = std::vector<GyroVector>;

/// Evaluates one sample, records it and, if it is the first failure,
/// shrinks it by scaling every point toward the origin. `eval(points)`
/// returns {residual, threshold}; `extras` are non-point inputs reported
/// alongside the points.
template <typename Eval>
void observe_points(PropertyReport& r, std::initializer_list<const char*> names,
                    const Points& pts, Eval&& eval,
                    const std::vector<NamedValue>& extras = {}) {
  auto inputs = [&](const Points& p) {
    std::vector<NamedValue> out;
    auto name = names.begin();
    for (const GyroVector& v : p) out.push_back(named(*name++, v));
    out.insert(out.end(), extras.begin(), extras.end());
    return out;
  };
  const auto [residual, threshold] = eval(pts);
  const bool had_failure = r.first_counterexample.has_value();
  r.observe(residual, threshold, [&] { return inputs(pts); });
  if (had_failure || !r.first_counterexample) return;
  r.first_counterexample = shrink_radially(
      *r.first_counterexample, [&](double scale) -> std::optional<Counterexample> {
        Points smaller;
        for (const GyroVector& v : pts) smaller.push_back(::gyrokit::detail::scaled(v, scale));
        const auto [res, thr] = eval(smaller);
        if (res <= thr) return std::nullopt;
        return Counterexample{inputs(smaller), res, thr};
      });
}

inline Hermitian2 random_posdef(BallSampler& rng, double max_condition) {
  // U diag(l1, l2) U^* with a random unitary U given by a Bloch direction.
  const double lmax = std::pow(10.0, rng.uniform(-1.0, 1.0));
  const double lmin = lmax / std::pow(max_condition, rng.uniform());
  BallSampler dir_rng(rng.below(std::numeric_limits<std::uint64_t>::max()), 3);
  const std::vector<double> n = dir_rng.direction();
  // Spectral projectors (I +- n.sigma) / 2.
  const double mean = 0.5 * (lmax + lmin), half = 0.5 * (lmax - lmin);
  return {mean + half * n[2], mean - half * n[2], half * n[0], -half * n[1]};
}

}  // namespace detail

// ---- gyrogroup arithmetic -------------------------------------------------

/// |u (+) v| < 1 for sampled u, v.
inline PropertyReport closure(const PropertyContext& ctx,
                              std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("closure", ctx);
  const double below_one = std::nextafter(1.0, 0.0);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      detail::observe_points(r, {"u", "v"}, {s.point(), s.point()}, [&](const auto& p) {
        return std::pair{einstein_add(p[0], p[1]).norm(), below_one};
      });
    }
  }
  return r;
}

/// u (+) 0 = 0 (+) u = u.
inline PropertyReport identity(const PropertyContext& ctx,
                               std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("identity", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    const GyroVector zero = GyroVector::zero(n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      detail::observe_points(r, {"u"}, {s.point()}, [&](const auto& p) {
        const GyroVector& u = p[0];
        return std::pair{std::max(detail::max_abs_diff(einstein_add(u, zero), u),
                                  detail::max_abs_diff(einstein_add(zero, u), u)),
                         ctx.tol.abs_tol};
      });
    }
  }
  return r;
}

/// u (+) (-u) = (-u) (+) u = 0.
inline PropertyReport left_inverse(const PropertyContext& ctx,
                                   std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("left_inverse", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      detail::observe_points(r, {"u"}, {s.point()}, [&](const auto& p) {
        const GyroVector& u = p[0];
        const GyroVector mu = neg(u);
        return std::pair{std::max(einstein_add(u, mu).norm(), einstein_add(mu, u).norm()),
                         ctx.tol.abs_tol};
      });
    }
  }
  return r;
}

/// (-u) (+) (u (+) v) = v, within abs_tol * gamma(u)^2: the intermediate
/// u (+) v carries a rounding error that left translation by -u stretches
/// by up to gamma(u)^2 near the boundary.
inline PropertyReport left_cancellation(const PropertyContext& ctx,
                                        std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("left_cancellation", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      detail::observe_points(r, {"u", "v"}, {s.point(), s.point()}, [&](const auto& p) {
        const GyroVector &u = p[0], &v = p[1];
        const double g = gamma(u);
        return std::pair{detail::max_abs_diff(einstein_add(neg(u), einstein_add(u, v)), v),
                         ctx.tol.abs_tol * g * g};
      });
    }
  }
  return r;
}

/// gamma(u (+) v) = gamma(u) gamma(v) (1 + (u,v)), relative error.
inline PropertyReport gamma_identity(const PropertyContext& ctx,
                                     std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("gamma_identity", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      detail::observe_points(r, {"u", "v"}, {s.point(), s.point()}, [&](const auto& p) {
        const GyroVector &u = p[0], &v = p[1];
        const double expected = gamma(u) * gamma(v) * (1.0 + dot(u, v));
        return std::pair{std::abs(gamma(einstein_add(u, v)) - expected) / expected,
                         ctx.tol.rel_tol};
      });
    }
  }
  return r;
}

/// (gyr[u,v]w1, gyr[u,v]w2) = (w1, w2), relative to |w1||w2|.
inline PropertyReport gyration_orthogonality(const PropertyContext& ctx,
                                             std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("gyration_orthogonality", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      const detail::Points pts{s.point(), s.point(), s.point(), s.point()};
      detail::observe_points(r, {"u", "v", "w1", "w2"}, pts, [&](const auto& p) {
        const GyroVector &u = p[0], &v = p[1], &w1 = p[2], &w2 = p[3];
        const double lhs = dot(gyration(u, v, w1), gyration(u, v, w2));
        const double e = std::abs(lhs - dot(w1, w2)) /
                         std::max(w1.norm() * w2.norm(), std::numeric_limits<double>::min());
        return std::pair{e, ctx.tol.rel_tol};
      });
    }
  }
  return r;
}

/// u (+) v = gyr[u,v](v (+) u).
inline PropertyReport gyrocommutativity(const PropertyContext& ctx,
                                        std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("gyrocommutativity", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      detail::observe_points(r, {"u", "v"}, {s.point(), s.point()}, [&](const auto& p) {
        const GyroVector &u = p[0], &v = p[1];
        return std::pair{
            detail::max_abs_diff(einstein_add(u, v), gyration(u, v, einstein_add(v, u))),
            ctx.tol.abs_tol};
      });
    }
  }
  return r;
}

/// line_param(x,s) (+) line_param(x,t) = line_param(x,s+t) with all three
/// points inside the sampling radius.
inline PropertyReport one_parameter_subgroup(const PropertyContext& ctx,
                                             std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("one_parameter_subgroup", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      const GyroVector x = s.point();
      if (x.norm() == 0.0) continue;
      const double tmax = detail::max_line_parameter(x, ctx.tol.sample_rmax);
      double a = 0.0, b = 0.0;
      do {
        a = s.uniform(-tmax, tmax);
        b = s.uniform(-tmax, tmax);
      } while (std::abs(a + b) > tmax);
      detail::observe_points(
          r, {"x"}, {x},
          [&](const auto& p) {
            const GyroVector la = line_param(p[0], a), lb = line_param(p[0], b);
            return std::pair{
                detail::max_abs_diff(einstein_add(la, lb), line_param(p[0], a + b)),
                ctx.tol.abs_tol};
          },
          {named("s", a), named("t", b)});
    }
  }
  return r;
}

// ---- geometry ---------------------------------------------------------------

/// Commutation iff linear dependence, both directions. Residual 1 marks a
/// misclassified pair. Independent pairs are drawn with a Gram determinant
/// above 1e3 abs_tol, outside the band where the predicates may disagree.
inline PropertyReport commutes_iff_dependent(const PropertyContext& ctx,
                                             std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("commutes_iff_dependent", ctx);
  const double band = 1e3 * ctx.tol.abs_tol;
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      const GyroVector u = s.point();
      const double lim = ctx.tol.sample_rmax / std::max(u.norm(), 1e-300);
      std::vector<double> vc = u.to_vector();
      const double t = s.uniform(-lim, lim);
      for (double& c : vc) c *= t;
      const GyroVector v = GyroVector::interior(std::move(vc));
      const bool ok = commutes(u, v, ctx.tol) && linearly_dependent(u, v, ctx.tol);
      r.observe(ok ? 0.0 : 1.0, 0.0, [&] {
        return std::vector{named("u", u), named("v", v), named("dependent", 1.0)};
      });
    }
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      GyroVector u = s.point(), v = s.point();
      while (gram_determinant(u.coords(), v.coords()) <= band) {
        u = s.point();
        v = s.point();
      }
      const bool ok = !commutes(u, v, ctx.tol) && !linearly_dependent(u, v, ctx.tol);
      r.observe(ok ? 0.0 : 1.0, 0.0, [&] {
        return std::vector{named("u", u), named("v", v), named("dependent", 0.0)};
      });
    }
  }
  return r;
}

/// collinear_gyro agrees with collinear_direct on triples along a chord and
/// on triples in general position (Gram determinant of y-x, z-x outside the
/// decision band). Residual 1 marks a disagreement or a wrong answer.
inline PropertyReport collinear_equivalence(const PropertyContext& ctx,
                                            std::span<const std::size_t> dims = kCollinearDims) {
  PropertyReport r = detail::start("collinear_equivalence", ctx);
  const double band = 1e3 * ctx.tol.abs_tol;
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      const GyroVector x = s.point(), y = s.point();
      std::vector<double> zc(n);
      do {
        const double t = s.uniform(-2.0, 2.0);
        for (std::size_t k = 0; k < n; ++k) zc[k] = x[k] + t * (y[k] - x[k]);
      } while (::gyrokit::detail::norm(zc) > ctx.tol.sample_rmax);
      const GyroVector z = GyroVector::interior(zc);
      const bool g = collinear_gyro(x, y, z, ctx.tol);
      const bool d = collinear_direct(x, y, z, ctx.tol);
      r.observe(g && d ? 0.0 : 1.0, 0.0, [&] {
        return std::vector{named("x", x), named("y", y), named("z", z), named("on_chord", 1.0)};
      });
    }
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      GyroVector x = s.point(), y = s.point(), z = s.point();
      auto gram = [&] {
        std::vector<double> a(n), b(n);
        for (std::size_t k = 0; k < n; ++k) {
          a[k] = y[k] - x[k];
          b[k] = z[k] - x[k];
        }
        const double scale = 1.0 + ::gyrokit::detail::dot(a, a) * ::gyrokit::detail::dot(b, b);
        return gram_determinant(a, b) / scale;
      };
      while (gram() <= band) {
        x = s.point();
        y = s.point();
        z = s.point();
      }
      const bool g = collinear_gyro(x, y, z, ctx.tol);
      const bool d = collinear_direct(x, y, z, ctx.tol);
      r.observe(!g && !d ? 0.0 : 1.0, 0.0, [&] {
        return std::vector{named("x", x), named("y", y), named("z", z), named("on_chord", 0.0)};
      });
    }
  }
  return r;
}

/// d(u (+) v, u (+) w) = d(v, w), absolute error within rel_tol (1 + gamma(u)).
inline PropertyReport left_translation_isometry(const PropertyContext& ctx,
                                                std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("left_translation_isometry", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      const detail::Points pts{s.point(), s.point(), s.point()};
      detail::observe_points(r, {"u", "v", "w"}, pts, [&](const auto& p) {
        const GyroVector &u = p[0], &v = p[1], &w = p[2];
        return std::pair{std::abs(klein_distance(einstein_add(u, v), einstein_add(u, w)) -
                                  klein_distance(v, w)),
                         ctx.tol.rel_tol * (1.0 + gamma(u))};
      });
    }
  }
  return r;
}

/// d(x, y) = d(y, x); d(x, x) = 0; d(x, y) > 0 when x and y differ by more
/// than abs_tol.
inline PropertyReport distance_axioms(const PropertyContext& ctx,
                                      std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("distance_axioms", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      detail::observe_points(r, {"x", "y"}, {s.point(), s.point()}, [&](const auto& p) {
        const GyroVector &x = p[0], &y = p[1];
        const double dxy = klein_distance(x, y);
        double e = std::max(std::abs(dxy - klein_distance(y, x)), klein_distance(x, x));
        if (euclidean_distance(x, y) > ctx.tol.abs_tol && !(dxy > 0.0)) e = HUGE_VAL;
        return std::pair{e, ctx.tol.abs_tol};
      });
    }
  }
  return r;
}

/// d(0, line_param(x, t)) = |t| artanh|x|, relative error.
inline PropertyReport line_translation_distance(const PropertyContext& ctx,
                                                std::span<const std::size_t> dims = kGyroDims) {
  PropertyReport r = detail::start("line_translation_distance", ctx);
  for (std::size_t n : dims) {
    BallSampler s = detail::sampler_for(ctx, n);
    const GyroVector origin = GyroVector::zero(n);
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      const GyroVector x = s.point();
      if (x.norm() == 0.0) continue;
      const double tmax = detail::max_line_parameter(x, ctx.tol.sample_rmax);
      const double t = s.uniform(-tmax, tmax);
      detail::observe_points(
          r, {"x"}, {x},
          [&](const auto& p) {
            const double expected = std::abs(t) * std::atanh(p[0].norm());
            return std::pair{
                std::abs(klein_distance(origin, line_param(p[0], t)) - expected) /
                    std::max(expected, 1.0),
                ctx.tol.rel_tol};
          },
          {named("t", t)});
    }
  }
  return r;
}

// ---- endomorphisms ------------------------------------------------------------

/// Every map that passes test_endomorphism fixes 0. Maps cycle through
/// random orthogonal restrictions, the zero map and linear contractions.
inline PropertyReport endomorphism_fixes_zero(const PropertyContext& ctx) {
  PropertyReport r = detail::start("endomorphism_fixes_zero", ctx);
  BallSampler s(derive_seed(ctx.seed, "maps"), 2, ctx.tol.sample_rmax);
  for (std::size_t i = 0; i < ctx.n_samples; ++i) {
    const std::size_t n = kMapDims[i % std::size(kMapDims)];
    BallMap f = BallMap::zero(n);
    if (i % 3 == 0) {
      f = BallMap::linear(random_orthogonal(n, s));
    } else if (i % 3 == 2) {
      f = BallMap::linear(LinearMap::scaled_identity(n, s.uniform(0.2, 0.95)));
    }
    const PropertyReport endo = test_endomorphism(f, 20, s.below(1u << 31), ctx.tol);
    const double e = endo.passed ? f(GyroVector::zero(n)).norm() : 0.0;
    r.observe(e, ctx.tol.abs_tol, [&] { return std::vector{named("map_index", double(i))}; });
  }
  return r;
}

/// Q(u (+) v) = Qu (+) Qv for random orthogonal Q over the full sampling
/// radius, within abs_tol * gamma(u) gamma(v).
inline PropertyReport orthogonal_endomorphism(const PropertyContext& ctx) {
  PropertyReport r = detail::start("orthogonal_endomorphism", ctx);
  BallSampler s(derive_seed(ctx.seed, "maps"), 2, ctx.tol.sample_rmax);
  for (std::size_t i = 0; i < ctx.n_samples; ++i) {
    const std::size_t n = kMapDims[i % std::size(kMapDims)];
    const BallMap f = BallMap::linear(random_orthogonal(n, s));
    BallSampler ps(s.below(std::numeric_limits<std::uint64_t>::max()), n, ctx.tol.sample_rmax);
    detail::observe_points(r, {"u", "v"}, {ps.point(), ps.point()}, [&](const auto& p) {
      return std::pair{endomorphism_residual(f, p[0], p[1]),
                       ctx.tol.abs_tol * gamma(p[0]) * gamma(p[1])};
    });
  }
  return r;
}

/// Same equation at radius <= 0.9 against the rounding bound
/// 10 eps gamma(u) gamma(v).
inline PropertyReport orthogonal_residual_bound(const PropertyContext& ctx) {
  PropertyReport r = detail::start("orthogonal_residual_bound", ctx);
  BallSampler s(derive_seed(ctx.seed, "maps"), 2, 0.9);
  for (std::size_t i = 0; i < ctx.n_samples; ++i) {
    const std::size_t n = kMapDims[i % std::size(kMapDims)];
    const LinearMap q = random_orthogonal(n, s);
    const BallMap f = BallMap::linear(q);
    BallSampler ps(s.below(std::numeric_limits<std::uint64_t>::max()), n, 0.9);
    detail::observe_points(r, {"u", "v"}, {ps.point(), ps.point()}, [&](const auto& p) {
      return std::pair{endomorphism_residual(f, p[0], p[1]),
                       10.0 * kEps * gamma(p[0]) * gamma(p[1])};
    });
  }
  return r;
}

namespace detail {

/// Q1 diag(sigma) Q2 with singular values in [0.2, 0.95]: a contraction
/// that is never orthogonal.
inline LinearMap random_contraction(std::size_t n, BallSampler& s) {
  std::vector<double> sigma(n);
  for (double& x : sigma) x = s.uniform(0.2, 0.95);
  return random_orthogonal(n, s) * LinearMap::diagonal(sigma) * random_orthogonal(n, s);
}

inline constexpr std::size_t kClassifierSamples = 200;

}  // namespace detail

/// Verdicts match construction on n_samples / 10 instances each of random
/// orthogonal maps, the zero map and non-orthogonal linear contractions.
/// A NotEndomorphism witness must reproduce a residual above threshold when
/// recomputed from scratch.
inline PropertyReport classifier_soundness(const PropertyContext& ctx) {
  PropertyReport r = detail::start("classifier_soundness", ctx);
  BallSampler s(derive_seed(ctx.seed, "maps"), 2, ctx.tol.sample_rmax);
  const std::size_t instances = std::max<std::size_t>(1, ctx.n_samples / 10);
  for (std::size_t i = 0; i < instances; ++i) {
    for (int family = 0; family < 3; ++family) {
      const std::size_t n = kMapDims[(i + family) % std::size(kMapDims)];
      BallMap f = BallMap::zero(n);
      if (family == 0) f = BallMap::linear(random_orthogonal(n, s));
      if (family == 2) f = BallMap::linear(detail::random_contraction(n, s));
      const std::uint64_t seed = s.below(1u << 31);
      const MapClassification c =
          classify_endomorphism(f, detail::kClassifierSamples, seed, ctx.tol);
      bool ok = (family == 0 && c.is_orthogonal()) || (family == 1 && c.is_zero());
      if (family == 2 && c.is_not_endomorphism()) {
        const auto& w = std::get<verdict::NotEndomorphism>(c.verdict);
        ok = endomorphism_residual(f, w.witness_u, w.witness_v) > ctx.tol.decision_threshold();
      }
      r.observe(ok ? 0.0 : 1.0, 0.0, [&] {
        return std::vector{named("family", double(family)), named("dim", double(n)),
                           named("seed", double(seed))};
      });
    }
  }
  return r;
}

/// The matrix recovered for an orthogonal map matches it entrywise within
/// 10 abs_tol.
inline PropertyReport classifier_reconstruction(const PropertyContext& ctx) {
  PropertyReport r = detail::start("classifier_reconstruction", ctx);
  BallSampler s(derive_seed(ctx.seed, "maps"), 2, ctx.tol.sample_rmax);
  const std::size_t instances = std::max<std::size_t>(1, ctx.n_samples / 10);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = kMapDims[i % std::size(kMapDims)];
    const LinearMap q = random_orthogonal(n, s);
    const MapClassification c = classify_endomorphism(
        BallMap::linear(q), detail::kClassifierSamples, s.below(1u << 31), ctx.tol);
    const double e = c.is_orthogonal()
                         ? max_entry_diff(std::get<verdict::Orthogonal>(c.verdict).q, q)
                         : HUGE_VAL;
    r.observe(e, 10.0 * ctx.tol.abs_tol, [&] {
      return std::vector{NamedValue{"q", std::vector<double>(q.entries().begin(), q.entries().end())}};
    });
  }
  return r;
}

/// The zero map passes zero_propagation_check at x = (1/2, 0, ...) in every
/// dimension with deviations <= abs_tol; a map that vanishes only on
/// |w| <= 0.9 must fail it (residual 1 if it does not).
inline PropertyReport zero_propagation(const PropertyContext& ctx) {
  PropertyReport r = detail::start("zero_propagation", ctx);
  for (std::size_t n : kMapDims) {
    std::vector<double> xc(n, 0.0);
    xc[0] = 0.5;
    const GyroVector x(xc);
    const std::uint64_t seed = derive_seed(ctx.seed, "zp" + std::to_string(n));
    const ZeroPropagationReport zp =
        zero_propagation_check(BallMap::zero(n), x, ctx.n_samples, seed, ctx.tol);
    r.observe(zp.passed() ? zp.max_deviation() : HUGE_VAL, ctx.tol.abs_tol,
              [&] { return std::vector{named("x", x), named("control", 0.0)}; });

    const BallMap broken(n, [n](std::span<const double> w) {
      if (::gyrokit::detail::norm(w) > 0.9) return std::vector<double>(w.begin(), w.end());
      return std::vector<double>(n, 0.0);
    });
    const ZeroPropagationReport bad =
        zero_propagation_check(broken, x, ctx.n_samples, seed, ctx.tol);
    r.observe(bad.passed() ? 1.0 : 0.0, 0.0,
              [&] { return std::vector{named("x", x), named("control", 1.0)}; });
  }
  return r;
}

// ---- matrix models --------------------------------------------------------------

/// bloch(u (+) v) = bloch(u) (.) bloch(v), entrywise within rel_tol.
inline PropertyReport bloch_homomorphism(const PropertyContext& ctx) {
  PropertyReport r = detail::start("bloch_homomorphism", ctx);
  BallSampler s = detail::sampler_for(ctx, 3);
  for (std::size_t i = 0; i < ctx.n_samples; ++i) {
    detail::observe_points(r, {"u", "v"}, {s.point(), s.point()}, [&](const auto& p) {
      const GyroVector &u = p[0], &v = p[1];
      return std::pair{
          max_abs_diff(bloch_to_density(einstein_add(u, v)).matrix(),
                       odot(bloch_to_density(u), bloch_to_density(v)).matrix()),
          ctx.tol.rel_tol};
    });
  }
  return r;
}

/// normalize_det(A (.) B) = normalize_det(A) [.] normalize_det(B), relative
/// to the largest entry.
inline PropertyReport det_normalization_homomorphism(const PropertyContext& ctx) {
  PropertyReport r = detail::start("det_normalization_homomorphism", ctx);
  BallSampler s = detail::sampler_for(ctx, 3);
  for (std::size_t i = 0; i < ctx.n_samples; ++i) {
    detail::observe_points(r, {"u", "v"}, {s.point(), s.point()}, [&](const auto& p) {
      const DensityMatrix2 a = bloch_to_density(p[0]), b = bloch_to_density(p[1]);
      const Hermitian2 lhs = normalize_det(odot(a, b)).matrix();
      const Hermitian2 rhs = boxdot(normalize_det(a), normalize_det(b)).matrix();
      const double scale = std::max({std::abs(lhs.a), std::abs(lhs.d), 1.0});
      return std::pair{max_abs_diff(lhs, rhs) / scale, ctx.tol.rel_tol};
    });
  }
  return r;
}

/// sqrt_posdef2(A)^2 = A relative to the largest entry of A, for random
/// positive definite A with condition number <= 1e4; the root must be
/// positive definite.
inline PropertyReport sqrt_squaring(const PropertyContext& ctx) {
  PropertyReport r = detail::start("sqrt_squaring", ctx);
  BallSampler s = detail::sampler_for(ctx, 3);
  for (std::size_t i = 0; i < ctx.n_samples; ++i) {
    const Hermitian2 m = detail::random_posdef(s, 1e4);
    const Hermitian2 root = sqrt_posdef2(m);
    const Hermitian2 sq = ::gyrokit::detail::sandwich(root, Hermitian2::identity());
    const double scale = std::max(std::abs(m.a), std::abs(m.d));
    const double e = root.positive_definite() ? max_abs_diff(sq, m) / scale : HUGE_VAL;
    r.observe(e, ctx.tol.rel_tol, [&] {
      return std::vector{NamedValue{"m", {m.a, m.d, m.re_b, m.im_b}}};
    });
  }
  return r;
}

/// det(sqrt(A) B sqrt(A)) = det(A) det(B) for det-1 pairs reached through
/// the Bloch ball, relative error.
inline PropertyReport det_multiplicative(const PropertyContext& ctx) {
  PropertyReport r = detail::start("det_multiplicative", ctx);
  BallSampler s = detail::sampler_for(ctx, 3);
  for (std::size_t i = 0; i < ctx.n_samples; ++i) {
    detail::observe_points(r, {"u", "v"}, {s.point(), s.point()}, [&](const auto& p) {
      const PosDef2Det1 a = normalize_det(bloch_to_density(p[0]));
      const PosDef2Det1 b = normalize_det(bloch_to_density(p[1]));
      const double expected = a.matrix().det() * b.matrix().det();
      return std::pair{std::abs(boxdot(a, b).matrix().det() - expected) / expected,
                       ctx.tol.rel_tol};
    });
  }
  return r;
}

/// A -> bloch(Q bloch^-1(A)) respects (.) for random orthogonal Q.
inline PropertyReport transported_automorphism(const PropertyContext& ctx) {
  PropertyReport r = detail::start("transported_automorphism", ctx);
  BallSampler s = detail::sampler_for(ctx, 3);
  for (std::size_t i = 0; i < ctx.n_samples; ++i) {
    const LinearMap q = random_orthogonal(3, s);
    auto phi = [&](const DensityMatrix2& m) {
      return bloch_to_density(GyroVector::interior(q.apply(density_to_bloch(m).coords())));
    };
    detail::observe_points(
        r, {"u", "v"}, {s.point(), s.point()},
        [&](const auto& p) {
          const DensityMatrix2 a = bloch_to_density(p[0]), b = bloch_to_density(p[1]);
          return std::pair{
              max_abs_diff(phi(odot(a, b)).matrix(), odot(phi(a), phi(b)).matrix()),
              ctx.tol.rel_tol};
        },
        {NamedValue{"q", std::vector<double>(q.entries().begin(), q.entries().end())}});
  }
  return r;
}

}  // namespace properties

struct PropertySpec {
  std::string name;
  std::string module;
  std::function<PropertyReport(const PropertyContext&)> run;
};

/// Every registered property, in a fixed order.
inline const std::vector<PropertySpec>& registry() {
  namespace p = properties;
  static const std::vector<PropertySpec> specs = [&] {
    auto dims = [](PropertyReport (*fn)(const PropertyContext&, std::span<const std::size_t>),
                   std::span<const std::size_t> d) {
      return [fn, d](const PropertyContext& c) { return fn(c, d); };
    };
    return std::vector<PropertySpec>{
        {"closure", "gyro-core", dims(p::closure, p::kGyroDims)},
        {"identity", "gyro-core", dims(p::identity, p::kGyroDims)},
        {"left_inverse", "gyro-core", dims(p::left_inverse, p::kGyroDims)},
        {"left_cancellation", "gyro-core", dims(p::left_cancellation, p::kGyroDims)},
        {"gamma_identity", "gyro-core", dims(p::gamma_identity, p::kGyroDims)},
        {"gyration_orthogonality", "gyro-core", dims(p::gyration_orthogonality, p::kGyroDims)},
        {"gyrocommutativity", "gyro-core", dims(p::gyrocommutativity, p::kGyroDims)},
        {"one_parameter_subgroup", "gyro-core", dims(p::one_parameter_subgroup, p::kGyroDims)},
        {"commutes_iff_dependent", "geometry", dims(p::commutes_iff_dependent, p::kGyroDims)},
        {"collinear_equivalence", "geometry", dims(p::collinear_equivalence, p::kCollinearDims)},
        {"left_translation_isometry", "geometry",
         dims(p::left_translation_isometry, p::kGyroDims)},
        {"distance_axioms", "geometry", dims(p::distance_axioms, p::kGyroDims)},
        {"line_translation_distance", "geometry",
         dims(p::line_translation_distance, p::kGyroDims)},
        {"endomorphism_fixes_zero", "morphisms", p::endomorphism_fixes_zero},
        {"orthogonal_endomorphism", "morphisms", p::orthogonal_endomorphism},
        {"orthogonal_residual_bound", "morphisms", p::orthogonal_residual_bound},
        {"classifier_soundness", "morphisms", p::classifier_soundness},
        {"classifier_reconstruction", "morphisms", p::classifier_reconstruction},
        {"zero_propagation", "morphisms", p::zero_propagation},
        {"bloch_homomorphism", "matrix-models", p::bloch_homomorphism},
        {"det_normalization_homomorphism", "matrix-models", p::det_normalization_homomorphism},
        {"sqrt_squaring", "matrix-models", p::sqrt_squaring},
        {"det_multiplicative", "matrix-models", p::det_multiplicative},
        {"transported_automorphism", "matrix-models", p::transported_automorphism},
    };
  }();
  return specs;
}

inline std::vector<std::string> registered_names() {
  std::vector<std::string> names;
  for (const auto& spec : registry()) names.push_back(spec.name);
  return names;
}

inline const PropertySpec& find_property(const std::string& name) {
  for (const auto& spec : registry()) {
    if (spec.name == name) return spec;
  }
  std::string msg = "unknown property '" + name + "'; registered:";
  for (const auto& n : registered_names()) msg += " " + n;
  throw UnknownProperty(msg);
}

struct SuiteOptions {
  bool parallel = false;
};

/// Runs each named property with its own stream seeded from (seed, name),
/// so results do not depend on order or on `parallel`. Unknown names are
/// rejected before anything runs.
inline std::vector<PropertyReport> run_suite(const std::vector<std::string>& names,
                                             std::size_t n_samples, std::uint64_t seed,
                                             const ToleranceConfig& tol = {},
                                             SuiteOptions options = {}) {
  tol.validate();
  if (n_samples == 0) throw std::invalid_argument("n_samples must be >= 1");
  std::vector<const PropertySpec*> specs;
  for (const auto& name : names) specs.push_back(&find_property(name));

  auto run_one = [&](const PropertySpec& spec) {
    PropertyReport r = spec.run({n_samples, derive_seed(seed, spec.name), tol});
    r.seed = seed;
    return r;
  };

  std::vector<PropertyReport> out;
  out.reserve(specs.size());
  if (!options.parallel) {
    for (const PropertySpec* spec : specs) out.push_back(run_one(*spec));
    return out;
  }
  std::vector<std::future<PropertyReport>> pending;
  for (const PropertySpec* spec : specs) {
    pending.push_back(std::async(std::launch::async, run_one, std::cref(*spec)));
  }
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

inline std::size_t failure_count(const std::vector<PropertyReport>& reports) {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.passed; }));
}

}  // namespace gyrokit
