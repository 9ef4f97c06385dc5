#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dnls/closed_forms.hpp"
#include "dnls/solver.hpp"

using namespace dnls;

namespace {

// Centered second-order differences of i u_t + u_xx + s|u|^α u at (t, x).
double fd_residual(const SelfSimilarParams& p, double t, double x, double ht, double hx) {
  auto u = [&](double tt, double xx) {
    const double xs[1] = {xx};
    return eval_u_selfsim(p, tt, xs);
  };
  const cplx ut = (u(t + ht, x) - u(t - ht, x)) / (2.0 * ht);
  const cplx uxx = (u(t, x + hx) - 2.0 * u(t, x) + u(t, x - hx)) / (hx * hx);
  const cplx u0 = u(t, x);
  const double s = sign_value(p.sign);
  const cplx nl = s * std::pow(std::abs(u0), p.alpha) * u0;
  return std::abs(cplx{0.0, 1.0} * ut + uxx + nl) /
         (std::abs(ut) + std::abs(uxx) + std::abs(nl));
}

}  // namespace

TEST_SUITE("closed_forms") {
  TEST_CASE("eval_fa examples") {
    SelfSimilarParams p;
    const double x0[1] = {0.0};
    const cplx v = eval_fa(p, 1.0, x0);
    CHECK(std::abs(v - std::polar(1.0, -std::numbers::pi / 4)) <= 1e-15);

    p.a = 0.0;
    const double x1[1] = {3.7};
    CHECK(eval_fa(p, 2.0, x1) == cplx{0.0, 0.0});

    p.a = 2.0;
    for (double x : {-10.0, -1.0, 0.0, 0.5, 7.0}) {
      const double xs[1] = {x};
      CHECK(std::abs(std::abs(eval_fa(p, 4.0, xs)) - 1.0) <= 4e-16);
    }
    CHECK_THROWS_AS(eval_fa(p, 0.0, x0), std::domain_error);
    CHECK_THROWS_AS(eval_fa(p, -1.0, x0), std::domain_error);
  }

  TEST_CASE("modulus is |a| t^{-d/2} in several dimensions") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0), tt(0.1, 10.0);
    for (int d = 1; d <= 3; ++d) {
      SelfSimilarParams p{cplx{0.7, -0.4}, 1.0, d, Sign::focusing};
      for (int i = 0; i < 50; ++i) {
        std::vector<double> x(d);
        for (double& xi : x) xi = u(rng);
        const double t = tt(rng);
        const double expect = std::abs(p.a) * std::pow(t, -0.5 * d);
        CHECK(std::abs(std::abs(eval_fa(p, t, x)) - expect) <= 4 * 2.3e-16 * expect);
      }
    }
  }

  TEST_CASE("eval_phase_A examples") {
    SelfSimilarParams p{1.0, 1.0, 1, Sign::defocusing};
    CHECK(eval_phase_A(p, 4.0) == doctest::Approx(4.0).epsilon(1e-15));
    p.alpha = 2.0;
    p.a = 3.0;
    CHECK(eval_phase_A(p, 1.0) == 0.0);
    p.a = 1.0;
    CHECK(eval_phase_A(p, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("phase is continuous across the critical threshold") {
    for (double delta : {1e-6, -1e-6}) {
      SelfSimilarParams crit{1.0, 2.0, 1, Sign::defocusing};
      SelfSimilarParams near{1.0, 2.0 * (1.0 - delta), 1, Sign::defocusing};
      for (double t : {0.5, 0.8, 1.0, 1.5, 2.0}) {
        // A(t) - A(1) removes the 1/(1-αd/2) constant that diverges at criticality.
        const double a_near = eval_phase_A(near, t) - eval_phase_A(near, 1.0);
        CHECK(std::abs(a_near - eval_phase_A(crit, t)) <= 1e-4);
      }
    }
  }

  TEST_CASE("self-similar solution solves the equation (finite differences)") {
    for (double alpha : {0.5, 1.0, 2.0}) {
      for (Sign s : {Sign::focusing, Sign::defocusing}) {
        SelfSimilarParams p{cplx{0.8, 0.3}, alpha, 1, s};
        CHECK(fd_residual(p, 1.0, 0.3, 1e-4, 1e-4) <= 1e-6);
        const double r1 = fd_residual(p, 1.5, -0.7, 1e-2, 1e-2);
        const double r2 = fd_residual(p, 1.5, -0.7, 1e-3, 1e-3);
        CHECK(std::log10(r1 / r2) >= 1.9);
      }
    }
  }

  TEST_CASE("f_a solves the free equation with second-order differences") {
    SelfSimilarParams p{1.0, 0.0, 1, Sign::defocusing};  // α = 0: no nonlinear phase
    auto res = [&](double h) {
      auto f = [&](double t, double x) {
        const double xs[1] = {x};
        return eval_fa(p, t, xs);
      };
      const double t = 1.2, x = 0.4;
      const cplx ft = (f(t + h, x) - f(t - h, x)) / (2 * h);
      const cplx fxx = (f(t, x + h) - 2.0 * f(t, x) + f(t, x - h)) / (h * h);
      return std::abs(cplx{0, 1} * ft + fxx);
    };
    CHECK(std::log10(res(1e-2) / res(1e-3)) >= 1.9);
  }

  TEST_CASE("Galilean transform") {
    SelfSimilarParams p{cplx{1.1, 0.2}, 1.0, 1, Sign::focusing};
    const FieldND u = selfsim_field(p);
    const double x[1] = {0.2};
    const cplx base = u(1.0, x);
    CHECK(std::abs(galilean_transform(u, GalileanBoost{{0.7}}, 1.0, x) - base) <= 1e-12 * std::abs(base));
    CHECK(galilean_transform(u, GalileanBoost{{0.0}}, 1.0, x) == base);

    // Plane wave e^{i(kx - k^2 t)} boosts to wavenumber k + ν.
    const double k = 1.3, nu = -0.45;
    const FieldND wave = [k](double t, std::span<const double> xs) { return std::polar(1.0, k * xs[0] - k * k * t); };
    for (double t : {0.3, 2.0}) {
      for (double xx : {-1.0, 0.4}) {
        const double xs[1] = {xx};
        const cplx expect = std::polar(1.0, (k + nu) * xx - (k + nu) * (k + nu) * t);
        CHECK(std::abs(galilean_transform(wave, GalileanBoost{{nu}}, t, xs) - expect) <= 1e-13);
      }
    }
    CHECK_THROWS_AS(galilean_transform(u, GalileanBoost{{1.0, 2.0}}, 1.0, x), std::invalid_argument);
  }

  TEST_CASE("conformal transform of constants and of the phase-carrying background") {
    SelfSimilarParams p{cplx{0.5, -0.2}, 1.0, 1, Sign::defocusing};
    const FieldND constant = [&](double, std::span<const double>) { return p.a; };
    const FieldND zero = [](double, std::span<const double>) { return cplx{0.0, 0.0}; };
    // v ≡ a carried with e^{±iA(1/s)}.
    const FieldND carried = [&](double s, std::span<const double>) {
      return std::polar(1.0, sign_value(p.sign) * eval_phase_A(p, 1.0 / s)) * p.a;
    };
    for (double t : {0.2, 1.0, 3.0}) {
      for (double xx : {-2.0, 0.0, 1.5}) {
        const double xs[1] = {xx};
        CHECK(std::abs(conformal_transform(constant, 1, t, xs) - eval_fa(p, t, xs)) <= 1e-14);
        CHECK(conformal_transform(zero, 1, t, xs) == cplx{0.0, 0.0});
        CHECK(std::abs(conformal_transform(carried, 1, t, xs) - eval_u_selfsim(p, t, xs)) <= 1e-14);
      }
    }
    const double xs[1] = {0.0};
    CHECK_THROWS_AS(conformal_transform(constant, 1, 0.0, xs), std::domain_error);
  }

  TEST_CASE("trigonometric interpolation reproduces band-limited data") {
    const SpatialGrid grid(64, 5.0);
    const double k1 = 3 * std::numbers::pi / 5.0;
    FieldState s = sample(grid, 1.0, [&](double, double x) { return cplx{std::cos(k1 * x), 0.5 * std::sin(2 * k1 * x)}; });
    const TrigInterpolant I(s);
    for (double y : {-4.93, -1.1, 0.0, 0.77, 4.99}) {
      const cplx expect{std::cos(k1 * y), 0.5 * std::sin(2 * k1 * y)};
      CHECK(std::abs(I(y) - expect) <= 1e-13);
    }
    CHECK_THROWS_AS(I(5.5), std::out_of_range);
  }

  TEST_CASE("reconstruct_u examples") {
    SelfSimilarParams p{1.0, 1.0, 1, Sign::defocusing};
    const SpatialGrid grid(128, 20.0);
    const double t = 0.5;
    FieldState zero(grid, 1.0 / t);
    const double xs[1] = {0.6};
    CHECK(std::abs(reconstruct_u(zero, p, t, 0.6) - eval_u_selfsim(p, t, xs)) <= 1e-15);

    FieldState eps = sample(grid, 1.0 / t, [](double, double y) { return cplx{0.3, 0.1} * std::exp(-y * y); });
    const TrigInterpolant I(eps);
    for (double x : {-1.0, 0.0, 0.35}) {
      const double x1[1] = {x};
      const double diff = std::abs(reconstruct_u(I, p, t, x) - eval_u_selfsim(p, t, x1));
      CHECK(diff == doctest::Approx(std::abs(I(x / t)) / std::sqrt(t)).epsilon(1e-12));
    }
    FieldState wrong(grid, 3.0);
    CHECK_THROWS_AS(reconstruct_u(wrong, p, t, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(reconstruct_u(I, p, t, 15.0), std::out_of_range);
  }

  TEST_CASE("parameter validation") {
    SelfSimilarParams p;
    p.alpha = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.alpha = 1.0;
    p.d = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    SelfSimilarParams q{1.0, 1.0, 2, Sign::focusing};
    CHECK(q.critical());
    CHECK_FALSE(q.subcritical());
    q.alpha = 0.5;
    CHECK(q.subcritical());
  }
}
