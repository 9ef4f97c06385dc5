#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dnls/diagnostics.hpp"

using namespace dnls;

namespace {

FieldState gaussian(const SpatialGrid& grid, double t, double amp, double width = 1.0) {
  return sample(grid, t, [=](double, double x) { return cplx{amp * std::exp(-x * x / (width * width)), 0.0}; });
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("functionals on analytic data") {
    const SpatialGrid grid(512, 20.0);
    const auto spec = EquationSpec::gross_pitaevskii();
    FunctionalEvaluator ev(grid, spec);
    // ψ = e^{-x²}: ∫|ψ|² = √(π/2), ∫|ψ_x|² = √(π/2).
    const FieldState s = gaussian(grid, 0.0, 1.0);
    CHECK(ev.mass(s) == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-12));
    CHECK(ev.grad_l2(s) == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-12));

    // With b = 1: |ψ+b|² - 1 = 2ψ + ψ² for real ψ; compare the potential to direct quadrature.
    double pot = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double p = s.values[j].real();
      pot += std::pow(2 * p + p * p, 2) * grid.weight();
    }
    CHECK(ev.potential_l2(s) == doctest::Approx(pot).epsilon(1e-13));
    CHECK(ev.potential_energy(s) == doctest::Approx(pot / 2).epsilon(1e-13));
    CHECK(ev.energy(s) == doctest::Approx(0.5 * ev.grad_l2(s) + 0.25 * pot).epsilon(1e-13));
  }

  TEST_CASE("energy of the cubic families matches the quartic formula") {
    const SpatialGrid grid(256, 20.0);
    for (Sign sg : {Sign::focusing, Sign::defocusing}) {
      const auto spec = EquationSpec::critical(cplx{0.7, 0.4}, sg, 1.0);
      FunctionalEvaluator ev(grid, spec);
      const FieldState s = gaussian(grid, 3.0, 0.4, 2.0);
      const double expect = 0.5 * ev.grad_l2(s) - sign_value(sg) * ev.potential_l2(s) / (4.0 * 3.0);
      CHECK(ev.energy(s) == doctest::Approx(expect).epsilon(1e-13));
      CHECK(energy_conformal(s, spec, 3.0) == doctest::Approx(expect).epsilon(1e-13));
    }
    CHECK_THROWS_AS(energy_conformal(gaussian(grid, 1.0, 0.1), EquationSpec::gross_pitaevskii(), 1.0),
                    std::invalid_argument);
  }

  TEST_CASE("zero perturbation has zero functionals and zero flux") {
    const SpatialGrid grid(128, 10.0);
    for (const auto& spec : {EquationSpec::critical(cplx{1.0, 0.0}, Sign::defocusing, 1.0),
                             EquationSpec::conformal(cplx{0.5, 0.5}, 1.0, Sign::focusing, 1.0),
                             EquationSpec::direct(cplx{0.5, 0.0}, 1.0, Sign::defocusing, 1.0)}) {
      FunctionalEvaluator ev(grid, spec);
      const FieldState z(grid, 2.0);
      CHECK(ev.mass(z) == 0.0);
      CHECK(ev.grad_l2(z) == 0.0);
      CHECK(ev.potential_l2(z) == 0.0);
      CHECK(std::abs(ev.energy(z)) <= 1e-300);
      CHECK(ev.mass_flux(z) == 0.0);
    }
  }

  TEST_CASE("law residuals are small for well-resolved runs and vanish for zero data") {
    const SpatialGrid grid(512, 60.0);
    const auto spec = EquationSpec::critical(cplx{1.0, 0.0}, Sign::defocusing, 1.0);
    const TimeMesh mesh{1.0, 20.0, 3000, MeshRule::logarithmic};
    IntegrateOptions opt;
    opt.cadence = 50;
    const auto traj = integrate(spec, gaussian(grid, 1.0, 0.2), mesh, opt);
    const auto er = energy_law_residual(traj);
    const auto mr = mass_law_residual(traj);
    CHECK(er.size() == traj.entries.size() - 1);
    double emax = 0, mmax = 0;
    for (double v : er) emax = std::max(emax, std::abs(v));
    for (double v : mr) mmax = std::max(mmax, std::abs(v));
    CHECK(emax <= 1e-5);
    CHECK(mmax <= 1e-5);

    const auto zero = integrate(spec, FieldState(grid, 1.0), mesh, opt);
    for (double v : energy_law_residual(zero)) CHECK(std::abs(v) <= 1e-15);
    for (double v : mass_law_residual(zero)) CHECK(std::abs(v) <= 1e-15);

    Trajectory one = zero;
    one.entries.resize(1);
    CHECK_THROWS_AS(energy_law_residual(one), std::invalid_argument);
  }

  TEST_CASE("energy residual converges at second order in the step") {
    const SpatialGrid grid(256, 40.0);
    const auto spec = EquationSpec::critical(cplx{1.0, 0.0}, Sign::defocusing, 1.0);
    auto final_residual = [&](std::size_t steps) {
      const TimeMesh mesh{1.0, 4.0, steps, MeshRule::logarithmic};
      IntegrateOptions opt;
      opt.cadence = steps;
      return std::abs(integrate(spec, gaussian(grid, 1.0, 0.3), mesh, opt).last().energy_residual);
    };
    const double r1 = final_residual(200), r2 = final_residual(400);
    CAPTURE(r1);
    CAPTURE(r2);
    CHECK(std::log2(r1 / r2) >= 1.7);
  }

  TEST_CASE("a-priori bounds hold on a defocusing critical run and fail on a flipped one") {
    const SpatialGrid grid(512, 60.0);
    const auto spec = EquationSpec::critical(cplx{1.0, 0.0}, Sign::defocusing, 1.0);
    const TimeMesh mesh{1.0, 30.0, 2000, MeshRule::logarithmic};
    IntegrateOptions opt;
    opt.cadence = 20;
    const auto traj = integrate(spec, gaussian(grid, 1.0, 0.25), mesh, opt);
    const AprioriReport rep = check_apriori_bounds(traj, 1e-6);
    CHECK(rep.passed());
    CHECK(rep.grad_margin >= 0.0);
    CHECK(rep.potential_margin >= 0.0);
    CHECK(rep.mass_margin >= 0.0);
    CHECK(rep.dissipation_margin >= 0.0);

    IntegrateOptions bad = opt;
    bad.propagator = EquationSpec::critical(cplx{1.0, 0.0}, Sign::focusing, 1.0);
    const auto flipped = integrate(spec, gaussian(grid, 1.0, 0.6), mesh, bad);
    CHECK_FALSE(check_apriori_bounds(flipped, 1e-6).passed());

    const auto focusing = integrate(EquationSpec::critical(cplx{1.0, 0.0}, Sign::focusing, 1.0),
                                    gaussian(grid, 1.0, 0.1), TimeMesh{1.0, 2.0, 10, MeshRule::logarithmic});
    CHECK_THROWS_AS(check_apriori_bounds(focusing, 1e-6), std::invalid_argument);
  }

  TEST_CASE("Gross-Pitaevskii monitor") {
    const SpatialGrid grid(256, 40.0);
    const auto spec = EquationSpec::gross_pitaevskii();
    const TimeMesh mesh{0.0, 5.0, 5000, MeshRule::uniform};
    IntegrateOptions opt;
    opt.cadence = 100;
    const auto traj = integrate(spec, gaussian(grid, 0.0, 0.1, 2.0), mesh, opt);
    const GpReport rep = gp_monitor(traj);
    CHECK(rep.passed());
    CHECK(rep.max_energy_drift <= 1e-6);
    CHECK(rep.mass_margin >= 0.0);
    CHECK_THROWS_AS(gp_monitor(integrate(EquationSpec::critical(1.0, Sign::defocusing, 1.0), FieldState(grid, 1.0),
                                         TimeMesh{1.0, 2.0, 4, MeshRule::logarithmic})),
                    std::invalid_argument);
  }

  TEST_CASE("geometric energy vanishes on the self-similar profile") {
    const SpatialGrid grid(256, 10.0);
    for (double t : {0.1, 1.0, 3.0}) {
      const double c0 = 0.7;
      std::vector<double> c(grid.size(), c0 / std::sqrt(t)), tau(grid.size());
      for (std::size_t j = 0; j < grid.size(); ++j) tau[j] = grid.node(j) / (2 * t);
      const auto rec = geometric_energy(grid, c, tau, t, c0);
      CHECK(std::abs(rec.value) <= 1e-24);
      // A perturbed amplitude is seen by the amplitude term alone.
      for (double& v : c) v *= 1.1;
      const auto pert = geometric_energy(grid, c, tau, t, c0);
      const double expect = std::pow(c0 * c0 * (1.21 - 1.0), 2) * 2 * grid.half_width();
      CHECK(pert.amplitude_integral == doctest::Approx(expect).epsilon(1e-12));
      CHECK(pert.shape_integral == doctest::Approx(0.0));
    }
  }

  TEST_CASE("two-term power inequality ratios") {
    CHECK(lemma_bound_ratio(cplx{0.0, 0.0}, cplx{1.0, 0.0}, 2.0) == 0.0);
    // r = 1: ||x+y| - |y|| ≤ |x|, the ratio is at most 1/2 and reached for aligned x.
    CHECK(lemma_bound_ratio(cplx{1.0, 0.0}, cplx{1.0, 0.0}, 1.0) == doctest::Approx(0.5));
    // r = 2, aligned: (1+u)^2 - 1 = 2u + u^2 over u + u^2.
    const double u = 0.3;
    CHECK(lemma_bound_ratio(cplx{u, 0.0}, cplx{1.0, 0.0}, 2.0) == doctest::Approx((2 * u + u * u) / (u + u * u)));
    CHECK(lemma_restricted_ratio(cplx{u, 0.0}, cplx{1.0, 0.0}, 2.0) == doctest::Approx(2 + u));
    CHECK_THROWS_AS(lemma_bound_ratio(1.0, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(lemma_bound_ratio(1.0, 1.0, -1.0), std::invalid_argument);

    // Property: small |x| relative to |y| gives ratio → r |cos| ≤ r.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rr(0.0, 4.0);
    for (int i = 0; i < 200; ++i) {
      const double r = rr(rng);
      const cplx y = std::polar(1.0, ang(rng));
      const cplx x = std::polar(1e-7, ang(rng));
      CHECK(lemma_restricted_ratio(x, y, r) <= r + 1e-5);
    }
  }

  TEST_CASE("harness stays within the frozen bounds and is reproducible") {
    const auto a = lemma_harness(20000, 3);
    const auto b = lemma_harness(20000, 3);
    CHECK(a.samples == 20000);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.max_ratio <= kLemmaRatioBound);
    CHECK(a.restricted_samples > 0);
    CHECK(a.max_restricted_ratio <= kLemmaRestrictedBound);
  }
}
