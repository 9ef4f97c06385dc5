#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dnls/kernels.hpp"
#include "dnls/solver.hpp"

using dnls::cplx;
namespace k = dnls::kernels;

namespace {

struct Inputs {
  std::vector<cplx> psi, bg, factors;
  std::vector<double> w, theta, q;
};

Inputs random_inputs(std::size_t n, std::uint64_t seed, double phase_scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Inputs in;
  for (std::size_t j = 0; j < n; ++j) {
    in.psi.emplace_back(g(rng), g(rng));
    in.bg.emplace_back(g(rng), g(rng));
    in.factors.push_back(std::polar(1.0, 3.0 * u(rng)));
    in.w.push_back(phase_scale * u(rng));
    in.theta.push_back(phase_scale * u(rng));
    in.q.push_back(g(rng));
  }
  return in;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// Restores the dispatch choice after a test that switches tables.
struct TableGuard {
  const char* name;
  explicit TableGuard() : name(k::active().name) {}
  ~TableGuard() { k::select(name); }
};

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar table is always available and selectable") {
    TableGuard guard;
    CHECK(k::select("scalar"));
    CHECK(std::string(k::active().name) == "scalar");
    CHECK_FALSE(k::select("no-such-table"));
  }

  TEST_CASE("avx2 kernels match the scalar reference") {
    const k::KernelTable* simd = k::avx2_table();
    if (simd == nullptr) {
      MESSAGE("AVX2 not available on this machine; equivalence not exercised");
      return;
    }
    const k::KernelTable& ref = k::scalar_table();
    for (std::size_t n : {1u, 3u, 4u, 5u, 7u, 8u, 33u, 1024u, 1027u}) {
      for (double phase_scale : {1.0, 50.0, 2e5}) {
        CAPTURE(n);
        CAPTURE(phase_scale);
        const Inputs in = random_inputs(n, 17 * n + 3, phase_scale);

        auto a = in.psi, b = in.psi;
        ref.multiply(a.data(), in.factors.data(), n);
        simd->multiply(b.data(), in.factors.data(), n);
        CHECK(max_diff(a, b) <= 1e-15 * 8);

        std::vector<cplx> fa(n), fb(n);
        ref.phase_factors(fa.data(), in.w.data(), 0.7, n);
        simd->phase_factors(fb.data(), in.w.data(), 0.7, n);
        CHECK(max_diff(fa, fb) <= 1e-15 * (4 + phase_scale * 1e-1));

        a = in.psi, b = in.psi;
        ref.rotate(a.data(), in.bg.data(), in.theta.data(), n);
        simd->rotate(b.data(), in.bg.data(), in.theta.data(), n);
        CHECK(max_diff(a, b) <= 1e-14 * (1 + phase_scale * 1e-1));

        a = in.psi, b = in.psi;
        ref.cubic_phase(a.data(), in.bg.data(), -0.3, n);
        simd->cubic_phase(b.data(), in.bg.data(), -0.3, n);
        CHECK(max_diff(a, b) <= 1e-13);

        std::vector<double> ra(n), rb(n);
        ref.abs2_shifted(ra.data(), in.psi.data(), in.bg.data(), n);
        simd->abs2_shifted(rb.data(), in.psi.data(), in.bg.data(), n);
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(ra[j] - rb[j]) <= 1e-14 * (1 + ra[j]));

        const auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(x)); };
        CHECK(rel(ref.sum_abs2(in.psi.data(), n), simd->sum_abs2(in.psi.data(), n)) <= 1e-13);
        CHECK(rel(ref.sum_weighted_abs2(in.psi.data(), in.w.data(), n),
                  simd->sum_weighted_abs2(in.psi.data(), in.w.data(), n)) <= 1e-13 * (1 + phase_scale));
        CHECK(rel(ref.sum_potential(in.psi.data(), in.bg.data(), n),
                  simd->sum_potential(in.psi.data(), in.bg.data(), n)) <= 1e-13);
        CHECK(rel(ref.sum_flux(in.q.data(), in.psi.data(), in.bg.data(), n),
                  simd->sum_flux(in.q.data(), in.psi.data(), in.bg.data(), n)) <= 1e-13);
      }
    }
  }

  TEST_CASE("rotate keeps psi = 0 fixed exactly") {
    for (const k::KernelTable* t : {&k::scalar_table(), k::avx2_table()}) {
      if (t == nullptr) continue;
      std::vector<cplx> psi(9, cplx{0.0, 0.0}), bg(9, cplx{0.6, -0.8});
      std::vector<double> theta(9, 0.0);
      t->rotate(psi.data(), bg.data(), theta.data(), 9);
      for (const cplx& z : psi) CHECK(z == cplx{0.0, 0.0});
      t->cubic_phase(psi.data(), bg.data(), 1.3, 9);
      for (const cplx& z : psi) CHECK(z == cplx{0.0, 0.0});
    }
  }

  TEST_CASE("whole integration agrees between tables") {
    if (k::avx2_table() == nullptr) return;
    TableGuard guard;
    const dnls::SpatialGrid grid(256, 20.0);
    const auto spec = dnls::EquationSpec::critical(cplx{1.0, 0.0}, dnls::Sign::defocusing, 1.0);
    const dnls::FieldState init =
        dnls::sample(grid, 1.0, [](double, double x) { return cplx{0.3 * std::exp(-x * x), 0.1 * x * std::exp(-x * x)}; });
    const dnls::TimeMesh mesh{1.0, 10.0, 400, dnls::MeshRule::logarithmic};
    k::select("scalar");
    const auto a = dnls::integrate(spec, init, mesh);
    k::select("avx2");
    const auto b = dnls::integrate(spec, init, mesh);
    CHECK(dnls::l2_distance(a.final_state, b.final_state) <= 1e-12);
    CHECK(std::abs(a.last().energy - b.last().energy) <= 1e-12);
  }
}
