#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dnls {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-L, L): x_j = -L + 2L j / n.
/// Frequencies follow the usual FFT ordering, xi_k = pi k / L with
/// k = 0..n/2-1, -n/2..-1.
class SpatialGrid {
 public:
  SpatialGrid(std::size_t n, double half_width);

  std::size_t size() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / static_cast<double>(n_); }
  /// Quadrature weight of the rectangle rule (equals spacing()).
  double weight() const { return spacing(); }

  double node(std::size_t j) const;
  double frequency(std::size_t k) const;

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> frequencies() const { return xi_; }
  /// xi_k^2, used by the free propagator and the gradient functional.
  std::span<const double> frequencies_squared() const { return xi2_; }

  /// True when xi is one of the grid frequencies (to 1e-12 relative).
  bool is_grid_frequency(double xi) const;

  bool operator==(const SpatialGrid& other) const {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  std::size_t n_;
  double half_width_;
  std::vector<double> nodes_;
  std::vector<double> xi_;
  std::vector<double> xi2_;
};

/// Samples of one unknown on a grid at one time.
struct FieldState {
  SpatialGrid grid;
  std::vector<cplx> values;
  double time = 0.0;

  FieldState(SpatialGrid g, double t) : grid(std::move(g)), values(grid.size()), time(t) {}
  FieldState(SpatialGrid g, std::vector<cplx> v, double t);

  std::size_t size() const { return values.size(); }
  bool finite() const;
};

/// Space-time field u(t, x) in one space dimension.
using Field1D = std::function<cplx(double t, double x)>;

/// Samples f(time, x_j) on the grid.
FieldState sample(const SpatialGrid& grid, double time, const Field1D& f);

/// Discrete L2 distance sqrt(sum |a-b|^2 * weight).
double l2_distance(const FieldState& a, const FieldState& b);

}  // namespace dnls
