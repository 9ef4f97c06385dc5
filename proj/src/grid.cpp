#include "dnls/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dnls {

SpatialGrid::SpatialGrid(std::size_t n, double half_width) : n_(n), half_width_(half_width) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two >= 8, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half-width must be positive and finite");
  nodes_.resize(n);
  xi_.resize(n);
  xi2_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    nodes_[j] = node(j);
    xi_[j] = frequency(j);
    xi2_[j] = xi_[j] * xi_[j];
  }
}

double SpatialGrid::node(std::size_t j) const {
  return -half_width_ + 2.0 * half_width_ * static_cast<double>(j) / static_cast<double>(n_);
}

double SpatialGrid::frequency(std::size_t k) const {
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  auto kk = static_cast<std::ptrdiff_t>(k);
  if (kk >= half) kk -= static_cast<std::ptrdiff_t>(n_);
  return std::numbers::pi * static_cast<double>(kk) / half_width_;
}

bool SpatialGrid::is_grid_frequency(double xi) const {
  const double k = xi * half_width_ / std::numbers::pi;
  const double nearest = std::round(k);
  if (std::abs(k - nearest) > 1e-12 * std::max(1.0, std::abs(k))) return false;
  return nearest >= -static_cast<double>(n_ / 2) && nearest < static_cast<double>(n_ / 2);
}

FieldState::FieldState(SpatialGrid g, std::vector<cplx> v, double t)
    : grid(std::move(g)), values(std::move(v)), time(t) {
  if (values.size() != grid.size())
    throw std::invalid_argument("field length does not match grid size");
}

bool FieldState::finite() const {
  for (const cplx& z : values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

FieldState sample(const SpatialGrid& grid, double time, const Field1D& f) {
  FieldState s(grid, time);
  for (std::size_t j = 0; j < grid.size(); ++j) s.values[j] = f(time, grid.node(j));
  return s;
}

double l2_distance(const FieldState& a, const FieldState& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("l2_distance: grids differ");
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::norm(a.values[j] - b.values[j]);
  return std::sqrt(acc * a.grid.weight());
}

}  // namespace dnls
