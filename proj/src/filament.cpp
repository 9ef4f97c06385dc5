#include "dnls/filament.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace dnls {

namespace {

Vec3 add(const Vec3& u, const Vec3& v) { return {u[0] + v[0], u[1] + v[1], u[2] + v[2]}; }
Vec3 sub(const Vec3& u, const Vec3& v) { return {u[0] - v[0], u[1] - v[1], u[2] - v[2]}; }
Vec3 scale(double s, const Vec3& u) { return {s * u[0], s * u[1], s * u[2]}; }
Vec3 axpy(const Vec3& y, double s, const Vec3& u) { return {y[0] + s * u[0], y[1] + s * u[1], y[2] + s * u[2]}; }
double euclid(const Vec3& u) { return std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]); }

double third(MetricSign m) { return m == MetricSign::euclidean ? 1.0 : -1.0; }

}  // namespace

double metric_dot(const Vec3& u, const Vec3& v, MetricSign m) {
  return u[0] * v[0] + u[1] * v[1] + third(m) * u[2] * v[2];
}

double metric_norm(const Vec3& u, MetricSign m) { return std::sqrt(std::abs(metric_dot(u, u, m))); }

Vec3 twisted_cross(const Vec3& u, const Vec3& v, MetricSign m) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], third(m) * (u[0] * v[1] - u[1] * v[0])};
}

ArclengthGrid::ArclengthGrid(double x_min, double x_max, std::size_t count) {
  if (count < 2 || !(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw std::invalid_argument("ArclengthGrid: need count >= 2 and x_min < x_max");
  h_ = (x_max - x_min) / static_cast<double>(count - 1);
  x_.resize(count);
  for (std::size_t j = 0; j < count; ++j) x_[j] = x_min + static_cast<double>(j) * h_;
  x_.back() = x_max;
}

ArclengthGrid ArclengthGrid::symmetric(double half_width, double h) {
  if (!(half_width > 0.0) || !(h > 0.0)) throw std::invalid_argument("ArclengthGrid: bad symmetric grid");
  const auto half = static_cast<std::size_t>(std::llround(half_width / h));
  return ArclengthGrid(-half_width, half_width, 2 * std::max<std::size_t>(half, 1) + 1);
}

std::size_t ArclengthGrid::anchor() const {
  for (std::size_t j = 0; j < x_.size(); ++j)
    if (std::abs(x_[j]) <= 1e-9 * h_) return j;
  return 0;
}

int tangent_type(MetricSign m) { return m == MetricSign::euclidean ? 1 : -1; }

double frame_defect(const Frame3& f, MetricSign m) {
  const double tt = tangent_type(m);
  double worst = std::abs(metric_dot(f.T, f.T, m) - tt);
  worst = std::max(worst, std::abs(metric_dot(f.n, f.n, m) - 1.0));
  worst = std::max(worst, std::abs(metric_dot(f.b, f.b, m) - 1.0));
  worst = std::max(worst, std::abs(metric_dot(f.T, f.n, m)));
  worst = std::max(worst, std::abs(metric_dot(f.T, f.b, m)));
  worst = std::max(worst, std::abs(metric_dot(f.n, f.b, m)));
  return worst;
}

CurvatureTorsion self_similar_profile(double c0, double t, const ArclengthGrid& grid) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("self_similar_profile: t must be positive");
  if (!std::isfinite(c0)) throw std::invalid_argument("self_similar_profile: c0 must be finite");
  CurvatureTorsion ct{grid, std::vector<double>(grid.size(), c0 / std::sqrt(t)), std::vector<double>(grid.size())};
  for (std::size_t j = 0; j < grid.size(); ++j) ct.tau[j] = grid[j] / (2.0 * t);
  return ct;
}

std::vector<std::complex<double>> hasimoto(const CurvatureTorsion& ct) {
  const std::size_t m = ct.grid.size();
  if (ct.c.size() != m || ct.tau.size() != m) throw std::invalid_argument("hasimoto: samples do not match the grid");
  const double h = ct.grid.spacing();
  // Phase at the node left of (or at) x = 0 via a partial trapezoid.
  std::size_t base = 0;
  double base_phase = 0.0;
  if (ct.grid[0] <= 0.0 && ct.grid[m - 1] >= 0.0) {
    base = std::min<std::size_t>(static_cast<std::size_t>(std::floor(-ct.grid[0] / h)), m - 1);
    const double s = -ct.grid[base];  // distance from the node to 0
    if (s > 1e-9 * h && base + 1 < m) {
      const double tau0 = ct.tau[base] + (ct.tau[base + 1] - ct.tau[base]) * s / h;
      base_phase = -0.5 * s * (ct.tau[base] + tau0);
    }
  } else {
    // 0 lies outside the grid: extend linearly from the nearer end.
    const bool left = ct.grid[0] > 0.0;
    base = left ? 0 : m - 1;
    const std::size_t other = left ? 1 : m - 2;
    const double slope = (ct.tau[other] - ct.tau[base]) / (ct.grid[other] - ct.grid[base]);
    const double tau0 = ct.tau[base] - slope * ct.grid[base];
    base_phase = 0.5 * ct.grid[base] * (ct.tau[base] + tau0);
  }
  std::vector<double> phase(m);
  phase[base] = base_phase;
  for (std::size_t j = base + 1; j < m; ++j) phase[j] = phase[j - 1] + 0.5 * h * (ct.tau[j - 1] + ct.tau[j]);
  for (std::size_t j = base; j-- > 0;) phase[j] = phase[j + 1] - 0.5 * h * (ct.tau[j] + ct.tau[j + 1]);
  std::vector<std::complex<double>> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = std::polar(1.0, phase[j]) * ct.c[j];
  return out;
}

namespace {

struct State {
  Vec3 chi, T, n, b;
};

State deriv(const State& s, double c, double tau, double tt) {
  return {s.T, scale(c, s.n), add(scale(-tt * c, s.T), scale(tau, s.b)), scale(-tau, s.n)};
}

State advance(const State& s, const State& d, double h) {
  return {axpy(s.chi, h, d.chi), axpy(s.T, h, d.T), axpy(s.n, h, d.n), axpy(s.b, h, d.b)};
}

// Value between nodes j and j+dir at the half step, by cubic Lagrange
// interpolation on four nodes (shifted inwards at the ends).
double half_step_value(const std::vector<double>& f, std::size_t j, int dir) {
  const std::size_t m = f.size();
  const std::size_t lo = dir > 0 ? j : j - 1;  // midpoint lies in [lo, lo+1]
  if (m < 4) return 0.5 * (f[lo] + f[lo + 1]);
  if (lo >= 1 && lo + 2 < m) return (-f[lo - 1] + 9.0 * f[lo] + 9.0 * f[lo + 1] - f[lo + 2]) / 16.0;
  if (lo == 0) return 0.3125 * f[0] + 0.9375 * f[1] - 0.3125 * f[2] + 0.0625 * f[3];
  return 0.3125 * f[m - 1] + 0.9375 * f[m - 2] - 0.3125 * f[m - 3] + 0.0625 * f[m - 4];
}

void orthonormalize(Frame3& f, MetricSign m) {
  const double tt = tangent_type(m);
  const double q = metric_dot(f.T, f.T, m);
  if (!(q * tt > 0.5) || (m == MetricSign::minkowski && !(f.T[2] > 0.0)))
    throw std::domain_error("reconstruct_curve: frame degenerated");
  f.T = scale(1.0 / std::sqrt(std::abs(q)), f.T);
  f.n = axpy(f.n, -metric_dot(f.n, f.T, m) / tt, f.T);
  const double qn = metric_dot(f.n, f.n, m);
  if (!(qn > 0.5)) throw std::domain_error("reconstruct_curve: frame degenerated");
  f.n = scale(1.0 / std::sqrt(qn), f.n);
  f.b = twisted_cross(f.T, f.n, m);
}

}  // namespace

Curve3 reconstruct_curve(const CurvatureTorsion& ct, MetricSign metric, const Frame3& seed,
                         const Vec3& origin, double time) {
  const std::size_t m = ct.grid.size();
  if (ct.c.size() != m || ct.tau.size() != m)
    throw std::invalid_argument("reconstruct_curve: samples do not match the grid");
  if (frame_defect(seed, metric) > 1e-10 ||
      euclid(sub(seed.b, twisted_cross(seed.T, seed.n, metric))) > 1e-10 ||
      (metric == MetricSign::minkowski && !(seed.T[2] > 0.0)))
    throw std::invalid_argument("reconstruct_curve: seed frame is not orthonormal in the metric");

  Curve3 curve;
  curve.x = ct.grid.nodes();
  curve.points.resize(m);
  curve.frames.resize(m);
  curve.time = time;
  curve.metric = metric;

  const double tt = tangent_type(metric);
  const std::size_t anchor = ct.grid.anchor();
  curve.points[anchor] = origin;
  curve.frames[anchor] = seed;

  auto sweep = [&](int dir) {
    const double h = dir * ct.grid.spacing();
    State s{origin, seed.T, seed.n, seed.b};
    for (std::size_t j = anchor; dir > 0 ? j + 1 < m : j > 0; j += dir) {
      const std::size_t k = j + dir;
      const double cm = half_step_value(ct.c, j, dir), tm = half_step_value(ct.tau, j, dir);
      const State k1 = deriv(s, ct.c[j], ct.tau[j], tt);
      const State k2 = deriv(advance(s, k1, 0.5 * h), cm, tm, tt);
      const State k3 = deriv(advance(s, k2, 0.5 * h), cm, tm, tt);
      const State k4 = deriv(advance(s, k3, h), ct.c[k], ct.tau[k], tt);
      State sum{};
      for (const State* ki : {&k2, &k3}) sum = advance(sum, *ki, 2.0);
      sum = advance(advance(sum, k1, 1.0), k4, 1.0);
      s = advance(s, sum, h / 6.0);
      Frame3 f{s.T, s.n, s.b};
      orthonormalize(f, metric);
      s.T = f.T;
      s.n = f.n;
      s.b = f.b;
      curve.points[k] = s.chi;
      curve.frames[k] = f;
    }
  };
  sweep(+1);
  sweep(-1);
  return curve;
}

namespace {

// Fourth-order first and second differences of a vector sequence at j.
void differences(const std::vector<Vec3>& p, std::size_t j, double h, Vec3& d1, Vec3& d2) {
  const std::size_t m = p.size();
  auto comb = [&](std::initializer_list<double> w, std::size_t start, double sgn, double denom) {
    Vec3 r{0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (double wi : w) {
      const std::size_t idx = sgn > 0 ? start + i : start - i;
      r = axpy(r, wi, p[idx]);
      ++i;
    }
    return scale(1.0 / denom, r);
  };
  const double h1 = 12.0 * h, h2 = 12.0 * h * h;
  if (j >= 2 && j + 2 < m) {
    d1 = comb({1.0, -8.0, 0.0, 8.0, -1.0}, j - 2, 1.0, h1);
    d2 = comb({-1.0, 16.0, -30.0, 16.0, -1.0}, j - 2, 1.0, h2);
  } else if (j == 0 || j + 1 == m) {
    const double sgn = j == 0 ? 1.0 : -1.0;
    d1 = scale(sgn, comb({-25.0, 48.0, -36.0, 16.0, -3.0}, j, sgn, h1));
    d2 = comb({45.0, -154.0, 214.0, -156.0, 61.0, -10.0}, j, sgn, h2);
  } else {
    const double sgn = j == 1 ? 1.0 : -1.0;
    const std::size_t start = j == 1 ? 0 : m - 1;
    d1 = scale(sgn, comb({-3.0, -10.0, 18.0, -6.0, 1.0}, start, sgn, h1));
    d2 = comb({10.0, -15.0, -4.0, 14.0, -6.0, 1.0}, start, sgn, h2);
  }
}

}  // namespace

std::vector<Vec3> binormal_velocity(const Curve3& curve) {
  const std::size_t m = curve.points.size();
  if (m < 6) throw std::domain_error("binormal_velocity: need at least 6 nodes");
  const double h = (curve.x.back() - curve.x.front()) / static_cast<double>(m - 1);
  std::vector<Vec3> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    Vec3 d1, d2;
    differences(curve.points, j, h, d1, d2);
    if (euclid(d2) * h > 0.5 * std::numbers::pi) throw std::domain_error("binormal_velocity: curve under-resolved");
    out[j] = twisted_cross(d1, d2, curve.metric);
  }
  return out;
}

std::vector<double> sm_invariant(const std::vector<Vec3>& gamma, MetricSign m) {
  std::vector<double> out(gamma.size());
  for (std::size_t j = 0; j < gamma.size(); ++j) out[j] = metric_dot(gamma[j], gamma[j], m);
  return out;
}

std::vector<Vec3> tangent_indicatrix(const Curve3& curve) {
  std::vector<Vec3> out(curve.frames.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = curve.frames[j].T;
  return out;
}

namespace {

Vec3 darboux_direction(const Frame3& f, double c, double tau, MetricSign m) {
  const Vec3 w = add(scale(tau, f.T), scale(c, f.b));
  const double q = metric_dot(w, w, m) * tangent_type(m);
  if (!(q > 0.0)) throw std::domain_error("corner_tangents: grid too short for the Darboux estimate");
  const Vec3 unit = scale(1.0 / std::sqrt(q), w);
  // Orient along the tangent.
  return metric_dot(unit, f.T, m) * tangent_type(m) >= 0.0 ? unit : scale(-1.0, unit);
}

double corner_angle(const Vec3& a1, const Vec3& a2, MetricSign m) {
  if (m == MetricSign::euclidean) return std::acos(std::clamp(metric_dot(a1, a2, m), -1.0, 1.0));
  return std::acosh(std::max(1.0, -metric_dot(a1, a2, m)));
}

Vec3 normalize(const Vec3& v, MetricSign m) { return scale(1.0 / metric_norm(v, m), v); }

}  // namespace

CornerEstimate corner_tangents(double c0, MetricSign metric, const std::vector<double>& t_sequence,
                               const ArclengthGrid& grid) {
  if (t_sequence.size() < 2) throw std::invalid_argument("corner_tangents: need at least two times");
  for (std::size_t i = 0; i < t_sequence.size(); ++i) {
    if (!(t_sequence[i] > 0.0)) throw std::invalid_argument("corner_tangents: times must be positive");
    if (i > 0 && !(t_sequence[i] < t_sequence[i - 1]))
      throw std::invalid_argument("corner_tangents: times must decrease");
  }

  std::vector<Vec3> raw1, raw2;
  for (double t : t_sequence) {
    const CurvatureTorsion ct = self_similar_profile(c0, t, grid);
    const Curve3 curve = reconstruct_curve(ct, metric, Frame3{}, {0.0, 0.0, 0.0}, t);
    const std::size_t last = grid.size() - 1;
    raw1.push_back(darboux_direction(curve.frames[last], ct.c[last], ct.tau[last], metric));
    raw2.push_back(darboux_direction(curve.frames[0], ct.c[0], ct.tau[0], metric));
  }

  // Error ~ C (√t)^3: A ≈ (r^3 A(t_{i+1}) - A(t_i)) / (r^3 - 1), r = √(t_i/t_{i+1}).
  std::vector<Vec3> ext1, ext2;
  for (std::size_t i = 0; i + 1 < t_sequence.size(); ++i) {
    const double r3 = std::pow(t_sequence[i] / t_sequence[i + 1], 1.5);
    ext1.push_back(scale(1.0 / (r3 - 1.0), sub(scale(r3, raw1[i + 1]), raw1[i])));
    ext2.push_back(scale(1.0 / (r3 - 1.0), sub(scale(r3, raw2[i + 1]), raw2[i])));
  }

  CornerEstimate out;
  out.times = t_sequence;
  out.A1 = normalize(ext1.back(), metric);
  out.A2 = normalize(ext2.back(), metric);
  out.angle = corner_angle(out.A1, out.A2, metric);
  for (std::size_t i = 0; i + 1 < ext1.size(); ++i)
    out.spread = std::max({out.spread, euclid(sub(ext1[i + 1], ext1[i])), euclid(sub(ext2[i + 1], ext2[i]))});
  if (ext1.size() == 1)
    out.spread = std::max(euclid(sub(ext1[0], raw1.back())), euclid(sub(ext2[0], raw2.back())));
  if (!(out.spread <= 0.1)) throw std::domain_error("corner_tangents: extrapolation did not converge");
  return out;
}

void write_curve(const std::string& path, const Curve3& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve: cannot open " + path);
  out.precision(17);
  for (const Vec3& p : curve.points) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  if (!out) throw std::runtime_error("write_curve: write failed for " + path);
}

}  // namespace dnls
