#pragma once
// Curves in R^3 with the Euclidean or the Minkowski (+,+,-) metric:
// curvature/torsion profiles, the Hasimoto map, Frenet reconstruction,
// binormal-flow velocity and corner-tangent estimation for the
// self-similar family c = c0/√t, τ = x/2t.

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace dnls {

using Vec3 = std::array<double, 3>;

/// euclidean: 𝔄 = diag(1,1,1); minkowski: 𝔄 = diag(1,1,-1).
enum class MetricSign { euclidean, minkowski };

/// ⟨𝔄u, v⟩.
double metric_dot(const Vec3& u, const Vec3& v, MetricSign m);
/// sqrt|⟨𝔄u, u⟩|.
double metric_norm(const Vec3& u, MetricSign m);
/// u ∧± v = 𝔄(u × v).
Vec3 twisted_cross(const Vec3& u, const Vec3& v, MetricSign m);

/// Uniform arclength grid x_j = x_min + j h, j = 0..count-1.
class ArclengthGrid {
 public:
  ArclengthGrid(double x_min, double x_max, std::size_t count);
  /// Grid on [-half_width, half_width] with spacing as close to h as fits.
  static ArclengthGrid symmetric(double half_width, double h);

  std::size_t size() const { return x_.size(); }
  double spacing() const { return h_; }
  double operator[](std::size_t j) const { return x_[j]; }
  const std::vector<double>& nodes() const { return x_; }
  /// Index of the node at x = 0 if there is one (to 1e-9 h), else 0.
  std::size_t anchor() const;

 private:
  std::vector<double> x_;
  double h_;
};

struct CurvatureTorsion {
  ArclengthGrid grid;
  std::vector<double> c;
  std::vector<double> tau;
};

/// Frenet frame. Euclidean: orthonormal, det +1. Minkowski: T timelike
/// (⟨𝔄T,T⟩ = -1, on the upper sheet of ℍ²), n and b spacelike.
struct Frame3 {
  Vec3 T{0.0, 0.0, 1.0};
  Vec3 n{1.0, 0.0, 0.0};
  Vec3 b{0.0, 1.0, 0.0};
};

/// Signature of T in the active metric: +1 Euclidean, -1 Minkowski.
int tangent_type(MetricSign m);

/// Max deviation of the frame's Gram matrix from its target signature.
double frame_defect(const Frame3& f, MetricSign m);

struct Curve3 {
  std::vector<double> x;
  std::vector<Vec3> points;
  std::vector<Frame3> frames;
  double time = 0.0;
  MetricSign metric = MetricSign::euclidean;
};

/// c = c0/√t, τ = x/2t on the grid. Throws std::invalid_argument for t ≤ 0.
CurvatureTorsion self_similar_profile(double c0, double t, const ArclengthGrid& grid);

/// Ψ_j = c_j exp(i ∫_0^{x_j} τ), trapezoid rule; the base point is x = 0
/// even when it falls between nodes.
std::vector<std::complex<double>> hasimoto(const CurvatureTorsion& ct);

/// Integrates T' = c n, n' = -⟨𝔄T,T⟩ c T + τ b, b' = -τ n, χ' = T by RK4
/// from the anchor node outwards, with c and τ at half steps from cubic
/// interpolation and the frame re-orthonormalized in the active metric
/// after every step. Throws std::invalid_argument if the seed frame is not
/// orthonormal in the metric and std::domain_error if the frame degenerates.
Curve3 reconstruct_curve(const CurvatureTorsion& ct, MetricSign metric, const Frame3& seed = {},
                         const Vec3& origin = {0.0, 0.0, 0.0}, double time = 0.0);

/// χ_x ∧± χ_xx by fourth-order finite differences (one-sided near the ends).
/// Throws std::domain_error when fewer than 6 nodes or |χ_xx| h > π/2.
std::vector<Vec3> binormal_velocity(const Curve3& curve);

/// ⟨𝔄γ_j, γ_j⟩ per sample.
std::vector<double> sm_invariant(const std::vector<Vec3>& gamma, MetricSign m);

/// Tangents T_j of a curve.
std::vector<Vec3> tangent_indicatrix(const Curve3& curve);

struct CornerEstimate {
  Vec3 A1{};  ///< tangent for x → +∞
  Vec3 A2{};  ///< tangent for x → -∞
  double angle = 0.0;
  /// Max distance between consecutive extrapolated estimates.
  double spread = 0.0;
  std::vector<double> times;
};

/// Reconstructs the self-similar curve at each t (decreasing, positive),
/// estimates the end tangents from the normalized Darboux axis τT + c b
/// at the two grid ends, and Richardson-extrapolates them in √t (error
/// order 3). Angle: arccos(A1·A2) Euclidean, arccosh(-⟨𝔄A1,A2⟩) Minkowski.
/// Throws std::invalid_argument on a bad time sequence and
/// std::domain_error when extrapolated estimates diverge (spread > 0.1).
CornerEstimate corner_tangents(double c0, MetricSign metric, const std::vector<double>& t_sequence,
                               const ArclengthGrid& grid);

/// Writes "x y z" per line. Throws std::runtime_error on I/O failure.
void write_curve(const std::string& path, const Curve3& curve);

}  // namespace dnls
