#pragma once

// Distributed navigation algorithms on RP^n, the circle and the Hopf fibration,
// together with verifiers for checkpoints, equivariance, fibers and
// Levy-Prokhorov continuity.

#include "seqtc/errors.hpp"
#include "seqtc/measures.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace seqtc::navplan {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kZeroThreshold = 1e-12;
inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kFiberTolerance = 1e-9;
inline constexpr int kPathGrid = 64;

inline nlohmann::json encode(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline Vec decode(const nlohmann::json& j) {
  const auto xs = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

/// A line through the origin of R^{n+1}, stored as a unit vector whose first
/// coordinate above kZeroThreshold in absolute value is positive.
class ProjectivePoint {
 public:
  static ProjectivePoint from(const Vec& v) {
    if (v.size() < 2) throw ArgumentError("projective points need at least two coordinates");
    if (std::abs(v.norm() - 1.0) > kUnitTolerance)
      throw ArgumentError("representative has norm " + std::to_string(v.norm()) + ", expected 1");
    ProjectivePoint p;
    p.v_ = v;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) > kZeroThreshold) {
        if (v[i] < 0) p.v_ = -v;
        break;
      }
    return p;
  }

  /// Normalizes first.
  static ProjectivePoint line_through(const Vec& v) {
    if (v.norm() < kZeroThreshold) throw ArgumentError("zero vector spans no line");
    return from(v / v.norm());
  }

  const Vec& representative() const { return v_; }
  int n() const { return static_cast<int>(v_.size()) - 1; }

 private:
  Vec v_;
};

/// Chordal distance between the lines spanned by unit vectors.
inline double projective_distance(const Vec& a, const Vec& b) { return std::min((a - b).norm(), (a + b).norm()); }

enum class PointMetric { euclidean, projective };

inline double point_distance(PointMetric kind, const Vec& a, const Vec& b) {
  return kind == PointMetric::projective ? projective_distance(a, b) : (a - b).norm();
}

/// A path [0, 1] -> R^N given in closed form.
struct Path {
  std::function<Vec(double)> eval;
  Vec operator()(double t) const { return eval(t); }
};

inline Path constant_path(Vec x) {
  return {[x = std::move(x)](double) { return x; }};
}

/// Rotation of a unit vector x by angle*t in the plane of x and the unit
/// vector w orthogonal to it.
inline Path rotation_path(Vec x, Vec w, double angle) {
  return {[x = std::move(x), w = std::move(w), angle](double t) -> Vec {
    return std::cos(t * angle) * x + std::sin(t * angle) * w;
  }};
}

inline Path transform_path(const Mat& g, Path p) {
  return {[g, p = std::move(p)](double t) -> Vec { return g * p(t); }};
}

/// Sup of pointwise distances over kPathGrid equally spaced times.
inline double path_distance(PointMetric kind, const Path& a, const Path& b) {
  double worst = 0;
  for (int k = 0; k < kPathGrid; ++k) {
    const double t = static_cast<double>(k) / (kPathGrid - 1);
    worst = std::max(worst, point_distance(kind, a(t), b(t)));
  }
  return worst;
}

inline measures::Metric<Path> path_metric(PointMetric kind) {
  return [kind](const Path& a, const Path& b) { return path_distance(kind, a, b); };
}

using PathMeasure = measures::FiniteMeasure<Path>;

/// A finitely supported measure on paths that should pass through
/// checkpoints[i] at time i/(r-1).
struct PathPlan {
  PathMeasure measure;
  std::vector<Vec> checkpoints;
  PointMetric kind = PointMetric::euclidean;

  std::size_t support_size() const { return measure.support_size(); }
};

inline PathPlan make_plan(std::vector<measures::Atom<Path>> atoms, std::vector<Vec> checkpoints, PointMetric kind) {
  return {PathMeasure(std::move(atoms), path_metric(kind)), std::move(checkpoints), kind};
}

inline double checkpoint_time(std::size_t i, std::size_t count) {
  return count < 2 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
}

/// Largest distance between an atom's position and the required checkpoint.
inline double max_checkpoint_error(const PathPlan& plan) {
  double worst = 0;
  for (const auto& a : plan.measure.atoms())
    for (std::size_t i = 0; i < plan.checkpoints.size(); ++i)
      worst = std::max(worst, point_distance(plan.kind, a.point(checkpoint_time(i, plan.checkpoints.size())),
                                             plan.checkpoints[i]));
  return worst;
}

inline double mass_error(const PathPlan& plan) { return std::abs(plan.measure.total_mass() - 1.0); }

inline double plan_distance(const PathPlan& a, const PathPlan& b, double precision = 1e-13) {
  return measures::lp_distance(a.measure, b.measure, path_metric(a.kind), precision);
}

/// Two rotations carrying line x to line y: through the angle a between the
/// lines with weight (pi - a)/pi, and the other way through pi - a with the
/// remaining weight. Equal lines give the constant path.
inline PathPlan rpn_navigate(const ProjectivePoint& px, const ProjectivePoint& py) {
  const Vec& x = px.representative();
  const Vec& y = py.representative();
  if (x.size() != y.size()) throw ArgumentError("points lie in projective spaces of different dimension");
  const double c = x.dot(y);
  const Vec yy = c >= 0 ? y : Vec(-y);
  const double alpha = std::acos(std::min(1.0, std::abs(c)));
  const Vec v = yy - std::abs(c) * x;
  if (v.norm() < kZeroThreshold) return make_plan({{constant_path(x), 1.0}}, {x, y}, PointMetric::projective);
  const Vec w = v / v.norm();
  const double beta = kPi - alpha;
  const double w_alpha = beta / kPi;
  return make_plan({{rotation_path(x, w, alpha), w_alpha}, {rotation_path(x, -w, beta), 1.0 - w_alpha}}, {x, y},
                   PointMetric::projective);
}

/// Points on S^1 given by angles. Each consecutive pair is joined by the
/// short arc (sweep t, |t| <= pi) with weight (2pi - |t|)/(2pi) and the
/// complementary long arc with weight |t|/(2pi). Segments are concatenated
/// on [0, 1], giving at most 2^(r-1) atoms with product weights.
inline PathPlan circle_navigate_angles(const std::vector<double>& angles) {
  const std::size_t r = angles.size();
  if (r < 2) throw ArgumentError("circle planner needs r >= 2 points");
  std::vector<std::vector<std::pair<double, double>>> options;  // (sweep, weight) per segment
  for (std::size_t k = 0; k + 1 < r; ++k) {
    double theta = std::remainder(angles[k + 1] - angles[k], 2 * kPi);
    if (theta <= -kPi) theta += 2 * kPi;
    const double abs_theta = std::abs(theta);
    if (abs_theta < kZeroThreshold) {
      options.push_back({{0.0, 1.0}});
      continue;
    }
    const double w_short = (2 * kPi - abs_theta) / (2 * kPi);
    const double long_sweep = theta > 0 ? theta - 2 * kPi : theta + 2 * kPi;
    options.push_back({{theta, w_short}, {long_sweep, 1.0 - w_short}});
  }
  std::vector<measures::Atom<Path>> atoms;
  std::vector<std::size_t> pick(options.size(), 0);
  const double start = angles[0];
  for (;;) {
    std::vector<double> sweeps;
    double weight = 1.0;
    for (std::size_t k = 0; k < options.size(); ++k) {
      sweeps.push_back(options[k][pick[k]].first);
      weight *= options[k][pick[k]].second;
    }
    Path p{[start, sweeps](double t) -> Vec {
      const double s = std::clamp(t, 0.0, 1.0) * static_cast<double>(sweeps.size());
      const std::size_t k = std::min(static_cast<std::size_t>(s), sweeps.size() - 1);
      double phi = start;
      for (std::size_t i = 0; i < k; ++i) phi += sweeps[i];
      phi += (s - static_cast<double>(k)) * sweeps[k];
      return Eigen::Vector2d(std::cos(phi), std::sin(phi));
    }};
    atoms.push_back({std::move(p), weight});
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  // product weights may drift from 1 by rounding; put the residue on the first atom
  double total = 0;
  for (const auto& a : atoms) total += a.weight;
  atoms.front().weight += 1.0 - total;
  std::vector<Vec> checkpoints;
  for (double a : angles) checkpoints.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
  return make_plan(std::move(atoms), std::move(checkpoints), PointMetric::euclidean);
}

inline PathPlan circle_navigate(int r, const std::vector<Vec>& points) {
  if (r < 2) throw ArgumentError("circle planner needs r >= 2");
  if (static_cast<int>(points.size()) != r) throw ArgumentError("expected " + std::to_string(r) + " points");
  std::vector<double> angles;
  for (const auto& p : points) {
    if (p.size() != 2 || std::abs(p.norm() - 1.0) > kFiberTolerance)
      throw ArgumentError("circle points must be unit vectors in R^2");
    angles.push_back(std::atan2(p[1], p[0]));
  }
  return circle_navigate_angles(angles);
}

// Unit quaternions as (w, x, y, z) 4-vectors.

inline Eigen::Quaterniond to_quaternion(const Vec& v) { return {v[0], v[1], v[2], v[3]}; }

inline Vec from_quaternion(const Eigen::Quaterniond& q) { return Eigen::Vector4d(q.w(), q.x(), q.y(), q.z()); }

/// q i q^-1 in S^2.
inline Eigen::Vector3d hopf(const Vec& v) {
  const auto q = to_quaternion(v);
  return (q * Eigen::Quaterniond(0, 1, 0, 0) * q.conjugate()).vec();
}

/// q (cos phi + i sin phi), the right circle action whose orbits are the fibers.
inline Vec fiber_translate(const Vec& v, double phi) {
  return from_quaternion(to_quaternion(v) * Eigen::Quaterniond(std::cos(phi), std::sin(phi), 0, 0));
}

/// Writes e_{i+1} = e_1 a_i with a_i in the circle subgroup, plans on the
/// circle through (1, a_1, ..., a_{r-1}) and translates every path by e_1.
inline PathPlan hopf_parametrized_navigate(int r, const std::vector<Vec>& e) {
  if (r < 2) throw ArgumentError("Hopf planner needs r >= 2");
  if (static_cast<int>(e.size()) != r) throw ArgumentError("expected " + std::to_string(r) + " points");
  for (const auto& v : e)
    if (v.size() != 4 || std::abs(v.norm() - 1.0) > kFiberTolerance)
      throw ArgumentError("points must be unit vectors in R^4");
  const Eigen::Vector3d base = hopf(e[0]);
  double discrepancy = 0;
  for (const auto& v : e) discrepancy = std::max(discrepancy, (hopf(v) - base).norm());
  if (discrepancy > kFiberTolerance)
    throw ArgumentError("points lie in different Hopf fibers (max projection discrepancy " +
                        std::to_string(discrepancy) + ")");
  const auto e1 = to_quaternion(e[0]);
  std::vector<double> angles{0.0};
  for (std::size_t i = 1; i < e.size(); ++i) {
    const auto a = e1.conjugate() * to_quaternion(e[i]);
    angles.push_back(std::atan2(a.x(), a.w()));
  }
  const auto circle = circle_navigate_angles(angles);
  std::vector<measures::Atom<Path>> atoms;
  for (const auto& a : circle.measure.atoms()) {
    Path lifted{[e0 = e[0], gamma = a.point](double t) -> Vec {
      const Vec z = gamma(t);
      return fiber_translate(e0, std::atan2(z[1], z[0]));
    }};
    atoms.push_back({std::move(lifted), a.weight});
  }
  return make_plan(std::move(atoms), e, PointMetric::euclidean);
}

/// sup_t |h(gamma(t)) - h(gamma(0))| over atoms, on a grid of the given size.
inline double max_fiber_deviation(const PathPlan& plan, int grid = 257) {
  double worst = 0;
  for (const auto& a : plan.measure.atoms()) {
    const Eigen::Vector3d h0 = hopf(a.point(0.0));
    for (int k = 0; k < grid; ++k)
      worst = std::max(worst, (hopf(a.point(static_cast<double>(k) / (grid - 1))) - h0).norm());
  }
  return worst;
}

/// t -> gamma((t(r-j) + j - 1)/(r-1)): the part of gamma after its j-th
/// checkpoint, stretched to [0, 1].
inline Path reparametrize_suffix(Path gamma, int j, int r) {
  if (r < 2) throw ArgumentError("reparametrization needs r >= 2");
  if (j < 1 || j > r) throw ArgumentError("j must lie in [1, r]");
  return {[gamma = std::move(gamma), j, r](double t) -> Vec {
    return gamma((t * (r - j) + j - 1) / static_cast<double>(r - 1));
  }};
}

struct Failure {
  nlohmann::json input;
  double value = 0;
};

struct VerifierReport {
  int samples = 0;
  double max_discrepancy = 0;
  std::vector<Failure> failures;

  bool ok() const { return failures.empty(); }

  void record(double value, bool failed, nlohmann::json input) {
    ++samples;
    max_discrepancy = std::max(max_discrepancy, value);
    if (failed) failures.push_back({std::move(input), value});
  }
};

inline nlohmann::json to_json(const VerifierReport& r) {
  auto failures = nlohmann::json::array();
  for (const auto& f : r.failures) failures.push_back({{"input", f.input}, {"value", f.value}});
  return {{"samples", r.samples}, {"max_discrepancy", r.max_discrepancy}, {"failures", std::move(failures)}};
}

/// Checks that g is block-diag(A, 1) with A in SO(n).
inline void require_embedded_rotation(const Mat& g, double tol = 1e-9) {
  const auto n = g.rows();
  if (g.cols() != n || n < 2) throw ArgumentError("group element must be a square matrix of size >= 2");
  if ((g.transpose() * g - Mat::Identity(n, n)).norm() > tol) throw ArgumentError("group element is not orthogonal");
  if (std::abs(g.determinant() - 1.0) > tol) throw ArgumentError("group element has determinant -1");
  Vec last = Vec::Zero(n);
  last[n - 1] = 1;
  if ((g.col(n - 1) - last).norm() > tol || (g.row(n - 1).transpose() - last).norm() > tol)
    throw ArgumentError("group element must fix the last coordinate axis");
}

inline Mat embed_rotation(const Mat& a) {
  Mat g = Mat::Identity(a.rows() + 1, a.cols() + 1);
  g.topLeftCorner(a.rows(), a.cols()) = a;
  return g;
}

/// Haar-random element of SO(n).
template <class Rng>
Mat random_rotation(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  const Mat rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (rr(i, i) < 0) q.col(i) *= -1;
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

template <class Rng>
Vec random_unit(int dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  Vec v(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    if (v.norm() > 1e-6) return v / v.norm();
  }
}

using ProjectivePlanner = std::function<PathPlan(const ProjectivePoint&, const ProjectivePoint&)>;

/// For each g and pair (x, y), the LP distance between plan(gx, gy) and the
/// image of plan(x, y) under g.
inline VerifierReport check_equivariance(const ProjectivePlanner& plan, const std::vector<Mat>& group,
                                         const std::vector<std::pair<Vec, Vec>>& pairs, double tol) {
  for (const auto& g : group) require_embedded_rotation(g);
  VerifierReport report;
  for (const auto& g : group)
    for (const auto& [x, y] : pairs) {
      const auto px = ProjectivePoint::from(x), py = ProjectivePoint::from(y);
      const auto moved = plan(ProjectivePoint::from(g * px.representative()),
                              ProjectivePoint::from(g * py.representative()));
      const auto base = plan(px, py);
      std::vector<measures::Atom<Path>> atoms;
      for (const auto& a : base.measure.atoms()) atoms.push_back({transform_path(g, a.point), a.weight});
      const PathMeasure image(std::move(atoms), path_metric(base.kind));
      const double d = measures::lp_distance(moved.measure, image, path_metric(base.kind), std::max(tol * 1e-3, 1e-15));
      report.record(d, d > tol, {{"x", encode(x)}, {"y", encode(y)}});
    }
  return report;
}

/// Samples inputs near each base input and compares plans by LP distance.
/// A sample fails when distance/perturbation exceeds the ceiling.
template <class Input>
VerifierReport check_lp_continuity(const std::function<PathPlan(const Input&)>& plan, const std::vector<Input>& bases,
                                   const std::function<Input(const Input&, double)>& perturb,
                                   const std::function<double(const Input&, const Input&)>& input_distance,
                                   const std::function<nlohmann::json(const Input&)>& encode_input, double scale,
                                   int samples, double ceiling, double precision = 1e-12) {
  VerifierReport report;
  for (const auto& b : bases) {
    const auto pb = plan(b);
    for (int s = 0; s < samples; ++s) {
      const Input q = perturb(b, scale);
      const double dist_in = input_distance(b, q);
      const double d = plan_distance(pb, plan(q), precision);
      const bool failed = dist_in > 0 ? d / dist_in > ceiling : d > precision;
      report.record(d, failed, encode_input(q));
    }
  }
  return report;
}

/// Projective pairs (x, y) for the continuity verifier.
using ProjectivePair = std::pair<Vec, Vec>;

inline double projective_pair_distance(const ProjectivePair& a, const ProjectivePair& b) {
  return std::max(projective_distance(a.first, b.first), projective_distance(a.second, b.second));
}

template <class Rng>
std::function<ProjectivePair(const ProjectivePair&, double)> projective_perturbation(Rng& rng) {
  return [&rng](const ProjectivePair& p, double scale) {
    auto jitter = [&](const Vec& v) {
      const Vec d = random_unit(static_cast<int>(v.size()), rng) * scale;
      const Vec w = v + d;
      return Vec(w / w.norm());
    };
    return ProjectivePair{jitter(p.first), jitter(p.second)};
  };
}

inline PathPlan rpn_plan_pair(const ProjectivePair& p) {
  return rpn_navigate(ProjectivePoint::from(p.first), ProjectivePoint::from(p.second));
}

inline nlohmann::json encode_pair(const ProjectivePair& p) { return {encode(p.first), encode(p.second)}; }

}  // namespace seqtc::navplan
