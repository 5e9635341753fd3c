#pragma once

#include <vector>

#include "marblekit/common.hpp"

namespace marblekit {

/// Space curve resampled at uniform arclength spacing `h`, with unit
/// tangents and a rotation-minimizing normal frame per sample. The frame is
/// rotation-minimizing rather than Frenet so it stays defined through
/// inflection points; for closed curves the holonomy angle is distributed
/// along the curve so the frame closes up.
struct SkeletonCurve {
  std::vector<Vec3> samples;
  std::vector<Vec3> tangent;
  std::vector<Vec3> normal1;
  std::vector<Vec3> normal2;
  bool closed = false;
  double h = 0.0;
  double total_length = 0.0;

  int size() const { return static_cast<int>(samples.size()); }

  /// Curvature vector by second differences (cyclic for closed curves,
  /// one-sided copies at open ends).
  Vec3 curvature_vector(int i) const;
  double curvature(int i) const { return curvature_vector(i).norm(); }
  double max_curvature() const;

  /// |d/ds of the curvature vector| by central differences.
  double curvature_derivative(int i) const;

  /// Arclength of sample i measured from sample 0.
  double arclength(int i) const { return h * i; }

  /// Point at arclength s (linear interpolation between samples).
  Vec3 point_at(double s) const;
  Vec3 tangent_at(double s) const;

  /// Index distance between samples respecting wraparound for closed curves.
  int cyclic_separation(int i, int j) const;

  /// Minimum distance between samples at least `min_sep` index steps apart.
  double min_nonlocal_distance(int min_sep = 3) const;

  /// Estimate of the normal injectivity radius: min(1/max|kappa|, half the
  /// minimum distance between samples more than `sep_arcs` curvature radii
  /// apart along the curve).
  double normal_injectivity_radius() const;

  /// Throws EmbeddingError / InputError when the sampled-curve invariants
  /// fail (spacing uniformity, resolvable turning, embeddedness).
  void validate() const;

  /// Sub-arc between sample indices [i0, i1] (i1 may wrap for closed input);
  /// the result is open.
  SkeletonCurve subcurve(int i0, int i1) const;

  SkeletonCurve reversed() const;
  SkeletonCurve transformed(const Eigen::Matrix3d& R, const Vec3& t) const;
};

/// Build a uniformly resampled curve through `points` (>= 4). Interpolates
/// with a C^2 cubic spline (periodic when closed), so curvature by second
/// differences converges on smooth input. h_s is a target spacing; the
/// effective spacing is total_length/N rounded to close up.
SkeletonCurve curve_from_points(const std::vector<Vec3>& points, bool closed, double h_s);

/// Resample an existing curve at spacing h (idempotent up to h/100).
SkeletonCurve resample(const SkeletonCurve& c, double h);

/// Cubic-spline interpolation utility used by curve_from_points; exposed for
/// the planar generating-curve code. Natural ends, or periodic when closed.
class CubicSpline3 {
 public:
  CubicSpline3(const std::vector<Vec3>& pts, const std::vector<double>& t, bool periodic);
  Vec3 eval(double t) const;
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }

 private:
  std::vector<double> t_;
  std::vector<Vec3> a_, b_, c_, d_;  // per-segment coefficients
  bool periodic_ = false;
  double period_ = 0.0;
  int segment(double& t) const;
};

}  // namespace marblekit
