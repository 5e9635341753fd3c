#pragma once

#include <vector>

#include "marblekit/common.hpp"
#include "marblekit/curve.hpp"
#include "marblekit/revolution.hpp"

namespace marblekit {

/// Solid tube around a skeleton curve. The radius is sampled per skeleton
/// sample so capped ends (radius tapering to zero with the standard-cap
/// profile) and surgery remnants share one representation. Open ends are
/// either plain (None) or closed by a standard cap baked into `radius`.
struct TubeSurface {
  enum class Cap { None, Standard };

  SkeletonCurve skeleton;
  std::vector<double> radius;
  Cap cap_begin = Cap::None;
  Cap cap_end = Cap::None;

  int size() const { return skeleton.size(); }
  bool closed() const { return skeleton.closed; }
  double max_radius() const;
  double min_radius() const;
  bool constant_radius(double rel_tol = 1e-9) const;

  /// Surface point at (sample i, angle theta); theta measured from normal1
  /// of the rotation-minimizing frame.
  Vec3 surface_point(int i, double theta) const;

  /// Principal curvatures at (i, theta) for locally constant radius via the
  /// exact section formula; theta here is measured from the curve's
  /// principal normal. Falls back to the parametric estimate when the
  /// radius varies at i.
  CurvatureData curvature_exact(int i, double theta_from_normal) const;

  /// Principal curvatures from finite differences of the parameterization;
  /// valid for varying radius. theta measured from normal1.
  CurvatureData curvature_parametric(int i, double theta) const;

  /// Minimum of lambda_1 + lambda_2 over the sampled surface
  /// (n_theta angular samples; cap regions use the profile formulas).
  double min_two_convex_margin(int n_theta = 16) const;
  double min_H(int n_theta = 16) const;
  double max_H(int n_theta = 16) const;

  /// Embeddedness: max radius below normal injectivity radius, and
  /// tube-tube clearance between far-apart skeleton samples.
  void validate() const;
};

/// Exact principal curvatures of a constant-radius tube section:
/// {1/r, -kappa cos(theta) / (1 - r kappa cos(theta))}, theta from the
/// principal normal. Throws SingularityError when r|kappa| >= 1.
CurvatureData principal_curvatures_tube(const TubeSurface& T, double s, double theta);

/// Constant-radius solid tube N_r(gamma). Closed skeletons give tori.
TubeSurface tubular_neighborhood(const SkeletonCurve& gamma, double r);

/// Point-to-skeleton distance (brute force over samples with local
/// refinement); used by containment and clearance checks.
double distance_to_curve(const SkeletonCurve& c, const Vec3& p, int* nearest = nullptr);

/// Is p inside the solid tube?
bool tube_contains(const TubeSurface& T, const Vec3& p, double slack = 0.0);

}  // namespace marblekit
