#pragma once

#include <vector>

#include "marblekit/common.hpp"
#include "marblekit/curve.hpp"

namespace marblekit {

/// Principal curvatures at a surface point, sorted ascending.
struct CurvatureData {
  std::vector<double> lambda;

  double H() const {
    double s = 0;
    for (double l : lambda) s += l;
    return s;
  }
  double norm_A() const {
    double s = 0;
    for (double l : lambda) s += l * l;
    return std::sqrt(s);
  }
  double two_convex_margin() const { return lambda[0] + lambda[1]; }
};

/// Sorts and validates; every CurvatureData in the toolkit is built here.
CurvatureData make_curvature(std::vector<double> lambdas);

enum class EndCaps { Open, Capped, Periodic };

/// Hypersurface of revolution in graph form: profile u(x) > 0 sampled on a
/// uniform axial grid, revolved about a line in R^{n+1}. For n >= 3 the
/// placement is formal (everything happens in the profile plane).
struct ProfileSurface {
  int n = 2;
  Vec3 axis_origin = Vec3::Zero();
  Vec3 axis_dir = Vec3::UnitX();
  double x0 = 0.0;
  double hx = 0.0;
  std::vector<double> u;
  EndCaps caps = EndCaps::Open;

  int size() const { return static_cast<int>(u.size()); }
  double x_at(int i) const { return x0 + hx * i; }
  double x_end() const { return x0 + hx * (size() - 1); }
  double u_at(double x) const;   // cubic-ish local interpolation
  double du_at(double x) const;  // centered differences
  double d2u_at(double x) const;
  void validate() const;
};

/// u''(x) <= tol_concave at all interior samples (second differences).
bool profile_concave(const std::vector<double>& u, double hx, double tol = 1e-9);

/// Exact principal curvatures of a profile surface at axial coordinate x:
/// lambda_axial = -u''/(1+u'^2)^{3/2}, lambda_rot = 1/(u (1+u'^2)^{1/2})
/// with multiplicity n-1. Signs: positive for a round sphere.
CurvatureData principal_curvatures_profile(const ProfileSurface& S, double x);

/// Same surface class in generating-curve form: an arclength-sampled planar
/// curve (z, rho) with rho >= 0, revolved about the axis. Handles vertical
/// slopes and closed generating loops (torus type), which the graph form
/// cannot. Orientation convention: the outward normal is (-rho', z').
struct RevolutionSurface {
  int n = 2;
  Vec3 axis_origin = Vec3::Zero();
  Vec3 axis_dir = Vec3::UnitX();
  std::vector<double> z, rho;
  bool closed = false;
  double hg = 0.0;  // arclength spacing

  int size() const { return static_cast<int>(z.size()); }
  bool sphere_type() const;  // open generating curve with both ends on axis
  double length() const { return hg * (closed ? size() : size() - 1); }

  Vec2 point(int i) const { return Vec2(z[i], rho[i]); }
  Vec2 tangent(int i) const;      // unit, by central differences
  Vec2 outward_normal(int i) const;
  /// kappa of the generating curve w.r.t. the outward normal.
  double kappa_gen(int i) const;
  /// Rotational principal curvature N_rho / rho (pole limit handled).
  double kappa_rot(int i) const;
  CurvatureData curvature(int i) const;

  double min_two_convex_margin() const;
  double min_H() const;
  double max_H() const;
  double max_rho() const;

  Vec3 embed(int i, double theta) const;  // point in R^3 (n == 2)
  void validate() const;
};

/// Uniform-arclength resampling of a generating polyline via cubic spline,
/// preserving endpoint positions; enforces the outward-normal orientation.
RevolutionSurface make_revolution(int n, const Vec3& axis_origin, const Vec3& axis_dir,
                                  const std::vector<Vec2>& gen_points, bool closed,
                                  double hg);

/// Graph profile -> generating curve (exact sample positions).
RevolutionSurface to_revolution(const ProfileSurface& S, double hg = 0.0);

/// Generating curve -> graph profile; fails when the curve is not graph-like
/// over the axis.
ProfileSurface to_profile(const RevolutionSurface& R, double hx);

}  // namespace marblekit
