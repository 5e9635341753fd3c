#pragma once

#include "marblekit/curve.hpp"
#include "marblekit/revolution.hpp"
#include "marblekit/trimesh.hpp"

namespace marblekit {

SkeletonCurve make_circle_curve(double R, int npts, const Vec3& center = Vec3::Zero(),
                                const Vec3& axis = Vec3::UnitZ());
SkeletonCurve make_segment_curve(const Vec3& a, const Vec3& b, int npts);

/// (2,3) torus knot on the torus (R, r); standard trefoil at R=2, r=0.5.
SkeletonCurve make_trefoil_curve(int npts, double R = 2.0, double r = 0.5,
                                 double scale = 1.0);

/// Figure-eight knot, standard parameterization scaled by `scale`.
SkeletonCurve make_figure_eight_curve(int npts, double scale = 1.0);

TriMesh make_icosphere(double R, int subdivisions, const Vec3& center = Vec3::Zero());
TriMesh make_flat_square_mesh(int per_side, double size = 1.0);

ProfileSurface make_sphere_profile(double R, double hx, int n = 2);
ProfileSurface make_cylinder_profile(double r, double length, double hx, int n = 2,
                                     EndCaps caps = EndCaps::Open);

/// Mean-convex dumbbell: two spherical bulbs of radius `bulb` joined by a
/// cosh neck of waist `waist`; the three pieces are blended by a soft-min so
/// the profile is smooth and the revolved surface stays 2-convex.
ProfileSurface make_dumbbell_profile(double bulb, double waist, double hx, int n = 2);

RevolutionSurface make_sphere_revolution(double R, double hg, int n = 2,
                                         const Vec3& center = Vec3::Zero(),
                                         const Vec3& axis = Vec3::UnitX());
RevolutionSurface make_torus_revolution(double R, double r, double hg, int n = 2,
                                        const Vec3& center = Vec3::Zero(),
                                        const Vec3& axis = Vec3::UnitZ());

double smooth_min(const std::vector<double>& vals, double sharpness);

}  // namespace marblekit
