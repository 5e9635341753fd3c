#pragma once

#include <string>
#include <variant>
#include <vector>

#include "marblekit/complex.hpp"
#include "marblekit/curve.hpp"
#include "marblekit/revolution.hpp"
#include "marblekit/trimesh.hpp"
#include "marblekit/tube.hpp"

namespace marblekit {

/// The quantitative control constants (alpha, beta, c_H, C_A) plus the curve
/// scale b. alpha < n-1 is enforced for controlled-domain checks; the
/// standalone noncollapsedness verifier accepts any positive alpha.
struct ControlParams {
  double alpha = 0.5;
  double beta = 0.1;
  double c_H = 0.05;   // 1/length
  double C_A = 1000.0; // 1/length, bounds |A| + |grad A| (mixed units, as stated)
  double b = 1.0;      // length

  void validate(int n) const;
};

struct SubReport {
  std::string name;
  bool passed = false;
  double margin = 0.0;
  std::string witness_piece;
  int witness_index = 0;
  Vec3 witness_point = Vec3::Zero();
  bool boundary_case = false;
};

struct CertificateReport {
  bool passed = false;
  double margin = 0.0;
  SubReport worst;
  std::vector<SubReport> details;

  std::string to_json() const;
};

using AnyGeometry =
    std::variant<ProfileSurface, RevolutionSurface, TubeSurface, TriMesh, MarbleComplex>;

/// Sampled surface points with curvature for each supported carrier.
std::vector<SurfaceSample> collect_samples(const AnyGeometry& geom, int n_theta = 16);

int geometry_dimension(const AnyGeometry& geom);

/// lambda_1 + lambda_2 > tol at every sampled point.
CertificateReport check_two_convex(const AnyGeometry& geom, double tol = 0.0);

/// Interior and exterior tangent balls of radius alpha/H(p) are empty of
/// other surface samples; margin is relative clearance. Requires H > 0.
CertificateReport check_alpha_noncollapsed(const AnyGeometry& geom, double alpha);

/// H >= c_H, lambda_1+lambda_2 >= beta H, |A| + |grad A| <= C_A, plus
/// alpha-noncollapsedness.
CertificateReport check_controlled_domain(const AnyGeometry& geom, const ControlParams& P);

/// |kappa| <= 1/b, |d_s kappa| <= 1/b^2, normal injectivity radius >= b/10,
/// pairwise component distance >= 10 b.
CertificateReport check_controlled_curve(const std::vector<SkeletonCurve>& curves, double b);

/// Controlled-configuration conditions: curve interiors avoid the domains,
/// endpoints touch orthogonally (within 1 degree) or keep 10b clearance, and
/// the curve bulk keeps b/20 distance from the walls.
CertificateReport check_configuration(const std::vector<MarbleBody>& domains,
                                      const std::vector<SkeletonCurve>& curves,
                                      const ControlParams& P);

/// Signed distance from p to the body wall (negative inside).
double signed_distance(const MarbleBody& body, const Vec3& p);
/// Outward wall normal at the point of ∂body nearest to p.
Vec3 wall_normal(const MarbleBody& body, const Vec3& p);

}  // namespace marblekit
