#pragma once

#include <array>
#include <vector>

#include "marblekit/common.hpp"
#include "marblekit/revolution.hpp"

namespace marblekit {

/// Indexed triangle mesh with oriented faces. Open meshes are permitted as
/// test fixtures; the closed-manifold requirement is enforced where the
/// operation needs it.
struct TriMesh {
  std::vector<Vec3> V;
  std::vector<std::array<int, 3>> F;

  int nv() const { return static_cast<int>(V.size()); }
  int nf() const { return static_cast<int>(F.size()); }

  /// Every edge on 1-2 faces with consistent orientation.
  bool is_manifold(std::string* why = nullptr) const;
  /// Manifold and every edge on exactly 2 faces.
  bool is_closed(std::string* why = nullptr) const;

  int edge_count() const;
  int component_count() const;

  std::vector<std::vector<int>> vertex_faces() const;
  Vec3 face_normal(int f) const;
  double face_area(int f) const;
  Vec3 vertex_normal(int v, const std::vector<std::vector<int>>& vf) const;

  /// Brute-force (grid-accelerated) triangle/triangle intersection test over
  /// non-adjacent pairs. Returns true when an intersecting pair exists;
  /// fills the witness pair when given.
  bool self_intersects(double tol, std::pair<int, int>* witness = nullptr) const;

  /// Watertightness + orientation + optional embeddedness in one call.
  void validate(double tol_emb) const;

  /// Signed containment for closed meshes by ray parity.
  bool contains(const Vec3& p) const;

  TriMesh transformed(const Eigen::Matrix3d& R, const Vec3& t) const;
  void append(const TriMesh& other);
};

/// V - E + F. Requires a manifold mesh (open allowed).
int euler_characteristic(const TriMesh& M);

/// Discrete principal curvatures at vertex v: least-squares quadric over the
/// 2-ring in the tangent frame, shape operator from the graph formulas.
/// Positive on spheres (domain convention).
CurvatureData estimate_curvatures_mesh(const TriMesh& M, int v);

double mesh_min_two_convex_margin(const TriMesh& M, int stride = 1);

}  // namespace marblekit
