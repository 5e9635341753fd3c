#include "marblekit/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace marblekit {

namespace {

struct EdgeKey {
  int a, b;
  bool operator<(const EdgeKey& o) const { return a != o.a ? a < o.a : b < o.b; }
};

EdgeKey ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Segment-triangle proper intersection with epsilon guards.
bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b,
                           const Vec3& c, double eps) {
  Vec3 ab = b - a, ac = c - a, pq = q - p;
  Vec3 n = ab.cross(ac);
  double denom = n.dot(pq);
  if (std::abs(denom) < 1e-18) return false;  // parallel / coplanar: skip
  double t = n.dot(a - p) / denom;
  if (t < eps || t > 1.0 - eps) return false;
  Vec3 x = p + t * pq;
  // Barycentric inside test.
  Vec3 v0 = ab, v1 = ac, v2 = x - a;
  double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
  double d20 = v2.dot(v0), d21 = v2.dot(v1);
  double dn = d00 * d11 - d01 * d01;
  if (std::abs(dn) < 1e-30) return false;
  double v = (d11 * d20 - d01 * d21) / dn;
  double w = (d00 * d21 - d01 * d20) / dn;
  return v > eps && w > eps && 1.0 - v - w > eps;
}

bool tri_tri_intersect(const std::array<Vec3, 3>& t1, const std::array<Vec3, 3>& t2,
                       double eps) {
  for (int e = 0; e < 3; ++e) {
    if (segment_hits_triangle(t1[e], t1[(e + 1) % 3], t2[0], t2[1], t2[2], eps)) return true;
    if (segment_hits_triangle(t2[e], t2[(e + 1) % 3], t1[0], t1[1], t1[2], eps)) return true;
  }
  return false;
}

}  // namespace

bool TriMesh::is_manifold(std::string* why) const {
  std::map<EdgeKey, int> count;
  std::map<std::pair<int, int>, int> directed;
  for (const auto& f : F) {
    for (int e = 0; e < 3; ++e) {
      int a = f[e], b = f[(e + 1) % 3];
      if (a == b) { if (why) *why = "degenerate face"; return false; }
      count[ordered(a, b)]++;
      if (++directed[{a, b}] > 1) {
        if (why) *why = "duplicated directed edge (inconsistent orientation)";
        return false;
      }
    }
  }
  for (const auto& [e, c] : count) {
    if (c > 2) {
      if (why) *why = "edge shared by more than two faces";
      return false;
    }
  }
  return true;
}

bool TriMesh::is_closed(std::string* why) const {
  if (!is_manifold(why)) return false;
  std::map<EdgeKey, int> count;
  for (const auto& f : F)
    for (int e = 0; e < 3; ++e) count[ordered(f[e], f[(e + 1) % 3])]++;
  for (const auto& [e, c] : count)
    if (c != 2) {
      if (why) *why = "boundary edge present";
      return false;
    }
  return true;
}

int TriMesh::edge_count() const {
  std::set<EdgeKey> edges;
  for (const auto& f : F)
    for (int e = 0; e < 3; ++e) edges.insert(ordered(f[e], f[(e + 1) % 3]));
  return static_cast<int>(edges.size());
}

int TriMesh::component_count() const {
  std::vector<int> parent(nv());
  for (int i = 0; i < nv(); ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& f : F) {
    int a = find(f[0]);
    parent[find(f[1])] = a;
    parent[find(f[2])] = a;
  }
  std::set<int> roots;
  std::vector<bool> used(nv(), false);
  for (const auto& f : F)
    for (int v : f) used[v] = true;
  for (int i = 0; i < nv(); ++i)
    if (used[i]) roots.insert(find(i));
  return static_cast<int>(roots.size());
}

std::vector<std::vector<int>> TriMesh::vertex_faces() const {
  std::vector<std::vector<int>> vf(nv());
  for (int f = 0; f < nf(); ++f)
    for (int v : F[f]) vf[v].push_back(f);
  return vf;
}

Vec3 TriMesh::face_normal(int f) const {
  const auto& t = F[f];
  Vec3 n = (V[t[1]] - V[t[0]]).cross(V[t[2]] - V[t[0]]);
  double len = n.norm();
  return len > 1e-300 ? Vec3(n / len) : Vec3::Zero();
}

double TriMesh::face_area(int f) const {
  const auto& t = F[f];
  return 0.5 * (V[t[1]] - V[t[0]]).cross(V[t[2]] - V[t[0]]).norm();
}

Vec3 TriMesh::vertex_normal(int v, const std::vector<std::vector<int>>& vf) const {
  Vec3 n = Vec3::Zero();
  for (int f : vf[v]) {
    // Angle-weighted accumulation.
    const auto& t = F[f];
    int k = 0;
    while (t[k] != v) ++k;
    Vec3 e1 = (V[t[(k + 1) % 3]] - V[v]).normalized();
    Vec3 e2 = (V[t[(k + 2) % 3]] - V[v]).normalized();
    double ang = std::acos(std::clamp(e1.dot(e2), -1.0, 1.0));
    n += ang * face_normal(f);
  }
  double len = n.norm();
  if (len < 1e-300) fail(ErrorCode::Numerical, "degenerate vertex normal");
  return n / len;
}

bool TriMesh::self_intersects(double tol, std::pair<int, int>* witness) const {
  (void)tol;
  // Uniform grid over face AABBs.
  if (nf() == 0) return false;
  Vec3 lo = V[0], hi = V[0];
  for (const auto& p : V) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  double mean_edge = 0;
  for (int f = 0; f < nf(); ++f)
    mean_edge += (V[F[f][0]] - V[F[f][1]]).norm();
  mean_edge /= std::max(1, nf());
  double cell = std::max(2.0 * mean_edge, 1e-12);
  Vec3 extent = hi - lo;
  int gx = std::max(1, std::min(256, static_cast<int>(extent.x() / cell) + 1));
  int gy = std::max(1, std::min(256, static_cast<int>(extent.y() / cell) + 1));
  int gz = std::max(1, std::min(256, static_cast<int>(extent.z() / cell) + 1));
  auto cell_of = [&](const Vec3& p, int round_up) -> std::array<int, 3> {
    Vec3 q = p - lo;
    auto idx = [&](double v, double ext, int g) {
      int i = static_cast<int>((v / std::max(ext, 1e-300)) * g) + round_up * 0;
      return std::clamp(i, 0, g - 1);
    };
    return {idx(q.x(), extent.x(), gx), idx(q.y(), extent.y(), gy), idx(q.z(), extent.z(), gz)};
  };
  std::unordered_map<long long, std::vector<int>> grid;
  auto key = [&](int ix, int iy, int iz) {
    return (static_cast<long long>(ix) * 1000003 + iy) * 1000003 + iz;
  };
  std::vector<std::array<std::array<int, 3>, 2>> bounds(nf());
  for (int f = 0; f < nf(); ++f) {
    Vec3 flo = V[F[f][0]].cwiseMin(V[F[f][1]]).cwiseMin(V[F[f][2]]);
    Vec3 fhi = V[F[f][0]].cwiseMax(V[F[f][1]]).cwiseMax(V[F[f][2]]);
    bounds[f] = {cell_of(flo, 0), cell_of(fhi, 1)};
    for (int ix = bounds[f][0][0]; ix <= bounds[f][1][0]; ++ix)
      for (int iy = bounds[f][0][1]; iy <= bounds[f][1][1]; ++iy)
        for (int iz = bounds[f][0][2]; iz <= bounds[f][1][2]; ++iz)
          grid[key(ix, iy, iz)].push_back(f);
  }
  const double eps = 1e-10;
  std::set<std::pair<int, int>> tested;
  for (const auto& [k, faces] : grid) {
    for (std::size_t i = 0; i < faces.size(); ++i)
      for (std::size_t j = i + 1; j < faces.size(); ++j) {
        int fa = faces[i], fb = faces[j];
        if (fa > fb) std::swap(fa, fb);
        // Skip faces sharing a vertex.
        bool share = false;
        for (int va : F[fa])
          for (int vb : F[fb])
            if (va == vb) share = true;
        if (share) continue;
        if (!tested.insert({fa, fb}).second) continue;
        std::array<Vec3, 3> t1 = {V[F[fa][0]], V[F[fa][1]], V[F[fa][2]]};
        std::array<Vec3, 3> t2 = {V[F[fb][0]], V[F[fb][1]], V[F[fb][2]]};
        if (tri_tri_intersect(t1, t2, eps)) {
          if (witness) *witness = {fa, fb};
          return true;
        }
      }
  }
  return false;
}

void TriMesh::validate(double tol_emb) const {
  std::string why;
  if (!is_closed(&why)) fail(ErrorCode::Input, "mesh not a closed oriented manifold: " + why);
  std::pair<int, int> w;
  if (self_intersects(tol_emb, &w))
    fail(ErrorCode::Embedding,
         "mesh self-intersection between faces " + std::to_string(w.first) + " and " +
             std::to_string(w.second));
}

bool TriMesh::contains(const Vec3& p) const {
  // Ray parity along a fixed slightly-irrational direction.
  Vec3 dir(0.577350269189626, 0.534522483824849, 0.617213399848368);
  int hits = 0;
  for (int f = 0; f < nf(); ++f) {
    const auto& t = F[f];
    Vec3 a = V[t[0]], b = V[t[1]], c = V[t[2]];
    // Moller-Trumbore.
    Vec3 e1 = b - a, e2 = c - a;
    Vec3 pv = dir.cross(e2);
    double det = e1.dot(pv);
    if (std::abs(det) < 1e-14) continue;
    Vec3 tv = p - a;
    double u = tv.dot(pv) / det;
    if (u < 0 || u > 1) continue;
    Vec3 qv = tv.cross(e1);
    double v = dir.dot(qv) / det;
    if (v < 0 || u + v > 1) continue;
    double tt = e2.dot(qv) / det;
    if (tt > 1e-12) ++hits;
  }
  return (hits % 2) == 1;
}

TriMesh TriMesh::transformed(const Eigen::Matrix3d& R, const Vec3& t) const {
  TriMesh out = *this;
  for (auto& p : out.V) p = R * p + t;
  if (R.determinant() < 0)
    for (auto& f : out.F) std::swap(f[1], f[2]);
  return out;
}

void TriMesh::append(const TriMesh& other) {
  int base = nv();
  V.insert(V.end(), other.V.begin(), other.V.end());
  for (auto f : other.F) {
    f[0] += base;
    f[1] += base;
    f[2] += base;
    F.push_back(f);
  }
}

int euler_characteristic(const TriMesh& M) {
  std::string why;
  if (!M.is_manifold(&why)) fail(ErrorCode::Input, "non-manifold mesh: " + why);
  std::set<int> used;
  for (const auto& f : M.F)
    for (int v : f) used.insert(v);
  return static_cast<int>(used.size()) - M.edge_count() + M.nf();
}

CurvatureData estimate_curvatures_mesh(const TriMesh& M, int v) {
  auto vf = M.vertex_faces();
  if (v < 0 || v >= M.nv() || vf[v].empty())
    fail(ErrorCode::Input, "vertex without incident faces");
  // Gather 2-ring.
  std::set<int> ring{v};
  for (int pass = 0; pass < 2; ++pass) {
    std::set<int> grow = ring;
    for (int w : ring)
      for (int f : vf[w])
        for (int u : M.F[f]) grow.insert(u);
    ring = grow;
  }
  ring.erase(v);
  if (ring.size() < 5) fail(ErrorCode::Numerical, "degenerate 2-ring");

  Vec3 n = M.vertex_normal(v, vf);
  Vec3 t1 = orthogonal_unit(n);
  Vec3 t2 = n.cross(t1);

  Eigen::MatrixXd A(ring.size(), 5);
  Eigen::VectorXd rhs(ring.size());
  int row = 0;
  for (int w : ring) {
    Vec3 d = M.V[w] - M.V[v];
    double x = d.dot(t1), y = d.dot(t2), h = d.dot(n);
    A(row, 0) = x * x;
    A(row, 1) = x * y;
    A(row, 2) = y * y;
    A(row, 3) = x;
    A(row, 4) = y;
    rhs(row) = h;
    ++row;
  }
  Eigen::VectorXd q = A.colPivHouseholderQr().solve(rhs);
  if (!q.allFinite()) fail(ErrorCode::Numerical, "quadric fit failed");
  double a = q(0), b = q(1), c = q(2), gx = q(3), gy = q(4);
  // Graph over the tangent plane with height along the OUTWARD normal n:
  // shape operator eigenvalues from det(II - lambda G) = 0, then flipped to
  // the domain convention (positive on spheres).
  double wsq = 1.0 + gx * gx + gy * gy;
  double wrt = std::sqrt(wsq);
  double L = 2 * a / wrt, Mm = b / wrt, N = 2 * c / wrt;
  double E = 1 + gx * gx, Ff = gx * gy, G = 1 + gy * gy;
  double a2 = E * G - Ff * Ff;
  double a1 = -(L * G + N * E - 2 * Mm * Ff);
  double a0 = L * N - Mm * Mm;
  double disc = std::max(0.0, a1 * a1 - 4 * a2 * a0);
  double sd = std::sqrt(disc);
  double l1 = (-a1 - sd) / (2 * a2);
  double l2 = (-a1 + sd) / (2 * a2);
  return make_curvature({-l1, -l2});
}

double mesh_min_two_convex_margin(const TriMesh& M, int stride) {
  double best = std::numeric_limits<double>::infinity();
  for (int v = 0; v < M.nv(); v += stride) {
    try {
      best = std::min(best, estimate_curvatures_mesh(M, v).two_convex_margin());
    } catch (const Error&) {
      // Boundary/degenerate vertices are skipped.
    }
  }
  return best;
}

}  // namespace marblekit
