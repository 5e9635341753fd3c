#include "marblekit/meshing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "marblekit/delaunay.hpp"
#include "marblekit/shapes.hpp"

namespace marblekit {

namespace {

struct Ring {
  std::vector<int> idx;  // vertex indices, ordered around the axis
  Vec3 center = Vec3::Zero();
  Vec3 axis = Vec3::UnitX();
};

// Quad strip between two rings of equal size built in the same basis.
void connect_rings(TriMesh& M, const Ring& a, const Ring& b) {
  const int m = static_cast<int>(a.idx.size());
  if (m != static_cast<int>(b.idx.size()))
    fail(ErrorCode::Numerical, "ring size mismatch in mesh stitching");
  for (int k = 0; k < m; ++k) {
    int k1 = (k + 1) % m;
    M.F.push_back({a.idx[k], b.idx[k], b.idx[k1]});
    M.F.push_back({a.idx[k], b.idx[k1], a.idx[k1]});
  }
}

// Strip between rings from different generators: finds the vertex pairing
// (offset and direction) by geometry before stitching.
void stitch_rings(TriMesh& M, const Ring& a, const Ring& b) {
  const int m = static_cast<int>(a.idx.size());
  if (m != static_cast<int>(b.idx.size()))
    fail(ErrorCode::Numerical, "ring size mismatch in geometric stitch");
  int best_o = 0, best_d = 1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int d = -1; d <= 1; d += 2) {
    for (int o = 0; o < m; ++o) {
      double cost = 0;
      for (int k = 0; k < m; ++k) {
        int kb = ((o + d * k) % m + m) % m;
        cost += (M.V[a.idx[k]] - M.V[b.idx[kb]]).squaredNorm();
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_o = o;
        best_d = d;
      }
    }
  }
  auto map = [&](int k) { return ((best_o + best_d * k) % m + m) % m; };
  for (int k = 0; k < m; ++k) {
    int k1 = (k + 1) % m;
    M.F.push_back({a.idx[k], b.idx[map(k)], b.idx[map(k1)]});
    M.F.push_back({a.idx[k], b.idx[map(k1)], a.idx[k1]});
  }
}

void close_with_fan(TriMesh& M, const Ring& r, const Vec3& tip, bool tip_forward) {
  int t = M.nv();
  M.V.push_back(tip);
  const int m = static_cast<int>(r.idx.size());
  for (int k = 0; k < m; ++k) {
    int k1 = (k + 1) % m;
    if (tip_forward) M.F.push_back({r.idx[k], t, r.idx[k1]});
    else M.F.push_back({r.idx[k], r.idx[k1], t});
  }
}

Ring make_ring(TriMesh& M, const Vec3& center, const Vec3& axis, const Vec3& e1,
               const Vec3& e2, double radius, int m) {
  Ring r;
  r.center = center;
  r.axis = axis;
  r.idx.reserve(m);
  for (int k = 0; k < m; ++k) {
    double th = 2 * M_PI * k / m;
    r.idx.push_back(M.nv());
    M.V.push_back(center + radius * (std::cos(th) * e1 + std::sin(th) * e2));
  }
  return r;
}

int ring_count_for(double radius, double res) {
  return std::max(8, static_cast<int>(std::ceil(2 * M_PI * radius / res)));
}

// Flood-fill a consistent orientation, then flip globally so the signed
// volume is positive (outward normals).
void orient_outward_global(TriMesh& M) {
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (int f = 0; f < M.nf(); ++f)
    for (int e = 0; e < 3; ++e) {
      int a = M.F[f][e], b = M.F[f][(e + 1) % 3];
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(f);
    }
  std::vector<int> state(M.nf(), 0);  // 0 unseen, 1 kept, 2 flipped
  std::vector<int> stack;
  for (int seed = 0; seed < M.nf(); ++seed) {
    if (state[seed]) continue;
    state[seed] = 1;
    stack.push_back(seed);
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      auto face = M.F[f];
      if (state[f] == 2) std::swap(face[1], face[2]);
      for (int e = 0; e < 3; ++e) {
        int a = face[e], b = face[(e + 1) % 3];
        for (int g : edge_faces[{std::min(a, b), std::max(a, b)}]) {
          if (g == f || state[g]) continue;
          auto gf = M.F[g];
          bool same_dir = false;
          for (int e2 = 0; e2 < 3; ++e2)
            if (gf[e2] == a && gf[(e2 + 1) % 3] == b) same_dir = true;
          state[g] = same_dir ? (state[f] == 1 ? 2 : 1) : state[f];
          stack.push_back(g);
        }
      }
    }
  }
  for (int f = 0; f < M.nf(); ++f)
    if (state[f] == 2) std::swap(M.F[f][1], M.F[f][2]);
  double vol = 0;
  for (const auto& f : M.F) vol += M.V[f[0]].dot(M.V[f[1]].cross(M.V[f[2]]));
  if (vol < 0)
    for (auto& f : M.F) std::swap(f[1], f[2]);
}

}  // namespace

TriMesh mesh_revolution(const RevolutionSurface& R, double res) {
  if (res <= 0) fail(ErrorCode::Input, "resolution must be positive");
  TriMesh M;
  Vec3 e1 = orthogonal_unit(R.axis_dir);
  Vec3 e2 = R.axis_dir.cross(e1);
  const int mring = ring_count_for(std::max(R.max_rho(), 1e-12), res);
  const int stride = std::max(1, static_cast<int>(std::floor(res / R.hg)));

  std::vector<int> rows;
  for (int i = 0; i < R.size(); i += stride) rows.push_back(i);
  if (!R.closed && rows.back() != R.size() - 1) rows.push_back(R.size() - 1);

  double pole_tol = 1e-7 * (R.max_rho() + R.hg);
  std::vector<Ring> rings;
  for (int i : rows) {
    if (R.rho[i] <= pole_tol) continue;
    Vec3 c = R.axis_origin + R.z[i] * R.axis_dir;
    rings.push_back(make_ring(M, c, R.axis_dir, e1, e2, R.rho[i], mring));
  }
  if (rings.size() < 2) fail(ErrorCode::Input, "revolution mesh degenerate");
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) connect_rings(M, rings[k], rings[k + 1]);
  if (R.closed) {
    connect_rings(M, rings.back(), rings.front());
  } else {
    if (R.rho.front() <= pole_tol)
      close_with_fan(M, rings.front(), R.axis_origin + R.z.front() * R.axis_dir, false);
    if (R.rho.back() <= pole_tol)
      close_with_fan(M, rings.back(), R.axis_origin + R.z.back() * R.axis_dir, true);
  }
  orient_outward_global(M);
  return M;
}

TriMesh mesh_profile(const ProfileSurface& S, double res) {
  return mesh_revolution(to_revolution(S), res);
}

TriMesh mesh_tube(const TubeSurface& T, double res) {
  const auto& c = T.skeleton;
  TriMesh M;
  const int mring = ring_count_for(std::max(T.max_radius(), 1e-12), res);
  const int stride = std::max(1, static_cast<int>(std::floor(res / c.h)));
  double tip_tol = 1e-7 * (T.max_radius() + c.h);

  std::vector<int> rows;
  for (int i = 0; i < c.size(); i += stride) rows.push_back(i);
  if (!c.closed && rows.back() != c.size() - 1) rows.push_back(c.size() - 1);

  std::vector<Ring> rings;
  bool tip_front = false, tip_back = false;
  for (int i : rows) {
    if (T.radius[i] <= tip_tol) {
      if (i == rows.front()) tip_front = true;
      if (i == rows.back()) tip_back = true;
      continue;
    }
    Ring r;
    r.center = c.samples[i];
    r.axis = c.tangent[i];
    r.idx.reserve(mring);
    for (int k = 0; k < mring; ++k) {
      double th = 2 * M_PI * k / mring;
      r.idx.push_back(M.nv());
      M.V.push_back(c.samples[i] +
                    T.radius[i] * (std::cos(th) * c.normal1[i] + std::sin(th) * c.normal2[i]));
    }
    rings.push_back(std::move(r));
  }
  if (rings.size() < 2) fail(ErrorCode::Input, "tube mesh degenerate");
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) connect_rings(M, rings[k], rings[k + 1]);
  if (c.closed) {
    connect_rings(M, rings.back(), rings.front());
  } else {
    close_with_fan(M, rings.front(), tip_front ? c.samples.front()
                                               : Vec3(c.samples.front()),
                   false);
    close_with_fan(M, rings.back(), tip_back ? c.samples.back() : Vec3(c.samples.back()), true);
  }
  orient_outward_global(M);
  return M;
}

namespace {

struct HoleSpec {
  Ring ring;
  Vec3 dir;
  double cos_angle;
};

// Sphere minus hole caps, conforming to the given rings. Icosphere points
// away from the holes plus the ring points, stereographic Delaunay, then
// drop triangles inside the holes.
void mesh_ball_with_holes(TriMesh& M, const Ball& ball, const std::vector<HoleSpec>& holes,
                          double res) {
  int subdiv = std::clamp(
      static_cast<int>(std::ceil(std::log2(std::max(2.0, 2.2 * ball.radius / res)))), 1, 6);
  if (holes.empty()) {
    TriMesh ico = make_icosphere(ball.radius, subdiv, ball.center);
    M.append(ico);
    return;
  }
  const std::size_t base_nv = M.V.size();
  for (int attempt = 0; attempt < 3; ++attempt) {
    M.V.resize(base_nv);
    TriMesh ico = make_icosphere(1.0, subdiv);
    double edge_angle = 1.1 / std::pow(2.0, subdiv);
    std::vector<Vec3> dirs;
    std::vector<int> global_idx;
    for (const auto& h : holes) {
      for (int vi : h.ring.idx) {
        global_idx.push_back(vi);
        dirs.push_back((M.V[vi] - ball.center).normalized());
      }
    }
    double guard = 1.6 * edge_angle;
    for (const auto& p : ico.V) {
      bool drop = false;
      for (const auto& h : holes) {
        double ang = std::acos(std::clamp(p.dot(h.dir), -1.0, 1.0));
        double hole_ang = std::acos(std::clamp(h.cos_angle, -1.0, 1.0));
        if (ang < hole_ang + guard) drop = true;
      }
      if (drop) continue;
      global_idx.push_back(M.nv());
      M.V.push_back(ball.center + ball.radius * p);
      dirs.push_back(p);
    }
    Vec3 proj_dir = holes[0].dir;
    Vec3 px = orthogonal_unit(proj_dir);
    Vec3 py = proj_dir.cross(px);
    std::vector<Vec2> plane(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      double denom = std::max(1e-9, 1.0 - dirs[i].dot(proj_dir));
      plane[i] = Vec2(dirs[i].dot(px) / denom, dirs[i].dot(py) / denom);
    }
    auto tris = delaunay_triangulate(plane);
    std::vector<std::array<int, 3>> kept;
    for (const auto& t : tris) {
      Vec3 cen = (dirs[t[0]] + dirs[t[1]] + dirs[t[2]]).normalized();
      bool in_hole = false;
      for (const auto& h : holes)
        if (cen.dot(h.dir) > h.cos_angle) in_hole = true;
      if (!in_hole) kept.push_back(t);
    }
    // Ring conformity: each ring edge must be used by exactly one kept
    // triangle (it becomes the boundary the collar attaches to).
    std::map<std::pair<int, int>, int> edge_use;
    for (const auto& t : kept)
      for (int e = 0; e < 3; ++e) {
        int a = global_idx[t[e]], b = global_idx[t[(e + 1) % 3]];
        edge_use[{std::min(a, b), std::max(a, b)}]++;
      }
    bool ok = true;
    for (const auto& h : holes) {
      const int m = static_cast<int>(h.ring.idx.size());
      for (int k = 0; k < m; ++k) {
        int a = h.ring.idx[k], b = h.ring.idx[(k + 1) % m];
        auto it = edge_use.find({std::min(a, b), std::max(a, b)});
        if (it == edge_use.end() || it->second != 1) ok = false;
      }
    }
    if (!ok) {
      if (attempt < 2) {
        subdiv = std::min(6, subdiv + 1);
        continue;
      }
      fail(ErrorCode::Numerical, "ball carve failed to conform to junction rings");
    }
    for (const auto& t : kept) {
      Vec3 a = M.V[global_idx[t[0]]], b = M.V[global_idx[t[1]]], c = M.V[global_idx[t[2]]];
      Vec3 nrm = (b - a).cross(c - a);
      Vec3 cen = (a + b + c) / 3.0 - ball.center;
      if (nrm.dot(cen) >= 0)
        M.F.push_back({global_idx[t[0]], global_idx[t[1]], global_idx[t[2]]});
      else
        M.F.push_back({global_idx[t[0]], global_idx[t[2]], global_idx[t[1]]});
    }
    return;
  }
}

}  // namespace

TriMesh mesh_complex(const MarbleComplex& G, double res) {
  TriMesh M;
  const int ns = static_cast<int>(G.strings.size());
  const int nb = static_cast<int>(G.bodies.size());

  // Ring counts: strings need to resolve their widest collar; revolution
  // bodies force all their attachments to share the body's ring count.
  std::vector<int> m_string(ns, 8), m_body(nb, 0);
  for (int si = 0; si < ns; ++si) {
    double widest = G.strings[si].radius;
    for (const auto& j : G.junctions)
      if (j.string_id == si) widest = std::max(widest, j.hole_rho);
    m_string[si] = ring_count_for(widest, res);
  }
  for (int bi = 0; bi < nb; ++bi)
    if (G.bodies[bi].kind == MarbleBody::Kind::RevolutionBody)
      m_body[bi] = ring_count_for(G.bodies[bi].rev.max_rho(), res);
  for (int pass = 0; pass < 4; ++pass) {
    for (const auto& j : G.junctions) {
      if (j.body_id >= 0 && G.bodies[j.body_id].kind == MarbleBody::Kind::RevolutionBody) {
        m_body[j.body_id] = std::max(m_body[j.body_id], m_string[j.string_id]);
        m_string[j.string_id] = std::max(m_string[j.string_id], m_body[j.body_id]);
      }
    }
  }

  // Junction rings and collars.
  struct JRings {
    Ring hole, tube;
  };
  std::vector<JRings> jr(G.junctions.size());
  for (std::size_t ji = 0; ji < G.junctions.size(); ++ji) {
    const auto& j = G.junctions[ji];
    const int m = m_string[j.string_id];
    Vec3 e1 = orthogonal_unit(j.axis);
    Vec3 e2 = j.axis.cross(e1);
    JRings r;
    r.hole = make_ring(M, j.p + j.wall_xi * j.axis, j.axis, e1, e2,
                       j.profile.eval(j.wall_xi), m);
    r.tube = make_ring(M, j.p + j.tube_xi * j.axis, j.axis, e1, e2,
                       j.profile.eval(j.tube_xi), m);
    int rows = std::max(2, static_cast<int>(std::ceil((j.tube_xi - j.wall_xi) / (0.5 * res))));
    Ring prev = r.hole;
    for (int k = 1; k < rows; ++k) {
      double xi = j.wall_xi + (j.tube_xi - j.wall_xi) * k / rows;
      Ring rk = make_ring(M, j.p + xi * j.axis, j.axis, e1, e2, j.profile.eval(xi), m);
      connect_rings(M, prev, rk);
      prev = rk;
    }
    connect_rings(M, prev, r.tube);
    jr[ji] = std::move(r);
  }

  // Strings.
  for (int si = 0; si < ns; ++si) {
    const auto& s = G.strings[si];
    const auto& c = s.curve;
    const int m = m_string[si];
    auto [lo, hi] = G.string_tube_range(si);
    const JRings* ra = nullptr;
    const JRings* rb = nullptr;
    for (std::size_t ji = 0; ji < G.junctions.size(); ++ji) {
      if (G.junctions[ji].string_id != si) continue;
      if (G.junctions[ji].end == 0) ra = &jr[ji];
      else rb = &jr[ji];
    }
    if (c.closed && !ra && !rb) {
      TubeSurface T;
      T.skeleton = c;
      T.radius.assign(c.size(), s.radius);
      TriMesh sub = mesh_tube(T, res);
      M.append(sub);
      continue;
    }
    // Sample rows strictly inside (lo, hi) so the boundary strips to the
    // junction tube rings stay proper.
    double row_lo = lo + 0.35 * res, row_hi = hi - 0.35 * res;
    if (!ra && !s.cap_a) row_lo = 0.0;
    if (!rb && !s.cap_b) row_hi = c.total_length;
    std::vector<double> row_arcs;
    int nrows = std::max(2, static_cast<int>(std::ceil((row_hi - row_lo) / res)) + 1);
    for (int k = 0; k < nrows; ++k)
      row_arcs.push_back(row_lo + (row_hi - row_lo) * k / (nrows - 1));

    std::vector<Ring> rings;
    for (double arc : row_arcs) {
      int i = std::clamp(static_cast<int>(std::llround(arc / c.h)), 0, c.size() - 1);
      Vec3 p = c.point_at(arc);
      Ring r = make_ring(M, p, c.tangent[i], c.normal1[i], c.normal2[i], s.radius_at(arc), m);
      rings.push_back(std::move(r));
    }
    for (std::size_t k = 0; k + 1 < rings.size(); ++k) connect_rings(M, rings[k], rings[k + 1]);
    if (ra) stitch_rings(M, ra->tube, rings.front());
    if (rb) stitch_rings(M, rings.back(), rb->tube);
    if (!ra && s.cap_a) {
      const auto& cap = *s.cap_a;
      int rowsc = std::max(4, static_cast<int>(std::ceil(cap.length / (0.4 * res))));
      Ring prev = rings.front();
      for (int k = 1; k < rowsc; ++k) {
        double d = cap.length * (1.0 - static_cast<double>(k) / rowsc);
        double arc = std::max(0.0, cap.length - d);
        int i = std::clamp(static_cast<int>(std::llround(arc / c.h)), 0, c.size() - 1);
        Ring rk = make_ring(M, c.point_at(arc), c.tangent[i], c.normal1[i], c.normal2[i],
                            cap.eval(d), m);
        connect_rings(M, rk, prev);
        prev = rk;
      }
      close_with_fan(M, prev, c.samples.front(), false);
    }
    if (!rb && s.cap_b) {
      const auto& cap = *s.cap_b;
      int rowsc = std::max(4, static_cast<int>(std::ceil(cap.length / (0.4 * res))));
      Ring prev = rings.back();
      for (int k = 1; k < rowsc; ++k) {
        double d = cap.length * (1.0 - static_cast<double>(k) / rowsc);
        double arc = std::min(c.total_length, c.total_length - d);
        int i = std::clamp(static_cast<int>(std::llround(arc / c.h)), 0, c.size() - 1);
        Ring rk = make_ring(M, c.point_at(arc), c.tangent[i], c.normal1[i], c.normal2[i],
                            cap.eval(d), m);
        connect_rings(M, prev, rk);
        prev = rk;
      }
      close_with_fan(M, prev, c.samples.back(), true);
    }
  }

  // Bodies.
  for (int bi = 0; bi < nb; ++bi) {
    const auto& b = G.bodies[bi];
    std::vector<std::size_t> js;
    for (std::size_t ji = 0; ji < G.junctions.size(); ++ji)
      if (G.junctions[ji].body_id == bi) js.push_back(ji);
    if (b.kind == MarbleBody::Kind::BallBody) {
      std::vector<HoleSpec> holes;
      for (std::size_t ji : js) {
        const auto& j = G.junctions[ji];
        HoleSpec h;
        h.ring = jr[ji].hole;
        Vec3 ring_center = j.p + j.wall_xi * j.axis;
        h.dir = (ring_center - b.ball.center).normalized();
        Vec3 ring_pt = M.V[jr[ji].hole.idx[0]];
        h.cos_angle = ((ring_pt - b.ball.center).normalized()).dot(h.dir) + 1e-12;
        holes.push_back(std::move(h));
      }
      mesh_ball_with_holes(M, b.ball, holes, res);
    } else {
      const auto& R = b.rev;
      if (js.empty()) {
        TriMesh sub = mesh_revolution(R, res);
        M.append(sub);
        continue;
      }
      if (!R.sphere_type())
        fail(ErrorCode::Input, "revolution bodies support junctions at axis poles only");
      // Trim depth per pole from the junction wall rings.
      double z_lo = R.z.front(), z_hi = R.z.back();
      const JRings* ring_lo = nullptr;
      const JRings* ring_hi = nullptr;
      for (std::size_t ji : js) {
        const auto& j = G.junctions[ji];
        Vec3 rc = j.p + j.wall_xi * j.axis;
        double z_ring = (rc - R.axis_origin).dot(R.axis_dir);
        double z_mid = 0.5 * (R.z.front() + R.z.back());
        if (z_ring < z_mid) {
          z_lo = std::max(z_lo, z_ring);
          ring_lo = &jr[ji];
        } else {
          z_hi = std::min(z_hi, z_ring);
          ring_hi = &jr[ji];
        }
      }
      const int m = m_body[bi];
      Vec3 e1 = orthogonal_unit(R.axis_dir);
      Vec3 e2 = R.axis_dir.cross(e1);
      const int stride = std::max(1, static_cast<int>(std::floor(res / R.hg)));
      std::vector<Ring> rows;
      double pole_tol = 1e-7 * (R.max_rho() + R.hg);
      double margin = 0.35 * res;
      for (int i = 0; i < R.size(); i += stride) {
        if (R.rho[i] <= pole_tol) continue;
        if (ring_lo && R.z[i] < z_lo + margin) continue;
        if (ring_hi && R.z[i] > z_hi - margin) continue;
        Vec3 cc = R.axis_origin + R.z[i] * R.axis_dir;
        rows.push_back(make_ring(M, cc, R.axis_dir, e1, e2, R.rho[i], m));
      }
      if (rows.size() < 2) fail(ErrorCode::Input, "revolution body mesh degenerate");
      for (std::size_t k = 0; k + 1 < rows.size(); ++k) connect_rings(M, rows[k], rows[k + 1]);
      if (ring_lo) stitch_rings(M, ring_lo->hole, rows.front());
      else close_with_fan(M, rows.front(), R.axis_origin + R.z.front() * R.axis_dir, false);
      if (ring_hi) stitch_rings(M, rows.back(), ring_hi->hole);
      else close_with_fan(M, rows.back(), R.axis_origin + R.z.back() * R.axis_dir, true);
    }
  }
  orient_outward_global(M);
  return M;
}

TriMesh mesh_from(const ProfileSurface& S, double res) {
  S.validate();
  TriMesh M = mesh_profile(S, res);
  M.validate(res / 10);
  return M;
}

TriMesh mesh_from(const TubeSurface& T, double res) {
  T.validate();
  TriMesh M = mesh_tube(T, res);
  M.validate(res / 10);
  return M;
}

TriMesh mesh_from(const MarbleComplex& G, double res) {
  TriMesh M = mesh_complex(G, res);
  M.validate(res / 10);
  return M;
}

}  // namespace marblekit
