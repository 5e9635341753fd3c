#include "marblekit/complex.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace marblekit {

double JunctionProfile::eval(double xi) const {
  const int m = size();
  double f = (xi - xi0) / dxi;
  int i = std::clamp(static_cast<int>(std::floor(f)), 0, m - 2);
  double w = f - i;
  return (1 - w) * g[i] + w * g[i + 1];
}

CurvatureData JunctionProfile::curvature(int i, int n) const {
  const int m = size();
  int j = std::clamp(i, 1, m - 2);
  double gp = (g[j + 1] - g[j - 1]) / (2 * dxi);
  double gpp = (g[j + 1] - 2 * g[j] + g[j - 1]) / (dxi * dxi);
  double w = 1 + gp * gp;
  double lam_ax = -gpp / std::pow(w, 1.5);
  double lam_rot = 1.0 / (g[j] * std::sqrt(w));
  std::vector<double> l(n, lam_rot);
  l[0] = lam_ax;
  return make_curvature(std::move(l));
}

double CapShape::eval(double dist_from_tip) const {
  if (g.size() < 2 || length <= 0) return 0.0;
  if (dist_from_tip <= 0) return g.back();  // == 0 at the tip
  if (dist_from_tip >= length) return g.front();
  // g[0] at distance `length` from the tip, g.back() at the tip.
  double f = (1.0 - dist_from_tip / length) * (g.size() - 1);
  int i = std::clamp(static_cast<int>(std::floor(f)), 0, static_cast<int>(g.size()) - 2);
  double w = f - i;
  return (1 - w) * g[i] + w * g[i + 1];
}

double MarbleString::radius_at(double s) const {
  double r = radius;
  if (cap_a) {
    double d = s;
    if (d < cap_a->length) r = std::min(r, cap_a->eval(d));
  }
  if (cap_b) {
    double d = curve.total_length - s;
    if (d < cap_b->length) r = std::min(r, cap_b->eval(d));
  }
  return r;
}

namespace {

// 2D solid test for a revolution body in its local (z, rho) coordinates.
bool revolution_contains_local(const RevolutionSurface& R, double zz, double rr,
                               double slack) {
  // Treat the generating curve (closed by the axis for sphere-type curves)
  // as a polygon in the (z, rho) half-plane and run ray parity along +rho.
  const int m = R.size();
  std::vector<Vec2> poly;
  poly.reserve(m + 2);
  for (int i = 0; i < m; ++i) poly.emplace_back(R.z[i], R.rho[i]);
  if (!R.closed) {
    poly.emplace_back(R.z[m - 1], -2 * slack - 1e-12);
    poly.emplace_back(R.z[0], -2 * slack - 1e-12);
  }
  const int np = static_cast<int>(poly.size());
  // Distance slack first: near-boundary points count as inside.
  if (slack > 0) {
    for (int i = 0; i < np; ++i) {
      Vec2 a = poly[i], b = poly[(i + 1) % np];
      Vec2 ab = b - a;
      double t = std::clamp((Vec2(zz, rr) - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      if ((a + t * ab - Vec2(zz, rr)).norm() <= slack) return true;
    }
  }
  bool in = false;
  for (int i = 0; i < np; ++i) {
    Vec2 a = poly[i], b = poly[(i + 1) % np];
    if ((a.y() > rr) != (b.y() > rr)) {
      double xint = a.x() + (rr - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (xint > zz) in = !in;
    }
  }
  return in;
}

}  // namespace

bool MarbleComplex::contains(const Vec3& q, double slack) const {
  for (const auto& b : bodies) {
    if (b.kind == MarbleBody::Kind::BallBody) {
      if (b.ball.contains(q, slack)) return true;
    } else {
      const auto& R = b.rev;
      double zz = (q - R.axis_origin).dot(R.axis_dir);
      double rr = (q - R.axis_origin - zz * R.axis_dir).norm();
      if (revolution_contains_local(R, zz, rr, slack)) return true;
    }
  }
  for (const auto& s : strings) {
    int idx = 0;
    double d = distance_to_curve(s.curve, q, &idx);
    if (d <= s.radius_at(s.curve.arclength(idx)) + slack) return true;
  }
  for (const auto& j : junctions) {
    double xi = (q - j.p).dot(j.axis);
    if (xi < j.profile.xi0 || xi > j.profile.xi_end()) continue;
    double rr = (q - j.p - xi * j.axis).norm();
    if (rr <= j.profile.eval(xi) + slack) return true;
  }
  return false;
}

int MarbleComplex::graph_component_count() const {
  const int nb = static_cast<int>(bodies.size());
  std::vector<int> parent(nb);
  for (int i = 0; i < nb; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& s : strings)
    if (s.body_a >= 0 && s.body_b >= 0) parent[find(s.body_a)] = find(s.body_b);
  std::set<int> roots;
  for (int i = 0; i < nb; ++i) roots.insert(find(i));
  return static_cast<int>(roots.size());
}

int MarbleComplex::cycle_rank() const {
  int E = 0;
  for (const auto& s : strings)
    if (s.body_a >= 0 && s.body_b >= 0) ++E;
  int V = static_cast<int>(bodies.size());
  return E - V + graph_component_count();
}

bool MarbleComplex::graph_connected() const { return graph_component_count() == 1; }

bool MarbleComplex::has_loose_ends() const {
  for (const auto& s : strings)
    if (s.body_a < 0 || s.body_b < 0) return true;
  return false;
}

int MarbleComplex::euler_characteristic_structural() const {
  return 2 * graph_component_count() - 2 * cycle_rank();
}

std::pair<double, double> MarbleComplex::string_tube_range(int string_id) const {
  const auto& s = strings[string_id];
  double lo = 0.0, hi = s.curve.total_length;
  for (const auto& j : junctions) {
    if (j.string_id != string_id) continue;
    if (j.end == 0) lo = std::max(lo, j.tube_xi);
    else hi = std::min(hi, s.curve.total_length - j.tube_xi);
  }
  if (s.cap_a) lo = std::max(lo, s.cap_a->length);
  if (s.cap_b) hi = std::min(hi, s.curve.total_length - s.cap_b->length);
  return {lo, hi};
}

std::vector<SurfaceSample> MarbleComplex::sample_surface(int n_theta) const {
  std::vector<SurfaceSample> out;
  // Bodies.
  for (std::size_t bi = 0; bi < bodies.size(); ++bi) {
    const auto& b = bodies[bi];
    if (b.kind == MarbleBody::Kind::BallBody) {
      // Fibonacci sphere samples, skipping junction holes.
      const int N = 256;
      double R = b.ball.radius;
      CurvatureData cd = make_curvature(std::vector<double>(n, 1.0 / R));
      for (int k = 0; k < N; ++k) {
        double zz = 1.0 - 2.0 * (k + 0.5) / N;
        double phi = k * 2.399963229728653;
        double rr = std::sqrt(std::max(0.0, 1 - zz * zz));
        Vec3 dir(rr * std::cos(phi), rr * std::sin(phi), zz);
        Vec3 p = b.ball.center + R * dir;
        bool in_hole = false;
        for (const auto& j : junctions) {
          if (j.body_id != static_cast<int>(bi)) continue;
          if ((p - j.p).norm() < j.delta) in_hole = true;
        }
        if (in_hole) continue;
        SurfaceSample s;
        s.p = p;
        s.normal = dir;
        s.curv = cd;
        s.grad_A = 0.0;
        s.piece = "body" + std::to_string(bi);
        s.index = k;
        out.push_back(std::move(s));
      }
    } else {
      const auto& R = b.rev;
      Vec3 e1 = orthogonal_unit(R.axis_dir);
      Vec3 e2 = R.axis_dir.cross(e1);
      for (int i = 0; i < R.size(); ++i) {
        if (R.rho[i] < 1e-9 * (R.max_rho() + R.hg)) continue;
        CurvatureData cd = R.curvature(i);
        CurvatureData cd2 = R.curvature(std::min(i + 1, R.size() - 1));
        double ga = 0.0;
        for (std::size_t q = 0; q < cd.lambda.size(); ++q)
          ga += sq((cd2.lambda[q] - cd.lambda[q]) / R.hg);
        ga = std::sqrt(ga);
        Vec2 nrm2 = R.outward_normal(i);
        for (int t = 0; t < n_theta; ++t) {
          double th = 2 * M_PI * t / n_theta;
          Vec3 radial = std::cos(th) * e1 + std::sin(th) * e2;
          Vec3 p = R.axis_origin + R.z[i] * R.axis_dir + R.rho[i] * radial;
          bool in_hole = false;
          for (const auto& j : junctions) {
            if (j.body_id != static_cast<int>(bi)) continue;
            if ((p - j.p).norm() < j.delta) in_hole = true;
          }
          if (in_hole) continue;
          SurfaceSample s;
          s.p = p;
          s.normal = nrm2.x() * R.axis_dir + nrm2.y() * radial;
          s.curv = cd;
          s.grad_A = ga;
          s.piece = "body" + std::to_string(bi);
          s.index = i;
          out.push_back(std::move(s));
        }
      }
    }
  }
  // Strings (plain tube range only; collars and caps sampled separately).
  for (std::size_t si = 0; si < strings.size(); ++si) {
    const auto& s = strings[si];
    auto [lo, hi] = string_tube_range(static_cast<int>(si));
    const auto& c = s.curve;
    for (int i = 0; i < c.size(); ++i) {
      double arc = c.arclength(i);
      if (!c.closed && (arc < lo || arc > hi)) continue;
      Vec3 kv = c.curvature_vector(i);
      double k = kv.norm();
      Vec3 nhat = k > 1e-12 ? Vec3(kv / k) : Vec3::Zero();
      double dk = c.curvature_derivative(i);
      double r = s.radius;
      if (r * k >= 0.5)
        fail(ErrorCode::Embedding, "string tube too fat for its curvature");
      for (int t = 0; t < n_theta; ++t) {
        double th = 2 * M_PI * t / n_theta;
        Vec3 dir = std::cos(th) * c.normal1[i] + std::sin(th) * c.normal2[i];
        double cthn = k > 1e-12 ? dir.dot(nhat) : 0.0;
        double lam = k < 1e-14 ? 0.0 : -k * cthn / (1.0 - r * k * cthn);
        SurfaceSample ss;
        ss.p = c.samples[i] + r * dir;
        ss.normal = dir;
        ss.curv = make_curvature({lam, 1.0 / r});
        // d/ds of the bending curvature dominates the shape-operator drift.
        ss.grad_A = dk / std::max(1e-12, sq(1.0 - r * k * cthn));
        ss.piece = "string" + std::to_string(si);
        ss.index = i;
        out.push_back(std::move(ss));
      }
    }
  }
  // Junction collars.
  for (std::size_t ji = 0; ji < junctions.size(); ++ji) {
    const auto& j = junctions[ji];
    Vec3 e1 = orthogonal_unit(j.axis);
    Vec3 e2 = j.axis.cross(e1);
    for (int i = 1; i + 1 < j.profile.size(); ++i) {
      double xi = j.profile.xi_at(i);
      if (xi < j.wall_xi || xi > j.tube_xi) continue;
      CurvatureData cd = j.profile.curvature(i, n);
      CurvatureData cd2 = j.profile.curvature(std::min(i + 1, j.profile.size() - 2), n);
      double ga = 0.0;
      for (std::size_t q = 0; q < cd.lambda.size(); ++q)
        ga += sq((cd2.lambda[q] - cd.lambda[q]) / j.profile.dxi);
      ga = std::sqrt(ga);
      double gp = (j.profile.g[i + 1] - j.profile.g[i - 1]) / (2 * j.profile.dxi);
      double wn = std::sqrt(1 + gp * gp);
      for (int t = 0; t < n_theta; ++t) {
        double th = 2 * M_PI * t / n_theta;
        Vec3 radial = std::cos(th) * e1 + std::sin(th) * e2;
        SurfaceSample ss;
        ss.p = j.p + xi * j.axis + j.profile.g[i] * radial;
        ss.normal = (-gp * j.axis + radial) / wn;
        ss.curv = cd;
        ss.grad_A = ga;
        ss.piece = "junction" + std::to_string(ji);
        ss.index = i;
        out.push_back(std::move(ss));
      }
    }
  }
  // Loose-end caps: revolve the cap taper about the end tangent line. A
  // b-controlled curve deviates from that line by O(r^2/b) over the cap, so
  // the profile formulas are exact to the working tolerance there.
  for (std::size_t si = 0; si < strings.size(); ++si) {
    const auto& s = strings[si];
    for (int endk = 0; endk < 2; ++endk) {
      const std::optional<CapShape>& cap = endk == 0 ? s.cap_a : s.cap_b;
      if (!cap) continue;
      const auto& c = s.curve;
      int i0 = endk == 0 ? 0 : c.size() - 1;
      Vec3 axis = endk == 0 ? Vec3(-c.tangent[i0]) : Vec3(c.tangent[i0]);
      Vec3 tip = c.samples[i0];
      Vec3 e1 = orthogonal_unit(axis);
      Vec3 e2 = axis.cross(e1);
      const int M = static_cast<int>(cap->g.size());
      JunctionProfile prof;  // reuse the profile curvature machinery
      prof.dxi = cap->length / (M - 1);
      prof.xi0 = -cap->length;
      prof.g = cap->g;  // g[0] at xi=-length (radius r), g.back()=0 at tip
      for (int i = 1; i + 1 < M; ++i) {
        double xi = prof.xi_at(i);
        CurvatureData cd = prof.curvature(i, n);
        double gp = (prof.g[i + 1] - prof.g[i - 1]) / (2 * prof.dxi);
        double wn = std::sqrt(1 + gp * gp);
        for (int t = 0; t < n_theta; ++t) {
          double th = 2 * M_PI * t / n_theta;
          Vec3 radial = std::cos(th) * e1 + std::sin(th) * e2;
          SurfaceSample ss;
          ss.p = tip + xi * axis + prof.g[i] * radial;
          ss.normal = (-gp * axis + radial) / wn;
          ss.curv = cd;
          ss.grad_A = 0.0;
          ss.piece = "cap_string" + std::to_string(si);
          ss.index = i;
          out.push_back(std::move(ss));
        }
      }
    }
  }
  return out;
}

void MarbleComplex::check_clearances() const {
  // delta-balls pairwise disjoint.
  for (std::size_t a = 0; a < junctions.size(); ++a)
    for (std::size_t b = a + 1; b < junctions.size(); ++b)
      if (!balls_disjoint(junctions[a].ball(), junctions[b].ball()))
        fail(ErrorCode::Embedding, "junction gluing balls overlap");
  // String tubes against bodies (outside own junction collars).
  for (std::size_t si = 0; si < strings.size(); ++si) {
    const auto& s = strings[si];
    auto [lo, hi] = string_tube_range(static_cast<int>(si));
    for (int i = 0; i < s.curve.size(); ++i) {
      double arc = s.curve.arclength(i);
      if (!s.curve.closed && (arc < lo + 0.5 * gap_delta || arc > hi - 0.5 * gap_delta))
        continue;
      const Vec3& q = s.curve.samples[i];
      for (std::size_t bi = 0; bi < bodies.size(); ++bi) {
        const auto& b = bodies[bi];
        double d;
        if (b.kind == MarbleBody::Kind::BallBody) {
          d = (q - b.ball.center).norm() - b.ball.radius;
        } else {
          double zz = (q - b.rev.axis_origin).dot(b.rev.axis_dir);
          double rr = (q - b.rev.axis_origin - zz * b.rev.axis_dir).norm();
          double best = std::numeric_limits<double>::infinity();
          for (int k = 0; k < b.rev.size(); ++k)
            best = std::min(best, (Vec2(zz, rr) - b.rev.point(k)).norm());
          d = best;  // unsigned; inside caught by containment below
          if (revolution_contains_local(b.rev, zz, rr, 0.0)) d = -best;
        }
        if (d < s.radius)
          fail(ErrorCode::Embedding,
               "string " + std::to_string(si) + " tube intersects body " + std::to_string(bi));
      }
    }
  }
  // String tubes pairwise.
  for (std::size_t a = 0; a < strings.size(); ++a)
    for (std::size_t b = a; b < strings.size(); ++b) {
      const auto& sa = strings[a];
      const auto& sb = strings[b];
      for (int i = 0; i < sa.curve.size(); ++i) {
        for (int j = (a == b ? 0 : 0); j < sb.curve.size(); ++j) {
          if (a == b) {
            int sep = sa.curve.cyclic_separation(i, j);
            double arc_guard = 4.0 * std::max(sa.radius, sa.curve.h) / sa.curve.h;
            if (sep <= static_cast<int>(arc_guard) + 2) continue;
          }
          double d = (sa.curve.samples[i] - sb.curve.samples[j]).norm();
          if (d < sa.radius + sb.radius) {
            // Shared junction necks approach each other legally.
            bool near_shared_junction = false;
            for (const auto& jn : junctions) {
              if ((sa.curve.samples[i] - jn.p).norm() < 2.2 * jn.delta &&
                  (sb.curve.samples[j] - jn.p).norm() < 2.2 * jn.delta)
                near_shared_junction = true;
            }
            if (!near_shared_junction)
              fail(ErrorCode::Embedding, "string tubes intersect");
          }
        }
      }
    }
}

void MarbleComplex::validate_marble_graph() const {
  if (bodies.empty()) fail(ErrorCode::Input, "marble graph needs at least one marble");
  double r_m = -1;
  for (const auto& b : bodies) {
    if (b.kind != MarbleBody::Kind::BallBody)
      fail(ErrorCode::Input, "marble graph bodies must be balls");
    if (r_m < 0) r_m = b.ball.radius;
    else if (std::abs(b.ball.radius - r_m) > 1e-9 * r_m)
      fail(ErrorCode::Input, "marble radii must agree");
  }
  if (has_loose_ends()) fail(ErrorCode::Configuration, "marble graph has a loose end");
  double r_s = string_radius;
  for (const auto& s : strings) {
    if (r_s <= 0) r_s = s.radius;
    if (std::abs(s.radius - r_s) > 1e-9 * r_s)
      fail(ErrorCode::Input, "string radii must agree");
  }
  if (r_s >= r_m / 10)
    fail(ErrorCode::Parameter, "string radius must be below r_m/10");
  // Straight rays inside B(3 r_m) around each marble center: the curve must
  // carry no curvature there.
  for (const auto& s : strings) {
    const auto& c = s.curve;
    if (c.closed) fail(ErrorCode::Input, "closed free strings are not marble-graph strings");
    for (int i = 0; i < c.size(); ++i) {
      const Vec3& q = c.samples[i];
      bool near_marble = false;
      for (const auto& b : bodies)
        if ((q - b.ball.center).norm() <= 3 * r_m) near_marble = true;
      if (!near_marble) continue;
      if (c.curvature(i) > 1e-4 / r_m)
        fail(ErrorCode::Configuration, "string bends inside B(3 r_m) of a marble");
    }
  }
  check_clearances();
}

GraphClassification classify_marble_graph(const MarbleComplex& G) {
  GraphClassification c;
  c.cycle_rank = G.cycle_rank();
  if (G.graph_connected() && c.cycle_rank == 0) c.cls = GraphClass::Tree;
  else if (G.graph_connected() && c.cycle_rank == 1) c.cls = GraphClass::Circuit;
  else c.cls = GraphClass::General;
  return c;
}

}  // namespace marblekit
