#include "marblekit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace marblekit {

void ControlParams::validate(int n) const {
  if (alpha <= 0 || beta <= 0 || c_H <= 0 || b <= 0)
    fail(ErrorCode::Input, "control parameters must be strictly positive");
  if (!(C_A < std::numeric_limits<double>::infinity()))
    fail(ErrorCode::Input, "C_A must be finite");
  if (alpha > n - 1)
    fail(ErrorCode::Input, "alpha must lie in (0, n-1]");
}

std::string CertificateReport::to_json() const {
  nlohmann::json j;
  j["passed"] = passed;
  j["margin"] = margin;
  auto sub = [](const SubReport& s) {
    nlohmann::json r;
    r["name"] = s.name;
    r["passed"] = s.passed;
    r["margin"] = s.margin;
    r["witness"] = {{"piece", s.witness_piece},
                    {"index", s.witness_index},
                    {"point", {s.witness_point.x(), s.witness_point.y(), s.witness_point.z()}}};
    if (s.boundary_case) r["boundary_case"] = true;
    return r;
  };
  j["worst"] = sub(worst);
  j["details"] = nlohmann::json::array();
  for (const auto& d : details) j["details"].push_back(sub(d));
  return j.dump(2);
}

namespace {

std::vector<SurfaceSample> samples_profile(const ProfileSurface& S, int n_theta) {
  return collect_samples(to_revolution(S), n_theta);
}

std::vector<SurfaceSample> samples_revolution(const RevolutionSurface& R, int n_theta) {
  std::vector<SurfaceSample> out;
  Vec3 e1 = orthogonal_unit(R.axis_dir);
  Vec3 e2 = R.axis_dir.cross(e1);
  double pole_tol = 1e-7 * (R.max_rho() + R.hg);
  for (int i = 0; i < R.size(); ++i) {
    if (R.rho[i] <= pole_tol) continue;
    CurvatureData cd = R.curvature(i);
    int i2 = R.closed ? (i + 1) % R.size() : std::min(i + 1, R.size() - 1);
    CurvatureData cd2 = R.curvature(i2);
    double ga = 0;
    for (std::size_t q = 0; q < cd.lambda.size(); ++q)
      ga += sq((cd2.lambda[q] - cd.lambda[q]) / R.hg);
    ga = std::sqrt(ga);
    Vec2 nrm = R.outward_normal(i);
    bool near_pole = !R.closed && R.rho[i] <= 4.0 * R.hg;
    for (int t = 0; t < n_theta; ++t) {
      double th = 2 * M_PI * t / n_theta;
      Vec3 radial = std::cos(th) * e1 + std::sin(th) * e2;
      SurfaceSample s;
      s.p = R.axis_origin + R.z[i] * R.axis_dir + R.rho[i] * radial;
      s.normal = nrm.x() * R.axis_dir + nrm.y() * radial;
      s.curv = cd;
      s.grad_A = ga;
      s.piece = "profile";
      s.index = i;
      s.pole_adjacent = near_pole;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<SurfaceSample> samples_tube(const TubeSurface& T, int n_theta) {
  std::vector<SurfaceSample> out;
  const auto& c = T.skeleton;
  double tip_tol = 1e-7 * (T.max_radius() + c.h);
  bool constant = T.constant_radius(1e-9);
  for (int i = 0; i < c.size(); ++i) {
    if (T.radius[i] <= tip_tol) continue;
    Vec3 kv = c.curvature_vector(i);
    double k = kv.norm();
    Vec3 nhat = k > 1e-12 ? Vec3(kv / k) : Vec3::Zero();
    double dk = c.curvature_derivative(i);
    for (int t = 0; t < n_theta; ++t) {
      double th = 2 * M_PI * t / n_theta;
      Vec3 dir = std::cos(th) * c.normal1[i] + std::sin(th) * c.normal2[i];
      SurfaceSample s;
      s.p = T.surface_point(i, th);
      CurvatureData cd;
      if (constant) {
        double cthn = k > 1e-12 ? dir.dot(nhat) : 0.0;
        double r = T.radius[i];
        if (r * k >= 1.0) fail(ErrorCode::Singularity, "tube degenerates");
        double lam = k < 1e-14 ? 0.0 : -k * cthn / (1.0 - r * k * cthn);
        cd = make_curvature({lam, 1.0 / r});
        s.normal = dir;
      } else {
        cd = T.curvature_parametric(i, th);
        s.normal = dir;  // leading-order outward direction
      }
      s.curv = cd;
      s.grad_A = dk;
      s.piece = "tube";
      s.index = i;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<SurfaceSample> samples_mesh(const TriMesh& M) {
  std::vector<SurfaceSample> out;
  auto vf = M.vertex_faces();
  // Shape operator difference between neighbors, approximated by principal
  // value differences over the edge length.
  std::vector<CurvatureData> per_vertex(M.nv());
  std::vector<bool> ok(M.nv(), false);
  for (int v = 0; v < M.nv(); ++v) {
    if (vf[v].empty()) continue;
    try {
      per_vertex[v] = estimate_curvatures_mesh(M, v);
      ok[v] = true;
    } catch (const Error&) {
      ok[v] = false;
    }
  }
  for (int v = 0; v < M.nv(); ++v) {
    if (!ok[v]) continue;
    double ga = 0;
    for (int f : vf[v])
      for (int w : M.F[f]) {
        if (w == v || !ok[w]) continue;
        double el = (M.V[w] - M.V[v]).norm();
        double d = 0;
        for (std::size_t q = 0; q < per_vertex[v].lambda.size(); ++q)
          d += sq(per_vertex[w].lambda[q] - per_vertex[v].lambda[q]);
        ga = std::max(ga, std::sqrt(d) / std::max(el, 1e-300));
      }
    SurfaceSample s;
    s.p = M.V[v];
    s.normal = M.vertex_normal(v, vf);
    s.curv = per_vertex[v];
    s.grad_A = ga;
    s.piece = "mesh";
    s.index = v;
    out.push_back(std::move(s));
  }
  return out;
}

SubReport min_margin_report(const std::string& name,
                            const std::vector<SurfaceSample>& samples,
                            const std::function<double(const SurfaceSample&)>& margin_of,
                            double tol) {
  SubReport r;
  r.name = name;
  if (samples.empty()) fail(ErrorCode::Input, "no surface samples");
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double m = margin_of(samples[i]);
    if (m < best) {
      best = m;
      arg = i;
    }
  }
  r.margin = best;
  r.passed = best > tol;
  r.witness_piece = samples[arg].piece;
  r.witness_index = samples[arg].index;
  r.witness_point = samples[arg].p;
  return r;
}

CertificateReport from_subreports(std::vector<SubReport> subs) {
  CertificateReport rep;
  rep.details = std::move(subs);
  rep.passed = true;
  for (const auto& s : rep.details) rep.passed = rep.passed && s.passed;
  // Worst = failing sub with the most negative margin when failing,
  // otherwise the sub with the smallest margin.
  const SubReport* worst = nullptr;
  for (const auto& s : rep.details) {
    if (!rep.passed && s.passed) continue;
    if (!worst || s.margin < worst->margin) worst = &s;
  }
  rep.worst = *worst;
  rep.margin = worst->margin;
  return rep;
}

}  // namespace

std::vector<SurfaceSample> collect_samples(const AnyGeometry& geom, int n_theta) {
  return std::visit(
      [&](const auto& g) -> std::vector<SurfaceSample> {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ProfileSurface>) return samples_profile(g, n_theta);
        else if constexpr (std::is_same_v<T, RevolutionSurface>)
          return samples_revolution(g, n_theta);
        else if constexpr (std::is_same_v<T, TubeSurface>) return samples_tube(g, n_theta);
        else if constexpr (std::is_same_v<T, TriMesh>) return samples_mesh(g);
        else return g.sample_surface(n_theta);
      },
      geom);
}

int geometry_dimension(const AnyGeometry& geom) {
  return std::visit(
      [](const auto& g) -> int {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ProfileSurface>) return g.n;
        else if constexpr (std::is_same_v<T, RevolutionSurface>) return g.n;
        else if constexpr (std::is_same_v<T, MarbleComplex>) return g.n;
        else return 2;
      },
      geom);
}

CertificateReport check_two_convex(const AnyGeometry& geom, double tol) {
  auto samples = collect_samples(geom);
  auto sub = min_margin_report(
      "two_convex", samples,
      [](const SurfaceSample& s) { return s.curv.two_convex_margin(); }, tol);
  return from_subreports({sub});
}

CertificateReport check_alpha_noncollapsed(const AnyGeometry& geom, double alpha) {
  if (alpha <= 0) fail(ErrorCode::Input, "alpha must be positive");
  auto samples = collect_samples(geom);
  for (const auto& s : samples)
    if (s.curv.H() <= 0)
      fail(ErrorCode::Precondition, "H <= 0 at a sample; noncollapsedness undefined");

  const std::size_t N = samples.size();
  std::vector<double> margins(N, std::numeric_limits<double>::infinity());
  parallel_for(N, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& s = samples[i];
      if (s.pole_adjacent) continue;
      double r = alpha / s.curv.H();
      Vec3 c_int = s.p - r * s.normal;
      Vec3 c_ext = s.p + r * s.normal;
      double clear_int = std::numeric_limits<double>::infinity();
      double clear_ext = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < N; ++q) {
        if (q == i) continue;
        double di = (samples[q].p - c_int).norm();
        double de = (samples[q].p - c_ext).norm();
        clear_int = std::min(clear_int, di);
        clear_ext = std::min(clear_ext, de);
      }
      margins[i] = (std::min(clear_int, clear_ext) - r) / r;
    }
  });
  SubReport sub;
  sub.name = "alpha_noncollapsed";
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < N; ++i)
    if (margins[i] < best) {
      best = margins[i];
      arg = i;
    }
  sub.margin = best;
  // Equality cases (tangent ball exactly osculating) sit at margin 0 up to
  // discretization of the clearance scan; they pass flagged as boundary
  // cases. The band is relative clearance.
  const double slack = 1e-3;
  sub.passed = best > -slack;
  sub.boundary_case = std::abs(best) <= slack;
  sub.witness_piece = samples[arg].piece;
  sub.witness_index = samples[arg].index;
  sub.witness_point = samples[arg].p;
  return from_subreports({sub});
}

CertificateReport check_controlled_domain(const AnyGeometry& geom, const ControlParams& P) {
  P.validate(geometry_dimension(geom));
  auto samples = collect_samples(geom);
  std::vector<SubReport> subs;
  subs.push_back(min_margin_report(
      "H_lower_bound", samples,
      [&](const SurfaceSample& s) { return s.curv.H() - P.c_H; }, 0.0));
  subs.push_back(min_margin_report(
      "two_convex_fraction", samples,
      [&](const SurfaceSample& s) { return s.curv.two_convex_margin() - P.beta * s.curv.H(); },
      0.0));
  subs.push_back(min_margin_report(
      "A_plus_gradA_bound", samples,
      [&](const SurfaceSample& s) { return P.C_A - (s.curv.norm_A() + s.grad_A); }, 0.0));
  auto nc = check_alpha_noncollapsed(geom, P.alpha);
  subs.push_back(nc.worst);
  subs.back().name = "alpha_noncollapsed";
  return from_subreports(std::move(subs));
}

CertificateReport check_controlled_curve(const std::vector<SkeletonCurve>& curves, double b) {
  if (b <= 0) fail(ErrorCode::Input, "b must be positive");
  if (curves.empty()) fail(ErrorCode::Input, "no curves given");
  std::vector<SubReport> subs;

  SubReport kap{"curvature_bound", true, std::numeric_limits<double>::infinity(), "", 0,
                Vec3::Zero(), false};
  SubReport dkap{"curvature_derivative_bound", true, std::numeric_limits<double>::infinity(),
                 "", 0, Vec3::Zero(), false};
  SubReport inj{"injectivity_radius", true, std::numeric_limits<double>::infinity(), "", 0,
                Vec3::Zero(), false};
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    c.validate();
    for (int i = 0; i < c.size(); ++i) {
      double m1 = 1.0 / b - c.curvature(i);
      if (m1 < kap.margin) {
        kap.margin = m1;
        kap.witness_piece = "curve" + std::to_string(ci);
        kap.witness_index = i;
        kap.witness_point = c.samples[i];
      }
      double m2 = 1.0 / (b * b) - c.curvature_derivative(i);
      if (m2 < dkap.margin) {
        dkap.margin = m2;
        dkap.witness_piece = "curve" + std::to_string(ci);
        dkap.witness_index = i;
        dkap.witness_point = c.samples[i];
      }
    }
    double m3 = c.normal_injectivity_radius() - b / 10.0;
    if (m3 < inj.margin) {
      inj.margin = m3;
      inj.witness_piece = "curve" + std::to_string(ci);
      inj.witness_index = 0;
      inj.witness_point = c.samples[0];
    }
  }
  kap.passed = kap.margin > 0;
  dkap.passed = dkap.margin > 0;
  inj.passed = inj.margin >= 0;
  subs.push_back(kap);
  subs.push_back(dkap);
  subs.push_back(inj);

  SubReport sep{"component_separation", true, std::numeric_limits<double>::infinity(), "", 0,
                Vec3::Zero(), false};
  for (std::size_t a = 0; a < curves.size(); ++a)
    for (std::size_t bb = a + 1; bb < curves.size(); ++bb) {
      for (const auto& p : curves[a].samples) {
        double d = distance_to_curve(curves[bb], p) - 10.0 * b;
        if (d < sep.margin) {
          sep.margin = d;
          sep.witness_piece = "curves" + std::to_string(a) + "," + std::to_string(bb);
          sep.witness_point = p;
        }
      }
    }
  if (curves.size() > 1) {
    sep.passed = sep.margin >= 0;
    subs.push_back(sep);
  }
  return from_subreports(std::move(subs));
}

double signed_distance(const MarbleBody& body, const Vec3& p) {
  if (body.kind == MarbleBody::Kind::BallBody)
    return (p - body.ball.center).norm() - body.ball.radius;
  const auto& R = body.rev;
  double zz = (p - R.axis_origin).dot(R.axis_dir);
  double rr = (p - R.axis_origin - zz * R.axis_dir).norm();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < R.size(); ++i)
    best = std::min(best, (Vec2(zz, rr) - R.point(i)).norm());
  // Interior test via the generating polygon.
  std::vector<Vec2> poly;
  for (int i = 0; i < R.size(); ++i) poly.push_back(R.point(i));
  if (!R.closed) {
    poly.emplace_back(R.z.back(), -1e-9);
    poly.emplace_back(R.z.front(), -1e-9);
  }
  bool inside = false;
  const int np = static_cast<int>(poly.size());
  for (int i = 0; i < np; ++i) {
    Vec2 a = poly[i], q = poly[(i + 1) % np];
    if ((a.y() > rr) != (q.y() > rr)) {
      double xint = a.x() + (rr - a.y()) / (q.y() - a.y()) * (q.x() - a.x());
      if (xint > zz) inside = !inside;
    }
  }
  return inside ? -best : best;
}

Vec3 wall_normal(const MarbleBody& body, const Vec3& p) {
  if (body.kind == MarbleBody::Kind::BallBody) return (p - body.ball.center).normalized();
  const auto& R = body.rev;
  double zz = (p - R.axis_origin).dot(R.axis_dir);
  Vec3 radial3 = p - R.axis_origin - zz * R.axis_dir;
  double rr = radial3.norm();
  Vec3 rhat = rr > 1e-12 ? Vec3(radial3 / rr) : orthogonal_unit(R.axis_dir);
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (int i = 0; i < R.size(); ++i) {
    double d = (Vec2(zz, rr) - R.point(i)).squaredNorm();
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  Vec2 nrm = R.outward_normal(best);
  return (nrm.x() * R.axis_dir + nrm.y() * rhat).normalized();
}

CertificateReport check_configuration(const std::vector<MarbleBody>& domains,
                                      const std::vector<SkeletonCurve>& curves,
                                      const ControlParams& P) {
  if (domains.empty() || curves.empty())
    fail(ErrorCode::Input, "configuration needs domains and curves");
  const double b = P.b;
  const double tol_touch = 1e-3 * b;
  std::vector<SubReport> subs;

  auto dist_to_walls = [&](const Vec3& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : domains) best = std::min(best, std::abs(signed_distance(d, p)));
    return best;
  };
  auto signed_min = [&](const Vec3& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : domains) best = std::min(best, signed_distance(d, p));
    return best;
  };

  // (a) Curve interiors stay outside the domains.
  SubReport outside{"interior_outside_domains", true, std::numeric_limits<double>::infinity(),
                    "", 0, Vec3::Zero(), false};
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    for (int i = 1; i + 1 < c.size(); ++i) {
      double sd = signed_min(c.samples[i]);
      // Near the contact points the curve legitimately approaches the wall.
      double arc_from_end = std::min(c.arclength(i), c.total_length - c.arclength(i));
      if (arc_from_end < b / 10) continue;
      if (sd < outside.margin) {
        outside.margin = sd;
        outside.witness_piece = "curve" + std::to_string(ci);
        outside.witness_index = i;
        outside.witness_point = c.samples[i];
      }
    }
  }
  if (outside.margin < -tol_touch)
    fail(ErrorCode::Configuration, "curve crosses a domain interior at sample near (" +
                                       std::to_string(outside.witness_point.x()) + ", " +
                                       std::to_string(outside.witness_point.y()) + ", " +
                                       std::to_string(outside.witness_point.z()) + ")");
  outside.passed = true;
  subs.push_back(outside);

  // (b) Endpoint contact: orthogonal touch or 10b clearance.
  SubReport contact{"endpoint_contact", true, std::numeric_limits<double>::infinity(), "", 0,
                    Vec3::Zero(), false};
  const double cos_tol = std::cos(1.0 * M_PI / 180.0);
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    if (c.closed) continue;
    for (int endk = 0; endk < 2; ++endk) {
      Vec3 p = endk == 0 ? c.samples.front() : c.samples.back();
      Vec3 t_out = endk == 0 ? Vec3(-c.tangent.front()) : Vec3(c.tangent.back());
      double dmin = std::numeric_limits<double>::infinity();
      const MarbleBody* nearest = nullptr;
      for (const auto& d : domains) {
        double sd = std::abs(signed_distance(d, p));
        if (sd < dmin) {
          dmin = sd;
          nearest = &d;
        }
      }
      double m;
      if (dmin <= tol_touch) {
        // Touching: the curve must leave the wall along the outward normal
        // within 1 degree. t_out points beyond the endpoint into the domain,
        // so the inward curve direction is -t_out.
        Vec3 nrm = wall_normal(*nearest, p);
        m = (-t_out).dot(nrm) - cos_tol;
      } else {
        m = dmin - 10.0 * b;
      }
      if (m < contact.margin) {
        contact.margin = m;
        contact.witness_piece = "curve" + std::to_string(ci) + (endk ? "/end" : "/begin");
        contact.witness_point = p;
      }
    }
  }
  contact.passed = contact.margin >= 0;
  subs.push_back(contact);

  // (c) Away from endpoint balls, the curve keeps b/20 wall clearance.
  SubReport bulk{"bulk_clearance", true, std::numeric_limits<double>::infinity(), "", 0,
                 Vec3::Zero(), false};
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    for (int i = 0; i < c.size(); ++i) {
      bool near_endpoint = false;
      if (!c.closed) {
        for (int endk = 0; endk < 2; ++endk) {
          Vec3 e = endk == 0 ? c.samples.front() : c.samples.back();
          if ((c.samples[i] - e).norm() < b / 10) near_endpoint = true;
        }
      }
      if (near_endpoint) continue;
      double m = dist_to_walls(c.samples[i]) - b / 20.0;
      if (m < bulk.margin) {
        bulk.margin = m;
        bulk.witness_piece = "curve" + std::to_string(ci);
        bulk.witness_index = i;
        bulk.witness_point = c.samples[i];
      }
    }
  }
  bulk.passed = bulk.margin >= 0;
  subs.push_back(bulk);

  return from_subreports(std::move(subs));
}

}  // namespace marblekit
