#include "marblekit/revolution.hpp"

#include <algorithm>
#include <cmath>

namespace marblekit {

CurvatureData make_curvature(std::vector<double> lambdas) {
  if (lambdas.size() < 2) fail(ErrorCode::Input, "need n >= 2 principal curvatures");
  std::sort(lambdas.begin(), lambdas.end());
  CurvatureData c;
  c.lambda = std::move(lambdas);
  return c;
}

double ProfileSurface::u_at(double x) const {
  const int m = size();
  double f = (x - x0) / hx;
  int i = std::clamp(static_cast<int>(std::floor(f)), 0, m - 2);
  double w = f - i;
  return (1.0 - w) * u[i] + w * u[i + 1];
}

double ProfileSurface::du_at(double x) const {
  const int m = size();
  double f = (x - x0) / hx;
  int i = std::clamp(static_cast<int>(std::llround(f)), 1, m - 2);
  return (u[i + 1] - u[i - 1]) / (2.0 * hx);
}

double ProfileSurface::d2u_at(double x) const {
  const int m = size();
  double f = (x - x0) / hx;
  int i = std::clamp(static_cast<int>(std::llround(f)), 1, m - 2);
  return (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (hx * hx);
}

void ProfileSurface::validate() const {
  if (size() < 5) fail(ErrorCode::Input, "profile needs >= 5 samples");
  if (hx <= 0) fail(ErrorCode::Input, "profile step must be positive");
  const int m = size();
  for (int i = 0; i < m; ++i) {
    bool end = (i == 0 || i == m - 1);
    if (caps == EndCaps::Capped && end) {
      if (u[i] < 0 || u[i] > 0.05 * hx * m)
        fail(ErrorCode::Input, "capped profile must vanish at the ends");
    } else if (u[i] <= 0) {
      fail(ErrorCode::Input, "profile must be positive in the interior");
    }
  }
  // Two continuous discrete derivatives: second differences bounded.
  double lim = 0.0;
  for (int i = 1; i + 1 < m; ++i)
    lim = std::max(lim, std::abs(u[i + 1] - 2 * u[i] + u[i - 1]) / (hx * hx));
  if (!std::isfinite(lim)) fail(ErrorCode::Numerical, "profile second differences blow up");
}

bool profile_concave(const std::vector<double>& u, double hx, double tol) {
  for (std::size_t i = 1; i + 1 < u.size(); ++i)
    if (u[i + 1] - 2 * u[i] + u[i - 1] > tol * hx * hx) return false;
  return true;
}

CurvatureData principal_curvatures_profile(const ProfileSurface& S, double x) {
  if (x < S.x0 - 1e-12 || x > S.x_end() + 1e-12)
    fail(ErrorCode::Input, "x outside profile domain");
  double ux = S.u_at(x);
  if (ux <= 0) fail(ErrorCode::Input, "profile not positive at query point");
  double up = S.du_at(x);
  double upp = S.d2u_at(x);
  double w = 1.0 + up * up;
  double lam_ax = -upp / std::pow(w, 1.5);
  double lam_rot = 1.0 / (ux * std::sqrt(w));
  std::vector<double> l(S.n, lam_rot);
  l[0] = lam_ax;
  return make_curvature(std::move(l));
}

bool RevolutionSurface::sphere_type() const {
  if (closed || size() < 2) return false;
  double tolr = 1e-6 * (max_rho() + hg);
  return rho.front() <= tolr && rho.back() <= tolr;
}

Vec2 RevolutionSurface::tangent(int i) const {
  const int m = size();
  Vec2 d;
  if (closed) {
    int ip = (i + 1) % m, im = (i - 1 + m) % m;
    d = Vec2(z[ip] - z[im], rho[ip] - rho[im]);
  } else if (i == 0) {
    d = Vec2(z[1] - z[0], rho[1] - rho[0]);
  } else if (i == m - 1) {
    d = Vec2(z[m - 1] - z[m - 2], rho[m - 1] - rho[m - 2]);
  } else {
    d = Vec2(z[i + 1] - z[i - 1], rho[i + 1] - rho[i - 1]);
  }
  return d.normalized();
}

Vec2 RevolutionSurface::outward_normal(int i) const {
  Vec2 t = tangent(i);
  return Vec2(-t.y(), t.x());
}

double RevolutionSurface::kappa_gen(int i) const {
  const int m = size();
  if (!closed && (i == 0 || i == m - 1)) {
    // Pole endpoints: even extension across the axis gives the exact
    // leading-order curvature 2 dz / rho^2; one-sided stencils on a natural
    // spline flatten it instead.
    double pole_tol = 2.5 * hg;
    if (i == 0 && rho[0] <= pole_tol)
      return 2.0 * (z[1] - z[0]) / std::max(1e-300, sq(rho[1]));
    if (i == m - 1 && rho[m - 1] <= pole_tol)
      return -2.0 * (z[m - 2] - z[m - 1]) / std::max(1e-300, sq(rho[m - 2]));
  }
  auto at = [&](int k) -> Vec2 {
    if (closed) { k = (k % m + m) % m; return Vec2(z[k], rho[k]); }
    k = std::clamp(k, 0, m - 1);
    return Vec2(z[k], rho[k]);
  };
  int j = closed ? i : std::clamp(i, 1, m - 2);
  Vec2 d1 = (at(j + 1) - at(j - 1)) / (2.0 * hg);
  Vec2 d2 = (at(j + 1) - 2.0 * at(j) + at(j - 1)) / (hg * hg);
  // lambda_axial = <N', T> with N = (-rho', z'), sign fixed so a round
  // sphere gives +1/R.
  double val = -d2.y() * d1.x() + d2.x() * d1.y();
  double sp = d1.norm();
  if (sp < 1e-14) return 0.0;
  return val / (sp * sp * sp);
}

double RevolutionSurface::kappa_rot(int i) const {
  Vec2 t = tangent(i);
  double r = rho[i];
  // Near the poles z'/rho is 0/0 and the finite-difference z' noise gets
  // amplified; switch to the smooth-cap limit lambda_rot -> lambda_axial.
  if (r <= 2.5 * hg) return kappa_gen(i);
  return t.x() / r;
}

CurvatureData RevolutionSurface::curvature(int i) const {
  std::vector<double> l(n, kappa_rot(i));
  l[0] = kappa_gen(i);
  return make_curvature(std::move(l));
}

double RevolutionSurface::min_two_convex_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) m = std::min(m, curvature(i).two_convex_margin());
  return m;
}

double RevolutionSurface::min_H() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) m = std::min(m, curvature(i).H());
  return m;
}

double RevolutionSurface::max_H() const {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) m = std::max(m, curvature(i).H());
  return m;
}

double RevolutionSurface::max_rho() const {
  double m = 0;
  for (double r : rho) m = std::max(m, r);
  return m;
}

Vec3 RevolutionSurface::embed(int i, double theta) const {
  Vec3 e1 = orthogonal_unit(axis_dir);
  Vec3 e2 = axis_dir.cross(e1);
  return axis_origin + z[i] * axis_dir +
         rho[i] * (std::cos(theta) * e1 + std::sin(theta) * e2);
}

void RevolutionSurface::validate() const {
  if (size() < 4) fail(ErrorCode::Input, "generating curve needs >= 4 samples");
  if (hg <= 0) fail(ErrorCode::Input, "generating spacing must be positive");
  for (int i = 0; i < size(); ++i) {
    if (rho[i] < -1e-12) fail(ErrorCode::Input, "negative radius in generating curve");
    if (!std::isfinite(z[i]) || !std::isfinite(rho[i]))
      fail(ErrorCode::Numerical, "non-finite generating sample");
  }
  const int last = closed ? size() : size() - 1;
  const int m = size();
  for (int i = 0; i < last; ++i) {
    int j = (i + 1) % m;
    double d = (point(j) - Vec2(z[i], rho[i])).norm();
    if (std::abs(d - hg) > 0.05 * hg)
      fail(ErrorCode::Numerical, "generating curve spacing drifted");
  }
}

RevolutionSurface make_revolution(int n, const Vec3& axis_origin, const Vec3& axis_dir,
                                  const std::vector<Vec2>& gen_points, bool closed,
                                  double hg) {
  if (gen_points.size() < 4) fail(ErrorCode::Input, "generating curve needs >= 4 points");
  if (hg <= 0) fail(ErrorCode::Input, "hg must be positive");
  // Reuse the 3D spline resampler in the plane y = 0.
  std::vector<Vec3> pts;
  pts.reserve(gen_points.size());
  for (const auto& p : gen_points) pts.emplace_back(p.x(), 0.0, p.y());
  SkeletonCurve c = curve_from_points(pts, closed, hg);

  RevolutionSurface R;
  R.n = n;
  R.axis_origin = axis_origin;
  R.axis_dir = axis_dir.normalized();
  R.closed = closed;
  R.hg = c.h;
  R.z.resize(c.size());
  R.rho.resize(c.size());
  for (int i = 0; i < c.size(); ++i) {
    R.z[i] = c.samples[i].x();
    R.rho[i] = std::max(0.0, c.samples[i].z());
  }
  // Orientation: outward normal must point away from the enclosed region.
  double acc = 0.0;
  if (closed) {
    // Signed area; clockwise in (z, rho) makes (-rho', z') point outward.
    const int m = R.size();
    for (int i = 0; i < m; ++i) {
      int j = (i + 1) % m;
      acc += R.z[i] * R.rho[j] - R.z[j] * R.rho[i];
    }
    if (acc > 0) {
      std::reverse(R.z.begin(), R.z.end());
      std::reverse(R.rho.begin(), R.rho.end());
    }
  } else {
    // Open curves: normals should have a nonnegative mean rho-component
    // (outward = away from axis for sphere-like pieces).
    for (int i = 0; i < R.size(); ++i) acc += R.outward_normal(i).y();
    if (acc < 0) {
      std::reverse(R.z.begin(), R.z.end());
      std::reverse(R.rho.begin(), R.rho.end());
    }
  }
  return R;
}

RevolutionSurface to_revolution(const ProfileSurface& S, double hg) {
  std::vector<Vec2> pts;
  pts.reserve(S.size());
  for (int i = 0; i < S.size(); ++i) pts.emplace_back(S.x_at(i), std::max(0.0, S.u[i]));
  double target = hg > 0 ? hg : S.hx;
  return make_revolution(S.n, S.axis_origin, S.axis_dir, pts, false, target);
}

ProfileSurface to_profile(const RevolutionSurface& R, double hx) {
  const int m = R.size();
  for (int i = 1; i < m; ++i)
    if (R.z[i] <= R.z[i - 1])
      fail(ErrorCode::Input, "generating curve is not graph-like over the axis");
  ProfileSurface S;
  S.n = R.n;
  S.axis_origin = R.axis_origin;
  S.axis_dir = R.axis_dir;
  S.x0 = R.z.front();
  S.hx = hx;
  int count = std::max(5, static_cast<int>(std::floor((R.z.back() - R.z.front()) / hx)) + 1);
  S.u.resize(count);
  int cursor = 0;
  for (int i = 0; i < count; ++i) {
    double x = S.x0 + hx * i;
    if (x > R.z.back()) x = R.z.back();
    while (cursor + 2 < m && R.z[cursor + 1] < x) ++cursor;
    double w = (R.z[cursor + 1] - R.z[cursor]);
    double f = w > 0 ? (x - R.z[cursor]) / w : 0.0;
    S.u[i] = (1 - f) * R.rho[cursor] + f * R.rho[cursor + 1];
  }
  S.caps = (R.rho.front() < 1e-9 && R.rho.back() < 1e-9) ? EndCaps::Capped : EndCaps::Open;
  return S;
}

}  // namespace marblekit
