#include "marblekit/tube.hpp"

#include <algorithm>
#include <cmath>

namespace marblekit {

double TubeSurface::max_radius() const {
  double m = 0;
  for (double r : radius) m = std::max(m, r);
  return m;
}

double TubeSurface::min_radius() const {
  double m = std::numeric_limits<double>::infinity();
  for (double r : radius) m = std::min(m, r);
  return m;
}

bool TubeSurface::constant_radius(double rel_tol) const {
  double lo = min_radius(), hi = max_radius();
  return hi - lo <= rel_tol * std::max(hi, 1e-300);
}

Vec3 TubeSurface::surface_point(int i, double theta) const {
  const Vec3& p = skeleton.samples[i];
  Vec3 dir = std::cos(theta) * skeleton.normal1[i] + std::sin(theta) * skeleton.normal2[i];
  return p + radius[i] * dir;
}

CurvatureData TubeSurface::curvature_exact(int i, double theta_from_normal) const {
  double r = radius[i];
  if (r <= 0) fail(ErrorCode::Input, "nonpositive tube radius");
  double k = skeleton.curvature(i);
  if (r * k >= 1.0)
    fail(ErrorCode::Singularity, "tube radius exceeds curvature radius; section degenerates");
  double c = std::cos(theta_from_normal);
  double lam_other = k < 1e-14 ? 0.0 : -k * c / (1.0 - r * k * c);
  return make_curvature({lam_other, 1.0 / r});
}

CurvatureData TubeSurface::curvature_parametric(int i, double theta) const {
  const int m = size();
  const double dth = 1e-3;
  auto X = [&](int k, double th) -> Vec3 {
    if (closed()) k = (k % m + m) % m;
    else k = std::clamp(k, 0, m - 1);
    return surface_point(k, th);
  };
  int j = closed() ? i : std::clamp(i, 1, m - 2);
  const double h = skeleton.h;
  Vec3 Xs = (X(j + 1, theta) - X(j - 1, theta)) / (2 * h);
  Vec3 Xt = (X(j, theta + dth) - X(j, theta - dth)) / (2 * dth);
  Vec3 Xss = (X(j + 1, theta) - 2 * X(j, theta) + X(j - 1, theta)) / (h * h);
  Vec3 Xtt = (X(j, theta + dth) - 2 * X(j, theta) + X(j, theta - dth)) / (dth * dth);
  Vec3 Xst = (X(j + 1, theta + dth) - X(j + 1, theta - dth) - X(j - 1, theta + dth) +
              X(j - 1, theta - dth)) /
             (4 * h * dth);
  Vec3 nu = Xs.cross(Xt);
  double nn = nu.norm();
  if (nn < 1e-16) fail(ErrorCode::Numerical, "degenerate tube parameterization");
  nu /= nn;
  // Outward orientation: nu should point away from the skeleton.
  Vec3 outdir = X(j, theta) - skeleton.samples[j];
  if (nu.dot(outdir) < 0) nu = -nu;
  double E = Xs.dot(Xs), F = Xs.dot(Xt), G = Xt.dot(Xt);
  double L = -Xss.dot(nu), M = -Xst.dot(nu), N = -Xtt.dot(nu);
  // Domain-of-revolution sign convention: positive on spheres. The second
  // fundamental form w.r.t. the outward normal gives negative values there,
  // hence the sign flip above.
  double a2 = E * G - F * F;
  double a1 = -(L * G + N * E - 2 * M * F);
  double a0 = L * N - M * M;
  double disc = std::max(0.0, a1 * a1 - 4 * a2 * a0);
  double sd = std::sqrt(disc);
  double l1 = (-a1 - sd) / (2 * a2);
  double l2 = (-a1 + sd) / (2 * a2);
  return make_curvature({l1, l2});
}

double TubeSurface::min_two_convex_margin(int n_theta) const {
  double best = std::numeric_limits<double>::infinity();
  const int m = size();
  for (int i = 0; i < m; ++i) {
    bool varying = false;
    if (m >= 2) {
      int ip = closed() ? (i + 1) % m : std::min(i + 1, m - 1);
      int im = closed() ? (i - 1 + m) % m : std::max(i - 1, 0);
      varying = std::abs(radius[ip] - radius[im]) > 1e-12 * (radius[i] + 1e-300);
    }
    if (radius[i] < 1e-9 * max_radius()) continue;  // cap tip, handled by neighbors
    for (int t = 0; t < n_theta; ++t) {
      double th = 2 * M_PI * t / n_theta;
      CurvatureData cd;
      if (varying) {
        cd = curvature_parametric(i, th);
      } else {
        // Angle from principal normal.
        Vec3 kv = skeleton.curvature_vector(i);
        double k = kv.norm();
        double c = 0.0;
        if (k > 1e-14) {
          Vec3 nhat = kv / k;
          Vec3 dir = std::cos(th) * skeleton.normal1[i] + std::sin(th) * skeleton.normal2[i];
          c = dir.dot(nhat);
        }
        double r = radius[i];
        if (r * k >= 1.0) fail(ErrorCode::Singularity, "tube degenerates");
        double lam = k < 1e-14 ? 0.0 : -k * c / (1.0 - r * k * c);
        cd = make_curvature({lam, 1.0 / r});
      }
      best = std::min(best, cd.two_convex_margin());
    }
  }
  return best;
}

double TubeSurface::min_H(int n_theta) const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) {
    if (radius[i] < 1e-9 * max_radius()) continue;
    for (int t = 0; t < n_theta; ++t) {
      double th = 2 * M_PI * t / n_theta;
      CurvatureData cd = constant_radius() ? curvature_exact(i, th) : curvature_parametric(i, th);
      best = std::min(best, cd.H());
    }
  }
  return best;
}

double TubeSurface::max_H(int n_theta) const {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) {
    if (radius[i] < 1e-9 * max_radius()) continue;
    for (int t = 0; t < n_theta; ++t) {
      double th = 2 * M_PI * t / n_theta;
      CurvatureData cd = constant_radius() ? curvature_exact(i, th) : curvature_parametric(i, th);
      best = std::max(best, cd.H());
    }
  }
  return best;
}

void TubeSurface::validate() const {
  if (size() != static_cast<int>(radius.size()))
    fail(ErrorCode::Input, "radius/sample count mismatch");
  skeleton.validate();
  double rmax = max_radius();
  double inj = skeleton.normal_injectivity_radius();
  if (rmax >= inj)
    fail(ErrorCode::Embedding, "tube radius exceeds normal injectivity radius of skeleton");
  // Strand-strand clearance with per-sample radii: pairs whose separation is
  // mostly normal to the curve must clear the sum of local radii. Nearly
  // tangent pairs are the local tube itself, already covered by the reach
  // bound above.
  const int m = size();
  for (int i = 0; i < m; ++i)
    for (int j = i + 3; j < m; ++j) {
      if (closed() && m - (j - i) < 3) continue;
      Vec3 d = skeleton.samples[j] - skeleton.samples[i];
      double dist = d.norm();
      double perp = (d - d.dot(skeleton.tangent[i]) * skeleton.tangent[i]).norm();
      if (perp < 0.5 * dist) continue;
      if (dist <= radius[i] + radius[j])
        fail(ErrorCode::Embedding, "tube self-overlap between distant sections");
    }
}

CurvatureData principal_curvatures_tube(const TubeSurface& T, double s, double theta) {
  const int m = T.size();
  double f = s / T.skeleton.h;
  int i = static_cast<int>(std::llround(f));
  if (T.closed()) i = (i % m + m) % m;
  else i = std::clamp(i, 0, m - 1);
  if (!T.constant_radius(1e-6)) {
    int ip = T.closed() ? (i + 1) % m : std::min(i + 1, m - 1);
    int im = T.closed() ? (i - 1 + m) % m : std::max(i - 1, 0);
    if (std::abs(T.radius[ip] - T.radius[im]) > 1e-9 * T.radius[i])
      fail(ErrorCode::Input, "queried section has varying radius; use the parametric path");
  }
  return T.curvature_exact(i, theta);
}

TubeSurface tubular_neighborhood(const SkeletonCurve& gamma, double r) {
  if (r <= 0) fail(ErrorCode::Input, "tube radius must be positive");
  double inj = gamma.normal_injectivity_radius();
  if (r >= inj) fail(ErrorCode::Embedding, "radius exceeds normal injectivity radius");
  TubeSurface T;
  T.skeleton = gamma;
  T.radius.assign(gamma.size(), r);
  T.validate();
  return T;
}

double distance_to_curve(const SkeletonCurve& c, const Vec3& p, int* nearest) {
  const int m = c.size();
  double best = std::numeric_limits<double>::infinity();
  int arg = 0;
  for (int i = 0; i < m; ++i) {
    double d = (c.samples[i] - p).squaredNorm();
    if (d < best) { best = d; arg = i; }
  }
  // Refine against the two incident segments.
  double bd = std::sqrt(best);
  for (int k = -1; k <= 0; ++k) {
    int a = arg + k, b = arg + k + 1;
    if (!c.closed && (a < 0 || b >= m)) continue;
    Vec3 pa = c.samples[(a % m + m) % m], pb = c.samples[(b % m + m) % m];
    Vec3 ab = pb - pa;
    double t = std::clamp((p - pa).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    bd = std::min(bd, (pa + t * ab - p).norm());
  }
  if (nearest) *nearest = arg;
  return bd;
}

bool tube_contains(const TubeSurface& T, const Vec3& p, double slack) {
  int idx = 0;
  double d = distance_to_curve(T.skeleton, p, &idx);
  return d <= T.radius[idx] + slack;
}

}  // namespace marblekit
