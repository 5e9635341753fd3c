#include "marblekit/shapes.hpp"

#include <cmath>
#include <map>

namespace marblekit {

SkeletonCurve make_circle_curve(double R, int npts, const Vec3& center, const Vec3& axis) {
  Vec3 e1 = orthogonal_unit(axis);
  Vec3 e2 = axis.normalized().cross(e1);
  std::vector<Vec3> pts;
  pts.reserve(npts);
  for (int i = 0; i < npts; ++i) {
    double a = 2 * M_PI * i / npts;
    pts.push_back(center + R * (std::cos(a) * e1 + std::sin(a) * e2));
  }
  return curve_from_points(pts, true, 2 * M_PI * R / npts);
}

SkeletonCurve make_segment_curve(const Vec3& a, const Vec3& b, int npts) {
  std::vector<Vec3> pts;
  pts.reserve(npts);
  for (int i = 0; i < npts; ++i) {
    double t = static_cast<double>(i) / (npts - 1);
    pts.push_back((1 - t) * a + t * b);
  }
  return curve_from_points(pts, false, (b - a).norm() / (npts - 1));
}

SkeletonCurve make_trefoil_curve(int npts, double R, double r, double scale) {
  std::vector<Vec3> pts;
  pts.reserve(npts);
  double len_est = 2 * M_PI * std::sqrt(sq(2 * R) + sq(3 * r)) * 0.6;  // rough
  for (int i = 0; i < npts; ++i) {
    double t = 2 * M_PI * i / npts;
    double w = R + r * std::cos(3 * t);
    pts.push_back(scale * Vec3(w * std::cos(2 * t), w * std::sin(2 * t), r * std::sin(3 * t)));
  }
  return curve_from_points(pts, true, scale * len_est / npts);
}

SkeletonCurve make_figure_eight_curve(int npts, double scale) {
  std::vector<Vec3> pts;
  pts.reserve(npts);
  for (int i = 0; i < npts; ++i) {
    double t = 2 * M_PI * i / npts;
    double w = 2 + std::cos(2 * t);
    pts.push_back(scale * Vec3(w * std::cos(3 * t), w * std::sin(3 * t), std::sin(4 * t)));
  }
  double len_est = 2 * M_PI * 6.0 * scale * 0.55;
  return curve_from_points(pts, true, len_est / npts);
}

TriMesh make_icosphere(double R, int subdivisions, const Vec3& center) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
      {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
      {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto k = std::minmax(a, b);
      auto it = midpoint.find({k.first, k.second});
      if (it != midpoint.end()) return it->second;
      Vec3 m = (v[a] + v[b]).normalized();
      v.push_back(m);
      int idx = static_cast<int>(v.size()) - 1;
      midpoint[{k.first, k.second}] = idx;
      return idx;
    };
    std::vector<std::array<int, 3>> nf;
    nf.reserve(f.size() * 4);
    for (const auto& t : f) {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      nf.push_back({t[0], ab, ca});
      nf.push_back({t[1], bc, ab});
      nf.push_back({t[2], ca, bc});
      nf.push_back({ab, bc, ca});
    }
    f = std::move(nf);
  }
  TriMesh M;
  M.V.reserve(v.size());
  for (const auto& p : v) M.V.push_back(center + R * p);
  M.F = std::move(f);
  return M;
}

TriMesh make_flat_square_mesh(int per_side, double size) {
  TriMesh M;
  const int n = per_side;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      M.V.emplace_back(size * i / n, size * j / n, 0.0);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      M.F.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      M.F.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return M;
}

ProfileSurface make_sphere_profile(double R, double hx, int n) {
  ProfileSurface S;
  S.n = n;
  S.x0 = -R;
  S.hx = hx;
  S.caps = EndCaps::Capped;
  int m = static_cast<int>(std::floor(2 * R / hx)) + 1;
  S.u.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = S.x0 + i * hx;
    if (i == m - 1) x = R;
    S.u[i] = std::sqrt(std::max(0.0, R * R - x * x));
  }
  return S;
}

ProfileSurface make_cylinder_profile(double r, double length, double hx, int n, EndCaps caps) {
  ProfileSurface S;
  S.n = n;
  S.x0 = -length / 2;
  S.hx = hx;
  S.caps = caps;
  int m = static_cast<int>(std::floor(length / hx)) + 1;
  S.u.assign(m, r);
  return S;
}

double smooth_min(const std::vector<double>& vals, double sharpness) {
  double m = *std::min_element(vals.begin(), vals.end());
  double acc = 0;
  for (double v : vals) acc += std::exp(-sharpness * (v - m));
  return m - std::log(acc) / sharpness;
}

ProfileSurface make_dumbbell_profile(double bulb, double waist, double hx, int n) {
  // Cosh neck (mean-convex for ell >= waist) joined tangentially to
  // spherical bulbs of radius `bulb`: at the match point u_m the sphere
  // through (x_m, u_m) with matching slope has radius u_m sqrt(1 + s_m^2).
  const double ell = 2.0 * waist;
  auto bulb_radius_at = [&](double u_m) {
    double s_m = std::sqrt(std::max(0.0, u_m * u_m - waist * waist)) / ell;
    return u_m * std::sqrt(1.0 + s_m * s_m);
  };
  double lo = waist * 1.0001, hi = bulb;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (bulb_radius_at(mid) < bulb) lo = mid;
    else hi = mid;
  }
  const double u_m = 0.5 * (lo + hi);
  const double x_m = ell * std::acosh(u_m / waist);
  const double s_m = std::sqrt(u_m * u_m - waist * waist) / ell;
  const double x_c = x_m + s_m * u_m;  // bulb center
  const double half = x_c + bulb;

  ProfileSurface S;
  S.n = n;
  S.x0 = -half;
  S.hx = hx;
  S.caps = EndCaps::Capped;
  int m = static_cast<int>(std::floor(2 * half / hx)) + 1;
  S.u.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = S.x0 + i * hx;
    if (i == m - 1) x = half;
    double ax = std::abs(x);
    if (ax <= x_m) S.u[i] = waist * std::cosh(x / ell);
    else S.u[i] = std::sqrt(std::max(0.0, bulb * bulb - sq(ax - x_c)));
  }
  S.u.front() = 0.0;
  S.u.back() = 0.0;
  // Mollify the curvature jump at the neck/bulb joints so the sampled
  // surface stays mean-convex; the weight tapers to zero so no new kink
  // appears at the window edge.
  double window = 0.25 * bulb;
  for (int pass = 0; pass < 160; ++pass) {
    std::vector<double> next = S.u;
    for (int i = 1; i + 1 < m; ++i) {
      double ax = std::abs(S.x0 + i * hx);
      double w = smoothstep(1.0 - std::abs(ax - x_m) / window);
      if (w <= 0) continue;
      next[i] = S.u[i] + 0.25 * w * (S.u[i - 1] - 2 * S.u[i] + S.u[i + 1]);
    }
    S.u = std::move(next);
  }
  return S;
}

RevolutionSurface make_sphere_revolution(double R, double hg, int n, const Vec3& center,
                                         const Vec3& axis) {
  int m = std::max(8, static_cast<int>(std::ceil(M_PI * R / hg)) + 1);
  std::vector<Vec2> pts;
  pts.reserve(m);
  for (int i = 0; i < m; ++i) {
    double phi = M_PI * i / (m - 1);
    pts.emplace_back(-R * std::cos(phi), R * std::sin(phi));
  }
  return make_revolution(n, center, axis, pts, false, hg);
}

RevolutionSurface make_torus_revolution(double R, double r, double hg, int n,
                                        const Vec3& center, const Vec3& axis) {
  int m = std::max(16, static_cast<int>(std::ceil(2 * M_PI * r / hg)));
  std::vector<Vec2> pts;
  pts.reserve(m);
  for (int i = 0; i < m; ++i) {
    double phi = 2 * M_PI * i / m;
    // Clockwise in (z, rho) so the outward normal points away from the core.
    pts.emplace_back(r * std::sin(phi), R + r * std::cos(phi));
  }
  return make_revolution(n, center, axis, pts, true, hg);
}

}  // namespace marblekit
