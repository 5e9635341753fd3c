#pragma once

// Test-side oracles, independent of the library implementation paths they
// check: finite-difference shape operators on smooth parameterizations,
// brute-force distance scans, and reference ODE integrators.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "marblekit/common.hpp"

namespace oracle {

using marblekit::Vec3;

// Principal curvatures of a parameterized surface patch at (u0, v0) by
// central finite differences of the embedding, domain convention (positive
// on spheres, normal chosen along `outward_hint`).
inline std::pair<double, double> shape_operator_fd(
    const std::function<Vec3(double, double)>& X, double u0, double v0, double du,
    double dv, const Vec3& outward_hint) {
  auto at = [&](double a, double b) { return X(u0 + a * du, v0 + b * dv); };
  Vec3 Xu = (at(1, 0) - at(-1, 0)) / (2 * du);
  Vec3 Xv = (at(0, 1) - at(0, -1)) / (2 * dv);
  Vec3 Xuu = (at(1, 0) - 2 * at(0, 0) + at(-1, 0)) / (du * du);
  Vec3 Xvv = (at(0, 1) - 2 * at(0, 0) + at(0, -1)) / (dv * dv);
  Vec3 Xuv = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * du * dv);
  Vec3 nu = Xu.cross(Xv).normalized();
  if (nu.dot(outward_hint) < 0) nu = -nu;
  double E = Xu.dot(Xu), F = Xu.dot(Xv), G = Xv.dot(Xv);
  double L = -Xuu.dot(nu), M = -Xuv.dot(nu), N = -Xvv.dot(nu);
  double a2 = E * G - F * F;
  double a1 = -(L * G + N * E - 2 * M * F);
  double a0 = L * N - M * M;
  double disc = std::max(0.0, a1 * a1 - 4 * a2 * a0);
  double sd = std::sqrt(disc);
  return {(-a1 - sd) / (2 * a2), (-a1 + sd) / (2 * a2)};
}

// Brute-force minimum pairwise distance between samples at least min_sep
// indices apart (cyclic when closed).
inline double min_pairwise_distance(const std::vector<Vec3>& pts, bool closed, int min_sep) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + min_sep; j < n; ++j) {
      if (closed && n - (j - i) < min_sep) continue;
      best = std::min(best, (pts[i] - pts[j]).norm());
    }
  return best;
}

// Reference extinction time of a round sphere under mean curvature flow:
// dR/dt = -n/R integrated with RK4 until R reaches R_stop.
inline double sphere_extinction_time(double R0, int n, double R_stop = 0.0) {
  double R = R0, t = 0;
  double dt = 1e-5 * R0 * R0;
  while (R > std::max(R_stop, 1e-4 * R0)) {
    auto f = [&](double r) { return -static_cast<double>(n) / r; };
    double k1 = f(R);
    double k2 = f(R + 0.5 * dt * k1);
    double k3 = f(R + 0.5 * dt * k2);
    double k4 = f(R + dt * k3);
    double step = dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (R + step <= 0) break;
    R += step;
    t += dt;
  }
  // Analytic continuation for the last sliver: T = t + R^2/(2n).
  return t + R * R / (2.0 * n);
}

// Winding number of a closed planar path about the origin, by summed angle
// increments over the samples.
inline int winding_number(const std::vector<std::pair<double, double>>& path) {
  double total = 0;
  const int n = static_cast<int>(path.size());
  for (int i = 0; i < n; ++i) {
    auto [x0, y0] = path[i];
    auto [x1, y1] = path[(i + 1) % n];
    double a0 = std::atan2(y0, x0), a1 = std::atan2(y1, x1);
    double d = a1 - a0;
    while (d > M_PI) d -= 2 * M_PI;
    while (d < -M_PI) d += 2 * M_PI;
    total += d;
  }
  return static_cast<int>(std::llround(total / (2 * M_PI)));
}

}  // namespace oracle
