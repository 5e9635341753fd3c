#include "marblekit/curve.hpp"

#include <algorithm>
#include <cmath>

namespace marblekit {

namespace {

// Tridiagonal solve, rows (lo[i], di[i], up[i]).
std::vector<double> solve_tridiag(std::vector<double> lo, std::vector<double> di,
                                  std::vector<double> up, std::vector<double> rhs) {
  const int n = static_cast<int>(di.size());
  for (int i = 1; i < n; ++i) {
    double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / di[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - up[i] * x[i + 1]) / di[i];
  return x;
}

// Second derivatives of a natural cubic spline per component.
std::vector<double> natural_m(const std::vector<double>& t, const std::vector<double>& y) {
  const int n = static_cast<int>(t.size());
  if (n == 2) return {0.0, 0.0};
  std::vector<double> lo(n - 2, 0), di(n - 2, 0), up(n - 2, 0), rhs(n - 2, 0);
  for (int i = 1; i <= n - 2; ++i) {
    double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
    lo[i - 1] = h0;
    di[i - 1] = 2.0 * (h0 + h1);
    up[i - 1] = h1;
    rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
  }
  auto m_in = solve_tridiag(lo, di, up, rhs);
  std::vector<double> m(n, 0.0);
  for (int i = 1; i <= n - 2; ++i) m[i] = m_in[i - 1];
  return m;
}

// Periodic spline second derivatives via Sherman-Morrison on the cyclic
// tridiagonal system. t has n+1 entries (t[n] closes the period), y has n.
std::vector<double> periodic_m(const std::vector<double>& t, const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  auto yy = [&](int i) { return y[(i % n + n) % n]; };
  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) h[i] = t[i + 1] - t[i];
  auto hh = [&](int i) { return h[(i % n + n) % n]; };

  std::vector<double> lo(n), di(n), up(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = hh(i - 1);
    di[i] = 2.0 * (hh(i - 1) + hh(i));
    up[i] = hh(i);
    rhs[i] = 6.0 * ((yy(i + 1) - yy(i)) / hh(i) - (yy(i) - yy(i - 1)) / hh(i - 1));
  }
  // Cyclic corners: A[0][n-1] = lo[0], A[n-1][0] = up[n-1].
  double alpha = lo[0], beta = up[n - 1];
  double gamma = -di[0];
  std::vector<double> d2 = di;
  d2[0] -= gamma;
  d2[n - 1] -= alpha * beta / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> lo2(lo.begin(), lo.end()), up2(up.begin(), up.end());
  lo2[0] = 0.0;
  up2[n - 1] = 0.0;
  auto x1 = solve_tridiag(lo2, d2, up2, rhs);
  auto x2 = solve_tridiag(lo2, d2, up2, u);
  double factor = (x1[0] + beta * x1[n - 1] / gamma) /
                  (1.0 + x2[0] + beta * x2[n - 1] / gamma);
  std::vector<double> m(n);
  for (int i = 0; i < n; ++i) m[i] = x1[i] - factor * x2[i];
  return m;
}

}  // namespace

CubicSpline3::CubicSpline3(const std::vector<Vec3>& pts, const std::vector<double>& t,
                           bool periodic)
    : periodic_(periodic) {
  const int n = static_cast<int>(pts.size());
  if (n < 2) fail(ErrorCode::Input, "spline needs >= 2 points");
  t_ = t;
  std::vector<double> tt = t;
  if (periodic_) {
    if (static_cast<int>(t.size()) != n + 1)
      fail(ErrorCode::Input, "periodic spline wants n+1 knots");
    period_ = t.back() - t.front();
  } else if (static_cast<int>(t.size()) != n) {
    fail(ErrorCode::Input, "knot/point count mismatch");
  }

  const int segs = periodic_ ? n : n - 1;
  a_.resize(segs);
  b_.resize(segs);
  c_.resize(segs);
  d_.resize(segs);
  for (int dim = 0; dim < 3; ++dim) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = pts[i][dim];
    std::vector<double> m = periodic_ ? periodic_m(t_, y) : natural_m(t_, y);
    auto mm = [&](int i) { return m[i % n]; };
    auto yy = [&](int i) { return y[i % n]; };
    for (int i = 0; i < segs; ++i) {
      double h = t_[i + 1] - t_[i];
      a_[i][dim] = yy(i);
      b_[i][dim] = (yy(i + 1) - yy(i)) / h - h / 6.0 * (2.0 * mm(i) + mm(i + 1));
      c_[i][dim] = mm(i) / 2.0;
      d_[i][dim] = (mm(i + 1) - mm(i)) / (6.0 * h);
    }
  }
}

int CubicSpline3::segment(double& t) const {
  if (periodic_) {
    double t0 = t_.front();
    t = t0 + std::fmod(std::fmod(t - t0, period_) + period_, period_);
  } else {
    t = std::clamp(t, t_.front(), t_.back());
  }
  int lo = 0, hi = static_cast<int>(a_.size());
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (t_[mid] <= t) lo = mid; else hi = mid;
  }
  return lo;
}

Vec3 CubicSpline3::eval(double t) const {
  int i = segment(t);
  double x = t - t_[i];
  return a_[i] + x * (b_[i] + x * (c_[i] + x * d_[i]));
}

Vec3 SkeletonCurve::curvature_vector(int i) const {
  const int n = size();
  if (n < 3) return Vec3::Zero();
  auto at = [&](int k) -> const Vec3& {
    if (closed) return samples[(k % n + n) % n];
    return samples[std::clamp(k, 0, n - 1)];
  };
  int j = i;
  if (!closed) j = std::clamp(i, 1, n - 2);
  return (at(j + 1) - 2.0 * at(j) + at(j - 1)) / (h * h);
}

double SkeletonCurve::max_curvature() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = std::max(m, curvature(i));
  return m;
}

double SkeletonCurve::curvature_derivative(int i) const {
  const int n = size();
  if (n < 4) return 0.0;
  int j = i;
  if (!closed) j = std::clamp(i, 2, n - 3);
  auto kv = [&](int k) { return curvature_vector(closed ? ((k % n + n) % n) : k); };
  return ((kv(j + 1) - kv(j - 1)) / (2.0 * h)).norm();
}

Vec3 SkeletonCurve::point_at(double s) const {
  const int n = size();
  double L = total_length;
  if (closed) s = std::fmod(std::fmod(s, L) + L, L);
  else s = std::clamp(s, 0.0, L);
  double f = s / h;
  int i = std::min(static_cast<int>(std::floor(f)), closed ? n - 1 : n - 2);
  double w = f - i;
  const Vec3& p0 = samples[i];
  const Vec3& p1 = samples[(i + 1) % n];
  return (1.0 - w) * p0 + w * p1;
}

Vec3 SkeletonCurve::tangent_at(double s) const {
  const int n = size();
  double L = total_length;
  if (closed) s = std::fmod(std::fmod(s, L) + L, L);
  else s = std::clamp(s, 0.0, L);
  double f = s / h;
  int i = std::min(static_cast<int>(std::floor(f)), closed ? n - 1 : n - 2);
  double w = f - i;
  Vec3 t = (1.0 - w) * tangent[i] + w * tangent[(i + 1) % n];
  return t.normalized();
}

int SkeletonCurve::cyclic_separation(int i, int j) const {
  int d = std::abs(i - j);
  if (closed) d = std::min(d, size() - d);
  return d;
}

double SkeletonCurve::min_nonlocal_distance(int min_sep) const {
  const int n = size();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + min_sep; j < n; ++j) {
      if (closed && n - (j - i) < min_sep) continue;
      best = std::min(best, (samples[i] - samples[j]).norm());
    }
  return best;
}

double SkeletonCurve::normal_injectivity_radius() const {
  // Reach estimate: min over curvature and the local feature size
  // |p-q|^2 / (2 |(q-p) perp T(p)|), which is exact for circles and
  // captures self-proximity between strands.
  const int n = size();
  double kmax = max_curvature();
  double r = kmax > 1e-12 ? 1.0 / kmax : std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (cyclic_separation(i, j) < 3) continue;
      Vec3 d = samples[j] - samples[i];
      double dist2 = d.squaredNorm();
      Vec3 perp = d - d.dot(tangent[i]) * tangent[i];
      double pn = perp.norm();
      if (pn < 1e-12 * std::sqrt(dist2)) continue;
      r = std::min(r, dist2 / (2.0 * pn));
    }
  return r;
}

void SkeletonCurve::validate() const {
  const int n = size();
  if (n < 4) fail(ErrorCode::Input, "curve has fewer than 4 samples");
  const int last = closed ? n : n - 1;
  for (int i = 0; i < last; ++i) {
    double d = (samples[(i + 1) % n] - samples[i]).norm();
    if (std::abs(d - h) > 0.01 * h)
      fail(ErrorCode::Input, "curve spacing deviates more than 1% from h");
    double dot = tangent[i].dot(tangent[(i + 1) % n]);
    if (dot < std::cos(M_PI / 4.0))
      fail(ErrorCode::Input, "adjacent tangents turn by >= pi/4; curvature unresolvable");
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(tangent[i].norm() - 1.0) > 1e-9)
      fail(ErrorCode::Numerical, "non-unit tangent");
  }
  if (min_nonlocal_distance(3) <= 2.0 * h)
    fail(ErrorCode::Embedding, "curve samples closer than 2*h at nonadjacent indices");
}

SkeletonCurve SkeletonCurve::subcurve(int i0, int i1) const {
  const int n = size();
  std::vector<Vec3> pts;
  int count = ((i1 - i0) % n + n) % n;
  if (!closed) {
    if (i0 < 0 || i1 >= n || i1 < i0) fail(ErrorCode::Input, "bad subcurve range");
    count = i1 - i0;
  }
  for (int k = 0; k <= count; ++k) pts.push_back(samples[(i0 + k) % n]);
  return curve_from_points(pts, false, h);
}

SkeletonCurve SkeletonCurve::reversed() const {
  std::vector<Vec3> pts(samples.rbegin(), samples.rend());
  return curve_from_points(pts, closed, h);
}

SkeletonCurve SkeletonCurve::transformed(const Eigen::Matrix3d& R, const Vec3& t) const {
  SkeletonCurve out = *this;
  for (auto& p : out.samples) p = R * p + t;
  for (auto& v : out.tangent) v = R * v;
  for (auto& v : out.normal1) v = R * v;
  for (auto& v : out.normal2) v = R * v;
  return out;
}

SkeletonCurve curve_from_points(const std::vector<Vec3>& points_in, bool closed, double h_s) {
  if (h_s <= 0) fail(ErrorCode::Input, "h_s must be positive");
  std::vector<Vec3> pts = points_in;
  if (closed && pts.size() >= 2 && (pts.front() - pts.back()).norm() < 1e-12 * (1 + pts.front().norm()))
    pts.pop_back();
  // Drop consecutive duplicates.
  std::vector<Vec3> clean;
  for (const auto& p : pts) {
    if (!p.allFinite()) fail(ErrorCode::Input, "non-finite input point");
    if (clean.empty() || (p - clean.back()).norm() > 1e-13) clean.push_back(p);
  }
  if (clean.size() < 4) fail(ErrorCode::Input, "need at least 4 distinct points");

  const int np = static_cast<int>(clean.size());
  std::vector<double> t(np + (closed ? 1 : 0));
  t[0] = 0.0;
  for (int i = 1; i < np; ++i) t[i] = t[i - 1] + (clean[i] - clean[i - 1]).norm();
  if (closed) t[np] = t[np - 1] + (clean[0] - clean[np - 1]).norm();

  CubicSpline3 spline(clean, t, closed);

  // Dense arclength table on the spline.
  const int sub = 24;
  const double t_end = closed ? t[np] : t[np - 1];
  const int segs = (closed ? np : np - 1) * sub;
  std::vector<double> dense_t(segs + 1), dense_s(segs + 1);
  Vec3 prev = spline.eval(0.0);
  dense_t[0] = 0.0;
  dense_s[0] = 0.0;
  for (int k = 1; k <= segs; ++k) {
    dense_t[k] = t_end * k / segs;
    Vec3 q = spline.eval(dense_t[k]);
    dense_s[k] = dense_s[k - 1] + (q - prev).norm();
    prev = q;
  }
  const double L = dense_s.back();
  if (L < 4 * h_s * 0.5) fail(ErrorCode::Input, "curve too short for requested spacing");

  int N = std::max(closed ? 8 : 4, static_cast<int>(std::llround(L / h_s)) + (closed ? 0 : 1));
  const int count = closed ? N : N;  // number of samples
  const double h = closed ? L / N : L / (N - 1);

  SkeletonCurve out;
  out.closed = closed;
  out.h = h;
  out.total_length = closed ? L : h * (N - 1);
  out.samples.resize(count);
  int cursor = 0;
  for (int i = 0; i < count; ++i) {
    double target = std::min(h * i, L);
    while (cursor + 1 < static_cast<int>(dense_s.size()) - 1 && dense_s[cursor + 1] < target)
      ++cursor;
    double s0 = dense_s[cursor], s1 = dense_s[cursor + 1];
    double w = (s1 > s0) ? (target - s0) / (s1 - s0) : 0.0;
    double tt = dense_t[cursor] + w * (dense_t[cursor + 1] - dense_t[cursor]);
    out.samples[i] = spline.eval(tt);
  }

  // Tangents by central differences.
  const int n = count;
  out.tangent.resize(n);
  for (int i = 0; i < n; ++i) {
    Vec3 d;
    if (closed) {
      d = out.samples[(i + 1) % n] - out.samples[(i - 1 + n) % n];
    } else if (i == 0) {
      d = out.samples[1] - out.samples[0];
    } else if (i == n - 1) {
      d = out.samples[n - 1] - out.samples[n - 2];
    } else {
      d = out.samples[i + 1] - out.samples[i - 1];
    }
    out.tangent[i] = d.normalized();
  }

  // Rotation-minimizing frame by projection transport.
  out.normal1.resize(n);
  out.normal2.resize(n);
  Vec3 nrm = orthogonal_unit(out.tangent[0]);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      nrm -= nrm.dot(out.tangent[i]) * out.tangent[i];
      double len = nrm.norm();
      nrm = len > 1e-12 ? Vec3(nrm / len) : orthogonal_unit(out.tangent[i]);
    }
    out.normal1[i] = nrm;
    out.normal2[i] = out.tangent[i].cross(nrm);
  }
  if (closed) {
    // Distribute holonomy so frame closes up.
    Vec3 wrapped = out.normal1.back();
    wrapped -= wrapped.dot(out.tangent[0]) * out.tangent[0];
    wrapped.normalize();
    double cosang = std::clamp(wrapped.dot(out.normal1[0]), -1.0, 1.0);
    double sinang = out.tangent[0].dot(wrapped.cross(out.normal1[0]));
    double hol = std::atan2(sinang, cosang);
    for (int i = 0; i < n; ++i) {
      double a = hol * (static_cast<double>(i + 1) / n);
      Vec3 n1 = std::cos(a) * out.normal1[i] + std::sin(a) * out.normal2[i];
      out.normal1[i] = n1.normalized();
      out.normal2[i] = out.tangent[i].cross(out.normal1[i]);
    }
  }
  return out;
}

SkeletonCurve resample(const SkeletonCurve& c, double h) {
  return curve_from_points(c.samples, c.closed, h);
}

}  // namespace marblekit
