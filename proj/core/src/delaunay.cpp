#include "marblekit/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace marblekit {

namespace {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// Positive when d is strictly inside the circumcircle of CCW triangle abc.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  double adx = a.x() - d.x(), ady = a.y() - d.y();
  double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  double ad = adx * adx + ady * ady;
  double bd = bdx * bdx + bdy * bdy;
  double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
         ad * (bdx * cdy - bdy * cdx);
}

}  // namespace

std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Vec2>& pts_in) {
  const int n = static_cast<int>(pts_in.size());
  if (n < 3) fail(ErrorCode::Input, "Delaunay needs >= 3 points");
  std::vector<Vec2> pts = pts_in;

  Vec2 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-9});
  Vec2 mid = 0.5 * (lo + hi);
  int s0 = n, s1 = n + 1, s2 = n + 2;
  pts.push_back(mid + Vec2(-40 * span, -20 * span));
  pts.push_back(mid + Vec2(40 * span, -20 * span));
  pts.push_back(mid + Vec2(0, 40 * span));

  struct Tri { int a, b, c; };
  std::vector<Tri> tris{{s0, s1, s2}};

  for (int ip = 0; ip < n; ++ip) {
    const Vec2& p = pts[ip];
    std::vector<int> bad;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (incircle(pts[tris[t].a], pts[tris[t].b], pts[tris[t].c], p) > 0) bad.push_back(t);
    }
    // Boundary of the cavity: edges appearing once among bad triangles.
    std::map<std::pair<int, int>, int> edge_use;
    for (int t : bad) {
      std::array<std::pair<int, int>, 3> es = {
          std::make_pair(tris[t].a, tris[t].b),
          std::make_pair(tris[t].b, tris[t].c),
          std::make_pair(tris[t].c, tris[t].a)};
      for (auto e : es) {
        auto k = std::minmax(e.first, e.second);
        edge_use[{k.first, k.second}]++;
      }
    }
    std::vector<std::pair<int, int>> boundary;
    for (int t : bad) {
      std::array<std::pair<int, int>, 3> es = {
          std::make_pair(tris[t].a, tris[t].b),
          std::make_pair(tris[t].b, tris[t].c),
          std::make_pair(tris[t].c, tris[t].a)};
      for (auto e : es) {
        auto k = std::minmax(e.first, e.second);
        if (edge_use[{k.first, k.second}] == 1) boundary.push_back(e);
      }
    }
    std::sort(bad.rbegin(), bad.rend());
    for (int t : bad) tris.erase(tris.begin() + t);
    for (auto [a, b] : boundary) {
      Tri nt{a, b, ip};
      if (orient2d(pts[a], pts[b], pts[ip]) < 0) std::swap(nt.a, nt.b);
      tris.push_back(nt);
    }
  }

  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris) {
    if (t.a >= n || t.b >= n || t.c >= n) continue;
    out.push_back({t.a, t.b, t.c});
  }
  return out;
}

}  // namespace marblekit
