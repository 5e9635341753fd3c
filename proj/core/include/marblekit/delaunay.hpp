#pragma once

#include <array>
#include <vector>

#include "marblekit/common.hpp"

namespace marblekit {

/// Bowyer-Watson Delaunay triangulation of 2D points. Returns CCW triangles
/// indexing into `pts`. Used for carving junction holes into marble spheres
/// via stereographic projection.
std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Vec2>& pts);

}  // namespace marblekit
