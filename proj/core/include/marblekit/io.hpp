#pragma once

#include <string>

#include "marblekit/curve.hpp"
#include "marblekit/trimesh.hpp"

namespace marblekit {

enum class MeshFormat { Obj, Off };

void write_mesh(const TriMesh& M, const std::string& path, MeshFormat fmt);
TriMesh read_mesh(const std::string& path);  // format from extension

/// Curves serialize as a JSON array of [x,y,z] samples plus a "closed" flag.
std::string curve_to_json(const SkeletonCurve& c);
SkeletonCurve curve_from_json(const std::string& text, double h_s = 0.0);

}  // namespace marblekit
