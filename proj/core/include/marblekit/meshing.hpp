#pragma once

#include "marblekit/complex.hpp"
#include "marblekit/revolution.hpp"
#include "marblekit/trimesh.hpp"
#include "marblekit/tube.hpp"

namespace marblekit {

/// Watertight revolve of a generating curve at target edge length `res`.
TriMesh mesh_revolution(const RevolutionSurface& R, double res);

TriMesh mesh_profile(const ProfileSurface& S, double res);

/// Swept tube; closed skeletons yield tori, capped ends close with a fan.
TriMesh mesh_tube(const TubeSurface& T, double res);

/// Conforming watertight mesh of a glued complex: bodies carved with
/// junction holes, collar rings shared exactly with the string sweeps.
TriMesh mesh_complex(const MarbleComplex& G, double res);

/// Dispatcher used by the CLI `export` and by mesh_from-style call sites.
/// Throws EmbeddingError if the result self-intersects at tol = res/10.
TriMesh mesh_from(const ProfileSurface& S, double res);
TriMesh mesh_from(const TubeSurface& T, double res);
TriMesh mesh_from(const MarbleComplex& G, double res);

}  // namespace marblekit
