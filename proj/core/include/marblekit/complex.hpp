#pragma once

#include <optional>
#include <string>
#include <vector>

#include "marblekit/common.hpp"
#include "marblekit/curve.hpp"
#include "marblekit/revolution.hpp"
#include "marblekit/tube.hpp"

namespace marblekit {

/// Radial junction profile about the string axis: g(xi), xi measured along
/// the outward string direction from the contact point. Equals the body wall
/// for xi <= wall_xi and the string radius for xi >= tube_xi.
struct JunctionProfile {
  double xi0 = 0.0;
  double dxi = 0.0;
  std::vector<double> g;

  int size() const { return static_cast<int>(g.size()); }
  double xi_at(int i) const { return xi0 + dxi * i; }
  double xi_end() const { return xi0 + dxi * (size() - 1); }
  double eval(double xi) const;
  /// Principal curvatures of the revolved profile at sample i.
  CurvatureData curvature(int i, int n) const;
};

struct Junction {
  int string_id = -1;
  int end = 0;       // 0: begin of string, 1: end
  int body_id = -1;  // -1 when this is a loose-end cap, not a junction
  Vec3 p = Vec3::Zero();     // contact point on the wall
  Vec3 axis = Vec3::UnitX(); // outward string direction at p
  double delta = 0.0;        // gluing ball radius delta(r)
  double wall_xi = 0.0;      // profile equals the wall for xi <= wall_xi
  double tube_xi = 0.0;      // profile equals the tube for xi >= tube_xi
  double hole_rho = 0.0;     // radius of the ring cut into the wall
  JunctionProfile profile;

  Ball ball() const { return {p, delta}; }
};

/// Radius taper closing a loose tube end; g runs over the final `length` of
/// arc toward the tip, ending at 0.
struct CapShape {
  double length = 0.0;
  std::vector<double> g;

  double eval(double dist_from_tip) const;  // radius at arc distance from tip
};

struct MarbleString {
  SkeletonCurve curve;
  double radius = 0.0;
  int body_a = -1;  // attachment at curve begin (-1: loose end)
  int body_b = -1;  // attachment at curve end
  std::optional<CapShape> cap_a;  // loose end closed by a standard cap
  std::optional<CapShape> cap_b;

  bool capped_a() const { return cap_a.has_value(); }
  bool capped_b() const { return cap_b.has_value(); }
  /// Tube radius at arclength s including cap tapers.
  double radius_at(double s) const;
};

struct MarbleBody {
  enum class Kind { BallBody, RevolutionBody };
  Kind kind = Kind::BallBody;
  Ball ball;
  RevolutionSurface rev;

  static MarbleBody make_ball(const Ball& b) {
    MarbleBody mb;
    mb.kind = Kind::BallBody;
    mb.ball = b;
    return mb;
  }
  static MarbleBody make_revolution(const RevolutionSurface& r) {
    MarbleBody mb;
    mb.kind = Kind::RevolutionBody;
    mb.rev = r;
    return mb;
  }
};

/// One sampled surface point with exact curvature, used by the verifiers.
struct SurfaceSample {
  Vec3 p = Vec3::Zero();
  Vec3 normal = Vec3::Zero();  // outward unit
  CurvatureData curv;
  double grad_A = 0.0;  // |first difference of the shape operator| estimate
  std::string piece;
  int index = 0;
  // Samples within a few grid steps of a revolve pole carry geometry below
  // the discretization scale; they still act as obstacles in clearance
  // scans but are not used as ball anchors.
  bool pole_adjacent = false;
};

/// Glued 2-convex domain: bodies joined by strings with rotationally
/// symmetric junction collars. Marble graphs are the special case where all
/// bodies are balls of one radius, there are no loose ends, and strings run
/// straight near the balls.
struct MarbleComplex {
  int n = 2;
  std::vector<MarbleBody> bodies;
  std::vector<MarbleString> strings;
  std::vector<Junction> junctions;
  double string_radius = 0.0;  // common r_s when uniform, else 0
  double gap_delta = 0.0;      // delta(r_s)

  bool contains(const Vec3& p, double slack = 0.0) const;

  /// Multigraph cycle rank E - V + #components over bodies/strings.
  int cycle_rank() const;
  int graph_component_count() const;
  bool graph_connected() const;
  bool has_loose_ends() const;

  /// Structural Euler characteristic of the boundary surface
  /// (2 * components - 2 * cycle rank), valid for n = 2.
  int euler_characteristic_structural() const;

  /// The arc range [s_lo, s_hi] of a string that lies outside its junction
  /// collars (where the plain tube is exact).
  std::pair<double, double> string_tube_range(int string_id) const;

  /// Sampled surface points with exact curvature for every piece.
  std::vector<SurfaceSample> sample_surface(int n_theta = 12) const;

  /// Pairwise clearance checks between pieces (embeddedness surrogate for
  /// the analytic representation). Throws EmbeddingError with a witness.
  void check_clearances() const;

  /// Marble-graph validation: balls only, uniform radii, no loose ends,
  /// straight rays within 3 r_m, disjoint delta-balls.
  void validate_marble_graph() const;
};

enum class GraphClass { Tree, Circuit, General };
struct GraphClassification {
  GraphClass cls = GraphClass::General;
  int cycle_rank = 0;
};
GraphClassification classify_marble_graph(const MarbleComplex& G);

}  // namespace marblekit
