#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "marblekit/shapes.hpp"
#include "marblekit/verify.hpp"

using namespace marblekit;

namespace {

RevolutionSurface capped_cylinder(double r, double len, double hg) {
  // Cylinder with C^2 end caps: the cap tangent angle follows
  // phi(t) = (pi/2) t^2 (2 - t), which starts with zero curvature at the
  // joint and closes with positive curvature at the tip.
  auto cap_points = [&](double z_end, double sign) {
    std::vector<Vec2> pts;
    const int nsub = 400;
    // Arc length T chosen so the cap descends exactly from r to 0.
    double integral = 0;
    for (int i = 0; i < nsub; ++i) {
      double t = (i + 0.5) / nsub;
      integral += std::sin(0.5 * M_PI * t * t * (2 - t)) / nsub;
    }
    double T = r / integral;
    double z = z_end, rho = r;
    for (int i = 0; i <= nsub; ++i) {
      double t = static_cast<double>(i) / nsub;
      pts.emplace_back(z, rho);
      double phi = 0.5 * M_PI * t * t * (2 - t);
      z += sign * std::cos(phi) * T / nsub;
      rho -= std::sin(phi) * T / nsub;
    }
    return pts;
  };
  std::vector<Vec2> pts;
  auto left = cap_points(-len / 2, -1.0);
  for (auto it = left.rbegin(); it != left.rend(); ++it) pts.push_back(*it);
  int nm = std::max(4, static_cast<int>(len / (r / 8)));
  for (int i = 1; i < nm; ++i) pts.emplace_back(-len / 2 + len * i / nm, r);
  auto right = cap_points(len / 2, 1.0);
  for (const auto& p : right) pts.push_back(p);
  return make_revolution(2, Vec3::Zero(), Vec3::UnitX(), pts, false, hg);
}

}  // namespace

TEST_CASE("two-convexity margins: sphere and tori") {
  auto sphere = make_sphere_revolution(1.0, 1.0 / 64);
  auto rep = check_two_convex(AnyGeometry{sphere});
  CHECK(rep.passed);
  CHECK(rep.margin == doctest::Approx(2.0).epsilon(0.01));

  auto good = make_torus_revolution(3.0, 1.0, 1.0 / 64);
  auto repg = check_two_convex(AnyGeometry{good});
  CHECK(repg.passed);
  CHECK(repg.margin == doctest::Approx(0.5).epsilon(0.02));
  // Witness at the inner equator: distance from the axis is R - r.
  double rho_w = Vec3(0, 0, 1).cross(repg.worst.witness_point).norm();
  CHECK(rho_w == doctest::Approx(2.0).epsilon(0.02));

  auto bad = make_torus_revolution(2.5, 1.3, 1.0 / 64);
  auto repb = check_two_convex(AnyGeometry{bad});
  CHECK_FALSE(repb.passed);
  double expect = (2.5 - 2.6) / (1.3 * 1.2);
  CHECK(repb.margin == doctest::Approx(expect).epsilon(0.02));
  double rho_b = Vec3(0, 0, 1).cross(repb.worst.witness_point).norm();
  CHECK(rho_b == doctest::Approx(1.2).epsilon(0.02));
}

TEST_CASE("fail witness reproduces the margin") {
  auto bad = make_torus_revolution(2.5, 1.3, 1.0 / 64);
  auto rep = check_two_convex(AnyGeometry{bad});
  REQUIRE_FALSE(rep.passed);
  int i = rep.worst.witness_index;
  auto cd = bad.curvature(i);
  CHECK(cd.two_convex_margin() == doctest::Approx(rep.margin).epsilon(0.01));
}

TEST_CASE("alpha-noncollapsedness on spheres and dumbbells") {
  auto sphere = make_sphere_revolution(1.0, 1.0 / 48);
  auto r1 = check_alpha_noncollapsed(AnyGeometry{sphere}, 1.0);
  CHECK(r1.passed);
  // alpha = 2: interior tangent ball radius equals R; boundary case.
  auto r2 = check_alpha_noncollapsed(AnyGeometry{sphere}, 2.0);
  CHECK(r2.passed);
  CHECK(r2.worst.boundary_case);
  CHECK(std::abs(r2.margin) < 1e-6);

  auto dumb = make_dumbbell_profile(1.0, 0.1, 1.0 / 96);
  auto r3 = check_alpha_noncollapsed(AnyGeometry{dumb}, 1.0);
  CHECK_FALSE(r3.passed);
  // Witness near the waist plane x ~ 0.
  CHECK(std::abs(r3.worst.witness_point.x()) < 0.5);

  auto bad_torus = make_torus_revolution(2.5, 1.3, 1.0 / 32);
  CHECK_THROWS_AS(check_alpha_noncollapsed(AnyGeometry{bad_torus}, 1.0), Error);
}

TEST_CASE("controlled domain conjunction") {
  auto sphere = make_sphere_revolution(1.0, 1.0 / 48);
  ControlParams P;
  P.alpha = 1.0;
  P.beta = 0.5;
  P.c_H = 1.0;
  P.C_A = 10.0;
  auto rep = check_controlled_domain(AnyGeometry{sphere}, P);
  CHECK(rep.passed);

  ControlParams Pbad = P;
  Pbad.c_H = 3.0;
  auto repb = check_controlled_domain(AnyGeometry{sphere}, Pbad);
  CHECK_FALSE(repb.passed);
  CHECK(repb.worst.name == "H_lower_bound");
  CHECK(repb.margin == doctest::Approx(-1.0).epsilon(0.01));

  auto cyl = capped_cylinder(0.5, 2.0, 1.0 / 64);
  ControlParams Pc;
  Pc.alpha = 0.5;
  Pc.beta = 0.9;
  Pc.c_H = 0.5;
  Pc.C_A = 60.0;
  auto repc = check_controlled_domain(AnyGeometry{cyl}, Pc);
  CHECK(repc.passed);
  Pc.beta = 1.1;
  auto repc2 = check_controlled_domain(AnyGeometry{cyl}, Pc);
  CHECK_FALSE(repc2.passed);
  CHECK(repc2.worst.name == "two_convex_fraction");
  CHECK(repc2.margin == doctest::Approx(-0.2).epsilon(0.05));
}

TEST_CASE("parameter monotonicity") {
  auto sphere = make_sphere_revolution(1.0, 1.0 / 48);
  ControlParams P{0.9, 0.6, 1.5, 8.0, 1.0};
  auto base = check_controlled_domain(AnyGeometry{sphere}, P);
  REQUIRE(base.passed);
  ControlParams weaker{0.5, 0.3, 0.5, 20.0, 1.0};
  auto rep = check_controlled_domain(AnyGeometry{sphere}, weaker);
  CHECK(rep.passed);
}

TEST_CASE("controlled curves") {
  auto circle = make_circle_curve(1.0, 128);
  auto r1 = check_controlled_curve({circle}, 0.5);
  CHECK(r1.passed);
  auto r2 = check_controlled_curve({circle}, 2.0);
  CHECK_FALSE(r2.passed);
  bool curvature_failed = false;
  for (const auto& d : r2.details)
    if (d.name == "curvature_bound" && !d.passed) curvature_failed = true;
  CHECK(curvature_failed);

  auto seg1 = make_segment_curve(Vec3(0, 0, 0), Vec3(5, 0, 0), 64);
  auto seg2 = make_segment_curve(Vec3(0, 1, 0), Vec3(5, 1, 0), 64);
  auto r3 = check_controlled_curve({seg1, seg2}, 0.2);
  CHECK_FALSE(r3.passed);
  CHECK(r3.worst.name == "component_separation");
  auto r4 = check_controlled_curve({seg1, seg2}, 0.05);
  CHECK(r4.passed);
}

TEST_CASE("controlled configuration") {
  std::vector<MarbleBody> domains = {
      MarbleBody::make_ball({Vec3(0, 0, 0), 1.0}),
      MarbleBody::make_ball({Vec3(10, 0, 0), 1.0})};
  ControlParams P;
  P.b = 0.3;
  auto radial = make_segment_curve(Vec3(1, 0, 0), Vec3(9, 0, 0), 128);
  auto rep = check_configuration(domains, {radial}, P);
  CHECK(rep.passed);

  // Tilted contact: sine bend leaves both walls ~20 degrees off radial.
  std::vector<Vec3> pts;
  double A = 8.0 * std::tan(20.0 * M_PI / 180.0) / M_PI;
  for (int i = 0; i <= 200; ++i) {
    double t = static_cast<double>(i) / 200;
    pts.emplace_back(1 + 8 * t, A * std::sin(M_PI * t), 0);
  }
  auto tilted = curve_from_points(pts, false, 8.0 / 200);
  auto rep2 = check_configuration(domains, {tilted}, P);
  CHECK_FALSE(rep2.passed);
  CHECK(rep2.worst.name == "endpoint_contact");

  // Crossing a domain interior is a hard error.
  auto crossing = make_segment_curve(Vec3(-5, 0, 0), Vec3(9, 0, 0), 256);
  CHECK_THROWS_AS(check_configuration(domains, {crossing}, P), Error);
}

TEST_CASE("refinement keeps the verdict") {
  for (double h : {1.0 / 32, 1.0 / 64}) {
    auto good = make_torus_revolution(3.0, 1.0, h);
    CHECK(check_two_convex(AnyGeometry{good}).passed);
    auto bad = make_torus_revolution(2.5, 1.3, h);
    CHECK_FALSE(check_two_convex(AnyGeometry{bad}).passed);
  }
}

TEST_CASE("scaling covariance") {
  const double s = 2.0;
  auto base = make_torus_revolution(3.0, 1.0, 1.0 / 64);
  auto scaled = make_torus_revolution(3.0 * s, 1.0 * s, s / 64);
  auto m0 = check_two_convex(AnyGeometry{base}).margin;
  auto m1 = check_two_convex(AnyGeometry{scaled}).margin;
  CHECK(m1 == doctest::Approx(m0 / s).epsilon(0.01));
  CHECK(check_alpha_noncollapsed(AnyGeometry{base}, 1.0).passed ==
        check_alpha_noncollapsed(AnyGeometry{scaled}, 1.0).passed);
}

TEST_CASE("control params validation") {
  ControlParams P;
  P.alpha = 1.5;  // outside (0, n-1] for n = 2
  CHECK_THROWS_AS(P.validate(2), Error);
  P.alpha = 0.5;
  P.c_H = -1;
  CHECK_THROWS_AS(P.validate(2), Error);
}
