#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "marblekit/curve.hpp"
#include "marblekit/io.hpp"
#include "marblekit/meshing.hpp"
#include "marblekit/revolution.hpp"
#include "marblekit/shapes.hpp"
#include "marblekit/trimesh.hpp"
#include "marblekit/tube.hpp"
#include "oracles.hpp"

using namespace marblekit;

TEST_CASE("circle curve has unit curvature") {
  auto c = make_circle_curve(1.0, 64);
  c.validate();
  CHECK(c.closed);
  for (int i = 0; i < c.size(); ++i) CHECK(c.curvature(i) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(c.total_length == doctest::Approx(2 * M_PI).epsilon(0.01));
}

TEST_CASE("straight segment has vanishing curvature") {
  auto c = make_segment_curve(Vec3(0, 0, 0), Vec3(1, 0, 0), 32);
  c.validate();
  CHECK_FALSE(c.closed);
  for (int i = 0; i < c.size(); ++i) CHECK(std::abs(c.curvature(i)) < 1e-8);
}

TEST_CASE("trefoil resampling is embedded") {
  auto c = make_trefoil_curve(256);
  c.validate();
  // Independent brute-force pairwise-distance check.
  CHECK(oracle::min_pairwise_distance(c.samples, true, 3) > 2.0 * c.h);
}

TEST_CASE("curve_from_points rejects bad input") {
  CHECK_THROWS_AS(curve_from_points({Vec3(0, 0, 0), Vec3(1, 0, 0)}, false, 0.1), Error);
  // Self-intersecting polyline: figure-eight in the plane (crossing at 0).
  std::vector<Vec3> eight;
  for (int i = 0; i < 64; ++i) {
    double t = 2 * M_PI * i / 64;
    eight.emplace_back(std::sin(2 * t), std::sin(t), 0.0);
  }
  auto c = curve_from_points(eight, true, 0.05);
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("resampling is idempotent") {
  auto c = make_trefoil_curve(200);
  auto c2 = resample(c, c.h);
  REQUIRE(c2.size() == c.size());
  double worst = 0;
  for (int i = 0; i < c.size(); ++i) {
    double best = 1e300;
    for (int j = 0; j < c2.size(); ++j)
      best = std::min(best, (c.samples[i] - c2.samples[j]).norm());
    worst = std::max(worst, best);
  }
  CHECK(worst < c.h / 100);
}

TEST_CASE("profile curvature: sphere, cylinder, graph dumbbell") {
  auto sph = make_sphere_profile(1.0, 1.0 / 128);
  auto cd = principal_curvatures_profile(sph, 0.0);
  CHECK(cd.lambda[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(cd.lambda[1] == doctest::Approx(1.0).epsilon(1e-3));

  auto cyl = make_cylinder_profile(0.5, 2.0, 1.0 / 64);
  auto cc = principal_curvatures_profile(cyl, 0.3);
  CHECK(cc.lambda[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(cc.lambda[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(cc.two_convex_margin() == doctest::Approx(2.0).epsilon(1e-9));

  // u(x) = 0.6 + 0.4 cos x against the finite-difference oracle.
  ProfileSurface wavy;
  wavy.n = 2;
  wavy.x0 = -1.0;
  wavy.hx = 1.0 / 256;
  int m = static_cast<int>(2.0 / wavy.hx) + 1;
  wavy.u.resize(m);
  for (int i = 0; i < m; ++i) wavy.u[i] = 0.6 + 0.4 * std::cos(wavy.x_at(i));
  auto cw = principal_curvatures_profile(wavy, 0.0);
  auto [l1, l2] = oracle::shape_operator_fd(
      [](double x, double th) {
        double u = 0.6 + 0.4 * std::cos(x);
        return Vec3(x, u * std::cos(th), u * std::sin(th));
      },
      0.0, 0.0, 1e-4, 1e-4, Vec3(0, 1, 0));
  CHECK(cw.lambda[0] == doctest::Approx(std::min(l1, l2)).epsilon(0.01));
  CHECK(cw.lambda[1] == doctest::Approx(std::max(l1, l2)).epsilon(0.01));

  CHECK_THROWS_AS(principal_curvatures_profile(sph, 2.0), Error);
}

TEST_CASE("tube curvature matches torus values and oracle") {
  auto circle = make_circle_curve(3.0, 256);
  auto T = tubular_neighborhood(circle, 1.0);
  // theta measured from the principal normal (pointing to the circle
  // center): theta = 0 is the inner equator, theta = pi the outer.
  auto inner = principal_curvatures_tube(T, 0.0, 0.0);
  CHECK(inner.lambda[0] == doctest::Approx(-0.5).epsilon(0.01));
  CHECK(inner.lambda[1] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(inner.H() == doctest::Approx(0.5).epsilon(0.02));
  auto outer = principal_curvatures_tube(T, 0.0, M_PI);
  CHECK(outer.lambda[0] == doctest::Approx(0.25).epsilon(0.01));
  CHECK(outer.lambda[1] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(outer.H() == doctest::Approx(1.25).epsilon(0.01));

  // Independent FD oracle on the torus parameterization (psi from outer).
  auto [o1, o2] = oracle::shape_operator_fd(
      [](double phi, double psi) {
        double w = 3.0 + 1.0 * std::cos(psi);
        return Vec3(w * std::cos(phi), w * std::sin(phi), std::sin(psi));
      },
      0.1, 0.0, 1e-4, 1e-4, Vec3(std::cos(0.1), std::sin(0.1), 0));
  CHECK(outer.lambda[0] == doctest::Approx(std::min(o1, o2)).epsilon(0.01));
  CHECK(outer.lambda[1] == doctest::Approx(std::max(o1, o2)).epsilon(0.01));

  // Straight skeleton: cylinder values.
  auto seg = make_segment_curve(Vec3(0, 0, 0), Vec3(2, 0, 0), 64);
  auto C = tubular_neighborhood(seg, 0.3);
  auto cc = principal_curvatures_tube(C, 1.0, 1.234);
  CHECK(cc.lambda[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(cc.lambda[1] == doctest::Approx(1.0 / 0.3).epsilon(1e-9));

  // Degenerate section.
  auto small_circle = make_circle_curve(1.0, 128);
  CHECK_THROWS_AS(tubular_neighborhood(small_circle, 1.5), Error);
}

TEST_CASE("mesh curvature estimation") {
  auto sphere = make_icosphere(1.0, 4);
  auto vf = sphere.vertex_faces();
  for (int v = 0; v < sphere.nv(); v += 97) {
    auto cd = estimate_curvatures_mesh(sphere, v);
    CHECK(cd.lambda[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(cd.lambda[1] == doctest::Approx(1.0).epsilon(0.02));
  }

  auto circle = make_circle_curve(3.0, 512);
  auto T = tubular_neighborhood(circle, 1.0);
  auto tor = mesh_tube(T, 0.05);
  // Find a vertex near the inner equator (distance 2 from origin, z ~ 0).
  int best = 0;
  double bd = 1e300;
  for (int v = 0; v < tor.nv(); ++v) {
    double d = std::abs(Vec3(tor.V[v].x(), tor.V[v].y(), 0).norm() - 2.0) +
               std::abs(tor.V[v].z());
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  auto cd = estimate_curvatures_mesh(tor, best);
  CHECK(cd.lambda[0] == doctest::Approx(-0.5).epsilon(0.03));
  CHECK(cd.lambda[1] == doctest::Approx(1.0).epsilon(0.03));

  auto flat = make_flat_square_mesh(12);
  // Interior vertex.
  int mid = (12 / 2) * 13 + 6;
  auto fd = estimate_curvatures_mesh(flat, mid);
  CHECK(std::abs(fd.lambda[0]) < 1e-9);
  CHECK(std::abs(fd.lambda[1]) < 1e-9);
}

TEST_CASE("euler characteristics of basic meshes") {
  auto sphere = make_icosphere(1.0, 2);
  CHECK(euler_characteristic(sphere) == 2);
  CHECK(sphere.is_closed());

  auto circle = make_circle_curve(1.0, 128);
  auto T = tubular_neighborhood(circle, 0.2);
  auto tor = mesh_tube(T, 0.05);
  CHECK(euler_characteristic(tor) == 0);
  CHECK(tor.is_closed());

  TriMesh two = make_icosphere(1.0, 2);
  two.append(make_icosphere(1.0, 2, Vec3(5, 0, 0)));
  CHECK(euler_characteristic(two) == 4);
}

TEST_CASE("profile and revolution meshes are watertight with right topology") {
  auto sph = make_sphere_profile(1.0, 1.0 / 64);
  auto M = mesh_from(sph, 0.08);
  CHECK(M.is_closed());
  CHECK(euler_characteristic(M) == 2);

  auto torus = make_torus_revolution(3.0, 1.0, 1.0 / 32);
  auto MT = mesh_revolution(torus, 0.1);
  MT.validate(0.01);
  CHECK(euler_characteristic(MT) == 0);
}

TEST_CASE("trefoil tube mesh is embedded with chi 0") {
  auto c = make_trefoil_curve(384);
  auto T = tubular_neighborhood(c, 0.05);
  auto M = mesh_tube(T, 0.04);
  CHECK(euler_characteristic(M) == 0);
  CHECK_FALSE(M.self_intersects(0.004));
  // Fat tube around a small circle must be rejected.
  auto small_circle = make_circle_curve(1.0, 96);
  CHECK_THROWS_AS(tubular_neighborhood(small_circle, 1.5), Error);
}

TEST_CASE("exact curvature agrees with mesh estimate at fine resolution") {
  // Resolution <= 0.02 * (min curvature radius); sample a few vertices.
  auto torus = make_torus_revolution(3.0, 1.0, 1.0 / 64);
  auto M = mesh_revolution(torus, 0.02);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, M.nv() - 1);
  for (int k = 0; k < 25; ++k) {
    int v = pick(rng);
    auto est = estimate_curvatures_mesh(M, v);
    // Exact: locate (z, rho) of the vertex.
    double rho = Vec3(M.V[v].x(), M.V[v].y(), 0).norm();
    double zz = M.V[v].z();
    double psi = std::atan2(zz, rho - 3.0);
    double lam_rot = std::cos(psi) / (3.0 + std::cos(psi));
    double lam_gen = 1.0;
    double lo = std::min(lam_rot, lam_gen), hi = std::max(lam_rot, lam_gen);
    CHECK(est.lambda[0] == doctest::Approx(lo).epsilon(0.03));
    CHECK(est.lambda[1] == doctest::Approx(hi).epsilon(0.03));
  }
}

TEST_CASE("mesh export import round trip") {
  auto sphere = make_icosphere(1.0, 2);
  write_mesh(sphere, "rt.obj", MeshFormat::Obj);
  auto back = read_mesh("rt.obj");
  CHECK(euler_characteristic(back) == 2);
  write_mesh(sphere, "rt.off", MeshFormat::Off);
  auto back2 = read_mesh("rt.off");
  CHECK(euler_characteristic(back2) == 2);
  CHECK(back2.nv() == sphere.nv());
  CHECK_THROWS_AS(write_mesh(sphere, "/nonexistent_dir/x.obj", MeshFormat::Obj), Error);
}

TEST_CASE("curve json round trip") {
  auto c = make_circle_curve(2.0, 64);
  auto text = curve_to_json(c);
  auto back = curve_from_json(text);
  CHECK(back.closed);
  CHECK(back.total_length == doctest::Approx(c.total_length).epsilon(1e-6));
}

TEST_CASE("curvature data invariants") {
  auto cd = make_curvature({0.5, -1.0, 2.0});
  CHECK(cd.lambda[0] == -1.0);
  CHECK(cd.lambda[2] == 2.0);
  CHECK(cd.H() == doctest::Approx(1.5));
  CHECK(cd.norm_A() == doctest::Approx(std::sqrt(0.25 + 1 + 4)));
  CHECK(cd.two_convex_margin() == doctest::Approx(-0.5));
}
