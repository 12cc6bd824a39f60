#include "doctest.h"

#include <sstream>

#include "cpnlab/constructions.hpp"
#include "cpnlab/flow.hpp"
#include "cpnlab/mesh.hpp"

using namespace cpnlab;

TEST_CASE("icosphere") {
  const TriMesh m = icosphere(2);
  CHECK(m.vertices.size() == 162u);
  CHECK(m.triangles.size() == 320u);
  CHECK(edges(m).size() == 480u);
  double total = 0.0;
  for (double a : voronoi_areas(m)) total += a;
  CHECK(total == doctest::Approx(4 * kPi).epsilon(1e-12));
  total = 0.0;
  for (double a : barycentric_areas(m)) total += a;
  CHECK(total == doctest::Approx(4 * kPi).epsilon(1e-12));
  const auto anti = antipodes(m);
  for (std::size_t v = 0; v < anti.size(); ++v) CHECK((m.vertices[anti[v]] + m.vertices[v]).norm() < 1e-12);
  CHECK(spherical_triangle_area(Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()) ==
        doctest::Approx(kPi / 2));
}

TEST_CASE("mesh maps of S^2 and RP^2") {
  const MeshMap s = make_mesh_map(identity_map(Manifold::sphere(2)), 3);
  const MeshMap r = make_mesh_map(identity_map(Manifold::real_projective(2)), 3);
  CHECK(r.size() * 2 == s.size());
  for (const MeshMap* m : {&s, &r}) {
    const MeshMapResiduals res = check_mesh_map(*m);
    CHECK(res.weight_asymmetry < 1e-12);
    CHECK(res.area_error < 1e-12);
    CHECK(res.image_residual < 1e-12);
  }
  CHECK(discrete_energy(s) == doctest::Approx(2 * discrete_energy(r)).epsilon(1e-10));
  CHECK_THROWS_AS(make_mesh_map(identity_map(Manifold::complex_projective(2)), 2), DomainError);
}

TEST_CASE("discrete energy converges to the smooth energy") {
  // Level 3/4/5 relative errors of the identity: about -2.9e-3, -7.2e-4, -1.8e-4.
  double prev = 1.0;
  for (int level : {3, 4, 5}) {
    const double rel = discrete_energy(make_mesh_map(identity_map(Manifold::sphere(2)), level)) / (4 * kPi) - 1.0;
    CHECK(std::abs(rel) < prev / 3.0);
    prev = std::abs(rel);
  }
  CHECK(prev < 5e-4);
  const QuadratureGrid g = build_grid(Manifold::sphere(2), 5, GridScheme::Mesh);
  const MapObject sq = make_latitude_squash(0.2);
  CHECK(discrete_energy(make_mesh_map(sq, 5)) == doctest::Approx(p_energy(sq, g, 2.0).value).epsilon(1e-2));
}

TEST_CASE("discrete tension of the identity vanishes by symmetry of the mesh") {
  const MeshMap m = make_mesh_map(identity_map(Manifold::sphere(2)), 3);
  CHECK(tension_sup(discrete_tension(m)) < 0.2);
  const MeshMap c = make_mesh_map(constant_map(Manifold::sphere(2), Manifold::sphere(2), Vec::Unit(3, 0)), 3);
  CHECK(tension_sup(discrete_tension(c)) == 0.0);
  CHECK(discrete_energy(c) == 0.0);
}

TEST_CASE("conformality defect") {
  CHECK(conformality_defect(make_mesh_map(identity_map(Manifold::sphere(2)), 3)).value < 1e-3);
  const ConformalityDefect d = conformality_defect(make_mesh_map(make_latitude_squash(0.3), 3));
  CHECK(d.value > 1e-2);
  CHECK(d.skipped == 0);
  const ConformalityDefect c =
      conformality_defect(make_mesh_map(constant_map(Manifold::sphere(2), Manifold::sphere(2), Vec::Unit(3, 0)), 2));
  CHECK(c.value < 1e-6);
}

TEST_CASE("flow descends monotonically") {
  const MeshMap start = make_mesh_map(make_perturbed_identity(Manifold::sphere(2), 0.2), 2);
  FlowOptions opt;
  opt.iterations = 300;
  opt.defect_every = 100;
  const FlowResult r = flow_minimize(start, opt);
  REQUIRE(r.log.size() >= 2u);
  for (std::size_t k = 1; k < r.log.size(); ++k) CHECK(r.log[k].energy <= r.log[k - 1].energy);
  CHECK(r.log.back().energy < r.log.front().energy);
  CHECK(std::isnan(r.log[1].defect));
  CHECK_FALSE(std::isnan(r.log.front().defect));
  CHECK(r.final_tension == doctest::Approx(tension_sup(discrete_tension(r.map))));
}

TEST_CASE("flow stalls when every step is rejected") {
  // A huge initial step overshoots; with no halvings allowed it must stall.
  const MeshMap start = make_mesh_map(make_perturbed_identity(Manifold::sphere(2), 0.2), 2);
  FlowOptions opt;
  opt.step = 50.0;
  opt.max_halvings = 0;
  CHECK_THROWS_AS(flow_minimize(start, opt), StallError);
}

TEST_CASE("interpolation reproduces vertex images") {
  const MeshMap m = make_mesh_map(make_perturbed_identity(Manifold::sphere(2), 0.2), 3);
  const MapObject I = interpolate(m);
  CHECK(I.smoothness() == Smoothness::Lipschitz);
  for (std::size_t v = 0; v < m.size(); v += 37) CHECK(distance(m.codomain, I(m.positions[v]), m.image[v]) < 1e-10);
  const MeshMap r = make_mesh_map(identity_map(Manifold::real_projective(2)), 2);
  const MapObject J = interpolate(r);
  RngStream rng(2);
  const Point x = random_point(Manifold::real_projective(2), rng);
  // Barycentric averaging reproduces the identity up to the mesh scale.
  CHECK(distance(r.codomain, J(x), x) < 1e-3);
  CHECK(distance(r.codomain, J(-x), J(x)) < 1e-12);
}

TEST_CASE("mesh and flow CSV") {
  const TriMesh m = icosphere(1);
  std::stringstream v, t;
  write_mesh_csv(m, v, t);
  const TriMesh back = read_mesh_csv(v, t);
  REQUIRE(back.vertices.size() == m.vertices.size());
  REQUIRE(back.triangles.size() == m.triangles.size());
  CHECK((back.vertices[7] - m.vertices[7]).norm() == 0.0);
  CHECK(back.triangles[5] == m.triangles[5]);
  std::ostringstream log, mm;
  write_flow_log_csv({{0, 1.0, 0.5, 1e-3, 0.1}, {1, 0.9, 0.4, 1e-3, std::nan("")}}, log);
  CHECK(log.str().rfind("iteration,energy", 0) == 0);
  write_mesh_map_csv(make_mesh_map(identity_map(Manifold::sphere(2)), 1), mm);
  const std::string s = mm.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 43);
}
