#include "doctest.h"

#include <sstream>

#include "cpnlab/constructions.hpp"
#include "cpnlab/maps.hpp"

using namespace cpnlab;

TEST_CASE("tangent frames are orthonormal, unitary on CP^N") {
  for (const Manifold& M : {Manifold::sphere(3), Manifold::real_projective(2), Manifold::complex_projective(2)}) {
    RngStream rng(1);
    const Point x = random_point(M, rng);
    for (const TangentFrame& f : {tangent_frame(M, x), random_frame(M, x, rng)}) {
      REQUIRE(static_cast<int>(f.vectors.size()) == M.dim());
      CHECK(frame_gram_residual(f) < 1e-12);
      if (M.is_complex()) {
        CHECK(f.unitary);
        for (std::size_t i = 0; i < f.vectors.size(); i += 2)
          CHECK((complex_structure(M, x, f.vectors[i]) - f.vectors[i + 1]).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("finite differences match analytic differentials") {
  for (const std::string key : {"rational(conic)", "theta(3)", "eigenmap", "dilation(CP2,4)", "rational(random3,7)"}) {
    CAPTURE(key);
    const MapObject F = standard_map(key);
    REQUIRE(F.has_analytic_differential());
    RngStream rng(2);
    const Point x = random_point(F.domain(), rng);
    const Point fx = F(x);
    for (const Vec& v : tangent_frame(F.domain(), x).vectors) {
      const Vec exact = F.analytic_differential(x, fx, v);
      CHECK((directional(F, x, fx, v, kDefaultDiffStep, DiffMode::FiniteDifference) - exact).norm() < 1e-6);
      CHECK((directional(F, x, fx, v, 1e-2, DiffMode::Richardson) - exact).norm() < 1e-6);
    }
  }
}

TEST_CASE("composition uses the chain rule") {
  const MapObject F = compose(standard_map("dilation(CP2,2)"), standard_map("dilation(CP2,3)"));
  const MapObject G = standard_map("dilation(CP2,6)");
  RngStream rng(3);
  const Point x = random_point(F.domain(), rng);
  CHECK(distance(F.codomain(), F(x), G(x)) < 1e-12);
  const TangentFrame fr = tangent_frame(F.domain(), x);
  CHECK(pullback_gram(F, x, fr).trace() == doctest::Approx(pullback_gram(G, x, fr).trace()).epsilon(1e-10));
}

TEST_CASE("Gram eigenvalues of isometries and homotheties") {
  const Manifold S2 = Manifold::sphere(2);
  const Point x = Vec::Unit(3, 2);
  const GramMatrix g = pullback_gram(make_sphere_homothety(2, 3.0), x, tangent_frame(S2, x));
  CHECK(g.eigenvalues[0] == doctest::Approx(9.0));
  CHECK(g.eigenvalues[1] == doctest::Approx(9.0));
  CHECK(g.symmetry_residual() < 1e-12);
  const GramMatrix e = pullback_gram(make_hermitian_eigenmap(), Point(Vec::Unit(6, 0)),
                                     tangent_frame(Manifold::complex_projective(2), Vec::Unit(6, 0)));
  for (int i = 0; i < 4; ++i) CHECK(e.eigenvalues[i] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("grid masses") {
  const std::vector<std::pair<Manifold, double>> cases = {{Manifold::sphere(2), 4 * kPi},
                                                          {Manifold::sphere(2, 2.0), 16 * kPi},
                                                          {Manifold::real_projective(2), 2 * kPi},
                                                          {Manifold::complex_projective(1), kPi}};
  for (const auto& [M, vol] : cases) {
    CAPTURE(M.name());
    CHECK(build_grid(M, 3, GridScheme::Mesh).weight_sum() == doctest::Approx(vol).epsilon(1e-10));
    CHECK(build_grid(M, 500, GridScheme::MonteCarlo, 4).weight_sum() == doctest::Approx(vol).epsilon(1e-12));
  }
  for (const auto& [M, vol] : std::vector<std::pair<Manifold, double>>{{Manifold::sphere(3), 2 * kPi * kPi},
                                                                       {Manifold::real_projective(3), kPi * kPi},
                                                                       {Manifold::complex_projective(2), kPi * kPi / 2},
                                                                       {Manifold::complex_projective(1), kPi}})
    CHECK(build_grid(M, 8, GridScheme::ProductAngles).weight_sum() == doctest::Approx(vol).epsilon(1e-10));
  CHECK_THROWS_AS(build_grid(Manifold::sphere(3), 2, GridScheme::Mesh), DomainError);
}

TEST_CASE("monte carlo grids are reproducible") {
  const Manifold M = Manifold::complex_projective(2);
  const QuadratureGrid a = build_grid(M, 100, GridScheme::MonteCarlo, 9);
  const QuadratureGrid b = build_grid(M, 100, GridScheme::MonteCarlo, 9);
  const QuadratureGrid c = build_grid(M, 100, GridScheme::MonteCarlo, 10);
  CHECK((a.nodes[17] - b.nodes[17]).norm() == 0.0);
  CHECK((a.nodes[17] - c.nodes[17]).norm() > 0.0);
}

TEST_CASE("product grids integrate polynomials") {
  // Second moment of a coordinate over S^3: vol / 4.
  const QuadratureGrid g = build_grid(Manifold::sphere(3), 16, GridScheme::ProductAngles);
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) m += g.weights[i] * g.nodes[i][2] * g.nodes[i][2];
  CHECK(m == doctest::Approx(kPi * kPi / 2).epsilon(1e-10));
  // |z_0|^4 over CP^2: vol * 2 / ((N+1)(N+2)) = pi^2 / 12.
  const QuadratureGrid c = build_grid(Manifold::complex_projective(2), 16, GridScheme::ProductAngles);
  double q = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) q += c.weights[i] * std::pow(std::norm(to_complex(c.nodes[i])[0]), 2);
  CHECK(q == doctest::Approx(kPi * kPi / 12).epsilon(1e-10));
}

TEST_CASE("gauss-legendre") {
  std::vector<double> x, w;
  gauss_legendre(6, 0.0, 2.0, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 11);
  CHECK(s == doctest::Approx(4096.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("tangent direction quadrature integrates quadratics") {
  for (const Manifold& M : {Manifold::sphere(2), Manifold::real_projective(3), Manifold::complex_projective(2)}) {
    RngStream rng(4);
    const Point x = random_point(M, rng);
    const DirectionSet ds = unit_tangent_quadrature(M, x, 6, &rng);
    const int n = M.dim();
    double total = 0.0;
    Mat mom = Mat::Zero(M.ambient_dim(), M.ambient_dim());
    for (std::size_t k = 0; k < ds.directions.size(); ++k) {
      total += ds.weights[k];
      mom += ds.weights[k] * ds.directions[k] * ds.directions[k].transpose();
    }
    CHECK(total == doctest::Approx(sphere_volume(n - 1)));
    CHECK(mom.trace() == doctest::Approx(sphere_volume(n - 1)));
    const Vec e = tangent_frame(M, x).vectors[0];
    CHECK(e.dot(mom * e) == doctest::Approx(sphere_volume(n - 1) / n).epsilon(1e-12));
  }
}

TEST_CASE("hopf section and map") {
  RngStream rng(5);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Vector3d p = random_point(Manifold::sphere(2), rng);
    CHECK((hopf_map(hopf_section(p)) - p).norm() < 1e-12);
  }
}

TEST_CASE("grid CSV has one row per node") {
  std::ostringstream out;
  write_grid_csv(build_grid(Manifold::sphere(2), 1, GridScheme::Mesh), out);
  const std::string s = out.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 43);
  CHECK(grid_scheme_from_string(to_string(GridScheme::ProductAngles)) == GridScheme::ProductAngles);
}
