#include "doctest.h"

#include "cpnlab/constructions.hpp"
#include "cpnlab/energy.hpp"

using namespace cpnlab;

TEST_CASE("energies of isometries and homotheties") {
  const Manifold S2 = Manifold::sphere(2);
  const QuadratureGrid g = build_grid(S2, 4, GridScheme::Mesh);
  CHECK(p_energy(identity_map(S2), g, 2.0).value == doctest::Approx(4 * kPi).epsilon(1e-10));
  // |dF|^2 = 2 k^2.
  CHECK(p_energy(make_sphere_homothety(2, 2.0), g, 2.0).value == doctest::Approx(16 * kPi).epsilon(1e-10));
  CHECK(p_energy(make_double_cover(), g, 2.0).value == doctest::Approx(4 * kPi).epsilon(1e-8));
  CHECK(p_energy(standard_map("constant(S2)"), g, 2.0).value == 0.0);

  // |dF|^2 = 3 |v|^2 on CP^2, so E_2 = 6 vol = 3 pi^2.
  const QuadratureGrid c = build_grid(Manifold::complex_projective(2), 6, GridScheme::ProductAngles);
  CHECK(p_energy(make_hermitian_eigenmap(), c, 2.0).value == doctest::Approx(3 * kPi * kPi).epsilon(1e-8));
}

TEST_CASE("squash energy against one-dimensional quadrature") {
  // scipy quad of (1/2) int (f'^2 + sin^2 f / sin^2) 2 pi sin for f = t + 0.2 sin 2t.
  const QuadratureGrid g = build_grid(Manifold::sphere(2), 5, GridScheme::Mesh);
  CHECK(p_energy(make_latitude_squash(0.2), g, 2.0).value == doctest::Approx(13.071755758827434).epsilon(1e-3));
}

TEST_CASE("monte carlo energies carry a standard error") {
  const QuadratureGrid g = build_grid(Manifold::complex_projective(2), 4000, GridScheme::MonteCarlo, 3);
  const EnergyValue e = p_energy(standard_map("perturbed(CP2,0.2)"), g, 2.0);
  REQUIRE(e.stderr_value.has_value());
  CHECK(*e.stderr_value > 0.0);
  CHECK(*e.stderr_value < 0.05 * e.value);
  CHECK(e.seed == 3u);
  CHECK(e.resolution == 4000);
  const EnergyValue m = p_energy(identity_map(Manifold::sphere(2)), build_grid(Manifold::sphere(2), 2, GridScheme::Mesh), 2.0);
  CHECK_FALSE(m.stderr_value.has_value());
}

TEST_CASE("singular nodes are dropped and the mass rescaled") {
  // theta_t is singular at -e_0; a grid containing it must still integrate.
  QuadratureGrid g = build_grid(Manifold::sphere(3), 200, GridScheme::MonteCarlo, 1);
  g.nodes[0] = -Vec::Unit(4, 0);
  const EnergyValue e = p_energy(make_theta(1.0), g, 2.0);
  CHECK(e.dropped == 1u);
  CHECK(e.value == doctest::Approx(3 * kPi * kPi).epsilon(1e-12));
  CHECK_FALSE(e.accuracy_warning);
}

TEST_CASE("croke average equals the trace") {
  for (const std::string key : {"perturbed(S2,0.2)", "perturbed(RP3,0.2)", "perturbed(CP2,0.2)", "eigenmap"}) {
    const MapObject F = standard_map(key);
    for (int k = 0; k < 10; ++k) {
      RngStream rng(4, k);
      const Point x = random_point(F.domain(), rng);
      CHECK(croke_density(F, x, 6, {}, &rng) == doctest::Approx(energy_density(F, x)).epsilon(1e-8));
    }
  }
}

TEST_CASE("pullback volume and area") {
  const QuadratureGrid g = build_grid(Manifold::complex_projective(1), 4, GridScheme::Mesh);
  CHECK(surface_area(standard_map("rational(conic)"), g).value == doctest::Approx(2 * kPi).epsilon(1e-3));
  CHECK(pullback_volume(make_sphere_homothety(2, 2.0), build_grid(Manifold::sphere(2), 3, GridScheme::Mesh)).value ==
        doctest::Approx(16 * kPi).epsilon(1e-10));
}

TEST_CASE("elementary and hoelder bounds") {
  // Equality for isometries.
  CHECK(elementary_bound(2.0, 2, 4 * kPi, 4 * kPi) == doctest::Approx(4 * kPi));
  CHECK(elementary_bound(4.0, 2, 4 * kPi, 4 * kPi) == doctest::Approx(8 * kPi));
  CHECK_THROWS_AS(elementary_bound(1.0, 2, 4 * kPi, 4 * kPi), DomainError);
  // id_{CP^2}: E_4 = (1/2) vol 16 = 4 pi^2.
  CHECK(holder_bound(4.0, kPi * kPi / 2, kPi * kPi) == doctest::Approx(4 * kPi * kPi));
}

TEST_CASE("curve lengths") {
  const Manifold RP3 = Manifold::real_projective(3);
  const GeodesicLoop g{RP3, Vec::Unit(4, 0), Vec::Unit(4, 1)};
  CHECK(curve_length(identity_map(RP3), g) == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(curve_length(make_rp_homothety(3, 2.0), g) == doctest::Approx(2 * kPi).epsilon(1e-10));
  const GeodesicLoop c{Manifold::complex_projective(2), Vec::Unit(6, 0), Vec::Unit(6, 2)};
  CHECK(curve_length(identity_map(c.manifold), c) == doctest::Approx(kPi).epsilon(1e-10));
}
