#include "doctest.h"

#include "cpnlab/constructions.hpp"

using namespace cpnlab;

TEST_CASE("theta energies follow the closed form") {
  const QuadratureGrid g = build_grid(Manifold::sphere(3), 32, GridScheme::ProductAngles);
  // scipy quad of (1/2) int 3 lambda_t^2 over S^3.
  const std::vector<std::pair<double, double>> oracle = {
      {1.0, 29.608813203268074}, {2.0, 26.318945069571622}, {4.0, 18.949640450091565}, {8.0, 11.69730891980961}};
  for (const auto& [t, e] : oracle) {
    CAPTURE(t);
    CHECK(p_energy(make_theta(t), g, 2.0).value == doctest::Approx(e).epsilon(5e-3));
  }
}

TEST_CASE("capped theta energies against one-dimensional quadrature") {
  // Collar 4 pi (pi/2 - psi_t) plus cap 6 pi int_0^psi_t lambda^2 sin^2, by scipy quad.
  const std::vector<std::pair<double, double>> oracle = {{2.0, 17.67713386017487},
                                                         {4.0, 18.799029196387306},
                                                         {8.0, 19.282677171684334},
                                                         {16.0, 19.512719739477674}};
  const Manifold RP3 = Manifold::real_projective(3);
  for (const auto& [t, e] : oracle) {
    CAPTURE(t);
    const QuadratureGrid g = build_polar_grid(RP3, 24, {theta_cap_angle(t)});
    CHECK(p_energy(make_capped_theta(t), g, 2.0).value == doctest::Approx(e).epsilon(5e-4));
  }
}

TEST_CASE("theta helpers") {
  CHECK(theta_cap_angle(1.0) == doctest::Approx(kPi / 2));
  CHECK(theta_polar(3.0, theta_cap_angle(3.0)) == doctest::Approx(kPi / 2));
  CHECK(theta_conformal_factor(2.0, 1e-9) == doctest::Approx(2.0));
  CHECK(theta_conformal_factor(1.0, 1.2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_theta(1.0)(-Vec::Unit(4, 0)), ResampleRequest);
}

TEST_CASE("rational curves") {
  CHECK(common_zero_margin(conic_spec()) > 0.1);
  RationalCurveSpec bad = line_spec();
  bad.coeffs[1] = bad.coeffs[0];
  CHECK_THROWS_AS(make_rational_curve(bad), ConstructionError);
  const RationalCurveSpec r = random_curve_spec(2, 3, 11);
  CHECK(r.degree == 3);
  CHECK(r.coeffs.size() == 3u);
  const MapObject F = make_rational_curve(veronese_spec());
  // The Veronese curve is an isometric immersion scaled by 2.
  RngStream rng(2);
  const Point x = random_point(F.domain(), rng);
  const GramMatrix G = pullback_gram(F, x, tangent_frame(F.domain(), x));
  CHECK(G.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(G.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("projective dilation is holomorphic and fixes the axes") {
  const MapObject T = make_projective_dilation(2, 5.0);
  const Manifold CP2 = Manifold::complex_projective(2);
  CHECK(distance(CP2, T(Vec::Unit(6, 4)), Vec::Unit(6, 4)) < 1e-14);
  CHECK(distance(CP2, T(Vec::Unit(6, 0)), Vec::Unit(6, 0)) < 1e-14);
  Point x = Vec::Zero(6);
  x[0] = x[4] = std::sqrt(0.5);
  // [1 : 0 : 1] -> [5 : 0 : 1].
  CHECK(distance(CP2, T(x), x) == doctest::Approx(std::acos(6 / std::sqrt(52.0))).epsilon(1e-12));
}

TEST_CASE("perturbed identities stay close and move") {
  for (const Manifold& M : {Manifold::sphere(2), Manifold::real_projective(3), Manifold::complex_projective(2)}) {
    const MapObject F = make_perturbed_identity(M, 0.2);
    RngStream rng(3);
    double moved = 0.0;
    for (int k = 0; k < 50; ++k) {
      const Point x = random_point(M, rng);
      const double d = distance(M, F(x), x);
      CHECK(d <= 0.2 * perturbation_field(M, x).norm() + 1e-12);
      moved = std::max(moved, d);
    }
    CHECK(moved > 1e-3);
  }
}

TEST_CASE("eigenmap lands on the unit sphere") {
  const MapObject F = make_hermitian_eigenmap();
  RngStream rng(4);
  for (int k = 0; k < 10; ++k) {
    const Point x = random_point(F.domain(), rng);
    CHECK(F(x).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((F(x) - F(cscale(std::polar(1.0, 2.0), x))).norm() < 1e-12);
  }
}

TEST_CASE("product lift and inclusions") {
  const MapObject P = standard_map("product_lift(identity(S2),0.5)");
  const Point x = Vec::Unit(3, 1);
  CHECK(P(x).size() == 6);
  CHECK(energy_density(P, x) == doctest::Approx(2.0 * (1.0 + 0.25)).epsilon(1e-8));
  CHECK(energy_density(make_complex_inclusion(1, 3), Point(Vec::Unit(4, 0))) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(energy_density(make_real_inclusion(2, 4), Point(Vec::Unit(3, 0))) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("catalog keys parse") {
  for (const auto& k : corpus_keys()) {
    CAPTURE(k);
    CHECK_NOTHROW(standard_map(k));
  }
  CHECK(corpus_keys().size() >= 20u);
  CHECK_THROWS(standard_map("nonsense(S2)"));
  CHECK_THROWS(parse_manifold("XP2"));
  CHECK(parse_manifold("CP3") == Manifold::complex_projective(3));
}

TEST_CASE("squeeze target for the identity") {
  const QuadratureGrid g = build_grid(Manifold::complex_projective(2), 24, GridScheme::ProductAngles);
  const QuadratureGrid l = build_grid(Manifold::complex_projective(1), 4, GridScheme::Mesh);
  const SqueezeResult r = squeeze_limit(identity_map(Manifold::complex_projective(2)), {1.0, 4.0}, g, l);
  // C_2 E_2(id on a line) = pi * pi.
  CHECK(r.target == doctest::Approx(kPi * kPi).epsilon(1e-6));
  CHECK(r.energies[0].value == doctest::Approx(kPi * kPi).epsilon(1e-10));
  CHECK(r.energies[1].value == doctest::Approx(kPi * kPi).epsilon(1e-4));
}
