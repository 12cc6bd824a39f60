#include "doctest.h"

#include <sstream>

#include "cpnlab/constructions.hpp"
#include "cpnlab/harmonic.hpp"

using namespace cpnlab;

TEST_CASE("second fundamental form of a round-sphere inclusion") {
  // S^2 -> S^3 equatorial: totally geodesic. Homothety into S^2(2) too.
  const MapObject inc = make_real_inclusion(2, 3);
  RngStream rng(1);
  const Point x = random_point(inc.domain(), rng);
  CHECK(second_form_sup(inc, x) < 1e-6);
  CHECK(second_form_sup(make_sphere_homothety(2, 2.0), x) < 1e-6);
  // The conic has |alpha(e, e)| = 2 for a unit e.
  const MapObject C = standard_map("rational(conic)");
  const Point y = random_point(C.domain(), rng);
  const Vec e = tangent_frame(C.domain(), y).vectors[0];
  CHECK(second_form_diagonal(C, y, C(y), e).norm() == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("alpha is symmetric and bilinear") {
  const MapObject F = standard_map("perturbed(CP2,0.2)");
  RngStream rng(2);
  const Point x = random_point(F.domain(), rng);
  const Point fx = F(x);
  const Vec v = random_unit_tangent(F.domain(), x, rng), w = random_unit_tangent(F.domain(), x, rng);
  CHECK((second_form(F, x, fx, v, w) - second_form(F, x, fx, w, v)).norm() < 1e-8);
  CHECK((second_form_diagonal(F, x, fx, 2.0 * v) - 4.0 * second_form_diagonal(F, x, fx, v)).norm() < 1e-5);
  const SecondFormSample s = second_fundamental_form(F, x, v, w);
  CHECK((s.value - second_form(F, x, fx, v, w)).norm() < 1e-14);
}

TEST_CASE("tension vanishes on harmonic maps and not on the squash") {
  RngStream rng(3);
  for (const std::string key : {"identity(CP2)", "rational(veronese)", "eigenmap", "conjugation", "double_cover"}) {
    const MapObject F = standard_map(key);
    const Point x = random_point(F.domain(), rng);
    CHECK(tension(F, x).norm() < 1e-6);
    CHECK(tension(F, x, random_frame(F.domain(), x, rng)).norm() < 1e-6);
  }
  // Squash: tension of a latitude map theta -> f(theta) is f'' + cot(theta) f' - sin 2f / (2 sin^2 theta).
  const MapObject S = make_latitude_squash(0.2);
  const double t = 0.9, f = t + 0.2 * std::sin(2 * t), fp = 1 + 0.4 * std::cos(2 * t), fpp = -0.8 * std::sin(2 * t);
  const double expect = fpp + fp / std::tan(t) - std::sin(2 * f) / (2 * std::sin(t) * std::sin(t));
  Point x(3);
  x << std::sin(t), 0.0, std::cos(t);
  CHECK(tension(S, x).norm() == doctest::Approx(std::abs(expect)).epsilon(1e-5));
}

TEST_CASE("pluriharmonic and hermitian residuals") {
  RngStream rng(4);
  const Point x = random_point(Manifold::complex_projective(2), rng);
  CHECK(pluriharmonic_residual(standard_map("dilation(CP2,3)"), x) < 1e-5);
  CHECK(hermitian_residual(standard_map("dilation(CP2,3)"), x) < 1e-8);
  CHECK(holomorphy_residual(standard_map("dilation(CP2,3)"), x) < 1e-8);
  CHECK(pluriharmonic_residual(make_hermitian_eigenmap(), x) > 1.0);
  CHECK(hermitian_residual(make_hermitian_eigenmap(), x) < 1e-8);
  CHECK(hermitian_residual(standard_map("perturbed(CP2,0.2)"), x) > 1e-3);
  CHECK(holomorphy_residual(standard_map("perturbed(CP2,0.2)"), x) > 1e-3);
  CHECK_THROWS_AS(pluriharmonic_residual(identity_map(Manifold::sphere(2)), Vec::Unit(3, 0)), DomainError);
}

TEST_CASE("second variation of the identity of a sphere along a conformal gradient") {
  // int |Hess x_k|^2 - (n-1) int |grad x_k|^2 = (2 - n) n vol / (n + 1).
  const Manifold S3 = Manifold::sphere(3);
  const MapObject I3 = identity_map(S3);
  const SecondVariation s3 =
      second_variation(I3, conformal_gradient_variation(I3, 1), build_grid(S3, 12, GridScheme::ProductAngles));
  CHECK(s3.value == doctest::Approx(-1.5 * kPi * kPi).epsilon(1e-4));
  CHECK(s3.w_norm_sq == doctest::Approx(1.5 * kPi * kPi).epsilon(1e-6));
  CHECK_FALSE(s3.harmonic_warning);

  const Manifold S2 = Manifold::sphere(2);
  const MapObject I2 = identity_map(S2);
  const SecondVariation s2 = second_variation(I2, conformal_gradient_variation(I2, 2), build_grid(S2, 4, GridScheme::Mesh));
  CHECK(std::abs(s2.value) < 1e-4 * s2.w_norm_sq);
}

TEST_CASE("second variation flags non-harmonic maps") {
  const MapObject S = make_latitude_squash(0.2);
  const SecondVariation s =
      second_variation(S, conformal_gradient_variation(S, 0), build_grid(S.domain(), 3, GridScheme::Mesh));
  CHECK(s.harmonic_warning);
}

TEST_CASE("holomorphic variations of holomorphic curves") {
  const QuadratureGrid g = build_grid(Manifold::complex_projective(1), 3, GridScheme::Mesh);
  const MapObject V = standard_map("rational(veronese)");
  for (const auto& a : su_basis(2)) {
    const JacobiCheck j = jacobi_identity_check(V, a, g);
    CHECK(std::abs(j.lhs) < 1e-4 * j.w_norm_sq);
    CHECK(j.relative_gap() <= 5e-2);
  }
  const TraceFormII t = trace_form_II(V, g, su_basis(2));
  CHECK(t.terms.size() == 3u);
  CHECK(std::abs(t.trace) < 1e-4 * t.w_norm_sq);
}

TEST_CASE("omega star integrates to the area on holomorphic lines") {
  const QuadratureGrid g = build_grid(Manifold::complex_projective(1), 3, GridScheme::Mesh);
  RngStream rng(5);
  const Manifold CP2 = Manifold::complex_projective(2);
  const Point x = random_point(CP2, rng);
  const LineEmbedding L = line_through(x, random_unit_tangent(CP2, x, rng));
  const LineIntegral li = omega_star_line_integral(standard_map("dilation(CP2,3)"), L, g);
  CHECK(li.omega == doctest::Approx(kPi).epsilon(1e-3));
  CHECK(li.omega == doctest::Approx(li.area).epsilon(1e-6));
  CHECK_FALSE(li.pluriharmonic_warning);
  // omega*(V, W) = F*g(J V, W) takes J on the domain side, so the
  // antiholomorphic conjugation gives the area as well.
  const LineIntegral c = omega_star_line_integral(standard_map("conjugation"),
                                                  LineEmbedding{1, to_complex(Vec::Unit(4, 0)), to_complex(Vec::Unit(4, 2))}, g);
  CHECK(c.omega == doctest::Approx(kPi).epsilon(1e-3));
}

TEST_CASE("rank profiles") {
  const QuadratureGrid g = build_grid(Manifold::complex_projective(2), 200, GridScheme::MonteCarlo, 6);
  const RankProfile r = rank_profile(standard_map("dilation(CP2,8)"), g);
  CHECK(r.full_rank_fraction == 1.0);
  CHECK(r.counts[4] == 200);
  const RankProfile c = rank_profile(standard_map("constant(CP2)"), g);
  CHECK(c.counts[0] == 200);
  const QuadratureGrid s = build_grid(Manifold::sphere(2), 100, GridScheme::MonteCarlo, 6);
  CHECK(rank_profile(make_real_inclusion(2, 3), s).full_rank_fraction == 1.0);
}

TEST_CASE("diagnostics table") {
  RngStream rng(7);
  std::vector<Point> probes;
  for (int k = 0; k < 4; ++k) probes.push_back(random_point(Manifold::complex_projective(1), rng));
  const auto rows = diagnostics(standard_map("rational(conic)"), probes);
  REQUIRE(rows.size() == 4u);
  for (const auto& r : rows) CHECK(r.tension < 1e-6);
  std::ostringstream out;
  write_diagnostics_csv(rows, out);
  const std::string s = out.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
}

TEST_CASE("varied map at t = 0 is the map") {
  const MapObject F = standard_map("eigenmap");
  const MapObject G = varied_map(F, pushforward_variation(F, [](const Point& x) {
                                   return killing_field(Manifold::complex_projective(2), su_basis(3)[2], x);
                                 }, "killing"), 0.0);
  RngStream rng(8);
  const Point x = random_point(F.domain(), rng);
  CHECK((G(x) - F(x)).norm() < 1e-14);
  const VariationField W = negated(zero_variation(F));
  CHECK(W.field(x, F(x)).norm() == 0.0);
}
