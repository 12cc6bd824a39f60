#include "doctest.h"

#include "cpnlab/constructions.hpp"
#include "cpnlab/harmonic.hpp"
#include "cpnlab/intgeo.hpp"

using namespace cpnlab;

TEST_CASE("measure masses") {
  // sigma(n) sigma(n-1) / (2 pi), pi^{2N-2} / (N! (N-1)!), n sigma(n) / (8 pi).
  CHECK(geodesic_space_mass(2) == doctest::Approx(4 * kPi));
  CHECK(geodesic_space_mass(3) == doctest::Approx(4 * kPi * kPi));
  CHECK(line_space_mass(1) == doctest::Approx(1.0));
  CHECK(line_space_mass(2) == doctest::Approx(kPi * kPi / 2));
  CHECK(line_space_mass(3) == doctest::Approx(std::pow(kPi, 4) / 12));
  CHECK(plane_space_mass(3) == doctest::Approx(3 * kPi / 4));
  for (int N : {2, 3}) {
    double w = 0.0;
    for (const auto& s : sample_lines(N, 100, 5)) w += s.weight;
    CHECK(w == doctest::Approx(line_space_mass(N)).epsilon(1e-12));
  }
}

TEST_CASE("sampled lines are isometric totally geodesic embeddings") {
  const Manifold CP1 = Manifold::complex_projective(1);
  for (const auto& s : sample_lines(3, 10, 1)) {
    const MapObject L = s.element.as_map();
    RngStream rng(2, s.index);
    const Point x = random_point(CP1, rng);
    CHECK(std::abs(hermitian(to_real(s.element.z), to_real(s.element.u))) < 1e-12);
    const GramMatrix g = pullback_gram(L, x, tangent_frame(CP1, x));
    CHECK(g.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(second_form_sup(L, x) < 1e-5);
  }
}

TEST_CASE("line through a point and direction") {
  const Manifold CP2 = Manifold::complex_projective(2);
  RngStream rng(3);
  const Point x = random_point(CP2, rng);
  const Vec v = random_unit_tangent(CP2, x, rng);
  const LineEmbedding L = line_through(x, v);
  Point a(4);
  a << 1, 0, 0, 0;
  CHECK(distance(CP2, L(a), x) < 1e-12);
  // The geodesic from x along v stays on the line.
  const Point y = exp_map(CP2, x, 0.3 * v);
  const CVec z = to_complex(y);
  const CVec p = L.z * L.z.dot(z) + L.u * L.u.dot(z);
  CHECK((z - p).norm() < 1e-12);
}

TEST_CASE("line averages of holomorphic maps") {
  // T_lambda restricts to a degree-one curve on every line.
  const AverageValue a = line_energy_average(standard_map("dilation(CP2,2)"), 200, {GridScheme::Mesh, 3}, 4);
  CHECK(a.value == doctest::Approx(kPi * kPi).epsilon(2e-3));
  CHECK(a.mass == doctest::Approx(kPi * kPi / 2));
  const Spread s = line_energy_spread(identity_map(Manifold::complex_projective(2)), 50, 4);
  CHECK(s.mean == doctest::Approx(kPi).epsilon(1e-6));
  CHECK(s.max_deviation < 1e-9);
}

TEST_CASE("family averages of the identity of RP^3") {
  const MapObject F = identity_map(Manifold::real_projective(3));
  const AverageValue e1 = e1_geodesic_bound(F, 100, 6);
  CHECK(e1.value == doctest::Approx(std::sqrt(3.0) * kPi * kPi / 2).epsilon(1e-8));
  const AverageValue p = rp2_family_average(F, 100, 6, {GridScheme::Mesh, 3});
  CHECK(p.value == doctest::Approx(1.5 * kPi * kPi).epsilon(1e-6));
}

TEST_CASE("geodesic samples are unit speed and based uniformly") {
  for (const auto& s : sample_geodesics(3, 20, 7)) {
    const Manifold& M = s.element.manifold;
    CHECK(norm(M, s.element.base, s.element.direction) == doctest::Approx(1.0));
    CHECK(s.element.period() == doctest::Approx(kPi));
  }
}
