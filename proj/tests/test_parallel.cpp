#include "doctest.h"

#include <atomic>
#include <numeric>

#include "cpnlab/constructions.hpp"
#include "cpnlab/flow.hpp"
#include "cpnlab/harmonic.hpp"
#include "cpnlab/parallel.hpp"

using namespace cpnlab;

// Every kernel runs once through the serial reference and once through the
// OpenMP path; results must agree bit for bit.

TEST_CASE("weighted sums") {
  std::vector<double> w(10007);
  std::iota(w.begin(), w.end(), 1.0);
  auto f = [](std::size_t i) { return std::sin(0.1 * static_cast<double>(i)); };
  CHECK(weighted_sum(w.size(), f, w, Exec::Parallel) == serial_weighted_sum(w.size(), f, w));
}

TEST_CASE("exceptions inside parallel loops reach the caller") {
  std::atomic<int> seen{0};
  CHECK_THROWS_AS(for_each_index(
                      1000,
                      [&](std::size_t i) {
                        ++seen;
                        if (i == 500) throw DomainError("boom");
                      },
                      Exec::Parallel),
                  DomainError);
  CHECK(seen.load() == 1000);
}

TEST_CASE("energies") {
  const QuadratureGrid g = build_grid(Manifold::complex_projective(2), 3000, GridScheme::MonteCarlo, 2);
  const MapObject F = standard_map("perturbed(CP2,0.2)");
  const EnergyValue a = p_energy(F, g, 3.0, {}, Exec::Serial);
  const EnergyValue b = p_energy(F, g, 3.0, {}, Exec::Parallel);
  CHECK(a.value == b.value);
  CHECK(*a.stderr_value == *b.stderr_value);
  CHECK(pullback_volume(F, g, {}, Exec::Serial).value == pullback_volume(F, g, {}, Exec::Parallel).value);
}

TEST_CASE("line energies") {
  const auto lines = sample_lines(2, 64, 3);
  const MapObject F = standard_map("perturbed(CP2,0.2)");
  const auto a = line_energies(F, lines, {GridScheme::Mesh, 2}, Exec::Serial);
  const auto b = line_energies(F, lines, {GridScheme::Mesh, 2}, Exec::Parallel);
  CHECK(a == b);
  CHECK(e1_geodesic_bound(identity_map(Manifold::real_projective(3)), 50, 1, 64, Exec::Serial).value ==
        e1_geodesic_bound(identity_map(Manifold::real_projective(3)), 50, 1, 64, Exec::Parallel).value);
}

TEST_CASE("second variation and rank") {
  const MapObject F = standard_map("rational(veronese)");
  const QuadratureGrid g = build_grid(F.domain(), 2, GridScheme::Mesh);
  const VariationField W = holomorphic_variation(F, su_basis(2)[1]);
  CHECK(second_variation(F, W, g, 1e-2, Exec::Serial).value == second_variation(F, W, g, 1e-2, Exec::Parallel).value);
  const RankProfile a = rank_profile(F, g, Exec::Serial), b = rank_profile(F, g, Exec::Parallel);
  CHECK(a.counts == b.counts);
}

TEST_CASE("mesh kernels and flow") {
  const MeshMap m = make_mesh_map(make_perturbed_identity(Manifold::sphere(2), 0.2), 3);
  CHECK(discrete_energy(m, Exec::Serial) == discrete_energy(m, Exec::Parallel));
  const auto ta = discrete_tension(m, Exec::Serial), tb = discrete_tension(m, Exec::Parallel);
  for (std::size_t i = 0; i < ta.size(); ++i) CHECK((ta[i] - tb[i]).norm() == 0.0);
  CHECK(conformality_defect(m, Exec::Serial).value == conformality_defect(m, Exec::Parallel).value);
  FlowOptions opt;
  opt.iterations = 40;
  const FlowResult a = flow_minimize(m, opt, Exec::Serial), b = flow_minimize(m, opt, Exec::Parallel);
  CHECK(a.log.back().energy == b.log.back().energy);
  CHECK(a.iterations == b.iterations);
}
