#include "cpnlab/intgeo.hpp"

#include <cmath>

namespace cpnlab {

Point LineEmbedding::operator()(const Point& ab) const {
  const CVec c = to_complex(ab);
  return to_real(c[0] * z + c[1] * u);
}

MapObject LineEmbedding::as_map() const {
  const LineEmbedding self = *this;
  return MapObject(
      Manifold::complex_projective(1), Manifold::complex_projective(N), [self](const Point& ab) { return self(ab); },
      "line", Smoothness::Smooth, [self](const Point&, const Point&, const Vec& v) {
        const CVec c = to_complex(v);
        return to_real(c[0] * self.z + c[1] * self.u);
      });
}

LineEmbedding line_through(const Point& x, const Vec& v) {
  LineEmbedding L;
  L.z = to_complex(x);
  L.z /= L.z.norm();
  L.N = static_cast<int>(L.z.size()) - 1;
  CVec u = to_complex(v);
  u -= L.z.dot(u) * L.z;
  const double len = u.norm();
  if (len < 1e-14) throw DomainError("line_through: zero horizontal direction");
  L.u = u / len;
  return L;
}

MapObject PlaneEmbedding::as_map() const {
  const Mat B = basis;
  return MapObject(
      Manifold::real_projective(2), Manifold::real_projective(n), [B](const Point& x) { return Point(B * x); },
      "plane", Smoothness::Smooth, [B](const Point&, const Point&, const Vec& v) { return Vec(B * v); });
}

double geodesic_space_mass(int n) { return sphere_volume(n) * sphere_volume(n - 1) / (2.0 * kPi); }

double line_space_mass(int N) { return std::pow(kPi, 2 * N - 2) / (factorial(N) * factorial(N - 1)); }

double plane_space_mass(int n) { return n * sphere_volume(n) / (8.0 * kPi); }

std::vector<MeasureSample<GeodesicLoop>> sample_geodesics(int n, int K, std::uint64_t seed) {
  if (n < 2 || K < 1) throw DomainError("sample_geodesics: need n >= 2 and K >= 1");
  const Manifold M = Manifold::real_projective(n);
  const double w = geodesic_space_mass(n) / K;
  std::vector<MeasureSample<GeodesicLoop>> out;
  out.reserve(K);
  for (int i = 0; i < K; ++i) {
    RngStream rng = RngStream(seed, 0x67656f64ULL).substream(i);
    const Point x = random_point(M, rng);
    const Vec v = random_unit_tangent(M, x, rng);
    out.push_back({GeodesicLoop{M, x, v}, w, seed, static_cast<std::uint64_t>(i)});
  }
  return out;
}

std::vector<MeasureSample<LineEmbedding>> sample_lines(int N, int K, std::uint64_t seed) {
  if (N < 1 || K < 1) throw DomainError("sample_lines: need N >= 1 and K >= 1");
  const Manifold M = Manifold::complex_projective(N);
  const double w = line_space_mass(N) / K;
  std::vector<MeasureSample<LineEmbedding>> out;
  out.reserve(K);
  for (int i = 0; i < K; ++i) {
    RngStream rng = RngStream(seed, 0x6c696e65ULL).substream(i);
    const Point x = random_point(M, rng);
    const Vec v = random_unit_tangent(M, x, rng);
    out.push_back({line_through(x, v), w, seed, static_cast<std::uint64_t>(i)});
  }
  return out;
}

std::vector<MeasureSample<PlaneEmbedding>> sample_planes(int n, int K, std::uint64_t seed) {
  if (n < 2 || K < 1) throw DomainError("sample_planes: need n >= 2 and K >= 1");
  const double w = plane_space_mass(n) / K;
  std::vector<MeasureSample<PlaneEmbedding>> out;
  out.reserve(K);
  for (int i = 0; i < K; ++i) {
    RngStream rng = RngStream(seed, 0x706c616eULL).substream(i);
    const Mat q = random_orthogonal(n + 1, rng);
    out.push_back({PlaneEmbedding{n, q.leftCols(3)}, w, seed, static_cast<std::uint64_t>(i)});
  }
  return out;
}

namespace {

AverageValue summarize(const std::vector<double>& values, double mass, double prefactor) {
  AverageValue a;
  a.samples = static_cast<int>(values.size());
  a.mass = mass;
  const double K = static_cast<double>(values.size());
  const double mean = ordered_sum(values) / K;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = values.size() > 1 ? ordered_sum(sq) / (K - 1.0) : 0.0;
  a.value = prefactor * mass * mean;
  a.stderr_value = prefactor * mass * std::sqrt(var / K);
  return a;
}

}  // namespace

std::vector<double> line_energies(const MapObject& F, const std::vector<MeasureSample<LineEmbedding>>& lines,
                                  const LineGridSpec& spec, Exec exec) {
  if (!F.domain().is_complex()) throw DomainError("line_energies: domain of " + F.name() + " is not CP^N");
  const QuadratureGrid grid = build_grid(Manifold::complex_projective(1), spec.resolution, spec.scheme, 0);
  return map_indices<double>(
      lines.size(),
      [&](std::size_t i) {
        const MapObject restricted = compose(F, lines[i].element.as_map());
        return p_energy(restricted, grid, 2.0, {}, Exec::Serial).value;
      },
      exec);
}

AverageValue line_energy_average(const MapObject& F, int K, const LineGridSpec& spec, std::uint64_t seed,
                                 Exec exec) {
  const int N = F.domain().param();
  const auto lines = sample_lines(N, K, seed);
  const auto e = line_energies(F, lines, spec, exec);
  return summarize(e, line_space_mass(N), factorial(N) / std::pow(kPi, N - 1));
}

Spread line_energy_spread(const MapObject& F, int K, std::uint64_t seed, const LineGridSpec& spec, Exec exec) {
  const auto e = line_energies(F, sample_lines(F.domain().param(), K, seed), spec, exec);
  Spread s;
  s.mean = ordered_sum(e) / static_cast<double>(e.size());
  for (double v : e) s.max_deviation = std::max(s.max_deviation, std::abs(v - s.mean));
  return s;
}

AverageValue e1_geodesic_bound(const MapObject& F, int K, std::uint64_t seed, int steps, Exec exec) {
  if (F.domain().kind() != Manifold::Kind::RealProjective)
    throw DomainError("e1_geodesic_bound: domain of " + F.name() + " is not RP^n");
  const int n = F.domain().param();
  auto loops = sample_geodesics(n, K, seed);
  if (F.domain().radius() != 1.0) throw DomainError("e1_geodesic_bound: needs the unit-curvature RP^n");
  const auto len = map_indices<double>(
      loops.size(), [&](std::size_t i) { return curve_length(F, loops[i].element, steps); }, exec);
  return summarize(len, geodesic_space_mass(n), std::sqrt(static_cast<double>(n)) / (2.0 * sphere_volume(n - 1)));
}

AverageValue rp2_family_average(const MapObject& F, int K, std::uint64_t seed, const LineGridSpec& spec, Exec exec) {
  if (F.domain().kind() != Manifold::Kind::RealProjective || F.domain().param() < 3)
    throw DomainError("rp2_family_average: domain of " + F.name() + " is not RP^n with n >= 3");
  const int n = F.domain().param();
  const auto planes = sample_planes(n, K, seed);
  const QuadratureGrid grid = build_grid(Manifold::real_projective(2), spec.resolution, spec.scheme, 0);
  const auto e = map_indices<double>(
      planes.size(),
      [&](std::size_t i) {
        return p_energy(compose(F, planes[i].element.as_map()), grid, 2.0, {}, Exec::Serial).value;
      },
      exec);
  return summarize(e, plane_space_mass(n), 1.0);
}

}  // namespace cpnlab
