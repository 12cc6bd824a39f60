#pragma once

#include <cstdint>
#include <vector>

#include "cpnlab/energy.hpp"

namespace cpnlab {

// Linear isometric embedding CP^1 -> CP^N, [a:b] -> [a z + b u] for an
// orthonormal pair (z, u) in C^{N+1}.
struct LineEmbedding {
  int N = 1;
  CVec z;
  CVec u;

  Point operator()(const Point& ab) const;
  MapObject as_map() const;
};

// The line through x tangent to the horizontal vector v.
LineEmbedding line_through(const Point& x, const Vec& v);

// Totally geodesic RP^2 in RP^n spanned by three orthonormal columns.
struct PlaneEmbedding {
  int n = 2;
  Mat basis;

  MapObject as_map() const;
};

template <class T>
struct MeasureSample {
  T element;
  double weight = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

// Space of geodesics of RP^n: K uniform unit tangents, total mass
// sigma(n) sigma(n-1) / (2 pi).
std::vector<MeasureSample<GeodesicLoop>> sample_geodesics(int n, int K, std::uint64_t seed);
double geodesic_space_mass(int n);

// Space of lines of CP^N: total mass pi^{2N-2} / (N! (N-1)!).
std::vector<MeasureSample<LineEmbedding>> sample_lines(int N, int K, std::uint64_t seed);
double line_space_mass(int N);

// Totally geodesic RP^2's in RP^n: total mass n sigma(n) / (8 pi).
std::vector<MeasureSample<PlaneEmbedding>> sample_planes(int n, int K, std::uint64_t seed);
double plane_space_mass(int n);

struct LineGridSpec {
  GridScheme scheme = GridScheme::Mesh;
  int resolution = 4;
};

struct AverageValue {
  double value = 0.0;
  // Monte Carlo standard error over the sampled elements.
  double stderr_value = 0.0;
  double mass = 0.0;
  int samples = 0;
};

// E_2 of F restricted to each sampled line.
std::vector<double> line_energies(const MapObject& F, const std::vector<MeasureSample<LineEmbedding>>& lines,
                                  const LineGridSpec& grid = {}, Exec exec = default_exec());

// (N! / pi^{N-1}) sum_i w_i E_2(F o iota_i).
AverageValue line_energy_average(const MapObject& F, int K, const LineGridSpec& grid, std::uint64_t seed,
                                 Exec exec = default_exec());

struct Spread {
  double mean = 0.0;
  double max_deviation = 0.0;
};
Spread line_energy_spread(const MapObject& F, int K, std::uint64_t seed, const LineGridSpec& grid = {},
                          Exec exec = default_exec());

// (sqrt n / (2 sigma(n-1))) sum_i w_i length(F o gamma_i).
AverageValue e1_geodesic_bound(const MapObject& F, int K, std::uint64_t seed, int steps = kDefaultCurveSteps,
                               Exec exec = default_exec());

// sum_i w_i E_2(F restricted to the i-th plane).
AverageValue rp2_family_average(const MapObject& F, int K, std::uint64_t seed, const LineGridSpec& grid = {},
                                Exec exec = default_exec());

}  // namespace cpnlab
