#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "cpnlab/maps.hpp"
#include "cpnlab/parallel.hpp"

namespace cpnlab {

// Weighted node sum with dropped-node bookkeeping. Nodes whose integrand
// raises ResampleRequest are dropped and the remaining mass is rescaled to
// the grid total.
struct IntegralValue {
  double value = 0.0;
  // Present for monte_carlo grids only.
  std::optional<double> stderr_value;
  std::size_t dropped = 0;
  double dropped_fraction = 0.0;
  // Set when more than 1% of the nodes were dropped.
  bool accuracy_warning = false;
};

IntegralValue integrate(const QuadratureGrid& grid, const std::function<double(const Point&)>& f,
                        Exec exec = default_exec());

struct EnergyValue {
  double p = 2.0;
  double value = 0.0;
  GridScheme scheme = GridScheme::MonteCarlo;
  int resolution = 0;
  std::uint64_t seed = 0;
  std::optional<double> stderr_value;
  std::size_t dropped = 0;
  double dropped_fraction = 0.0;
  bool accuracy_warning = false;
};

struct DiffOptions {
  double h = kDefaultDiffStep;
  DiffMode mode = DiffMode::Auto;
};

double energy_density(const GramMatrix& G);
// |dF_x|^2 as the trace of the pullback Gram matrix.
double energy_density(const MapObject& F, const Point& x, const DiffOptions& opt = {});

// (1/2) sum_k w_k |dF|^p over the grid.
EnergyValue p_energy(const MapObject& F, const QuadratureGrid& grid, double p, const DiffOptions& opt = {},
                     Exec exec = default_exec());

// n / sigma(n-1) times the unit-tangent quadrature of |dF(u)|^2.
double croke_density(const MapObject& F, const Point& x, int order = 6, const DiffOptions& opt = {},
                     RngStream* rng = nullptr);

// Integral of sqrt(det Gram).
IntegralValue pullback_volume(const MapObject& F, const QuadratureGrid& grid, const DiffOptions& opt = {},
                              Exec exec = default_exec());
IntegralValue surface_area(const MapObject& F, const QuadratureGrid& grid, const DiffOptions& opt = {},
                           Exec exec = default_exec());

// n^{p/2} pvol^{p/n} / (2 vol^{(p-n)/n}); DomainError for p < n.
double elementary_bound(double p, int n, double vol_domain, double pullback_vol);

// Lower bound for E_p from E_2 by Hoelder: (1/2) vol^{1-p/2} (2 E_2)^{p/2}.
double holder_bound(double p, double vol_domain, double e2);

inline constexpr int kDefaultCurveSteps = 256;

// Trapezoid arc length of F o gamma over one period; segments whose
// differential cannot be evaluated fall back to the chord distance.
double curve_length(const MapObject& F, const GeodesicLoop& gamma, int steps = kDefaultCurveSteps,
                    const DiffOptions& opt = {});

}  // namespace cpnlab
