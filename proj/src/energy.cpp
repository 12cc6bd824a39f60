#include "cpnlab/energy.hpp"

#include <cmath>
#include <limits>

namespace cpnlab {

IntegralValue integrate(const QuadratureGrid& grid, const std::function<double(const Point&)>& f, Exec exec) {
  const std::size_t n = grid.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto vals = map_indices<double>(
      n,
      [&](std::size_t i) {
        try {
          return f(grid.nodes[i]);
        } catch (const ResampleRequest&) {
          return nan;
        }
      },
      exec);

  std::vector<double> terms, kept_w;
  terms.reserve(n);
  kept_w.reserve(n);
  IntegralValue out;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(vals[i])) {
      ++out.dropped;
      continue;
    }
    terms.push_back(grid.weights[i] * vals[i]);
    kept_w.push_back(grid.weights[i]);
  }
  const double kept_mass = ordered_sum(kept_w);
  const double raw = ordered_sum(terms);
  out.value = kept_mass > 0.0 ? raw * (grid.total_mass / kept_mass) : 0.0;
  out.dropped_fraction = n ? static_cast<double>(out.dropped) / n : 0.0;
  out.accuracy_warning = out.dropped_fraction > 0.01;

  if (grid.scheme == GridScheme::MonteCarlo) {
    const std::size_t k = terms.size();
    if (k > 1) {
      std::vector<double> y;
      y.reserve(k);
      for (std::size_t i = 0; i < n; ++i)
        if (!std::isnan(vals[i])) y.push_back(vals[i]);
      const double mean = ordered_sum(y) / k;
      std::vector<double> sq(k);
      for (std::size_t i = 0; i < k; ++i) sq[i] = (y[i] - mean) * (y[i] - mean);
      const double var = ordered_sum(sq) / (k - 1);
      out.stderr_value = grid.total_mass * std::sqrt(var / k);
    } else {
      out.stderr_value = 0.0;
    }
  }
  return out;
}

double energy_density(const GramMatrix& G) { return G.trace(); }

double energy_density(const MapObject& F, const Point& x, const DiffOptions& opt) {
  return energy_density(pullback_gram(F, x, tangent_frame(F.domain(), x), opt.h, opt.mode));
}

EnergyValue p_energy(const MapObject& F, const QuadratureGrid& grid, double p, const DiffOptions& opt, Exec exec) {
  if (!(p >= 1.0)) throw DomainError("p_energy: need p >= 1");
  if (!(grid.manifold == F.domain())) throw DomainError("p_energy: grid is not on the domain of " + F.name());
  const IntegralValue iv = integrate(
      grid,
      [&](const Point& x) {
        const double d = std::max(0.0, energy_density(F, x, opt));
        return 0.5 * std::pow(d, 0.5 * p);
      },
      exec);
  EnergyValue e;
  e.p = p;
  e.value = iv.value;
  e.scheme = grid.scheme;
  e.resolution = grid.resolution;
  e.seed = grid.seed;
  e.stderr_value = iv.stderr_value;
  e.dropped = iv.dropped;
  e.dropped_fraction = iv.dropped_fraction;
  e.accuracy_warning = iv.accuracy_warning;
  return e;
}

double croke_density(const MapObject& F, const Point& x, int order, const DiffOptions& opt, RngStream* rng) {
  const DirectionSet ds = unit_tangent_quadrature(F.domain(), x, order, rng);
  const int n = F.domain().dim();
  const Point fx = F(x);
  double s = 0.0;
  for (std::size_t j = 0; j < ds.directions.size(); ++j)
    s += ds.weights[j] * directional(F, x, fx, ds.directions[j], opt.h, opt.mode).squaredNorm();
  return n / sphere_volume(n - 1) * s;
}

IntegralValue pullback_volume(const MapObject& F, const QuadratureGrid& grid, const DiffOptions& opt, Exec exec) {
  if (!(grid.manifold == F.domain())) throw DomainError("pullback_volume: grid is not on the domain of " + F.name());
  return integrate(
      grid,
      [&](const Point& x) {
        const GramMatrix G = pullback_gram(F, x, tangent_frame(F.domain(), x), opt.h, opt.mode);
        double det = 1.0;
        for (Eigen::Index k = 0; k < G.eigenvalues.size(); ++k) det *= std::max(0.0, G.eigenvalues[k]);
        return std::sqrt(det);
      },
      exec);
}

IntegralValue surface_area(const MapObject& F, const QuadratureGrid& grid, const DiffOptions& opt, Exec exec) {
  if (F.domain().dim() != 2) throw DomainError("surface_area: domain of " + F.name() + " is not 2-dimensional");
  return pullback_volume(F, grid, opt, exec);
}

double elementary_bound(double p, int n, double vol_domain, double pullback_vol) {
  if (p < n) throw DomainError("elementary_bound: need p >= n");
  if (!(vol_domain > 0.0) || pullback_vol < 0.0) throw DomainError("elementary_bound: bad volumes");
  return std::pow(n, 0.5 * p) * std::pow(pullback_vol, p / n) / (2.0 * std::pow(vol_domain, (p - n) / n));
}

double holder_bound(double p, double vol_domain, double e2) {
  return 0.5 * std::pow(vol_domain, 1.0 - 0.5 * p) * std::pow(2.0 * e2, 0.5 * p);
}

double curve_length(const MapObject& F, const GeodesicLoop& gamma, int steps, const DiffOptions& opt) {
  if (steps < 2) throw DomainError("curve_length: need at least 2 steps");
  const double T = gamma.period();
  const double dt = T / steps;
  std::vector<Point> img(steps + 1);
  std::vector<double> speed(steps + 1, -1.0);
  for (int i = 0; i <= steps; ++i) {
    const double t = i * dt;
    const Point x = gamma.at(t);
    img[i] = F(x);
    try {
      speed[i] = directional(F, x, img[i], gamma.velocity(t), opt.h, opt.mode).norm();
    } catch (const ResampleRequest&) {
      speed[i] = -1.0;
    }
  }
  std::vector<double> seg(steps);
  for (int i = 0; i < steps; ++i) {
    if (speed[i] >= 0.0 && speed[i + 1] >= 0.0) {
      seg[i] = 0.5 * dt * (speed[i] + speed[i + 1]);
    } else {
      seg[i] = distance(F.codomain(), img[i], img[i + 1]);
    }
  }
  return ordered_sum(seg);
}

}  // namespace cpnlab
