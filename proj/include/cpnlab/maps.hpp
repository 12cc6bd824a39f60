#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpnlab/common.hpp"
#include "cpnlab/manifolds.hpp"
#include "cpnlab/rng.hpp"

namespace cpnlab {

enum class Smoothness { Smooth, Lipschitz };

using Evaluator = std::function<Point(const Point&)>;
// Analytic differential: (x, F(x), v) -> dF_x(v), a tangent vector at the
// representative F(x) that the evaluator returned.
using AnalyticDifferential = std::function<Vec(const Point&, const Point&, const Vec&)>;

class MapObject {
 public:
  MapObject(Manifold domain, Manifold codomain, Evaluator eval, std::string name,
            Smoothness smoothness = Smoothness::Smooth, AnalyticDifferential diff = {});

  const Manifold& domain() const { return domain_; }
  const Manifold& codomain() const { return codomain_; }
  const std::string& name() const { return name_; }
  Smoothness smoothness() const { return smoothness_; }
  bool has_analytic_differential() const { return static_cast<bool>(*diff_); }

  Point operator()(const Point& x) const { return (*eval_)(x); }
  Vec analytic_differential(const Point& x, const Point& fx, const Vec& v) const;

  MapObject renamed(std::string name) const;
  MapObject without_analytic_differential() const;

 private:
  Manifold domain_;
  Manifold codomain_;
  std::shared_ptr<const Evaluator> eval_;
  std::shared_ptr<const AnalyticDifferential> diff_;
  std::string name_;
  Smoothness smoothness_;
};

// g after f; the chain rule is used when both carry analytic differentials.
MapObject compose(const MapObject& g, const MapObject& f);
MapObject identity_map(const Manifold& M);
MapObject constant_map(const Manifold& domain, const Manifold& codomain, const Point& value);

struct TangentFrame {
  Point base;
  std::vector<Vec> vectors;
  // On CP^N: vectors[2k+1] = J vectors[2k].
  bool unitary = false;
};

// Deterministic orthonormal frame (unitary on CP^N).
TangentFrame tangent_frame(const Manifold& M, const Point& x);
// Frame rotated by a random orthogonal (unitary on CP^N) matrix.
TangentFrame random_frame(const Manifold& M, const Point& x, RngStream& rng);
double frame_gram_residual(const TangentFrame& frame);

enum class DiffMode { Auto, FiniteDifference, Richardson };

inline constexpr double kDefaultDiffStep = 1e-4;

// dF_x(v) by central differences through the codomain log map.
Vec fd_directional(const MapObject& F, const Point& x, const Point& fx, const Vec& v, double h);
Vec directional(const MapObject& F, const Point& x, const Point& fx, const Vec& v,
                double h = kDefaultDiffStep, DiffMode mode = DiffMode::Auto);

std::vector<Vec> differential(const MapObject& F, const Point& x, const TangentFrame& frame,
                              double h = kDefaultDiffStep, DiffMode mode = DiffMode::Auto);

struct GramMatrix {
  Mat g;
  // Ascending, negatives above -1e-9 clamped to zero.
  Vec eigenvalues;

  double trace() const { return g.trace(); }
  double symmetry_residual() const { return (g - g.transpose()).norm(); }
};

GramMatrix make_gram(const std::vector<Vec>& columns);
GramMatrix pullback_gram(const MapObject& F, const Point& x, const TangentFrame& frame,
                         double h = kDefaultDiffStep, DiffMode mode = DiffMode::Auto);

enum class GridScheme { Mesh, MonteCarlo, ProductAngles };

std::string to_string(GridScheme s);
GridScheme grid_scheme_from_string(const std::string& s);

struct QuadratureGrid {
  Manifold manifold;
  std::vector<Point> nodes;
  std::vector<double> weights;
  double total_mass = 0.0;
  GridScheme scheme = GridScheme::MonteCarlo;
  int resolution = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return nodes.size(); }
  double weight_sum() const;
};

// resolution: icosphere level for Mesh, node count for MonteCarlo, Gauss
// nodes per polar angle for ProductAngles (the circle gets twice as many).
//
// Mesh:          S^2(r), RP^2 (full sphere, halved weights), CP^1 (via the
//                Hopf map from the radius-1/2 sphere).
// MonteCarlo:    every kind, weights volume/K.
// ProductAngles: S^n and RP^n in polar coordinates about e_0 (hemisphere for
//                RP^n); CP^N in toric coordinates (moduli on the positive
//                orthant of S^N, trapezoid over the N relative phases).
// Products are tensor products of factor grids.
QuadratureGrid build_grid(const Manifold& M, int resolution, GridScheme scheme, std::uint64_t seed = 0);

// ProductAngles grid on S^n or RP^n with the polar interval split at the
// given angles, for integrands with a kink on a latitude.
QuadratureGrid build_polar_grid(const Manifold& M, int resolution, const std::vector<double>& breaks);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

// Inverse of the Hopf map: the unit-sphere point p in R^3 to a lift in C^2.
Point hopf_section(const Eigen::Vector3d& p);
Eigen::Vector3d hopf_map(const Point& z);

struct DirectionSet {
  std::vector<Vec> directions;
  std::vector<double> weights;
};

// Weighted unit directions in T_x M integrating quadratics exactly, total
// weight sigma(dim - 1). dim 2: `order` (>= 3) equally spaced angles. dim 3:
// icosahedron vertices when order >= 5, otherwise the cross-polytope.
// dim >= 4: cross-polytope. With rng the frame is randomly rotated.
DirectionSet unit_tangent_quadrature(const Manifold& M, const Point& x, int order,
                                     RngStream* rng = nullptr);

// Columnar CSV: header, then one node per line with its weight, 17 digits.
void write_grid_csv(const QuadratureGrid& grid, std::ostream& out);

}  // namespace cpnlab
