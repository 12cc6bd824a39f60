#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cpnlab/energy.hpp"
#include "cpnlab/intgeo.hpp"

namespace cpnlab {

inline constexpr double kSecondDiffStep = 1e-3;

struct SecondFormSample {
  Point base;
  Vec v;
  Vec w;
  // Tangent vector at the representative F(base).
  Vec value;
};

// alpha(v, v): acceleration of t -> F(exp_x(t v)) at t = 0, read off from
// the second difference of log_{F(x)} F(exp_x(+-h v)).
Vec second_form_diagonal(const MapObject& F, const Point& x, const Point& fx, const Vec& v,
                         double h = kSecondDiffStep);
// Polarized alpha(v, w).
Vec second_form(const MapObject& F, const Point& x, const Point& fx, const Vec& v, const Vec& w,
                double h = kSecondDiffStep);
SecondFormSample second_fundamental_form(const MapObject& F, const Point& x, const Vec& v, const Vec& w,
                                         double h = kSecondDiffStep);

// Sum of alpha(e_i, e_i) over the deterministic frame, or over `frame`.
Vec tension(const MapObject& F, const Point& x, double h = kSecondDiffStep);
Vec tension(const MapObject& F, const Point& x, const TangentFrame& frame, double h = kSecondDiffStep);

// Largest entry of alpha over pairs from the deterministic frame.
double second_form_sup(const MapObject& F, const Point& x, double h = kSecondDiffStep);

// sup |alpha(J e_i, J e_j) + alpha(e_i, e_j)| over a unitary frame.
double pluriharmonic_residual(const MapObject& F, const Point& x, double h = kSecondDiffStep);
// sup |G(J e_i, J e_j) - G(e_i, e_j)| for the pullback Gram matrix G.
double hermitian_residual(const MapObject& F, const Point& x, double h = kDefaultDiffStep);
// |dF(J v) - J dF(v)| over a unitary frame, for maps between CP's.
double holomorphy_residual(const MapObject& F, const Point& x, double h = kDefaultDiffStep);

// x -> W(x), tangent at the representative F(x).
struct VariationField {
  std::function<Vec(const Point& x, const Point& fx)> field;
  std::string provenance = "arbitrary";
};

VariationField zero_variation(const MapObject& F);
// W = dF(V) for a vector field V on the domain.
VariationField pushforward_variation(const MapObject& F, std::function<Vec(const Point&)> V, std::string name);
// W = dF(J K_a), K_a the Killing field of a; CP^N domains only.
VariationField holomorphic_variation(const MapObject& F, const LieAlgebraElement& a);
// W = dF(grad <x, e_k>) on a unit sphere domain.
VariationField conformal_gradient_variation(const MapObject& F, int k);
// W -> -W.
VariationField negated(const VariationField& W);

// F_t(x) = exp_{F(x)}(t W(x)).
MapObject varied_map(const MapObject& F, const VariationField& W, double t);

struct SecondVariation {
  double value = 0.0;
  double tau = 0.0;
  // Integral of |W|^2, the natural scale of the value.
  double w_norm_sq = 0.0;
  // Largest tension found at the probe nodes.
  double probe_tension = 0.0;
  bool harmonic_warning = false;
  bool retried = false;
};

// Five-point second derivative of E_2(F_t) at t = 0 with step tau. A cut
// locus hit halves tau once, then propagates.
SecondVariation second_variation(const MapObject& F, const VariationField& W, const QuadratureGrid& grid,
                                 double tau = 1e-2, Exec exec = default_exec());

struct JacobiCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double w_norm_sq = 0.0;
  // |lhs - rhs| / max(|lhs|, |rhs|, floor * w_norm_sq).
  double relative_gap(double floor = 1e-3) const;
};

// lhs: second variation along F_*(J K_a). rhs: integral of
// -2 g(sum_i alpha(J nabla_{e_i} K_a, e_i), F_*(J K_a)).
JacobiCheck jacobi_identity_check(const MapObject& F, const LieAlgebraElement& a, const QuadratureGrid& grid,
                                  Exec exec = default_exec());

struct TraceFormII {
  double trace = 0.0;
  std::vector<double> terms;
  double abs_sum = 0.0;
  double w_norm_sq = 0.0;
};

TraceFormII trace_form_II(const MapObject& F, const QuadratureGrid& grid, const std::vector<LieAlgebraElement>& basis,
                          Exec exec = default_exec());

struct LineIntegral {
  double omega = 0.0;
  double area = 0.0;
  double max_pluriharmonic_residual = 0.0;
  bool pluriharmonic_warning = false;
};

// Integral over the line of omega*(u, v) = F*g(J u, v), next to the area of
// F restricted to the line. `grid` lives on CP^1.
LineIntegral omega_star_line_integral(const MapObject& F, const LineEmbedding& line, const QuadratureGrid& grid,
                                      Exec exec = default_exec());

struct RankProfile {
  // counts[r] = number of nodes with numerical rank r.
  std::vector<int> counts;
  double full_rank_fraction = 0.0;
};

// Rank: Gram eigenvalues above 1e-6 of the largest (on the scale of the
// domain dimension; a zero differential has rank 0).
RankProfile rank_profile(const MapObject& F, const QuadratureGrid& grid, Exec exec = default_exec());

struct DiagnosticRow {
  Point probe;
  double tension = 0.0;
  double pluriharmonic = 0.0;
  double hermitian = 0.0;
};

std::vector<DiagnosticRow> diagnostics(const MapObject& F, const std::vector<Point>& probes,
                                       Exec exec = default_exec());
void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows, std::ostream& out);

}  // namespace cpnlab
