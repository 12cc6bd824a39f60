#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpnlab/energy.hpp"
#include "cpnlab/intgeo.hpp"

namespace cpnlab {

// N+1 homogeneous polynomials of degree d in (a, b); coeffs[k][j] multiplies
// a^{d-j} b^j in the k-th component.
struct RationalCurveSpec {
  int N = 1;
  int degree = 1;
  std::vector<std::vector<cplx>> coeffs;
};

RationalCurveSpec line_spec();           // [a : b : 0]
RationalCurveSpec conic_spec();          // [a^2 - b^2 : i(a^2 + b^2) : 2ab]
RationalCurveSpec veronese_spec();       // [a^2 : sqrt2 ab : b^2]
RationalCurveSpec random_curve_spec(int N, int degree, std::uint64_t seed);

// Smallest |P(a,b)| over unit (a,b), estimated from the roots of one
// component and probe points. ConstructionError below 1e-8.
double common_zero_margin(const RationalCurveSpec& spec);
MapObject make_rational_curve(const RationalCurveSpec& spec);

// [Dz] for an invertible complex matrix D.
MapObject make_projective_linear(const CMat& D, const std::string& name);
// T_lambda: (z0, z1, z2, ...) -> (lambda z0, lambda z1, z2, ...).
MapObject make_projective_dilation(int N, double lambda);

// theta_t: S^3 -> S^3, multiplication by t in stereographic coordinates
// centred at e_0. Evaluating at -e_0 raises ResampleRequest.
MapObject make_theta(double t);
// Polar angle of the cap boundary 2 arctan(1/t).
double theta_cap_angle(double t);
// Theta_t: RP^3 -> RP^3 with p_0 = [e_0] and Q_0 = {x_0 = 0}: theta_t on
// the cap, radial projection onto Q_0 on the collar, identity on Q_0.
MapObject make_capped_theta(double t);
// Stretched polar angle 2 arctan(t tan(psi/2)) and conformal factor of theta_t.
double theta_polar(double t, double psi);
double theta_conformal_factor(double t, double psi);

// Isometric inclusions x -> (x, 0).
MapObject make_real_inclusion(int k, int n);
MapObject make_complex_inclusion(int k, int N);
// S^2 -> RP^2.
MapObject make_double_cover();
// S^n -> S^n(kappa) and RP^n -> RP^n(kappa), x -> kappa x.
MapObject make_sphere_homothety(int n, double kappa);
MapObject make_rp_homothety(int n, double kappa);
// x -> (f(x), r x) into codomain x S^2(r); f must have domain S^2.
MapObject make_product_lift(const MapObject& f, double r);
// [a : b] -> [conj a : conj b].
MapObject make_conjugation();
// S^2 -> S^2, polar angle theta -> theta + eps sin(2 theta).
MapObject make_latitude_squash(double eps = 0.2);
// CP^2 -> S^7, z -> (z z^H - I/3) / sqrt(2/3) in an orthonormal basis of the
// traceless Hermitian matrices. |dF(v)|^2 = 3 |v|^2.
MapObject make_hermitian_eigenmap();

// Smooth ambient field used for perturbations: U(1)-equivariant cubic on
// CP^N, odd cubic on S^n and RP^n, projected to the tangent space.
Vec perturbation_field(const Manifold& M, const Point& x);
// x -> exp_x(eps W(x)).
MapObject make_perturbed_identity(const Manifold& M, double eps);

struct SqueezeResult {
  std::vector<double> lambdas;
  std::vector<EnergyValue> energies;
  // C_N E_2(F restricted to P_0 = {z_2 = ... = z_N = 0}).
  double target = 0.0;
  double restricted_energy = 0.0;
};

// E_2(F o T_lambda) on `grid` for each lambda, and the target computed on a
// separate CP^1 grid.
SqueezeResult squeeze_limit(const MapObject& F, const std::vector<double>& lambdas, const QuadratureGrid& grid,
                            const QuadratureGrid& line_grid, Exec exec = default_exec());

// Catalog: identity(M), inclusion(M,M), double_cover, homothety(M,k),
// rational(line|conic|veronese|random<d>[,seed]), dilation(CPN,lambda),
// theta(t), capped_theta(t), perturbed(M,eps), conjugation, squash[(eps)],
// eigenmap, constant(M), product_lift(key,r). M is S<n>, RP<n> or CP<n>.
MapObject standard_map(const std::string& key);
std::vector<std::string> corpus_keys();
Manifold parse_manifold(const std::string& s);

}  // namespace cpnlab
