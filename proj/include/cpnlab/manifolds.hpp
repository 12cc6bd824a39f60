#pragma once

#include <string>
#include <vector>

#include "cpnlab/common.hpp"
#include "cpnlab/rng.hpp"

namespace cpnlab {

// Model Riemannian manifolds realized inside Euclidean space.
//
//  Sphere(n, r)           radius-r sphere in R^{n+1}; points have norm r.
//  RealProjective(n, r)   S^n(r) / {+-1}; curvature 1/r^2, closed geodesics of
//                         length pi r. Points are representatives of norm r.
//  ComplexProjective(N)   S^{2N+1} / U(1) with the submersion (Fubini-Study)
//                         metric, max sectional curvature 4, diameter pi/2.
//                         Points are unit vectors of C^{N+1} stored
//                         interleaved in R^{2N+2}; tangent vectors are
//                         horizontal lifts.
//  Product(factors)       ambient concatenation of the factors.
class Manifold {
 public:
  enum class Kind { Sphere, RealProjective, ComplexProjective, Product };

  static Manifold sphere(int n, double radius = 1.0);
  static Manifold real_projective(int n, double radius = 1.0);
  static Manifold complex_projective(int N);
  static Manifold product(std::vector<Manifold> factors);

  Kind kind() const { return kind_; }
  // n for spheres and RP^n, complex dimension N for CP^N.
  int param() const { return param_; }
  double radius() const { return radius_; }
  const std::vector<Manifold>& factors() const { return factors_; }

  int dim() const;
  int ambient_dim() const;
  double volume() const;
  // Injectivity radius: distance to the cut locus from any point.
  double cut_distance() const;
  bool is_complex() const { return kind_ == Kind::ComplexProjective; }
  std::string name() const;

  bool operator==(const Manifold& other) const;

 private:
  Manifold() = default;
  Kind kind_ = Kind::Sphere;
  int param_ = 0;
  double radius_ = 1.0;
  std::vector<Manifold> factors_;
};

struct TangentVector {
  Point base;
  Vec v;
};

// Skew-symmetric (real) or skew-Hermitian (complex) matrix generating a
// one-parameter group of isometries.
struct LieAlgebraElement {
  bool is_complex = false;
  Mat real;
  CMat cplx;

  static LieAlgebraElement real_skew(const Mat& a);
  static LieAlgebraElement complex_skew(const CMat& a);

  double skewness_residual() const;
  // Norm induced by -trace(A A), i.e. the Frobenius norm.
  double norm() const;
  LieAlgebraElement scaled(double s) const;
};

// Residual checks used by tests and invariants.
double point_residual(const Manifold& M, const Point& x);
double tangent_residual(const Manifold& M, const Point& x, const Vec& v);

Point canonicalize(const Manifold& M, const Point& x);
Vec project_tangent(const Manifold& M, const Point& x, const Vec& w);
double inner(const Manifold& M, const Point& x, const Vec& u, const Vec& v);
double norm(const Manifold& M, const Point& x, const Vec& v);

Point exp_map(const Manifold& M, const Point& x, const Vec& v);
// Throws CutLocusError within kCutGuard of the cut distance.
Vec log_map(const Manifold& M, const Point& x, const Point& y);
double distance(const Manifold& M, const Point& x, const Point& y);

inline constexpr double kCutGuard = 1e-6;

// Multiplication by i on horizontal vectors; DomainError off CP^N.
Vec complex_structure(const Manifold& M, const Point& x, const Vec& u);

Vec killing_field(const Manifold& M, const LieAlgebraElement& a, const Point& x);
// Levi-Civita derivative of the Killing field of `a` in direction e at x.
Vec killing_covariant_derivative(const Manifold& M, const LieAlgebraElement& a, const Point& x,
                                 const Vec& e);
// Image of x under the isometry exp(t a).
Point killing_flow(const Manifold& M, const LieAlgebraElement& a, const Point& x, double t);

Point random_point(const Manifold& M, RngStream& rng);
Vec random_unit_tangent(const Manifold& M, const Point& x, RngStream& rng);

// Random isometry: orthogonal (real kinds) or unitary (CP^N) ambient matrix,
// applied by apply_isometry.
Mat random_orthogonal(int n, RngStream& rng);
CMat random_unitary(int n, RngStream& rng);
Point apply_isometry(const Manifold& M, const Mat& q, const CMat& u, const Point& x);

// Unit-speed closed geodesic t -> exp_base(t direction). Period 2 pi r on
// S^n(r), pi r on RP^n(r), pi on CP^N.
struct GeodesicLoop {
  Manifold manifold;
  Point base;
  Vec direction;

  double period() const;
  Point at(double t) const;
  Vec velocity(double t) const;
};

// Basis of su(N+1) orthonormal for -trace(AB) (generalized Gell-Mann / sqrt 2).
std::vector<LieAlgebraElement> su_basis(int n);
// Basis of so(n) with unit Frobenius norm.
std::vector<LieAlgebraElement> so_basis(int n);

}  // namespace cpnlab
