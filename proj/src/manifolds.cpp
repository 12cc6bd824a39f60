#include "cpnlab/manifolds.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cpnlab {

namespace {

// theta / sin(theta), accurate near zero.
double theta_over_sin(double theta) {
  if (std::abs(theta) < 1e-4) return 1.0 + theta * theta / 6.0;
  return theta / std::sin(theta);
}

template <class Fn>
void for_each_factor(const Manifold& M, Fn&& fn) {
  Eigen::Index offset = 0;
  for (const auto& f : M.factors()) {
    const Eigen::Index len = f.ambient_dim();
    fn(f, offset, len);
    offset += len;
  }
}

Point sphere_exp(const Point& x, const Vec& v, double r) {
  const double len = v.norm();
  if (len == 0.0) return x;
  const double theta = len / r;
  return std::cos(theta) * x + (std::sin(theta) * r / len) * v;
}

// Log on the radius-r sphere without cut checks.
Vec sphere_log(const Point& x, const Point& y, double r) {
  const double c = x.dot(y) / (r * r);
  const Vec u = y - c * x;
  const double theta = std::atan2(u.norm() / r, c);
  return theta_over_sin(theta) * u;
}

double sphere_angle(const Point& x, const Point& y, double r, bool unsigned_dot) {
  double c = x.dot(y) / (r * r);
  if (unsigned_dot) c = std::abs(c);
  const Vec u = y - (x.dot(y) / (r * r)) * x;
  return std::atan2(u.norm() / r, c);
}

void require_size(const Manifold& M, const Vec& x, const char* what) {
  if (x.size() != M.ambient_dim()) {
    std::ostringstream os;
    os << what << ": ambient size " << x.size() << " does not match " << M.name();
    throw DomainError(os.str());
  }
}

}  // namespace

Manifold Manifold::sphere(int n, double radius) {
  if (n < 1 || !(radius > 0.0)) throw DomainError("sphere: need n >= 1 and radius > 0");
  Manifold m;
  m.kind_ = Kind::Sphere;
  m.param_ = n;
  m.radius_ = radius;
  return m;
}

Manifold Manifold::real_projective(int n, double radius) {
  if (n < 1 || !(radius > 0.0)) throw DomainError("real_projective: need n >= 1 and radius > 0");
  Manifold m;
  m.kind_ = Kind::RealProjective;
  m.param_ = n;
  m.radius_ = radius;
  return m;
}

Manifold Manifold::complex_projective(int N) {
  if (N < 1) throw DomainError("complex_projective: need N >= 1");
  Manifold m;
  m.kind_ = Kind::ComplexProjective;
  m.param_ = N;
  return m;
}

Manifold Manifold::product(std::vector<Manifold> factors) {
  if (factors.empty()) throw DomainError("product: no factors");
  Manifold m;
  m.kind_ = Kind::Product;
  m.factors_ = std::move(factors);
  return m;
}

int Manifold::dim() const {
  switch (kind_) {
    case Kind::Sphere:
    case Kind::RealProjective:
      return param_;
    case Kind::ComplexProjective:
      return 2 * param_;
    case Kind::Product:
      return std::accumulate(factors_.begin(), factors_.end(), 0,
                             [](int acc, const Manifold& f) { return acc + f.dim(); });
  }
  return 0;
}

int Manifold::ambient_dim() const {
  switch (kind_) {
    case Kind::Sphere:
    case Kind::RealProjective:
      return param_ + 1;
    case Kind::ComplexProjective:
      return 2 * (param_ + 1);
    case Kind::Product:
      return std::accumulate(factors_.begin(), factors_.end(), 0,
                             [](int acc, const Manifold& f) { return acc + f.ambient_dim(); });
  }
  return 0;
}

double Manifold::volume() const {
  switch (kind_) {
    case Kind::Sphere:
      return sphere_volume(param_) * std::pow(radius_, param_);
    case Kind::RealProjective:
      return 0.5 * sphere_volume(param_) * std::pow(radius_, param_);
    case Kind::ComplexProjective:
      return std::pow(kPi, param_) / factorial(param_);
    case Kind::Product:
      return std::accumulate(factors_.begin(), factors_.end(), 1.0,
                             [](double acc, const Manifold& f) { return acc * f.volume(); });
  }
  return 0.0;
}

double Manifold::cut_distance() const {
  switch (kind_) {
    case Kind::Sphere:
      return kPi * radius_;
    case Kind::RealProjective:
      return 0.5 * kPi * radius_;
    case Kind::ComplexProjective:
      return 0.5 * kPi;
    case Kind::Product: {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& f : factors_) d = std::min(d, f.cut_distance());
      return d;
    }
  }
  return 0.0;
}

std::string Manifold::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Sphere:
      os << "S" << param_;
      if (radius_ != 1.0) os << "(" << radius_ << ")";
      break;
    case Kind::RealProjective:
      os << "RP" << param_;
      if (radius_ != 1.0) os << "(" << radius_ << ")";
      break;
    case Kind::ComplexProjective:
      os << "CP" << param_;
      break;
    case Kind::Product:
      for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "x" : "") << factors_[i].name();
      break;
  }
  return os.str();
}

bool Manifold::operator==(const Manifold& other) const {
  return kind_ == other.kind_ && param_ == other.param_ && radius_ == other.radius_ &&
         factors_ == other.factors_;
}

LieAlgebraElement LieAlgebraElement::real_skew(const Mat& a) {
  LieAlgebraElement e;
  e.is_complex = false;
  e.real = a;
  if (a.rows() != a.cols()) throw DomainError("real_skew: matrix not square");
  if (e.skewness_residual() > 1e-12 * std::max(1.0, a.norm())) throw DomainError("real_skew: matrix not skew");
  return e;
}

LieAlgebraElement LieAlgebraElement::complex_skew(const CMat& a) {
  LieAlgebraElement e;
  e.is_complex = true;
  e.cplx = a;
  if (a.rows() != a.cols()) throw DomainError("complex_skew: matrix not square");
  if (e.skewness_residual() > 1e-12 * std::max(1.0, a.norm())) throw DomainError("complex_skew: matrix not skew-Hermitian");
  return e;
}

double LieAlgebraElement::skewness_residual() const {
  if (is_complex) return (cplx + cplx.adjoint()).norm();
  return (real + real.transpose()).norm();
}

double LieAlgebraElement::norm() const { return is_complex ? cplx.norm() : real.norm(); }

LieAlgebraElement LieAlgebraElement::scaled(double s) const {
  LieAlgebraElement e = *this;
  if (is_complex)
    e.cplx *= s;
  else
    e.real *= s;
  return e;
}

double point_residual(const Manifold& M, const Point& x) {
  switch (M.kind()) {
    case Manifold::Kind::Sphere:
    case Manifold::Kind::RealProjective:
      return std::abs(x.norm() - M.radius());
    case Manifold::Kind::ComplexProjective:
      return std::abs(x.norm() - 1.0);
    case Manifold::Kind::Product: {
      double r = 0.0;
      for_each_factor(M, [&](const Manifold& f, Eigen::Index off, Eigen::Index len) {
        r = std::max(r, point_residual(f, x.segment(off, len)));
      });
      return r;
    }
  }
  return 0.0;
}

double tangent_residual(const Manifold& M, const Point& x, const Vec& v) {
  switch (M.kind()) {
    case Manifold::Kind::Sphere:
    case Manifold::Kind::RealProjective:
      return std::abs(x.dot(v)) / M.radius();
    case Manifold::Kind::ComplexProjective:
      return std::abs(hermitian(x, v));
    case Manifold::Kind::Product: {
      double r = 0.0;
      for_each_factor(M, [&](const Manifold& f, Eigen::Index off, Eigen::Index len) {
        r = std::max(r, tangent_residual(f, x.segment(off, len), v.segment(off, len)));
      });
      return r;
    }
  }
  return 0.0;
}

Point canonicalize(const Manifold& M, const Point& x) {
  require_size(M, x, "canonicalize");
  switch (M.kind()) {
    case Manifold::Kind::Sphere:
      return x * (M.radius() / x.norm());
    case Manifold::Kind::RealProjective: {
      Point y = x * (M.radius() / x.norm());
      for (Eigen::Index k = 0; k < y.size(); ++k) {
        if (y[k] != 0.0) {
          if (y[k] < 0.0) y = -y;
          break;
        }
      }
      return y;
    }
    case Manifold::Kind::ComplexProjective: {
      CVec z = to_complex(x);
      z /= z.norm();
      for (Eigen::Index k = 0; k < z.size(); ++k) {
        if (std::abs(z[k]) > 0.0) {
          z *= std::conj(z[k]) / std::abs(z[k]);
          z[k] = cplx(z[k].real(), 0.0);
          break;
        }
      }
      return to_real(z);
    }
    case Manifold::Kind::Product: {
      Point y(x.size());
      for_each_factor(M, [&](const Manifold& f, Eigen::Index off, Eigen::Index len) {
        y.segment(off, len) = canonicalize(f, x.segment(off, len));
      });
      return y;
    }
  }
  return x;
}

Vec project_tangent(const Manifold& M, const Point& x, const Vec& w) {
  switch (M.kind()) {
    case Manifold::Kind::Sphere:
    case Manifold::Kind::RealProjective:
      return w - (x.dot(w) / x.squaredNorm()) * x;
    case Manifold::Kind::ComplexProjective:
      return w - cscale(hermitian(x, w), x);
    case Manifold::Kind::Product: {
      Vec y(w.size());
      for_each_factor(M, [&](const Manifold& f, Eigen::Index off, Eigen::Index len) {
        y.segment(off, len) = project_tangent(f, x.segment(off, len), w.segment(off, len));
      });
      return y;
    }
  }
  return w;
}

double inner(const Manifold&, const Point&, const Vec& u, const Vec& v) { return u.dot(v); }

double norm(const Manifold&, const Point&, const Vec& v) { return v.norm(); }

Point exp_map(const Manifold& M, const Point& x, const Vec& v) {
  require_size(M, x, "exp_map");
  require_size(M, v, "exp_map");
  switch (M.kind()) {
    case Manifold::Kind::Sphere:
    case Manifold::Kind::RealProjective:
      return sphere_exp(x, v, M.radius());
    case Manifold::Kind::ComplexProjective:
      return sphere_exp(x, v, 1.0);
    case Manifold::Kind::Product: {
      Point y(x.size());
      for_each_factor(M, [&](const Manifold& f, Eigen::Index off, Eigen::Index len) {
        y.segment(off, len) = exp_map(f, x.segment(off, len), v.segment(off, len));
      });
      return y;
    }
  }
  return x;
}

Vec log_map(const Manifold& M, const Point& x, const Point& y) {
  require_size(M, x, "log_map");
  require_size(M, y, "log_map");
  switch (M.kind()) {
    case Manifold::Kind::Sphere: {
      const double r = M.radius();
      if (r * sphere_angle(x, y, r, false) >= M.cut_distance() - kCutGuard)
        throw CutLocusError("log_map: point at the cut locus of S^n");
      return sphere_log(x, y, r);
    }
    case Manifold::Kind::RealProjective: {
      const double r = M.radius();
      const Point yy = x.dot(y) < 0.0 ? Point(-y) : y;
      if (r * sphere_angle(x, yy, r, false) >= M.cut_distance() - kCutGuard)
        throw CutLocusError("log_map: point at the cut locus of RP^n");
      return sphere_log(x, yy, r);
    }
    case Manifold::Kind::ComplexProjective: {
      const cplx h = hermitian(x, y);
      const double a = std::abs(h);
      const Vec u0 = y - cscale(h, x);
      const double d = std::atan2(u0.norm(), a);
      if (d >= M.cut_distance() - kCutGuard) throw CutLocusError("log_map: point at the cut locus of CP^N");
      // Rotate the fibre so <x, y'> is real and positive; the great-circle
      // log is then horizontal.
      const Vec u = cscale(std::conj(h) / a, u0);
      return theta_over_sin(d) * u;
    }
    case Manifold::Kind::Product: {
      Vec v(x.size());
      for_each_factor(M, [&](const Manifold& f, Eigen::Index off, Eigen::Index len) {
        v.segment(off, len) = log_map(f, x.segment(off, len), y.segment(off, len));
      });
      return v;
    }
  }
  return Vec::Zero(x.size());
}

double distance(const Manifold& M, const Point& x, const Point& y) {
  require_size(M, x, "distance");
  require_size(M, y, "distance");
  switch (M.kind()) {
    case Manifold::Kind::Sphere:
      return M.radius() * sphere_angle(x, y, M.radius(), false);
    case Manifold::Kind::RealProjective:
      return M.radius() * sphere_angle(x, y, M.radius(), true);
    case Manifold::Kind::ComplexProjective: {
      const cplx h = hermitian(x, y);
      return std::atan2((y - cscale(h, x)).norm(), std::abs(h));
    }
    case Manifold::Kind::Product: {
      double s = 0.0;
      for_each_factor(M, [&](const Manifold& f, Eigen::Index off, Eigen::Index len) {
        const double d = distance(f, x.segment(off, len), y.segment(off, len));
        s += d * d;
      });
      return std::sqrt(s);
    }
  }
  return 0.0;
}

Vec complex_structure(const Manifold& M, const Point& x, const Vec& u) {
  if (!M.is_complex()) throw DomainError("complex_structure: " + M.name() + " is not complex");
  require_size(M, x, "complex_structure");
  return times_i(u);
}

namespace {

void require_lie_shape(const Manifold& M, const LieAlgebraElement& a) {
  const bool ok = M.is_complex()
                      ? (a.is_complex && a.cplx.rows() == M.param() + 1)
                      : (!a.is_complex && a.real.rows() == M.ambient_dim() &&
                         M.kind() != Manifold::Kind::Product);
  if (!ok) throw DomainError("Lie algebra element shape does not match " + M.name());
}

}  // namespace

Vec killing_field(const Manifold& M, const LieAlgebraElement& a, const Point& x) {
  require_lie_shape(M, a);
  if (M.is_complex()) {
    const CVec z = to_complex(x);
    const CVec az = a.cplx * z;
    return to_real(az - z.dot(az) * z);
  }
  return a.real * x;
}

Vec killing_covariant_derivative(const Manifold& M, const LieAlgebraElement& a, const Point& x,
                                 const Vec& e) {
  require_lie_shape(M, a);
  if (M.is_complex()) {
    const CVec z = to_complex(x);
    const CVec ce = to_complex(e);
    const CVec ae = a.cplx * ce;
    const CVec az = a.cplx * z;
    return to_real(ae - z.dot(ae) * z - z.dot(az) * ce);
  }
  const Vec ae = a.real * e;
  return ae - (x.dot(ae) / x.squaredNorm()) * x;
}

Point killing_flow(const Manifold& M, const LieAlgebraElement& a, const Point& x, double t) {
  require_lie_shape(M, a);
  if (M.is_complex()) {
    const CMat g = (t * a.cplx).exp();
    return to_real(g * to_complex(x));
  }
  const Mat g = (t * a.real).exp();
  return g * x;
}

Point random_point(const Manifold& M, RngStream& rng) {
  switch (M.kind()) {
    case Manifold::Kind::Sphere:
    case Manifold::Kind::RealProjective:
    case Manifold::Kind::ComplexProjective: {
      Vec g(M.ambient_dim());
      for (Eigen::Index k = 0; k < g.size(); ++k) g[k] = rng.normal();
      return canonicalize(M, g);
    }
    case Manifold::Kind::Product: {
      Point x(M.ambient_dim());
      for_each_factor(M, [&](const Manifold& f, Eigen::Index off, Eigen::Index len) {
        x.segment(off, len) = random_point(f, rng);
      });
      return x;
    }
  }
  return {};
}

Vec random_unit_tangent(const Manifold& M, const Point& x, RngStream& rng) {
  require_size(M, x, "random_unit_tangent");
  for (;;) {
    Vec g(M.ambient_dim());
    for (Eigen::Index k = 0; k < g.size(); ++k) g[k] = rng.normal();
    const Vec v = project_tangent(M, x, g);
    const double len = v.norm();
    if (len > 1e-12) return v / len;
  }
}

Mat random_orthogonal(int n, RngStream& rng) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

CMat random_unitary(int n, RngStream& rng) {
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= std::conj(r(j, j)) / std::abs(r(j, j));
  return q;
}

Point apply_isometry(const Manifold& M, const Mat& q, const CMat& u, const Point& x) {
  if (M.is_complex()) return to_real(u * to_complex(x));
  if (M.kind() == Manifold::Kind::Product) throw DomainError("apply_isometry: products not supported");
  return q * x;
}

double GeodesicLoop::period() const {
  switch (manifold.kind()) {
    case Manifold::Kind::Sphere:
      return 2.0 * kPi * manifold.radius();
    case Manifold::Kind::RealProjective:
      return kPi * manifold.radius();
    case Manifold::Kind::ComplexProjective:
      return kPi;
    case Manifold::Kind::Product:
      break;
  }
  throw DomainError("GeodesicLoop: closed geodesics need a single model factor");
}

Point GeodesicLoop::at(double t) const { return exp_map(manifold, base, t * direction); }

Vec GeodesicLoop::velocity(double t) const {
  const double r = manifold.is_complex() ? 1.0 : manifold.radius();
  return -std::sin(t / r) * base / r + std::cos(t / r) * direction;
}

std::vector<LieAlgebraElement> su_basis(int n) {
  std::vector<LieAlgebraElement> basis;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      CMat a = CMat::Zero(n, n);
      a(j, k) = s;
      a(k, j) = -s;
      basis.push_back(LieAlgebraElement::complex_skew(a));
      CMat b = CMat::Zero(n, n);
      b(j, k) = cplx(0.0, s);
      b(k, j) = cplx(0.0, s);
      basis.push_back(LieAlgebraElement::complex_skew(b));
    }
  }
  for (int l = 1; l < n; ++l) {
    CMat d = CMat::Zero(n, n);
    const double c = 1.0 / std::sqrt(l * (l + 1.0));
    for (int m = 0; m < l; ++m) d(m, m) = cplx(0.0, c);
    d(l, l) = cplx(0.0, -l * c);
    basis.push_back(LieAlgebraElement::complex_skew(d));
  }
  return basis;
}

std::vector<LieAlgebraElement> so_basis(int n) {
  std::vector<LieAlgebraElement> basis;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Mat a = Mat::Zero(n, n);
      a(j, k) = s;
      a(k, j) = -s;
      basis.push_back(LieAlgebraElement::real_skew(a));
    }
  }
  return basis;
}

}  // namespace cpnlab
