#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cpnlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

// Points are ambient representatives; tangent vectors are ambient vectors
// orthogonal (horizontal, for CP^N) to the representative they are based at.
using Point = Vec;

inline constexpr double kPi = std::numbers::pi;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a log map is requested at or beyond the cut locus, or a map is
// evaluated at a singular point. Callers resample or drop the node.
class ResampleRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CutLocusError : public ResampleRequest {
 public:
  using ResampleRequest::ResampleRequest;
};

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Volume of the unit k-sphere in R^{k+1}.
inline double sphere_volume(int k) {
  if (k < 0) throw DomainError("sphere_volume: negative dimension");
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

// C^{m} is stored in R^{2m} with interleaved (re, im) pairs.
inline CVec to_complex(const Vec& x) {
  const Eigen::Index m = x.size() / 2;
  CVec z(m);
  for (Eigen::Index k = 0; k < m; ++k) z[k] = cplx(x[2 * k], x[2 * k + 1]);
  return z;
}

inline Vec to_real(const CVec& z) {
  Vec x(2 * z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    x[2 * k] = z[k].real();
    x[2 * k + 1] = z[k].imag();
  }
  return x;
}

// Multiplication by i in the interleaved layout.
inline Vec times_i(const Vec& x) {
  Vec y(x.size());
  for (Eigen::Index k = 0; k + 1 < x.size(); k += 2) {
    y[k] = -x[k + 1];
    y[k + 1] = x[k];
  }
  return y;
}

// Hermitian product <x, y> = sum conj(x_k) y_k in the interleaved layout.
inline cplx hermitian(const Vec& x, const Vec& y) {
  double re = 0.0, im = 0.0;
  for (Eigen::Index k = 0; k + 1 < x.size(); k += 2) {
    re += x[k] * y[k] + x[k + 1] * y[k + 1];
    im += x[k] * y[k + 1] - x[k + 1] * y[k];
  }
  return {re, im};
}

// Complex scalar times interleaved vector.
inline Vec cscale(cplx c, const Vec& x) {
  Vec y(x.size());
  for (Eigen::Index k = 0; k + 1 < x.size(); k += 2) {
    y[k] = c.real() * x[k] - c.imag() * x[k + 1];
    y[k + 1] = c.real() * x[k + 1] + c.imag() * x[k];
  }
  return y;
}

}  // namespace cpnlab
