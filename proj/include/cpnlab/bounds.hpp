#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "cpnlab/common.hpp"

namespace cpnlab {

enum class BoundKind { CpnP, RpnP, Infimum, Rp3Interval, Pu, Elementary };

std::string to_string(BoundKind k);

// Lower bounds for energies at supplied invariants. A* is the least area of
// a map from a line in the homotopy class, L* the least length of the image
// of a closed geodesic, B* the least area of the image of RP^2.
struct BoundSpec {
  BoundKind kind = BoundKind::CpnP;
  int N = 1;  // complex dimension (CpnP, Infimum)
  int n = 2;  // real dimension (RpnP, Elementary)
  double p = 2.0;
  double Astar = 0.0;
  double Lstar = 0.0;
  double Bstar = 0.0;
  double area = 0.0;
  double systole = 0.0;
  double vol = 0.0;
  double pvol = 0.0;

  static BoundSpec cpn_p(int N, double p, double Astar);
  static BoundSpec rpn_p(int n, double p, double Lstar);
  static BoundSpec infimum(int N, double Astar);
  static BoundSpec rp3_interval(double Bstar);
  static BoundSpec pu(double area, double systole);
  static BoundSpec elementary(double p, int n, double vol, double pvol);
};

struct BoundValue {
  double lo = 0.0;
  double hi = 0.0;
  bool interval = false;
  // CpnP with p > 2: the bound is never attained.
  bool strict = false;

  double value() const { return lo; }
};

// CpnP:        pi^N / (2 N!) ((2N / pi) A*)^{p/2}, p >= 2
// RpnP:        sigma(n) / 4 (sqrt(n) L* / pi)^p, p >= 1
// Infimum:     C_N A*
// Rp3Interval: [3 pi B* / 4, pi B*]
// Pu:          area - (2 / pi) systole^2 (the slack)
// Elementary:  n^{p/2} pvol^{p/n} / (2 vol^{(p-n)/n}), p >= n
BoundValue eval_bound(const BoundSpec& spec);

// C_N = pi^{N-1} / (N-1)!.
double c_n(int N);

// "CPN_P(2,2,3.14159)", "RPN_P(3,2,pi)", "INFIMUM(2,pi)", "RP3_INTERVAL(2pi)",
// "PU(area,sys)", "ELEMENTARY(p,n,vol,pvol)". Numbers may be written as
// multiples of pi ("2pi", "pi").
BoundSpec parse_bound(const std::string& text);

struct SystoleResult {
  double systole = 0.0;
  // Same computation one mesh level finer, and |difference|.
  double refined = 0.0;
  double uncertainty = 0.0;
  int level = 0;
  int ring = 0;
  // Area of (RP^2, mu g_0) by quadrature at both levels.
  double area = 0.0;
  double area_uncertainty = 0.0;
  double slack = 0.0;
  double slack_uncertainty = 0.0;
};

using ConformalFactor = std::function<double(const Eigen::Vector3d&)>;

// Graph systole of (RP^2, mu g_0): shortest path on the S^2 mesh between a
// vertex and its antipode. Each vertex is joined to everything within `ring`
// hops by a great-circle arc weighted with the integral of sqrt(mu); larger
// rings give more path directions and less zigzag bias.
double graph_systole(const ConformalFactor& mu, int level, int ring = 3);
// Graph systole at `level` and level + 1, mesh area of mu, and Pu slack.
SystoleResult systole_rp2(const ConformalFactor& mu, int level = 3, int ring = 3);

}  // namespace cpnlab
