#include "cpnlab/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace cpnlab {

Vec second_form_diagonal(const MapObject& F, const Point& x, const Point& fx, const Vec& v, double h) {
  const Manifold& D = F.domain();
  const Manifold& C = F.codomain();
  const Vec a = log_map(C, fx, F(exp_map(D, x, h * v)));
  const Vec b = log_map(C, fx, F(exp_map(D, x, -h * v)));
  return (a + b) / (h * h);
}

Vec second_form(const MapObject& F, const Point& x, const Point& fx, const Vec& v, const Vec& w, double h) {
  return 0.25 * (second_form_diagonal(F, x, fx, v + w, h) - second_form_diagonal(F, x, fx, v - w, h));
}

SecondFormSample second_fundamental_form(const MapObject& F, const Point& x, const Vec& v, const Vec& w, double h) {
  const Point fx = F(x);
  return {x, v, w, second_form(F, x, fx, v, w, h)};
}

Vec tension(const MapObject& F, const Point& x, double h) { return tension(F, x, tangent_frame(F.domain(), x), h); }

Vec tension(const MapObject& F, const Point& x, const TangentFrame& frame, double h) {
  const Point fx = F(x);
  Vec t = Vec::Zero(fx.size());
  for (const Vec& e : frame.vectors) t += second_form_diagonal(F, x, fx, e, h);
  return t;
}

namespace {

// alpha(e_i, e_j) for all frame pairs.
std::vector<std::vector<Vec>> second_form_table(const MapObject& F, const Point& x, const Point& fx,
                                                const TangentFrame& frame, double h) {
  const std::size_t n = frame.vectors.size();
  std::vector<std::vector<Vec>> A(n, std::vector<Vec>(n));
  for (std::size_t i = 0; i < n; ++i) {
    A[i][i] = second_form_diagonal(F, x, fx, frame.vectors[i], h);
    for (std::size_t j = 0; j < i; ++j) {
      A[i][j] = second_form(F, x, fx, frame.vectors[i], frame.vectors[j], h);
      A[j][i] = A[i][j];
    }
  }
  return A;
}

// J e_i = sign(i) e_{partner(i)} in a unitary frame.
std::size_t partner(std::size_t i) { return i ^ 1u; }
double jsign(std::size_t i) { return (i % 2 == 0) ? 1.0 : -1.0; }

void require_complex_domain(const MapObject& F, const char* what) {
  if (!F.domain().is_complex()) throw DomainError(std::string(what) + ": domain of " + F.name() + " is not CP^N");
}

}  // namespace

double second_form_sup(const MapObject& F, const Point& x, double h) {
  const Point fx = F(x);
  const auto A = second_form_table(F, x, fx, tangent_frame(F.domain(), x), h);
  double r = 0.0;
  for (const auto& row : A)
    for (const Vec& a : row) r = std::max(r, norm(F.codomain(), fx, a));
  return r;
}

double pluriharmonic_residual(const MapObject& F, const Point& x, double h) {
  require_complex_domain(F, "pluriharmonic_residual");
  const Point fx = F(x);
  const TangentFrame frame = tangent_frame(F.domain(), x);
  const auto A = second_form_table(F, x, fx, frame, h);
  double r = 0.0;
  const std::size_t n = A.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Vec s = jsign(i) * jsign(j) * A[partner(i)][partner(j)] + A[i][j];
      r = std::max(r, norm(F.codomain(), fx, s));
    }
  return r;
}

double hermitian_residual(const MapObject& F, const Point& x, double h) {
  require_complex_domain(F, "hermitian_residual");
  const GramMatrix G = pullback_gram(F, x, tangent_frame(F.domain(), x), h);
  const Eigen::Index n = G.g.rows();
  double r = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double gj = jsign(i) * jsign(j) * G.g(partner(i), partner(j));
      r = std::max(r, std::abs(gj - G.g(i, j)));
    }
  return r;
}

double holomorphy_residual(const MapObject& F, const Point& x, double h) {
  require_complex_domain(F, "holomorphy_residual");
  if (!F.codomain().is_complex()) throw DomainError("holomorphy_residual: codomain is not CP^N");
  const Point fx = F(x);
  const TangentFrame frame = tangent_frame(F.domain(), x);
  double r = 0.0;
  for (std::size_t i = 0; i < frame.vectors.size(); i += 2) {
    const Vec a = directional(F, x, fx, frame.vectors[i], h);
    const Vec b = directional(F, x, fx, frame.vectors[i + 1], h);
    r = std::max(r, (b - complex_structure(F.codomain(), fx, a)).norm());
  }
  return r;
}

VariationField zero_variation(const MapObject& F) {
  const int n = F.codomain().ambient_dim();
  return {[n](const Point&, const Point&) { return Vec(Vec::Zero(n)); }, "zero"};
}

VariationField pushforward_variation(const MapObject& F, std::function<Vec(const Point&)> V, std::string name) {
  return {[F, V](const Point& x, const Point& fx) { return directional(F, x, fx, V(x)); },
          "pushforward of " + name};
}

VariationField holomorphic_variation(const MapObject& F, const LieAlgebraElement& a) {
  require_complex_domain(F, "holomorphic_variation");
  const Manifold D = F.domain();
  return pushforward_variation(
      F, [D, a](const Point& x) { return complex_structure(D, x, killing_field(D, a, x)); }, "J K_a");
}

VariationField conformal_gradient_variation(const MapObject& F, int k) {
  const Manifold D = F.domain();
  if (D.kind() != Manifold::Kind::Sphere || D.radius() != 1.0 || k < 0 || k > D.param())
    throw DomainError("conformal_gradient_variation: needs a unit sphere domain and 0 <= k <= n");
  return pushforward_variation(
      F,
      [D, k](const Point& x) {
        Vec e = Vec::Zero(x.size());
        e[k] = 1.0;
        return project_tangent(D, x, e);
      },
      "grad x_" + std::to_string(k));
}

VariationField negated(const VariationField& W) {
  auto f = W.field;
  return {[f](const Point& x, const Point& fx) { return Vec(-f(x, fx)); }, "-(" + W.provenance + ")"};
}

MapObject varied_map(const MapObject& F, const VariationField& W, double t) {
  const Manifold C = F.codomain();
  auto f = W.field;
  return MapObject(
      F.domain(), C,
      [F, f, C, t](const Point& x) {
        const Point fx = F(x);
        return exp_map(C, fx, t * f(x, fx));
      },
      F.name() + "+tW", F.smoothness());
}

namespace {

struct FivePoint {
  double value = 0.0;
  bool dropped = false;
};

FivePoint five_point(const MapObject& F, const VariationField& W, const QuadratureGrid& grid, double tau,
                     Exec exec) {
  const double ts[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const double cs[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
  FivePoint r;
  double acc = 0.0;
  for (int k = 0; k < 5; ++k) {
    const EnergyValue e = p_energy(varied_map(F, W, ts[k] * tau), grid, 2.0, {}, exec);
    if (e.dropped > 0) r.dropped = true;
    acc += cs[k] * e.value;
  }
  r.value = acc / (12.0 * tau * tau);
  return r;
}

double w_norm_sq(const MapObject& F, const VariationField& W, const QuadratureGrid& grid, Exec exec) {
  return integrate(
             grid,
             [&](const Point& x) {
               const Point fx = F(x);
               return W.field(x, fx).squaredNorm();
             },
             exec)
      .value;
}

double probe_tension(const MapObject& F, const QuadratureGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t probes = std::min<std::size_t>(8, n);
  double r = 0.0;
  for (std::size_t k = 0; k < probes; ++k) {
    const Point& x = grid.nodes[(k * n) / probes];
    try {
      const Point fx = F(x);
      r = std::max(r, norm(F.codomain(), fx, tension(F, x)));
    } catch (const ResampleRequest&) {
    }
  }
  return r;
}

}  // namespace

SecondVariation second_variation(const MapObject& F, const VariationField& W, const QuadratureGrid& grid, double tau,
                                 Exec exec) {
  if (!(tau > 0.0)) throw DomainError("second_variation: tau must be positive");
  if (!(grid.manifold == F.domain())) throw DomainError("second_variation: grid is not on the domain of " + F.name());
  SecondVariation sv;
  sv.probe_tension = probe_tension(F, grid);
  sv.harmonic_warning = sv.probe_tension > 1e-3;
  sv.w_norm_sq = w_norm_sq(F, W, grid, exec);
  FivePoint fp = five_point(F, W, grid, tau, exec);
  if (fp.dropped) {
    tau *= 0.5;
    sv.retried = true;
    fp = five_point(F, W, grid, tau, exec);
    if (fp.dropped) throw CutLocusError("second_variation: variation of " + F.name() + " reaches the cut locus");
  }
  sv.value = fp.value;
  sv.tau = tau;
  return sv;
}

double JacobiCheck::relative_gap(double floor) const {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), floor * w_norm_sq});
  return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

JacobiCheck jacobi_identity_check(const MapObject& F, const LieAlgebraElement& a, const QuadratureGrid& grid,
                                  Exec exec) {
  require_complex_domain(F, "jacobi_identity_check");
  const Manifold D = F.domain();
  const Manifold C = F.codomain();
  const VariationField W = holomorphic_variation(F, a);
  const SecondVariation sv = second_variation(F, W, grid, 1e-2, exec);
  JacobiCheck out;
  out.lhs = sv.value;
  out.w_norm_sq = sv.w_norm_sq;
  out.rhs = integrate(
                grid,
                [&](const Point& x) {
                  const Point fx = F(x);
                  const TangentFrame frame = tangent_frame(D, x);
                  Vec s = Vec::Zero(fx.size());
                  for (const Vec& e : frame.vectors) {
                    const Vec dv = complex_structure(D, x, killing_covariant_derivative(D, a, x, e));
                    s += second_form(F, x, fx, dv, e);
                  }
                  return -2.0 * inner(C, fx, s, W.field(x, fx));
                },
                exec)
                .value;
  return out;
}

TraceFormII trace_form_II(const MapObject& F, const QuadratureGrid& grid, const std::vector<LieAlgebraElement>& basis,
                          Exec exec) {
  TraceFormII out;
  for (const auto& a : basis) {
    const SecondVariation sv = second_variation(F, holomorphic_variation(F, a), grid, 1e-2, exec);
    out.terms.push_back(sv.value);
    out.abs_sum += std::abs(sv.value);
    out.w_norm_sq += sv.w_norm_sq;
  }
  out.trace = ordered_sum(out.terms);
  return out;
}

LineIntegral omega_star_line_integral(const MapObject& F, const LineEmbedding& line, const QuadratureGrid& grid,
                                      Exec exec) {
  require_complex_domain(F, "omega_star_line_integral");
  if (grid.manifold.kind() != Manifold::Kind::ComplexProjective || grid.manifold.param() != 1)
    throw DomainError("omega_star_line_integral: grid must be on CP^1");
  const Manifold L = grid.manifold;
  const Manifold D = F.domain();
  const Manifold C = F.codomain();
  const MapObject iota = line.as_map();
  LineIntegral out;
  out.omega = integrate(
                  grid,
                  [&](const Point& y) {
                    const TangentFrame frame = tangent_frame(L, y);
                    const Point p = iota(y);
                    const Vec u = iota.analytic_differential(y, p, frame.vectors[0]);
                    const Vec v = iota.analytic_differential(y, p, frame.vectors[1]);
                    const Point fp = F(p);
                    const Vec dju = directional(F, p, fp, complex_structure(D, p, u));
                    const Vec dv = directional(F, p, fp, v);
                    return inner(C, fp, dju, dv);
                  },
                  exec)
                  .value;
  out.area = surface_area(compose(F, iota), grid, {}, exec).value;
  const std::size_t probes = std::min<std::size_t>(4, grid.size());
  for (std::size_t k = 0; k < probes; ++k) {
    const Point p = iota(grid.nodes[(k * grid.size()) / probes]);
    out.max_pluriharmonic_residual = std::max(out.max_pluriharmonic_residual, pluriharmonic_residual(F, p));
  }
  out.pluriharmonic_warning = out.max_pluriharmonic_residual > 1e-3;
  return out;
}

RankProfile rank_profile(const MapObject& F, const QuadratureGrid& grid, Exec exec) {
  const Manifold& D = F.domain();
  const auto ranks = map_indices<int>(
      grid.size(),
      [&](std::size_t i) {
        const Point& x = grid.nodes[i];
        const GramMatrix G = pullback_gram(F, x, tangent_frame(D, x));
        const double top = G.eigenvalues.size() ? G.eigenvalues[G.eigenvalues.size() - 1] : 0.0;
        if (top <= 1e-14) return 0;
        int r = 0;
        for (Eigen::Index k = 0; k < G.eigenvalues.size(); ++k)
          if (G.eigenvalues[k] > 1e-6 * top) ++r;
        return r;
      },
      exec);
  RankProfile out;
  out.counts.assign(D.dim() + 1, 0);
  for (int r : ranks) ++out.counts[r];
  out.full_rank_fraction = grid.size() ? static_cast<double>(out.counts[D.dim()]) / grid.size() : 0.0;
  return out;
}

std::vector<DiagnosticRow> diagnostics(const MapObject& F, const std::vector<Point>& probes, Exec exec) {
  const bool cx = F.domain().is_complex();
  return map_indices<DiagnosticRow>(
      probes.size(),
      [&](std::size_t i) {
        DiagnosticRow r;
        r.probe = probes[i];
        const Point fx = F(r.probe);
        r.tension = norm(F.codomain(), fx, tension(F, r.probe));
        if (cx) {
          r.pluriharmonic = pluriharmonic_residual(F, r.probe);
          r.hermitian = hermitian_residual(F, r.probe);
        } else {
          r.pluriharmonic = r.hermitian = std::numeric_limits<double>::quiet_NaN();
        }
        return r;
      },
      exec);
}

void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows, std::ostream& out) {
  const Eigen::Index d = rows.empty() ? 0 : rows.front().probe.size();
  out << "probe";
  for (Eigen::Index k = 0; k < d; ++k) out << ",x" << k;
  out << ",tension,pluriharmonic,hermitian\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i;
    for (Eigen::Index k = 0; k < d; ++k) out << ',' << rows[i].probe[k];
    out << ',' << rows[i].tension << ',' << rows[i].pluriharmonic << ',' << rows[i].hermitian << '\n';
  }
}

}  // namespace cpnlab
