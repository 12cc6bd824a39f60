#include "cpnlab/maps.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace cpnlab {

MapObject::MapObject(Manifold domain, Manifold codomain, Evaluator eval, std::string name,
                     Smoothness smoothness, AnalyticDifferential diff)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      eval_(std::make_shared<const Evaluator>(std::move(eval))),
      diff_(std::make_shared<const AnalyticDifferential>(std::move(diff))),
      name_(std::move(name)),
      smoothness_(smoothness) {}

Vec MapObject::analytic_differential(const Point& x, const Point& fx, const Vec& v) const {
  if (!*diff_) throw DomainError("map " + name_ + " has no analytic differential");
  return (*diff_)(x, fx, v);
}

MapObject MapObject::renamed(std::string name) const {
  MapObject m = *this;
  m.name_ = std::move(name);
  return m;
}

MapObject MapObject::without_analytic_differential() const {
  MapObject m = *this;
  m.diff_ = std::make_shared<const AnalyticDifferential>();
  return m;
}

MapObject compose(const MapObject& g, const MapObject& f) {
  if (!(f.codomain() == g.domain()))
    throw DomainError("compose: codomain " + f.codomain().name() + " != domain " + g.domain().name());
  Evaluator eval = [f, g](const Point& x) { return g(f(x)); };
  AnalyticDifferential diff;
  if (f.has_analytic_differential() && g.has_analytic_differential()) {
    diff = [f, g](const Point& x, const Point&, const Vec& v) {
      const Point fx = f(x);
      const Vec dv = f.analytic_differential(x, fx, v);
      return g.analytic_differential(fx, g(fx), dv);
    };
  }
  const Smoothness s = (f.smoothness() == Smoothness::Smooth && g.smoothness() == Smoothness::Smooth)
                           ? Smoothness::Smooth
                           : Smoothness::Lipschitz;
  return MapObject(f.domain(), g.codomain(), std::move(eval), g.name() + "*" + f.name(), s, std::move(diff));
}

MapObject identity_map(const Manifold& M) {
  return MapObject(
      M, M, [](const Point& x) { return x; }, "id_" + M.name(), Smoothness::Smooth,
      [](const Point&, const Point&, const Vec& v) { return v; });
}

MapObject constant_map(const Manifold& domain, const Manifold& codomain, const Point& value) {
  const Point c = canonicalize(codomain, value);
  const Eigen::Index n = codomain.ambient_dim();
  return MapObject(
      domain, codomain, [c](const Point&) { return c; }, "const_" + codomain.name(), Smoothness::Smooth,
      [n](const Point&, const Point&, const Vec&) { return Vec(Vec::Zero(n)); });
}

namespace {

std::vector<Vec> real_frame(const Point& x, int dim) {
  const Eigen::Index n = x.size();
  std::vector<Vec> out;
  const Vec xh = x / x.norm();
  for (Eigen::Index k = 0; k < n && static_cast<int>(out.size()) < dim; ++k) {
    Vec e = Vec::Unit(n, k);
    e -= xh.dot(e) * xh;
    for (const auto& u : out) e -= u.dot(e) * u;
    for (const auto& u : out) e -= u.dot(e) * u;
    e -= xh.dot(e) * xh;
    const double len = e.norm();
    if (len > 0.3) out.push_back(e / len);
  }
  return out;
}

// Complex-orthonormal basis of the horizontal space at z.
std::vector<CVec> complex_frame(const Point& x, int N) {
  const CVec z = to_complex(x);
  const Eigen::Index n = z.size();
  std::vector<CVec> out;
  for (Eigen::Index k = 0; k < n && static_cast<int>(out.size()) < N; ++k) {
    CVec e = CVec::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass) {
      e -= z.dot(e) * z;
      for (const auto& u : out) e -= u.dot(e) * u;
    }
    const double len = e.norm();
    if (len > 0.3) out.push_back(e / len);
  }
  return out;
}

TangentFrame frame_from_complex(const Point& x, const std::vector<CVec>& cols) {
  TangentFrame f;
  f.base = x;
  f.unitary = true;
  for (const auto& c : cols) {
    const Vec u = to_real(c);
    f.vectors.push_back(u);
    f.vectors.push_back(times_i(u));
  }
  return f;
}

TangentFrame build_frame(const Manifold& M, const Point& x, RngStream* rng) {
  switch (M.kind()) {
    case Manifold::Kind::Sphere:
    case Manifold::Kind::RealProjective: {
      auto cols = real_frame(x, M.dim());
      if (rng) {
        const Mat q = random_orthogonal(M.dim(), *rng);
        std::vector<Vec> rotated(cols.size(), Vec::Zero(x.size()));
        for (int j = 0; j < M.dim(); ++j)
          for (int i = 0; i < M.dim(); ++i) rotated[j] += q(i, j) * cols[i];
        cols = std::move(rotated);
      }
      return TangentFrame{x, std::move(cols), false};
    }
    case Manifold::Kind::ComplexProjective: {
      auto cols = complex_frame(x, M.param());
      if (rng) {
        const CMat u = random_unitary(M.param(), *rng);
        std::vector<CVec> rotated(cols.size(), CVec::Zero(cols[0].size()));
        for (int j = 0; j < M.param(); ++j)
          for (int i = 0; i < M.param(); ++i) rotated[j] += u(i, j) * cols[i];
        cols = std::move(rotated);
      }
      return frame_from_complex(x, cols);
    }
    case Manifold::Kind::Product: {
      TangentFrame f;
      f.base = x;
      Eigen::Index off = 0;
      for (const auto& factor : M.factors()) {
        const Eigen::Index len = factor.ambient_dim();
        const TangentFrame sub = build_frame(factor, x.segment(off, len), rng);
        for (const auto& v : sub.vectors) {
          Vec w = Vec::Zero(x.size());
          w.segment(off, len) = v;
          f.vectors.push_back(w);
        }
        off += len;
      }
      return f;
    }
  }
  return {};
}

}  // namespace

TangentFrame tangent_frame(const Manifold& M, const Point& x) { return build_frame(M, x, nullptr); }

TangentFrame random_frame(const Manifold& M, const Point& x, RngStream& rng) { return build_frame(M, x, &rng); }

double frame_gram_residual(const TangentFrame& frame) {
  double r = 0.0;
  for (std::size_t i = 0; i < frame.vectors.size(); ++i)
    for (std::size_t j = 0; j < frame.vectors.size(); ++j)
      r = std::max(r, std::abs(frame.vectors[i].dot(frame.vectors[j]) - (i == j ? 1.0 : 0.0)));
  return r;
}

Vec fd_directional(const MapObject& F, const Point& x, const Point& fx, const Vec& v, double h) {
  const Manifold& D = F.domain();
  const Manifold& C = F.codomain();
  const Point yp = F(exp_map(D, x, h * v));
  const Point ym = F(exp_map(D, x, -h * v));
  return (log_map(C, fx, yp) - log_map(C, fx, ym)) / (2.0 * h);
}

Vec directional(const MapObject& F, const Point& x, const Point& fx, const Vec& v, double h, DiffMode mode) {
  switch (mode) {
    case DiffMode::Auto:
      if (F.has_analytic_differential()) return F.analytic_differential(x, fx, v);
      return fd_directional(F, x, fx, v, h);
    case DiffMode::FiniteDifference:
      return fd_directional(F, x, fx, v, h);
    case DiffMode::Richardson:
      return (4.0 * fd_directional(F, x, fx, v, 0.5 * h) - fd_directional(F, x, fx, v, h)) / 3.0;
  }
  return {};
}

std::vector<Vec> differential(const MapObject& F, const Point& x, const TangentFrame& frame, double h,
                              DiffMode mode) {
  if (h < 1e-6 || h > 1e-2) throw DomainError("differential: step outside [1e-6, 1e-2]");
  const Point fx = F(x);
  std::vector<Vec> cols;
  cols.reserve(frame.vectors.size());
  for (const auto& e : frame.vectors) cols.push_back(directional(F, x, fx, e, h, mode));
  return cols;
}

GramMatrix make_gram(const std::vector<Vec>& columns) {
  const int n = static_cast<int>(columns.size());
  GramMatrix G;
  G.g.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) G.g(i, j) = G.g(j, i) = columns[i].dot(columns[j]);
  if (n == 0) {
    G.eigenvalues = Vec();
    return G;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(G.g, Eigen::EigenvaluesOnly);
  G.eigenvalues = es.eigenvalues();
  for (Eigen::Index k = 0; k < G.eigenvalues.size(); ++k)
    if (G.eigenvalues[k] < 0.0 && G.eigenvalues[k] > -1e-9) G.eigenvalues[k] = 0.0;
  return G;
}

GramMatrix pullback_gram(const MapObject& F, const Point& x, const TangentFrame& frame, double h, DiffMode mode) {
  return make_gram(differential(F, x, frame, h, mode));
}

}  // namespace cpnlab
