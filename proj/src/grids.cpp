#include <algorithm>
#include <iomanip>
#include <optional>
#include <ostream>

#include "cpnlab/maps.hpp"
#include "cpnlab/mesh.hpp"

namespace cpnlab {

std::string to_string(GridScheme s) {
  switch (s) {
    case GridScheme::Mesh:
      return "mesh";
    case GridScheme::MonteCarlo:
      return "monte_carlo";
    case GridScheme::ProductAngles:
      return "product_angles";
  }
  return "?";
}

GridScheme grid_scheme_from_string(const std::string& s) {
  if (s == "mesh") return GridScheme::Mesh;
  if (s == "monte_carlo" || s == "mc") return GridScheme::MonteCarlo;
  if (s == "product_angles" || s == "product") return GridScheme::ProductAngles;
  throw DomainError("unknown grid scheme '" + s + "'");
}

double QuadratureGrid::weight_sum() const {
  double s = 0.0, c = 0.0;
  for (double w : weights) {
    const double y = w - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw DomainError("gauss_legendre: need n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = mid - half * x;
    nodes[n - 1 - i] = mid + half * x;
    weights[i] = weights[n - 1 - i] = half * w;
  }
}

Point hopf_section(const Eigen::Vector3d& p) {
  const Eigen::Vector3d q = p.normalized();
  const double s = 1.0 + q.z();
  CVec z(2);
  if (s < 1e-14) {
    z << cplx(0.0, 0.0), cplx(1.0, 0.0);
  } else {
    const double d = std::sqrt(2.0 * s);
    z << cplx(s / d, 0.0), cplx(q.x() / d, q.y() / d);
  }
  return to_real(z);
}

Eigen::Vector3d hopf_map(const Point& x) {
  const CVec z = to_complex(x);
  const cplx ab = std::conj(z[0]) * z[1];
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(z[0]) - std::norm(z[1])};
}

namespace {

struct RawGrid {
  std::vector<Vec> nodes;
  std::vector<double> weights;
};

// Polar-coordinate grid on the unit S^k, first angle measured from e_0 over
// [0, psi_max] split at `breaks`.
RawGrid sphere_polar(int k, int n, double psi_max, const std::vector<double>& breaks) {
  RawGrid out;
  if (k == 1) {
    const int m = 2 * n;
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * kPi * j / m;
      Vec v(2);
      v << std::cos(phi), std::sin(phi);
      out.nodes.push_back(v);
      out.weights.push_back(2.0 * kPi / m);
    }
    return out;
  }
  std::vector<double> cuts{0.0};
  for (double b : breaks)
    if (b > 0.0 && b < psi_max) cuts.push_back(b);
  cuts.push_back(psi_max);
  std::sort(cuts.begin(), cuts.end());
  const RawGrid sub = sphere_polar(k - 1, n, kPi, {});
  std::vector<double> gx, gw;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    gauss_legendre(n, cuts[c], cuts[c + 1], gx, gw);
    for (int i = 0; i < n; ++i) {
      const double s = std::sin(gx[i]);
      const double w = gw[i] * std::pow(s, k - 1);
      for (std::size_t j = 0; j < sub.nodes.size(); ++j) {
        Vec v(k + 1);
        v[0] = std::cos(gx[i]);
        v.tail(k) = s * sub.nodes[j];
        out.nodes.push_back(v);
        out.weights.push_back(w * sub.weights[j]);
      }
    }
  }
  return out;
}

// Moduli on the positive orthant of S^N with measure prod_k r_k dsigma.
void orthant_moduli(int N, int n, std::vector<Vec>& r, std::vector<double>& w) {
  if (N == 0) {
    r = {Vec::Ones(1)};
    w = {1.0};
    return;
  }
  std::vector<Vec> sub_r;
  std::vector<double> sub_w;
  orthant_moduli(N - 1, n, sub_r, sub_w);
  std::vector<double> gx, gw;
  gauss_legendre(n, 0.0, 0.5 * kPi, gx, gw);
  r.clear();
  w.clear();
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(gx[i]), s = std::sin(gx[i]);
    // sigma weight sin^{N-1}; moduli factor r_0 = c and s^{N} from the
    // remaining N moduli.
    const double base = gw[i] * std::pow(s, N - 1) * c * std::pow(s, N);
    for (std::size_t j = 0; j < sub_r.size(); ++j) {
      Vec v(N + 1);
      v[0] = c;
      v.tail(N) = s * sub_r[j];
      r.push_back(v);
      w.push_back(base * sub_w[j]);
    }
  }
}

RawGrid cpn_toric(int N, int n) {
  std::vector<Vec> moduli;
  std::vector<double> mw;
  orthant_moduli(N, n, moduli, mw);
  const int m = 2 * n;
  std::size_t phase_count = 1;
  for (int k = 0; k < N; ++k) phase_count *= m;
  const double pw = std::pow(2.0 * kPi / m, N);
  RawGrid out;
  for (std::size_t a = 0; a < moduli.size(); ++a) {
    for (std::size_t idx = 0; idx < phase_count; ++idx) {
      CVec z(N + 1);
      z[0] = moduli[a][0];
      std::size_t rest = idx;
      for (int k = 1; k <= N; ++k) {
        const double phi = 2.0 * kPi * static_cast<double>(rest % m) / m;
        rest /= m;
        z[k] = std::polar(moduli[a][k], phi);
      }
      out.nodes.push_back(to_real(z));
      out.weights.push_back(mw[a] * pw);
    }
  }
  return out;
}

QuadratureGrid finish(const Manifold& M, RawGrid raw, GridScheme scheme, int resolution, std::uint64_t seed) {
  QuadratureGrid g{M, {}, {}, 0.0, scheme, resolution, seed};
  g.nodes.reserve(raw.nodes.size());
  for (auto& v : raw.nodes) g.nodes.push_back(canonicalize(M, v));
  g.weights = std::move(raw.weights);
  g.total_mass = g.weight_sum();
  return g;
}

QuadratureGrid build_factor(const Manifold& M, int resolution, GridScheme scheme, std::uint64_t seed,
                            const std::vector<double>& breaks) {
  using K = Manifold::Kind;
  if (resolution <= 0) throw DomainError("build_grid: resolution must be positive");
  if (scheme == GridScheme::MonteCarlo) {
    RngStream rng(seed, 0x6772696400ULL);
    RawGrid raw;
    const double w = M.volume() / resolution;
    for (int i = 0; i < resolution; ++i) {
      raw.nodes.push_back(random_point(M, rng));
      raw.weights.push_back(w);
    }
    QuadratureGrid g = finish(M, std::move(raw), scheme, resolution, seed);
    g.total_mass = M.volume();
    return g;
  }
  if (M.kind() == K::Product) {
    std::optional<QuadratureGrid> acc;
    std::uint64_t s = seed;
    for (const auto& f : M.factors()) {
      QuadratureGrid fg = build_factor(f, resolution, scheme, s++, {});
      if (!acc) {
        acc = std::move(fg);
        continue;
      }
      RawGrid raw;
      for (std::size_t i = 0; i < acc->nodes.size(); ++i)
        for (std::size_t j = 0; j < fg.nodes.size(); ++j) {
          Vec v(acc->nodes[i].size() + fg.nodes[j].size());
          v << acc->nodes[i], fg.nodes[j];
          raw.nodes.push_back(v);
          raw.weights.push_back(acc->weights[i] * fg.weights[j]);
        }
      acc->nodes = std::move(raw.nodes);
      acc->weights = std::move(raw.weights);
    }
    QuadratureGrid g{M, std::move(acc->nodes), std::move(acc->weights), 0.0, scheme, resolution, seed};
    g.total_mass = g.weight_sum();
    return g;
  }
  if (scheme == GridScheme::Mesh) {
    const TriMesh mesh = icosphere(resolution);
    const auto area = voronoi_areas(mesh);
    RawGrid raw;
    if (M.kind() == K::Sphere && M.param() == 2) {
      const double r = M.radius();
      for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        raw.nodes.push_back(r * Vec(mesh.vertices[i]));
        raw.weights.push_back(r * r * area[i]);
      }
    } else if (M.kind() == K::RealProjective && M.param() == 2) {
      const double r = M.radius();
      for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        raw.nodes.push_back(r * Vec(mesh.vertices[i]));
        raw.weights.push_back(0.5 * r * r * area[i]);
      }
    } else if (M.kind() == K::ComplexProjective && M.param() == 1) {
      for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        raw.nodes.push_back(hopf_section(mesh.vertices[i]));
        raw.weights.push_back(0.25 * area[i]);
      }
    } else {
      throw DomainError("build_grid: no mesh scheme for " + M.name());
    }
    return finish(M, std::move(raw), scheme, resolution, seed);
  }
  // ProductAngles
  switch (M.kind()) {
    case K::Sphere:
    case K::RealProjective: {
      const bool proj = M.kind() == K::RealProjective;
      RawGrid raw = sphere_polar(M.param(), resolution, proj ? 0.5 * kPi : kPi, breaks);
      if (M.param() == 1 && proj) {
        // RP^1: half the circle.
        RawGrid half;
        for (std::size_t i = 0; i < raw.nodes.size(); ++i) {
          half.nodes.push_back(raw.nodes[i]);
          half.weights.push_back(0.5 * raw.weights[i]);
        }
        raw = std::move(half);
      }
      const double r = M.radius();
      const double scale = std::pow(r, M.param());
      for (auto& v : raw.nodes) v *= r;
      for (auto& w : raw.weights) w *= scale;
      return finish(M, std::move(raw), scheme, resolution, seed);
    }
    case K::ComplexProjective:
      return finish(M, cpn_toric(M.param(), resolution), scheme, resolution, seed);
    case K::Product:
      break;
  }
  throw DomainError("build_grid: unsupported manifold");
}

}  // namespace

QuadratureGrid build_grid(const Manifold& M, int resolution, GridScheme scheme, std::uint64_t seed) {
  return build_factor(M, resolution, scheme, seed, {});
}

QuadratureGrid build_polar_grid(const Manifold& M, int resolution, const std::vector<double>& breaks) {
  if (M.kind() != Manifold::Kind::Sphere && M.kind() != Manifold::Kind::RealProjective)
    throw DomainError("build_polar_grid: needs S^n or RP^n");
  return build_factor(M, resolution, GridScheme::ProductAngles, 0, breaks);
}

DirectionSet unit_tangent_quadrature(const Manifold& M, const Point& x, int order, RngStream* rng) {
  const TangentFrame frame = rng ? random_frame(M, x, *rng) : tangent_frame(M, x);
  const int d = static_cast<int>(frame.vectors.size());
  DirectionSet out;
  auto add = [&](const Eigen::VectorXd& coeffs, double w) {
    Vec v = Vec::Zero(x.size());
    for (int i = 0; i < d; ++i) v += coeffs[i] * frame.vectors[i];
    out.directions.push_back(v / v.norm());
    out.weights.push_back(w);
  };
  if (d == 1) {
    add(Vec::Ones(1), 1.0);
    add(-Vec::Ones(1), 1.0);
    return out;
  }
  if (d == 2) {
    const int m = std::max(order, 3);
    for (int j = 0; j < m; ++j) {
      const double t = 2.0 * kPi * j / m;
      Vec c(2);
      c << std::cos(t), std::sin(t);
      add(c, 2.0 * kPi / m);
    }
    return out;
  }
  if (d == 3 && order >= 5) {
    const TriMesh ico = icosphere(0);
    for (const auto& v : ico.vertices) add(Vec(v), 4.0 * kPi / 12.0);
    return out;
  }
  const double w = sphere_volume(d - 1) / (2.0 * d);
  for (int i = 0; i < d; ++i) {
    add(Vec::Unit(d, i), w);
    add(-Vec::Unit(d, i), w);
  }
  return out;
}

void write_grid_csv(const QuadratureGrid& grid, std::ostream& out) {
  const Eigen::Index n = grid.manifold.ambient_dim();
  for (Eigen::Index k = 0; k < n; ++k) out << "x" << k << ",";
  out << "weight\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    for (Eigen::Index k = 0; k < n; ++k) out << grid.nodes[i][k] << ",";
    out << grid.weights[i] << "\n";
  }
}

}  // namespace cpnlab
