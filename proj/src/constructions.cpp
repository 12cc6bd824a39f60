#include "cpnlab/constructions.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace cpnlab {

RationalCurveSpec line_spec() {
  return {2, 1, {{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}};
}

RationalCurveSpec conic_spec() {
  const cplx i(0.0, 1.0);
  return {2, 2, {{1.0, 0.0, -1.0}, {i, 0.0, i}, {0.0, 2.0, 0.0}}};
}

RationalCurveSpec veronese_spec() {
  return {2, 2, {{1.0, 0.0, 0.0}, {0.0, std::sqrt(2.0), 0.0}, {0.0, 0.0, 1.0}}};
}

RationalCurveSpec random_curve_spec(int N, int degree, std::uint64_t seed) {
  RngStream rng(seed, 0x63757276ULL);
  RationalCurveSpec s{N, degree, {}};
  for (int k = 0; k <= N; ++k) {
    std::vector<cplx> c;
    for (int j = 0; j <= degree; ++j) c.emplace_back(rng.normal(), rng.normal());
    s.coeffs.push_back(std::move(c));
  }
  return s;
}

namespace {

void check_spec(const RationalCurveSpec& s) {
  if (s.N < 1 || s.degree < 1 || static_cast<int>(s.coeffs.size()) != s.N + 1)
    throw ConstructionError("rational curve: need N >= 1, degree >= 1 and N+1 components");
  for (const auto& c : s.coeffs)
    if (static_cast<int>(c.size()) != s.degree + 1) throw ConstructionError("rational curve: wrong coefficient count");
}

CVec eval_poly(const RationalCurveSpec& s, cplx a, cplx b) {
  CVec p = CVec::Zero(s.N + 1);
  const int d = s.degree;
  for (int k = 0; k <= s.N; ++k)
    for (int j = 0; j <= d; ++j) p[k] += s.coeffs[k][j] * std::pow(a, d - j) * std::pow(b, j);
  return p;
}

// Holomorphic derivative along (va, vb).
CVec eval_poly_derivative(const RationalCurveSpec& s, cplx a, cplx b, cplx va, cplx vb) {
  CVec p = CVec::Zero(s.N + 1);
  const int d = s.degree;
  for (int k = 0; k <= s.N; ++k)
    for (int j = 0; j <= d; ++j) {
      const cplx c = s.coeffs[k][j];
      if (d - j > 0) p[k] += c * static_cast<double>(d - j) * std::pow(a, d - j - 1) * std::pow(b, j) * va;
      if (j > 0) p[k] += c * static_cast<double>(j) * std::pow(a, d - j) * std::pow(b, j - 1) * vb;
    }
  return p;
}

double normalized_size(const RationalCurveSpec& s, cplx a, cplx b) {
  const double r = std::sqrt(std::norm(a) + std::norm(b));
  return eval_poly(s, a / r, b / r).norm();
}

}  // namespace

double common_zero_margin(const RationalCurveSpec& s) {
  check_spec(s);
  const int d = s.degree;
  double margin = normalized_size(s, 0.0, 1.0);
  // Roots in t = b/a of the component with the highest effective degree.
  int best = -1, best_deg = -1;
  for (int k = 0; k <= s.N; ++k) {
    int deg = -1;
    for (int j = d; j >= 0; --j)
      if (std::abs(s.coeffs[k][j]) > 0.0) {
        deg = j;
        break;
      }
    if (deg > best_deg) {
      best_deg = deg;
      best = k;
    }
  }
  if (best_deg > 0) {
    const auto& c = s.coeffs[best];
    CMat comp = CMat::Zero(best_deg, best_deg);
    for (int i = 1; i < best_deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < best_deg; ++i) comp(i, best_deg - 1) = -c[i] / c[best_deg];
    Eigen::ComplexEigenSolver<CMat> es(comp);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      margin = std::min(margin, normalized_size(s, 1.0, es.eigenvalues()[i]));
  }
  RngStream rng(0x70726f6265ULL);
  for (int i = 0; i < 1000; ++i) {
    const cplx a(rng.normal(), rng.normal()), b(rng.normal(), rng.normal());
    margin = std::min(margin, normalized_size(s, a, b));
  }
  return margin;
}

MapObject make_rational_curve(const RationalCurveSpec& spec) {
  if (common_zero_margin(spec) < 1e-8) throw ConstructionError("rational curve: components have a common zero");
  const RationalCurveSpec s = spec;
  std::ostringstream name;
  name << "rational_d" << s.degree << "_CP" << s.N;
  return MapObject(
      Manifold::complex_projective(1), Manifold::complex_projective(s.N),
      [s](const Point& x) {
        const CVec ab = to_complex(x);
        const CVec p = eval_poly(s, ab[0], ab[1]);
        return to_real(p / p.norm());
      },
      name.str(), Smoothness::Smooth,
      [s](const Point& x, const Point& fx, const Vec& v) {
        const CVec ab = to_complex(x);
        const CVec cv = to_complex(v);
        const double len = eval_poly(s, ab[0], ab[1]).norm();
        const CVec dp = eval_poly_derivative(s, ab[0], ab[1], cv[0], cv[1]) / len;
        const CVec w = to_complex(fx);
        return to_real(dp - w.dot(dp) * w);
      });
}

MapObject make_projective_linear(const CMat& D, const std::string& name) {
  const int N = static_cast<int>(D.rows()) - 1;
  if (D.rows() != D.cols() || N < 1) throw DomainError("projective linear map: need a square matrix of size >= 2");
  return MapObject(
      Manifold::complex_projective(N), Manifold::complex_projective(N),
      [D](const Point& x) {
        const CVec w = D * to_complex(x);
        return to_real(w / w.norm());
      },
      name, Smoothness::Smooth,
      [D](const Point& x, const Point& fx, const Vec& v) {
        const double len = (D * to_complex(x)).norm();
        const CVec dv = D * to_complex(v) / len;
        const CVec w = to_complex(fx);
        return to_real(dv - w.dot(dv) * w);
      });
}

MapObject make_projective_dilation(int N, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("projective dilation: need lambda > 0");
  CMat D = CMat::Identity(N + 1, N + 1);
  D(0, 0) = lambda;
  D(1, 1) = lambda;
  std::ostringstream name;
  name << "T_" << lambda;
  return make_projective_linear(D, name.str());
}

double theta_cap_angle(double t) { return 2.0 * std::atan(1.0 / t); }

double theta_polar(double t, double psi) { return 2.0 * std::atan(t * std::tan(0.5 * psi)); }

double theta_conformal_factor(double t, double psi) {
  const double c = std::cos(0.5 * psi), s = std::sin(0.5 * psi);
  return t / (c * c + t * t * s * s);
}

namespace {

Point theta_apply(double t, const Point& x) {
  const double den = 1.0 + x[0];
  if (den < 1e-12) throw ResampleRequest("theta: evaluation at the antipode of the centre");
  const Eigen::Vector3d u = t * x.tail(3) / den;
  const double s = u.squaredNorm();
  Point y(4);
  y[0] = (1.0 - s) / (1.0 + s);
  y.tail(3) = 2.0 * u / (1.0 + s);
  return y;
}

Vec theta_diff(double t, const Point& x, const Vec& v) {
  const double den = 1.0 + x[0];
  if (den < 1e-12) throw ResampleRequest("theta: differential at the antipode of the centre");
  const Eigen::Vector3d u = t * x.tail(3) / den;
  const Eigen::Vector3d du = t * (v.tail(3) / den - x.tail(3) * v[0] / (den * den));
  const double s = u.squaredNorm();
  const double ds = 2.0 * u.dot(du);
  Vec out(4);
  out[0] = -2.0 * ds / ((1.0 + s) * (1.0 + s));
  out.tail(3) = 2.0 * du / (1.0 + s) - 2.0 * u * ds / ((1.0 + s) * (1.0 + s));
  return out;
}

}  // namespace

MapObject make_theta(double t) {
  if (!(t > 0.0)) throw DomainError("theta: need t > 0");
  const Manifold S3 = Manifold::sphere(3);
  std::ostringstream name;
  name << "theta_" << t;
  return MapObject(
      S3, S3, [t](const Point& x) { return theta_apply(t, x); }, name.str(), Smoothness::Smooth,
      [t](const Point& x, const Point&, const Vec& v) { return theta_diff(t, x, v); });
}

MapObject make_capped_theta(double t) {
  if (!(t >= 1.0)) throw DomainError("capped theta: need t >= 1");
  const Manifold RP3 = Manifold::real_projective(3);
  const double cap = theta_cap_angle(t);
  std::ostringstream name;
  name << "capped_theta_" << t;
  return MapObject(
      RP3, RP3,
      [t, cap](const Point& x) {
        const Point xx = x[0] < 0.0 ? Point(-x) : x;
        const double ry = xx.tail(3).norm();
        if (std::atan2(ry, xx[0]) < cap) return theta_apply(t, xx);
        Point y = Point::Zero(4);
        y.tail(3) = xx.tail(3) / ry;
        return y;
      },
      name.str(), Smoothness::Lipschitz,
      [t, cap](const Point& x, const Point&, const Vec& v) {
        const double sgn = x[0] < 0.0 ? -1.0 : 1.0;
        const Point xx = sgn * x;
        const Vec vv = sgn * v;
        const double ry = xx.tail(3).norm();
        if (std::atan2(ry, xx[0]) < cap) return theta_diff(t, xx, vv);
        const Eigen::Vector3d yh = xx.tail(3) / ry;
        const Eigen::Vector3d vy = vv.tail(3);
        Vec out = Vec::Zero(4);
        out.tail(3) = (vy - yh * yh.dot(vy)) / ry;
        return out;
      });
}

MapObject make_real_inclusion(int k, int n) {
  if (k < 1 || k > n) throw DomainError("real inclusion: need 1 <= k <= n");
  auto pad = [n](const Vec& x) {
    Vec y = Vec::Zero(n + 1);
    y.head(x.size()) = x;
    return y;
  };
  return MapObject(
      Manifold::real_projective(k), Manifold::real_projective(n), [pad](const Point& x) { return pad(x); },
      "incl_RP" + std::to_string(k) + "_RP" + std::to_string(n), Smoothness::Smooth,
      [pad](const Point&, const Point&, const Vec& v) { return pad(v); });
}

MapObject make_complex_inclusion(int k, int N) {
  if (k < 1 || k > N) throw DomainError("complex inclusion: need 1 <= k <= N");
  auto pad = [N](const Vec& x) {
    Vec y = Vec::Zero(2 * (N + 1));
    y.head(x.size()) = x;
    return y;
  };
  return MapObject(
      Manifold::complex_projective(k), Manifold::complex_projective(N), [pad](const Point& x) { return pad(x); },
      "incl_CP" + std::to_string(k) + "_CP" + std::to_string(N), Smoothness::Smooth,
      [pad](const Point&, const Point&, const Vec& v) { return pad(v); });
}

MapObject make_double_cover() {
  return MapObject(
      Manifold::sphere(2), Manifold::real_projective(2), [](const Point& x) { return x; }, "double_cover",
      Smoothness::Smooth, [](const Point&, const Point&, const Vec& v) { return v; });
}

MapObject make_sphere_homothety(int n, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("homothety: need kappa > 0");
  std::ostringstream name;
  name << "homothety_S" << n << "_" << kappa;
  return MapObject(
      Manifold::sphere(n), Manifold::sphere(n, kappa), [kappa](const Point& x) { return Point(kappa * x); },
      name.str(), Smoothness::Smooth, [kappa](const Point&, const Point&, const Vec& v) { return Vec(kappa * v); });
}

MapObject make_rp_homothety(int n, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("homothety: need kappa > 0");
  std::ostringstream name;
  name << "homothety_RP" << n << "_" << kappa;
  return MapObject(
      Manifold::real_projective(n), Manifold::real_projective(n, kappa),
      [kappa](const Point& x) { return Point(kappa * x); }, name.str(), Smoothness::Smooth,
      [kappa](const Point&, const Point&, const Vec& v) { return Vec(kappa * v); });
}

MapObject make_product_lift(const MapObject& f, double r) {
  if (!(f.domain() == Manifold::sphere(2))) throw DomainError("product lift: domain must be S^2");
  if (!(r > 0.0)) throw DomainError("product lift: need r > 0");
  const Manifold cod = Manifold::product({f.codomain(), Manifold::sphere(2, r)});
  const Eigen::Index m = f.codomain().ambient_dim();
  AnalyticDifferential diff;
  if (f.has_analytic_differential()) {
    diff = [f, r, m](const Point& x, const Point& fx, const Vec& v) {
      Vec out(m + 3);
      out << f.analytic_differential(x, fx.head(m), v), r * v;
      return out;
    };
  }
  std::ostringstream name;
  name << f.name() << "_lift_" << r;
  return MapObject(
      f.domain(), cod,
      [f, r, m](const Point& x) {
        Point y(m + 3);
        y << f(x), r * x;
        return y;
      },
      name.str(), f.smoothness(), std::move(diff));
}

MapObject make_conjugation() {
  const Manifold CP1 = Manifold::complex_projective(1);
  auto conj = [](const Vec& x) {
    Vec y = x;
    for (Eigen::Index k = 1; k < y.size(); k += 2) y[k] = -y[k];
    return y;
  };
  return MapObject(
      CP1, CP1, [conj](const Point& x) { return conj(x); }, "conjugation", Smoothness::Smooth,
      [conj](const Point&, const Point&, const Vec& v) { return conj(v); });
}

MapObject make_latitude_squash(double eps) {
  const Manifold S2 = Manifold::sphere(2);
  std::ostringstream name;
  name << "squash_" << eps;
  return MapObject(
      S2, S2,
      [eps](const Point& x) {
        const double rho = std::hypot(x[0], x[1]);
        if (rho < 1e-300) return Point(x);
        const double th = std::atan2(rho, x[2]);
        const double th2 = th + eps * std::sin(2.0 * th);
        Point y(3);
        y << std::sin(th2) * x[0] / rho, std::sin(th2) * x[1] / rho, std::cos(th2);
        return y;
      },
      name.str());
}

MapObject make_hermitian_eigenmap() {
  std::vector<CMat> H;
  for (const auto& a : su_basis(3)) H.push_back(cplx(0.0, 1.0) * a.cplx);
  const double scale = 1.0 / std::sqrt(2.0 / 3.0);
  return MapObject(
      Manifold::complex_projective(2), Manifold::sphere(7),
      [H, scale](const Point& x) {
        const CVec z = to_complex(x);
        Point y(8);
        for (int k = 0; k < 8; ++k) y[k] = scale * z.dot(H[k] * z).real();
        return y;
      },
      "hermitian_eigenmap", Smoothness::Smooth,
      [H, scale](const Point& x, const Point&, const Vec& v) {
        const CVec z = to_complex(x);
        const CVec cv = to_complex(v);
        Vec out(8);
        for (int k = 0; k < 8; ++k) out[k] = 2.0 * scale * z.dot(H[k] * cv).real();
        return out;
      });
}

Vec perturbation_field(const Manifold& M, const Point& x) {
  switch (M.kind()) {
    case Manifold::Kind::ComplexProjective: {
      const CVec z = to_complex(x);
      const Eigen::Index n = z.size();
      CVec a(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index k1 = (k + 1) % n;
        a[k] = std::norm(z[k1]) * z[k] + std::norm(z[0]) * z[k1];
      }
      return to_real(a - z.dot(a) * z);
    }
    case Manifold::Kind::Sphere:
    case Manifold::Kind::RealProjective: {
      const double r = M.radius();
      const Vec u = x / r;
      const Eigen::Index n = u.size();
      Vec a(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index k1 = (k + 1) % n;
        a[k] = u[k1] * u[k1] * u[k] + u[0] * u[0] * u[k1];
      }
      return r * (a - u.dot(a) * u);
    }
    case Manifold::Kind::Product:
      break;
  }
  throw DomainError("perturbation_field: unsupported manifold " + M.name());
}

MapObject make_perturbed_identity(const Manifold& M, double eps) {
  std::ostringstream name;
  name << "perturbed_" << M.name() << "_" << eps;
  return MapObject(
      M, M, [M, eps](const Point& x) { return exp_map(M, x, eps * perturbation_field(M, x)); }, name.str());
}

SqueezeResult squeeze_limit(const MapObject& F, const std::vector<double>& lambdas, const QuadratureGrid& grid,
                            const QuadratureGrid& line_grid, Exec exec) {
  if (!F.domain().is_complex()) throw DomainError("squeeze_limit: domain of " + F.name() + " is not CP^N");
  const int N = F.domain().param();
  SqueezeResult out;
  out.lambdas = lambdas;
  for (double l : lambdas) out.energies.push_back(p_energy(compose(F, make_projective_dilation(N, l)), grid, 2.0, {}, exec));
  const MapObject restricted = compose(F, make_complex_inclusion(1, N));
  out.restricted_energy = p_energy(restricted, line_grid, 2.0, {}, exec).value;
  out.target = std::pow(kPi, N - 1) / factorial(N - 1) * out.restricted_energy;
  return out;
}

Manifold parse_manifold(const std::string& s) {
  try {
    if (s.rfind("RP", 0) == 0) return Manifold::real_projective(std::stoi(s.substr(2)));
    if (s.rfind("CP", 0) == 0) return Manifold::complex_projective(std::stoi(s.substr(2)));
    if (s.rfind("S", 0) == 0) return Manifold::sphere(std::stoi(s.substr(1)));
  } catch (const std::logic_error&) {
  }
  throw DomainError("unknown manifold '" + s + "'");
}

namespace {

// Splits "name(a,b(c),d)" into name and top-level arguments.
void split_key(const std::string& key, std::string& name, std::vector<std::string>& args) {
  const auto open = key.find('(');
  args.clear();
  if (open == std::string::npos) {
    name = key;
    return;
  }
  if (key.back() != ')') throw DomainError("malformed catalog key '" + key + "'");
  name = key.substr(0, open);
  int depth = 0;
  std::string cur;
  for (std::size_t i = open + 1; i + 1 < key.size(); ++i) {
    const char c = key[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      args.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  args.push_back(cur);
}

double to_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::logic_error&) {
    throw DomainError("expected a number, got '" + s + "'");
  }
}

}  // namespace

MapObject standard_map(const std::string& key) {
  std::string name;
  std::vector<std::string> args;
  split_key(key, name, args);
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw DomainError("catalog key '" + key + "' expects " + std::to_string(n) + " arguments");
  };
  MapObject m = [&]() -> MapObject {
    if (name == "identity") {
      need(1);
      return identity_map(parse_manifold(args[0]));
    }
    if (name == "constant") {
      need(1);
      const Manifold M = parse_manifold(args[0]);
      return constant_map(M, M, Vec::Unit(M.ambient_dim(), 0));
    }
    if (name == "inclusion") {
      need(2);
      const Manifold a = parse_manifold(args[0]), b = parse_manifold(args[1]);
      if (a.kind() == Manifold::Kind::RealProjective && b.kind() == Manifold::Kind::RealProjective)
        return make_real_inclusion(a.param(), b.param());
      if (a.is_complex() && b.is_complex()) return make_complex_inclusion(a.param(), b.param());
      throw DomainError("inclusion: unsupported pair in '" + key + "'");
    }
    if (name == "double_cover") return make_double_cover();
    if (name == "homothety") {
      need(2);
      const Manifold M = parse_manifold(args[0]);
      if (M.kind() == Manifold::Kind::Sphere) return make_sphere_homothety(M.param(), to_double(args[1]));
      if (M.kind() == Manifold::Kind::RealProjective) return make_rp_homothety(M.param(), to_double(args[1]));
      throw DomainError("homothety: needs S<n> or RP<n>");
    }
    if (name == "rational") {
      if (args.empty()) throw DomainError("rational: missing kind");
      if (args[0] == "line") return make_rational_curve(line_spec());
      if (args[0] == "conic") return make_rational_curve(conic_spec());
      if (args[0] == "veronese") return make_rational_curve(veronese_spec());
      if (args[0].rfind("random", 0) == 0) {
        const int d = std::stoi(args[0].substr(6));
        const std::uint64_t seed = args.size() > 1 ? std::stoull(args[1]) : 1;
        return make_rational_curve(random_curve_spec(2, d, seed));
      }
      throw DomainError("rational: unknown kind '" + args[0] + "'");
    }
    if (name == "dilation") {
      need(2);
      return make_projective_dilation(parse_manifold(args[0]).param(), to_double(args[1]));
    }
    if (name == "theta") {
      need(1);
      return make_theta(to_double(args[0]));
    }
    if (name == "capped_theta") {
      need(1);
      return make_capped_theta(to_double(args[0]));
    }
    if (name == "perturbed") {
      need(2);
      return make_perturbed_identity(parse_manifold(args[0]), to_double(args[1]));
    }
    if (name == "conjugation") return make_conjugation();
    if (name == "squash") return make_latitude_squash(args.empty() ? 0.2 : to_double(args[0]));
    if (name == "eigenmap") return make_hermitian_eigenmap();
    if (name == "product_lift") {
      need(2);
      return make_product_lift(standard_map(args[0]), to_double(args[1]));
    }
    throw DomainError("unknown catalog key '" + key + "'");
  }();
  return m.renamed(key);
}

std::vector<std::string> corpus_keys() {
  return {"identity(S2)",        "identity(S3)",          "identity(RP2)",      "identity(RP3)",
          "identity(CP1)",       "identity(CP2)",         "constant(CP2)",      "inclusion(RP2,RP3)",
          "inclusion(CP1,CP2)",  "double_cover",          "homothety(S2,2)",    "homothety(RP2,2)",
          "rational(line)",      "rational(conic)",       "rational(veronese)", "rational(random3,7)",
          "dilation(CP2,4)",     "theta(2)",              "capped_theta(4)",    "perturbed(CP2,0.2)",
          "perturbed(RP3,0.2)",  "perturbed(S2,0.2)",     "conjugation",        "squash(0.2)",
          "eigenmap",            "product_lift(identity(S2),0.5)"};
}

}  // namespace cpnlab
