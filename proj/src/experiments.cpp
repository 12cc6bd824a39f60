#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "cpnlab/bounds.hpp"
#include "cpnlab/constructions.hpp"
#include "cpnlab/flow.hpp"
#include "cpnlab/harmonic.hpp"
#include "cpnlab/report.hpp"

namespace cpnlab {

std::string to_string(ToleranceKind k) {
  switch (k) {
    case ToleranceKind::Absolute: return "abs";
    case ToleranceKind::Relative: return "rel";
    case ToleranceKind::AtLeast: return "at_least";
    case ToleranceKind::AtMost: return "at_most";
    case ToleranceKind::Above: return "above";
  }
  return "?";
}

ToleranceKind tolerance_kind_from_string(const std::string& s) {
  if (s == "abs") return ToleranceKind::Absolute;
  if (s == "rel") return ToleranceKind::Relative;
  if (s == "at_least") return ToleranceKind::AtLeast;
  if (s == "at_most") return ToleranceKind::AtMost;
  if (s == "above") return ToleranceKind::Above;
  throw UsageError("unknown tolerance kind '" + s + "'");
}

void finalize(ExperimentReport& r) {
  r.abs_error = std::abs(r.estimate - r.reference);
  r.rel_error = r.reference != 0.0 ? r.abs_error / std::abs(r.reference) : r.abs_error;
  switch (r.kind) {
    case ToleranceKind::Absolute: r.pass = r.abs_error <= r.tolerance; break;
    case ToleranceKind::Relative: r.pass = r.abs_error <= r.tolerance * std::abs(r.reference); break;
    case ToleranceKind::AtLeast: r.pass = r.estimate >= r.reference - r.tolerance; break;
    case ToleranceKind::AtMost: r.pass = r.estimate <= r.reference + r.tolerance; break;
    case ToleranceKind::Above: r.pass = r.estimate > r.reference + r.tolerance; break;
  }
  if (!std::isfinite(r.estimate)) r.pass = false;
}

namespace {

using Clock = std::chrono::steady_clock;

class Recorder {
 public:
  Recorder(std::string experiment, const ExperimentConfig& cfg)
      : experiment_(std::move(experiment)), cfg_(cfg), last_(Clock::now()) {}

  ExperimentReport& add(const std::string& check, double estimate, double reference, double tolerance,
                        ToleranceKind kind, ExperimentInputs inputs = {}, std::string note = "") {
    ExperimentReport r;
    r.name = experiment_ + "/" + check;
    r.inputs = std::move(inputs);
    r.estimate = estimate;
    r.reference = reference;
    const auto it = cfg_.tolerances.find(check);
    r.tolerance = it != cfg_.tolerances.end() ? it->second : tolerance;
    r.kind = kind;
    r.note = std::move(note);
    const auto now = Clock::now();
    r.wall_time = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    finalize(r);
    out.push_back(std::move(r));
    return out.back();
  }

  std::vector<ExperimentReport> out;

 private:
  std::string experiment_;
  const ExperimentConfig& cfg_;
  Clock::time_point last_;
};

ExperimentInputs inputs(std::vector<std::string> maps, std::vector<std::uint64_t> seeds = {},
                        std::vector<int> resolutions = {}, std::map<std::string, double> params = {}) {
  return {std::move(maps), std::move(seeds), std::move(resolutions), std::move(params)};
}

int res_or(const ExperimentConfig& c, int fallback) { return c.resolution.value_or(fallback); }

double param_or(const ExperimentConfig& c, const std::string& key, double fallback) {
  const auto it = c.parameters.find(key);
  return it != c.parameters.end() ? it->second : fallback;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------

void croke(Recorder& rec, const ExperimentConfig& c) {
  const int pairs = res_or(c, 1000);
  const std::vector<std::vector<std::string>> keys = {
      {"identity(S2)", "squash(0.2)", "homothety(S2,2)", "double_cover", "perturbed(S2,0.2)",
       "product_lift(identity(S2),0.5)"},
      {"identity(RP3)", "homothety(RP3,1.5)", "perturbed(RP3,0.2)"},
      {"identity(CP2)", "dilation(CP2,4)", "perturbed(CP2,0.2)", "eigenmap"}};
  std::vector<std::vector<MapObject>> maps;
  std::vector<std::string> all;
  for (const auto& group : keys) {
    maps.emplace_back();
    for (const auto& k : group) {
      maps.back().push_back(standard_map(k));
      all.push_back(k);
    }
  }
  const auto errs = map_indices<double>(pairs, [&](std::size_t i) {
    RngStream rng = RngStream(c.seed, 0x63726f6b65ULL).substream(i);
    const auto& group = maps[i % maps.size()];
    const MapObject& F = group[rng.bits() % group.size()];
    const Point x = random_point(F.domain(), rng);
    const double trace = energy_density(F, x);
    const double avg = croke_density(F, x, 6, {}, &rng);
    return std::abs(avg - trace) / std::max(trace, 1e-12);
  });
  const double worst = *std::max_element(errs.begin(), errs.end());
  rec.add("max-rel", worst, 0.0, 1e-6, ToleranceKind::Absolute, inputs(all, {c.seed}, {pairs}),
          "largest |croke - trace| / trace over random (map, point) pairs");
}

void bounds_identity(Recorder& rec, const ExperimentConfig& c) {
  const int K = res_or(c, 100000);
  std::vector<double> ps_c = {2.0, 3.0, 4.0}, ps_r = {1.0, 2.0, 4.0};
  if (c.p) {
    ps_c = *c.p >= 2.0 ? std::vector<double>{*c.p} : std::vector<double>{};
    ps_r = {*c.p};
  }
  for (int N : {1, 2}) {
    const Manifold M = Manifold::complex_projective(N);
    const QuadratureGrid g = build_grid(M, K, GridScheme::MonteCarlo, c.seed);
    for (double p : ps_c) {
      const EnergyValue e = p_energy(identity_map(M), g, p);
      rec.add("cpn N=" + std::to_string(N) + " p=" + fmt(p), e.value, eval_bound(BoundSpec::cpn_p(N, p, kPi)).value(),
              5e-3, ToleranceKind::Relative, inputs({"identity(" + M.name() + ")"}, {c.seed}, {K}, {{"Astar", kPi}}));
    }
  }
  for (int n : {2, 3}) {
    const Manifold M = Manifold::real_projective(n);
    const QuadratureGrid g = build_grid(M, K, GridScheme::MonteCarlo, c.seed);
    for (double p : ps_r) {
      const EnergyValue e = p_energy(identity_map(M), g, p);
      rec.add("rpn n=" + std::to_string(n) + " p=" + fmt(p), e.value, eval_bound(BoundSpec::rpn_p(n, p, kPi)).value(),
              5e-3, ToleranceKind::Relative, inputs({"identity(" + M.name() + ")"}, {c.seed}, {K}, {{"Lstar", kPi}}));
    }
  }
  for (int N : {1, 2, 3}) {
    const double a = eval_bound(BoundSpec::cpn_p(N, 2.0, kPi)).value();
    const double b = eval_bound(BoundSpec::infimum(N, kPi)).value();
    rec.add("overlap N=" + std::to_string(N), a, b, 1e-12, ToleranceKind::Relative, inputs({}, {}, {}, {{"Astar", kPi}}),
            "CPN_P at p = 2 against C_N A*");
  }
  // Elementary bound equality cases.
  {
    const Manifold S2 = Manifold::sphere(2);
    const QuadratureGrid g = build_grid(S2, 4, GridScheme::Mesh);
    const double pv = pullback_volume(identity_map(S2), g).value;
    for (double p : {2.0, 4.0})
      rec.add("elementary S2 p=" + fmt(p), p_energy(identity_map(S2), g, p).value,
              elementary_bound(p, 2, S2.volume(), pv), 5e-3, ToleranceKind::Relative, inputs({"identity(S2)"}, {}, {4}));
    const Manifold CP2 = Manifold::complex_projective(2);
    const QuadratureGrid gc = build_grid(CP2, std::min(K, 20000), GridScheme::MonteCarlo, c.seed);
    const double pvc = pullback_volume(identity_map(CP2), gc).value;
    rec.add("elementary CP2 p=4", p_energy(identity_map(CP2), gc, 4.0).value, elementary_bound(4.0, 4, CP2.volume(), pvc),
            5e-3, ToleranceKind::Relative, inputs({"identity(CP2)"}, {c.seed}, {std::min(K, 20000)}));
    rec.add("pullback-volume CP2", pvc, std::pow(kPi, 2) / 2.0, 5e-3, ToleranceKind::Relative,
            inputs({"identity(CP2)"}, {c.seed}, {std::min(K, 20000)}), "A*^N / N! with A* = pi");
  }
}

void line_formula(Recorder& rec, const ExperimentConfig& c) {
  const int K = res_or(c, 10000);
  const Manifold CP2 = Manifold::complex_projective(2);
  const auto lines = sample_lines(2, K, c.seed);
  std::vector<double> w;
  for (const auto& l : lines) w.push_back(l.weight);
  rec.add("mass", ordered_sum(w), kPi * kPi / 2.0, 1e-12, ToleranceKind::Relative, inputs({}, {c.seed}, {K}));
  const QuadratureGrid direct_grid = build_grid(CP2, 100000, GridScheme::MonteCarlo, c.seed);
  for (const std::string key : {"identity(CP2)", "dilation(CP2,4)"}) {
    const MapObject F = standard_map(key);
    const LineGridSpec spec{GridScheme::Mesh, 4};
    const auto e = line_energies(F, lines, spec);
    std::vector<double> terms;
    for (std::size_t i = 0; i < lines.size(); ++i) terms.push_back(lines[i].weight * e[i]);
    const double avg = factorial(2) / kPi * ordered_sum(terms);
    const double direct = p_energy(F, direct_grid, 2.0).value;
    rec.add("average " + key, avg, kPi * kPi, 1e-2, ToleranceKind::Relative, inputs({key}, {c.seed}, {K, 4}));
    rec.add("direct " + key, direct, kPi * kPi, 1e-2, ToleranceKind::Relative, inputs({key}, {c.seed}, {100000}));
    rec.add("average-vs-direct " + key, avg, direct, 1e-2, ToleranceKind::Relative, inputs({key}, {c.seed}, {K, 100000}));
  }
}

void rp2_family(Recorder& rec, const ExperimentConfig& c) {
  const int K = res_or(c, 2000);
  const auto planes = sample_planes(3, K, c.seed);
  std::vector<double> w;
  for (const auto& p : planes) w.push_back(p.weight);
  rec.add("mass", ordered_sum(w), 3.0 * kPi / 4.0, 1e-12, ToleranceKind::Relative, inputs({}, {c.seed}, {K}));
  {
    std::vector<double> w4;
    for (const auto& p : sample_planes(4, 100, c.seed)) w4.push_back(p.weight);
    rec.add("mass n=4", ordered_sum(w4), sphere_volume(4) / (2.0 * kPi), 1e-12, ToleranceKind::Relative,
            inputs({}, {c.seed}, {100}), "n sigma(n) / (8 pi)");
  }
  const MapObject F = standard_map("identity(RP3)");
  const AverageValue a = rp2_family_average(F, K, c.seed, {GridScheme::Mesh, 4});
  rec.add("average identity(RP3)", a.value, 1.5 * kPi * kPi, 1e-2, ToleranceKind::Relative,
          inputs({"identity(RP3)"}, {c.seed}, {K, 4}));
  const QuadratureGrid g = build_grid(Manifold::real_projective(3), 100000, GridScheme::MonteCarlo, c.seed);
  rec.add("direct identity(RP3)", p_energy(F, g, 2.0).value, 1.5 * kPi * kPi, 5e-3, ToleranceKind::Relative,
          inputs({"identity(RP3)"}, {c.seed}, {100000}));
}

void squeeze(Recorder& rec, const ExperimentConfig& c) {
  const int K = res_or(c, 100000);
  const double eps = param_or(c, "magnitude", 0.2);
  const Manifold CP2 = Manifold::complex_projective(2);
  const std::vector<double> lambdas = {1, 2, 4, 8, 16};
  const MapObject F = make_perturbed_identity(CP2, eps);
  const std::string key = "perturbed(CP2," + fmt(eps) + ")";
  const QuadratureGrid g = build_grid(CP2, K, GridScheme::MonteCarlo, c.seed);
  std::vector<MapObject> composed;
  for (double l : lambdas) composed.push_back(compose(F, make_projective_dilation(2, l)));

  // Node densities for every lambda on one shared grid, so that successive
  // differences have paired standard errors.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto dens = map_indices<std::vector<double>>(g.size(), [&](std::size_t i) {
    std::vector<double> d(lambdas.size());
    try {
      for (std::size_t k = 0; k < lambdas.size(); ++k) d[k] = 0.5 * energy_density(composed[k], g.nodes[i]);
    } catch (const ResampleRequest&) {
      std::fill(d.begin(), d.end(), nan);
    }
    return d;
  });
  std::vector<std::vector<double>> cols(lambdas.size());
  for (const auto& d : dens)
    if (!std::isnan(d[0]))
      for (std::size_t k = 0; k < d.size(); ++k) cols[k].push_back(d[k]);
  const double kept = static_cast<double>(cols[0].size());
  auto mean = [&](const std::vector<double>& v) { return ordered_sum(v) / kept; };
  auto sem = [&](const std::vector<double>& v) {
    const double m = mean(v);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
    return g.total_mass * std::sqrt(ordered_sum(sq) / (kept - 1.0) / kept);
  };
  std::vector<double> E;
  for (const auto& col : cols) E.push_back(g.total_mass * mean(col));

  const QuadratureGrid line_grid = build_grid(Manifold::complex_projective(1), 5, GridScheme::Mesh);
  const SqueezeResult target = squeeze_limit(F, {}, g, line_grid);
  rec.add("limit", E.back(), target.target, 2e-2, ToleranceKind::Relative, inputs({key}, {c.seed}, {K, 5}, {{"lambda", 16}}),
          "E_2(F o T_16) against C_2 E_2(F restricted to P_0)");
  const double sign = E.back() >= E.front() ? 1.0 : -1.0;
  double worst = std::numeric_limits<double>::infinity();
  std::ostringstream seq;
  for (std::size_t k = 0; k + 1 < E.size(); ++k) {
    std::vector<double> diff(cols[k].size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = cols[k + 1][i] - cols[k][i];
    worst = std::min(worst, sign * (E[k + 1] - E[k]) + 3.0 * sem(diff));
  }
  for (double e : E) seq << e << ' ';
  rec.add("monotone", worst, 0.0, 0.0, ToleranceKind::AtLeast, inputs({key}, {c.seed}, {K}),
          "min over steps of signed difference + 3 paired stderr; energies " + seq.str());

  const QuadratureGrid gi = build_grid(CP2, 10000, GridScheme::MonteCarlo, c.seed);
  const SqueezeResult id = squeeze_limit(identity_map(CP2), lambdas, gi, line_grid);
  double spread = 0.0;
  for (const auto& e : id.energies) spread = std::max(spread, std::abs(e.value - kPi * kPi));
  rec.add("identity-constant", spread, 0.0, 1e-2 * kPi * kPi, ToleranceKind::Absolute,
          inputs({"identity(CP2)"}, {c.seed}, {10000}));
  rec.add("identity-target", id.target, kPi * kPi, 5e-3, ToleranceKind::Relative, inputs({"identity(CP2)"}, {}, {5}));
}

void holomorphic_corpus(Recorder& rec, const ExperimentConfig& c) {
  const int level = res_or(c, 4);
  const Manifold CP1 = Manifold::complex_projective(1);
  const QuadratureGrid g = build_grid(CP1, level, GridScheme::Mesh);
  const std::vector<std::pair<std::string, int>> curves = {{"rational(line)", 1},
                                                           {"rational(conic)", 2},
                                                           {"rational(veronese)", 2},
                                                           {"rational(random3," + std::to_string(c.seed) + ")", 3}};
  for (const auto& [key, d] : curves) {
    const MapObject F = standard_map(key);
    const double ref = d * kPi;
    rec.add("energy " + key, p_energy(F, g, 2.0).value, ref, 5e-3, ToleranceKind::Relative, inputs({key}, {}, {level}));
    rec.add("area " + key, surface_area(F, g).value, ref, 5e-3, ToleranceKind::Relative, inputs({key}, {}, {level}));
    double t = 0.0, ph = 0.0, h = 0.0;
    for (int k = 0; k < 100; ++k) {
      RngStream rng = RngStream(c.seed, 0x686f6c6fULL).substream(k);
      const Point x = random_point(CP1, rng);
      t = std::max(t, norm(F.codomain(), F(x), tension(F, x)));
      ph = std::max(ph, pluriharmonic_residual(F, x));
      h = std::max(h, hermitian_residual(F, x));
    }
    rec.add("tension " + key, t, 0.0, 1e-3, ToleranceKind::Absolute, inputs({key}, {c.seed}, {100}));
    rec.add("pluriharmonic " + key, ph, 0.0, 1e-3, ToleranceKind::Absolute, inputs({key}, {c.seed}, {100}));
    rec.add("hermitian " + key, h, 0.0, 1e-3, ToleranceKind::Absolute, inputs({key}, {c.seed}, {100}));
  }
}

double probe_sup(const MapObject& F, int probes, std::uint64_t seed, const std::function<double(const Point&)>& f) {
  double r = 0.0;
  for (int k = 0; k < probes; ++k) {
    RngStream rng = RngStream(seed, 0x70726f6265ULL).substream(k);
    r = std::max(r, f(random_point(F.domain(), rng)));
  }
  return r;
}

void harmonic_diagnostics(Recorder& rec, const ExperimentConfig& c) {
  const int probes = 100;
  for (const std::string key : {"inclusion(CP1,CP2)", "double_cover"}) {
    const MapObject F = standard_map(key);
    rec.add("alpha " + key, probe_sup(F, probes, c.seed, [&](const Point& x) { return second_form_sup(F, x); }), 0.0,
            1e-5, ToleranceKind::Absolute, inputs({key}, {c.seed}, {probes}), "totally geodesic");
  }
  {
    const MapObject F = standard_map("rational(conic)");
    rec.add("alpha rational(conic)", probe_sup(F, probes, c.seed, [&](const Point& x) { return second_form_sup(F, x); }),
            1e-2, 0.0, ToleranceKind::Above, inputs({"rational(conic)"}, {c.seed}, {probes}), "not totally geodesic");
    rec.add("trace rational(conic)",
            probe_sup(F, probes, c.seed, [&](const Point& x) { return norm(F.codomain(), F(x), tension(F, x)); }), 0.0,
            1e-4, ToleranceKind::Absolute, inputs({"rational(conic)"}, {c.seed}, {probes}));
    rec.add("pluriharmonic rational(conic)",
            probe_sup(F, probes, c.seed, [&](const Point& x) { return pluriharmonic_residual(F, x); }), 0.0, 1e-4,
            ToleranceKind::Absolute, inputs({"rational(conic)"}, {c.seed}, {probes}));
  }
  {
    // FD tension of the squash map against the discrete tension of its
    // mesh samples.
    const int level = res_or(c, 4);
    const MapObject F = standard_map("squash(0.2)");
    const MeshMap m = make_mesh_map(F, level);
    const auto dt = discrete_tension(m);
    std::vector<double> num(m.size()), den(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Vec t = tension(F, m.positions[i]);
      num[i] = m.areas[i] * (t - dt[i]).squaredNorm();
      den[i] = m.areas[i] * t.squaredNorm();
    }
    rec.add("squash tension vs mesh", std::sqrt(ordered_sum(num) / ordered_sum(den)), 0.0, 5e-2,
            ToleranceKind::Absolute, inputs({"squash(0.2)"}, {}, {level}), "relative L2 difference");
    rec.add("squash tension nonzero", std::sqrt(ordered_sum(den) / (4.0 * kPi)), 1e-2, 0.0, ToleranceKind::Above,
            inputs({"squash(0.2)"}, {}, {level}), "RMS tension");
  }
  for (const std::string key : {"perturbed(CP2,0.2)", "eigenmap"}) {
    const MapObject F = standard_map(key);
    rec.add("pluriharmonic " + key,
            probe_sup(F, probes, c.seed, [&](const Point& x) { return pluriharmonic_residual(F, x); }), 1e-2, 0.0,
            ToleranceKind::Above, inputs({key}, {c.seed}, {probes}), "not pluriharmonic");
  }
  {
    const MapObject F = standard_map("eigenmap");
    rec.add("tension eigenmap",
            probe_sup(F, probes, c.seed, [&](const Point& x) { return norm(F.codomain(), F(x), tension(F, x)); }), 0.0,
            1e-3, ToleranceKind::Absolute, inputs({"eigenmap"}, {c.seed}, {probes}), "harmonic");
    const MapObject P = standard_map("perturbed(CP2,0.2)");
    rec.add("hermitian perturbed(CP2,0.2)",
            probe_sup(P, probes, c.seed, [&](const Point& x) { return hermitian_residual(P, x); }), 1e-3, 0.0,
            ToleranceKind::Above, inputs({"perturbed(CP2,0.2)"}, {c.seed}, {probes}));
    const MapObject J = standard_map("conjugation");
    rec.add("hermitian conjugation", probe_sup(J, probes, c.seed, [&](const Point& x) { return hermitian_residual(J, x); }),
            0.0, 1e-5, ToleranceKind::Absolute, inputs({"conjugation"}, {c.seed}, {probes}), "antiholomorphic");
  }
  {
    const Manifold CP2 = Manifold::complex_projective(2);
    const QuadratureGrid g = build_grid(CP2, 2000, GridScheme::MonteCarlo, c.seed);
    rec.add("rank dilation(CP2,8)", rank_profile(standard_map("dilation(CP2,8)"), g).full_rank_fraction, 1.0, 0.0,
            ToleranceKind::Absolute, inputs({"dilation(CP2,8)"}, {c.seed}, {2000}), "full-rank fraction");
    rec.add("rank identity(CP2)", rank_profile(identity_map(CP2), g).full_rank_fraction, 1.0, 0.0,
            ToleranceKind::Absolute, inputs({"identity(CP2)"}, {c.seed}, {2000}));
    rec.add("rank constant(CP2)", rank_profile(standard_map("constant(CP2)"), g).counts[0], 2000.0, 0.0,
            ToleranceKind::Absolute, inputs({"constant(CP2)"}, {c.seed}, {2000}), "nodes of rank 0");
  }
  {
    const QuadratureGrid g = build_grid(Manifold::complex_projective(1), 4, GridScheme::Mesh);
    for (int k = 0; k < 3; ++k) {
      RngStream rng = RngStream(c.seed, 0x6f6d656761ULL).substream(k);
      const Manifold CP2 = Manifold::complex_projective(2);
      const Point x = random_point(CP2, rng);
      const LineEmbedding L = line_through(x, random_unit_tangent(CP2, x, rng));
      for (const std::string key : {"identity(CP2)", "dilation(CP2,2)"}) {
        const LineIntegral li = omega_star_line_integral(standard_map(key), L, g);
        const std::string tag = key + " line " + std::to_string(k);
        rec.add("omega " + tag, li.omega, kPi, 5e-3, ToleranceKind::Relative, inputs({key}, {c.seed}, {4}));
        rec.add("omega-area " + tag, li.omega, li.area, 5e-3, ToleranceKind::Relative, inputs({key}, {c.seed}, {4}));
      }
    }
  }
  {
    const int K = 200;
    const double big = param_or(c, "spread_magnitude", 0.5);
    const std::string pert = "perturbed(CP2," + fmt(big) + ")";
    for (const std::string& key : {std::string("identity(CP2)"), std::string("dilation(CP2,4)"), pert}) {
      const Spread s = line_energy_spread(standard_map(key), K, c.seed);
      const double rel = s.max_deviation / s.mean;
      if (key == pert)
        rec.add("spread " + key, rel, 5e-2, 0.0, ToleranceKind::Above, inputs({key}, {c.seed}, {K, 4}),
                "max deviation / mean of line energies");
      else
        rec.add("spread " + key, rel, 0.0, 1e-2, ToleranceKind::Absolute, inputs({key}, {c.seed}, {K, 4}),
                "max deviation / mean of line energies");
    }
  }
}

void jacobi(Recorder& rec, const ExperimentConfig& c) {
  const int level = res_or(c, 4);
  const Manifold CP1 = Manifold::complex_projective(1);
  const QuadratureGrid g = build_grid(CP1, level, GridScheme::Mesh);
  const auto su2 = su_basis(2);
  {
    const MapObject F = identity_map(CP1);
    double worst = 0.0;
    for (const auto& a : su2) {
      const SecondVariation sv = second_variation(F, holomorphic_variation(F, a), g);
      worst = std::max(worst, std::abs(sv.value) / sv.w_norm_sq);
    }
    rec.add("second-variation identity(CP1)", worst, 0.0, 1e-3, ToleranceKind::Absolute,
            inputs({"identity(CP1)"}, {}, {level}), "max |d2E| / integral |W|^2 over su(2)");
  }
  {
    const MapObject F = standard_map("rational(veronese)");
    double worst = 0.0;
    for (const auto& a : su2) worst = std::max(worst, jacobi_identity_check(F, a, g).relative_gap());
    rec.add("two-sided rational(veronese)", worst, 0.0, 5e-2, ToleranceKind::Absolute,
            inputs({"rational(veronese)"}, {}, {level}),
            "|lhs - rhs| / max(|lhs|, |rhs|, 1e-3 integral |W|^2)");
    const LieAlgebraElement zero = su2[0].scaled(0.0);
    const JacobiCheck z = jacobi_identity_check(F, zero, g);
    rec.add("zero-field", std::max(std::abs(z.lhs), std::abs(z.rhs)), 0.0, 1e-9, ToleranceKind::Absolute,
            inputs({"rational(veronese)"}, {}, {level}));
  }
  {
    const int res = 8;
    const Manifold CP2 = Manifold::complex_projective(2);
    const QuadratureGrid g2 = build_grid(CP2, res, GridScheme::ProductAngles);
    const MapObject F = standard_map("eigenmap");
    const auto su3 = su_basis(3);
    double worst = 0.0;
    for (int k : {0, 3, 7}) worst = std::max(worst, jacobi_identity_check(F, su3[k], g2).relative_gap());
    rec.add("two-sided eigenmap", worst, 0.0, 5e-2, ToleranceKind::Absolute, inputs({"eigenmap"}, {}, {res}),
            "harmonic, not pluriharmonic");
  }
  {
    const Manifold S2 = Manifold::sphere(2), S3 = Manifold::sphere(3);
    const MapObject I2 = identity_map(S2), I3 = identity_map(S3);
    const QuadratureGrid g2 = build_grid(S2, level, GridScheme::Mesh);
    const QuadratureGrid g3 = build_grid(S3, 16, GridScheme::ProductAngles);
    const SecondVariation a = second_variation(I2, conformal_gradient_variation(I2, 0), g2);
    rec.add("conformal identity(S2)", a.value / a.w_norm_sq, 0.0, 1e-3, ToleranceKind::Absolute,
            inputs({"identity(S2)"}, {}, {level}), "id of S^2 minimizes energy; conformal fields are Jacobi fields");
    const SecondVariation b = second_variation(I3, conformal_gradient_variation(I3, 0), g3);
    rec.add("conformal identity(S3) sign", b.value, 0.0, 0.0, ToleranceKind::AtMost, inputs({"identity(S3)"}, {}, {16}),
            "unstable");
    rec.add("conformal identity(S3) value", b.value, -b.w_norm_sq, 1e-3, ToleranceKind::Relative,
            inputs({"identity(S3)"}, {}, {16}), "Jacobi operator acts as -1 on conformal gradients of S^3");
    const SecondVariation bn = second_variation(I3, negated(conformal_gradient_variation(I3, 0)), g3);
    rec.add("even in W", bn.value, b.value, 1e-6, ToleranceKind::Relative, inputs({"identity(S3)"}, {}, {16}));
    const SecondVariation z = second_variation(I2, zero_variation(I2), g2);
    rec.add("zero variation", z.value, 0.0, 1e-9, ToleranceKind::Absolute, inputs({"identity(S2)"}, {}, {level}));
  }
}

void trace_ii(Recorder& rec, const ExperimentConfig& c) {
  const int level = res_or(c, 4);
  const Manifold CP1 = Manifold::complex_projective(1);
  const QuadratureGrid g = build_grid(CP1, level, GridScheme::Mesh);
  const auto su2 = su_basis(2);
  {
    const MapObject F = identity_map(CP1);
    const TraceFormII t = trace_form_II(F, g, su2);
    const double E = p_energy(F, g, 2.0).value;
    rec.add("identity(CP1)", std::abs(t.trace) / E, 0.0, 1e-3, ToleranceKind::Absolute,
            inputs({"identity(CP1)"}, {}, {level}), "|Tr II| / E_2");
  }
  auto relative = [](const TraceFormII& t) {
    return std::abs(t.trace) / std::max(t.abs_sum, 1e-3 * t.w_norm_sq);
  };
  {
    const MapObject F = standard_map("rational(veronese)");
    rec.add("rational(veronese)", relative(trace_form_II(F, g, su2)), 0.0, 5e-2, ToleranceKind::Absolute,
            inputs({"rational(veronese)"}, {}, {level}), "|Tr II| / max(sum |terms|, 1e-3 sum integral |W|^2)");
  }
  {
    const MapObject F = standard_map("eigenmap");
    const QuadratureGrid g2 = build_grid(Manifold::complex_projective(2), 8, GridScheme::ProductAngles);
    rec.add("eigenmap", relative(trace_form_II(F, g2, su_basis(3))), 0.0, 5e-2, ToleranceKind::Absolute,
            inputs({"eigenmap"}, {}, {8}));
  }
  {
    const MapObject F = standard_map("constant(CP2)");
    const QuadratureGrid g2 = build_grid(Manifold::complex_projective(2), 4, GridScheme::ProductAngles);
    rec.add("constant(CP2)", std::abs(trace_form_II(F, g2, su_basis(3)).trace), 0.0, 1e-12, ToleranceKind::Absolute,
            inputs({"constant(CP2)"}, {}, {4}));
  }
}

// Closed form 12 pi^2 t / (1 + t)^2 of E_2(theta_t).
double theta_energy_closed_form(double t) { return 12.0 * kPi * kPi * t / ((1.0 + t) * (1.0 + t)); }

// E_2(Theta_t) from one-dimensional quadrature: the collar contributes
// 4 pi (pi/2 - psi_t), the cap 6 pi int_0^{psi_t} lambda^2 sin^2.
double capped_theta_energy_1d(double t) {
  const double pt = theta_cap_angle(t);
  std::vector<double> x, w;
  gauss_legendre(200, 0.0, pt, x, w);
  double cap = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double l = theta_conformal_factor(t, x[i]);
    cap += w[i] * l * l * std::sin(x[i]) * std::sin(x[i]);
  }
  return 6.0 * kPi * cap + 4.0 * kPi * (0.5 * kPi - pt);
}

void theta(Recorder& rec, const ExperimentConfig& c) {
  const int res = res_or(c, 32);
  const QuadratureGrid g = build_grid(Manifold::sphere(3), res, GridScheme::ProductAngles);
  const std::vector<double> ts = {1, 2, 4, 8};
  std::vector<double> E;
  for (double t : ts) E.push_back(p_energy(make_theta(t), g, 2.0).value);
  rec.add("E(theta_1)", E[0], 3.0 * kPi * kPi, 5e-3, ToleranceKind::Relative, inputs({"theta(1)"}, {}, {res}));
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < E.size(); ++k) gap = std::min(gap, E[k] - E[k + 1]);
  rec.add("strictly-decreasing", gap, 0.0, 0.0, ToleranceKind::Above, inputs({"theta(1..8)"}, {}, {res}),
          "min over steps of E(theta_t) - E(theta_2t)");
  for (std::size_t k = 1; k < ts.size(); ++k)
    rec.add("closed-form t=" + fmt(ts[k]), E[k], theta_energy_closed_form(ts[k]), 5e-3, ToleranceKind::Relative,
            inputs({"theta(" + fmt(ts[k]) + ")"}, {}, {res}), "12 pi^2 t / (1 + t)^2");
}

void capped_theta(Recorder& rec, const ExperimentConfig& c) {
  const int res = res_or(c, 24);
  const Manifold RP3 = Manifold::real_projective(3);
  const std::vector<double> ts = {2, 4, 8, 16};
  std::vector<double> E;
  for (double t : ts) {
    const QuadratureGrid g = build_polar_grid(RP3, res, {theta_cap_angle(t)});
    E.push_back(p_energy(make_capped_theta(t), g, 2.0).value);
    rec.add("one-dimensional t=" + fmt(t), E.back(), capped_theta_energy_1d(t), 5e-3, ToleranceKind::Relative,
            inputs({"capped_theta(" + fmt(t) + ")"}, {}, {res}));
  }
  // Least-squares line in 1/t; the intercept is the limit.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double x = 1.0 / ts[k];
    sx += x, sy += E[k], sxx += x * x, sxy += x * E[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double limit = (sy - slope * sx) / n;
  rec.add("limit", limit, 2.0 * kPi * kPi, 2e-2, ToleranceKind::Relative, inputs({"capped_theta(2..16)"}, {}, {res}),
          "linear extrapolation in 1/t against pi E_2(id on Q_0)");

  const double Bstar = param_or(c, "Bstar", 2.0 * kPi);
  const BoundValue iv = eval_bound(BoundSpec::rp3_interval(Bstar));
  rec.add("interval-lower", iv.lo, 0.75 * kPi * Bstar, 1e-12, ToleranceKind::Relative, inputs({}, {}, {}, {{"Bstar", Bstar}}));
  rec.add("interval-upper", iv.hi, kPi * Bstar, 1e-12, ToleranceKind::Relative, inputs({}, {}, {}, {{"Bstar", Bstar}}));
  for (std::size_t k = 0; k < ts.size(); ++k)
    rec.add("candidate t=" + fmt(ts[k]), E[k], iv.lo, 0.0, ToleranceKind::AtLeast,
            inputs({"capped_theta(" + fmt(ts[k]) + ")"}, {}, {res}, {{"Bstar", Bstar}}),
            "candidate energy against the lower end of the interval");
}

void pu(Recorder& rec, const ExperimentConfig& c) {
  const int level = res_or(c, 3);
  const ConformalFactor round = [](const Eigen::Vector3d&) { return 1.0; };
  const ConformalFactor scaled = [](const Eigen::Vector3d&) { return 4.0; };
  const ConformalFactor bumped = [](const Eigen::Vector3d& x) { return 1.0 + 0.5 * x[0] * x[0]; };
  const SystoleResult r = systole_rp2(round, level);
  rec.add("round systole", r.refined, kPi, 2e-2, ToleranceKind::Relative, inputs({"mu=1"}, {}, {level, level + 1}));
  rec.add("round equality", r.slack / r.area, 0.0, 2e-2, ToleranceKind::Absolute, inputs({"mu=1"}, {}, {level, level + 1}),
          "slack / area");
  const SystoleResult s = systole_rp2(scaled, level);
  rec.add("scaled systole", s.refined, 2.0 * kPi, 2e-2, ToleranceKind::Relative, inputs({"mu=4"}, {}, {level, level + 1}));
  const SystoleResult b = systole_rp2(bumped, level);
  rec.add("bumped area", b.area, 7.0 * kPi / 3.0, 1e-2, ToleranceKind::Relative,
          inputs({"mu=1+x0^2/2"}, {}, {level, level + 1}));
  rec.add("bumped systole", b.refined, kPi, 2e-2, ToleranceKind::Relative, inputs({"mu=1+x0^2/2"}, {}, {level, level + 1}),
          "mu >= 1 with equality on the great circle x0 = 0");
  auto& slack = rec.add("bumped slack", b.slack, 3.0 * b.slack_uncertainty, 0.0, ToleranceKind::Above,
                        inputs({"mu=1+x0^2/2"}, {}, {level, level + 1}), "slack against 3x its uncertainty");
  slack.inputs.parameters["uncertainty"] = b.slack_uncertainty;
}

void flow(Recorder& rec, const ExperimentConfig& c) {
  const int level = res_or(c, 4);
  const Manifold S2 = Manifold::sphere(2);
  FlowOptions opt;
  opt.step = param_or(c, "step", 1e-3);
  opt.iterations = static_cast<int>(param_or(c, "iterations", 3000));
  const MeshMap id = make_mesh_map(identity_map(S2), level);
  rec.add("discrete identity", discrete_energy(id), 4.0 * kPi, 1e-2, ToleranceKind::Relative,
          inputs({"identity(S2)"}, {}, {level}));
  const MeshMap start = make_mesh_map(make_perturbed_identity(S2, 0.2), level);
  const FlowResult fr = flow_minimize(start, opt);
  double rise = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < fr.log.size(); ++k) rise = std::max(rise, fr.log[k].energy - fr.log[k - 1].energy);
  const auto in = inputs({"perturbed(S2,0.2)"}, {}, {level}, {{"step", opt.step}, {"iterations", opt.iterations}});
  rec.add("monotone", rise, 0.0, 0.0, ToleranceKind::AtMost, in, "largest energy increase between accepted steps");
  rec.add("energy", fr.log.back().energy, 4.0 * kPi, 1e-2, ToleranceKind::Relative, in);
  const double d0 = fr.log.front().defect, d1 = fr.log.back().defect;
  rec.add("defect-reduction", d0 / std::max(d1, 1e-300), 10.0, 0.0, ToleranceKind::AtLeast, in,
          "initial defect " + fmt(d0) + ", final " + fmt(d1));
  rec.add("final-tension", fr.final_tension, 0.0, 1e-4, ToleranceKind::Absolute, in, "discrete tension sup-norm");

  // Finite-difference tension of the interpolated maps at triangle centroids,
  // with the step set to the mean edge length so the stencil reaches across
  // the kinks between triangles.
  {
    std::vector<double> len;
    for (const Edge& e : start.edges)
      len.push_back(std::acos(std::clamp(start.positions[e.i].dot(start.positions[e.j]), -1.0, 1.0)));
    const double h = ordered_sum(len) / static_cast<double>(len.size());
    auto fd_sup = [&](const MeshMap& m) {
      const MapObject I = interpolate(m);
      const auto& tri = m.mesh.triangles;
      const auto v = map_indices<double>((tri.size() + 6) / 7, [&](std::size_t k) {
        const auto& t = tri[7 * k];
        const Point x = Point((m.mesh.vertices[t[0]] + m.mesh.vertices[t[1]] + m.mesh.vertices[t[2]]).normalized());
        return tension(I, x, h).norm();
      });
      return *std::max_element(v.begin(), v.end());
    };
    const double disc0 = tension_sup(discrete_tension(start));
    const double fd0 = fd_sup(start), fd1 = fd_sup(fr.map);
    rec.add("interpolated-tension start", std::abs(std::log10(fd0 / disc0)), 0.0, 1.0, ToleranceKind::Absolute, in,
            "|log10(fd / discrete)| before the flow; fd " + fmt(fd0) + ", discrete " + fmt(disc0));
    rec.add("interpolated-tension reduction", fd0 / fd1, 100.0, 0.0, ToleranceKind::AtLeast, in,
            "fd tension of the interpolant before / after; after " + fmt(fd1) + ", discrete after " +
                fmt(fr.final_tension));
  }

  const MapObject dc = compose(standard_map("double_cover"), make_perturbed_identity(S2, 0.2));
  const FlowResult fd = flow_minimize(make_mesh_map(dc, level), opt);
  rec.add("double-cover energy", fd.log.back().energy, 4.0 * kPi, 1e-2, ToleranceKind::Relative,
          inputs({"double_cover o perturbed(S2,0.2)"}, {}, {level}));
  const MeshMap cst = make_mesh_map(constant_map(S2, S2, Vec::Unit(3, 0)), level);
  const FlowResult fk = flow_minimize(cst, opt);
  rec.add("constant fixed point", fk.log.back().energy + fk.final_tension, 0.0, 1e-12, ToleranceKind::Absolute,
          inputs({"constant(S2)"}, {}, {level}));
}

void e1_geodesic(Recorder& rec, const ExperimentConfig& c) {
  const int K = res_or(c, 2000);
  for (int n : {2, 3}) {
    const Manifold M = Manifold::real_projective(n);
    const MapObject F = identity_map(M);
    const std::string key = "identity(" + M.name() + ")";
    const AverageValue b = e1_geodesic_bound(F, K, c.seed);
    const double ref = 0.5 * std::sqrt(static_cast<double>(n)) * M.volume();
    rec.add("bound " + key, b.value, ref, 1e-2, ToleranceKind::Relative, inputs({key}, {c.seed}, {K}));
    const QuadratureGrid g = build_grid(M, 100000, GridScheme::MonteCarlo, c.seed);
    const double e1 = p_energy(F, g, 1.0).value;
    rec.add("E1 " + key, e1, b.value, 1e-2, ToleranceKind::Relative, inputs({key}, {c.seed}, {100000}));
  }
  const Manifold RP3 = Manifold::real_projective(3);
  const AverageValue z = e1_geodesic_bound(constant_map(RP3, RP3, Vec::Unit(4, 0)), 50, c.seed);
  rec.add("constant", z.value, 0.0, 1e-12, ToleranceKind::Absolute, inputs({"constant(RP3)"}, {c.seed}, {50}));
}

// ---------------------------------------------------------------------------

void properties(Recorder& rec, const ExperimentConfig& c) {
  const std::uint64_t seed = c.seed;
  auto stream = [&](std::uint64_t tag, std::size_t i) { return RngStream(seed, tag).substream(i); };
  const std::vector<Manifold> spaces = {Manifold::sphere(2),          Manifold::sphere(3, 2.0),
                                        Manifold::real_projective(3), Manifold::complex_projective(2),
                                        Manifold::complex_projective(3), Manifold::product({Manifold::sphere(2),
                                                                                            Manifold::sphere(2, 0.5)})};
  {
    double worst = 0.0, len = 0.0;
    for (const Manifold& M : spaces)
      for (int k = 0; k < 1000; ++k) {
        RngStream rng = stream(1, k);
        const Point x = random_point(M, rng);
        Point y = random_point(M, rng);
        if (distance(M, x, y) > M.cut_distance() - 1e-3) continue;
        const Vec v = log_map(M, x, y);
        worst = std::max(worst, distance(M, exp_map(M, x, v), y));
        len = std::max(len, std::abs(norm(M, x, v) - distance(M, x, y)));
      }
    rec.add("exp-log round trip", worst, 0.0, 1e-9, ToleranceKind::Absolute, inputs({}, {seed}, {1000}));
    rec.add("log length", len, 0.0, 1e-9, ToleranceKind::Absolute, inputs({}, {seed}, {1000}));
  }
  {
    double worst = 0.0;
    for (const Manifold& M : spaces) {
      if (M.kind() == Manifold::Kind::Product) continue;
      for (int k = 0; k < 200; ++k) {
        RngStream rng = stream(2, k);
        const Point x = random_point(M, rng), y = random_point(M, rng);
        const Vec u = random_unit_tangent(M, x, rng), v = random_unit_tangent(M, x, rng);
        const Mat q = random_orthogonal(M.ambient_dim(), rng);
        const CMat U = M.is_complex() ? random_unitary(M.param() + 1, rng) : CMat();
        auto push = [&](const Vec& w) { return M.is_complex() ? Vec(to_real(U * to_complex(w))) : Vec(q * w); };
        const Point gx = apply_isometry(M, q, U, x), gy = apply_isometry(M, q, U, y);
        worst = std::max(worst, std::abs(distance(M, gx, gy) - distance(M, x, y)));
        worst = std::max(worst, std::abs(inner(M, gx, push(u), push(v)) - inner(M, x, u, v)));
      }
    }
    rec.add("isometry invariance", worst, 0.0, 1e-12, ToleranceKind::Absolute, inputs({}, {seed}, {200}));
  }
  {
    double worst = 0.0;
    const Manifold M = Manifold::complex_projective(3);
    for (int k = 0; k < 1000; ++k) {
      RngStream rng = stream(3, k);
      const Point x = random_point(M, rng), y = random_point(M, rng);
      if (distance(M, x, y) > M.cut_distance() - 1e-3) continue;
      const double lift = norm(M, x, log_map(M, x, y));
      const double closed = std::acos(std::min(1.0, std::abs(to_complex(x).dot(to_complex(y)))));
      worst = std::max(worst, std::abs(lift - closed));
    }
    rec.add("submersion distance", worst, 0.0, 1e-10, ToleranceKind::Absolute, inputs({"CP3"}, {seed}, {1000}));
  }
  {
    const std::vector<std::pair<Manifold, double>> vols = {
        {Manifold::sphere(2), 4.0 * kPi},
        {Manifold::real_projective(3), kPi * kPi},
        {Manifold::complex_projective(2), kPi * kPi / 2.0},
        {Manifold::complex_projective(1), kPi}};
    for (const auto& [M, v] : vols) {
      const QuadratureGrid g = build_grid(M, 20000, GridScheme::MonteCarlo, seed);
      rec.add("volume " + M.name(), g.weight_sum(), v, 1e-12, ToleranceKind::Relative, inputs({}, {seed}, {20000}));
    }
    rec.add("mesh mass S2", build_grid(Manifold::sphere(2), 4, GridScheme::Mesh).weight_sum(), 4.0 * kPi, 1e-3,
            ToleranceKind::Relative, inputs({}, {}, {4}));
    rec.add("mesh mass RP2", build_grid(Manifold::real_projective(2), 4, GridScheme::Mesh).weight_sum(), 2.0 * kPi,
            1e-3, ToleranceKind::Relative, inputs({}, {}, {4}));
    rec.add("product mass CP2", build_grid(Manifold::complex_projective(2), 8, GridScheme::ProductAngles).weight_sum(),
            kPi * kPi / 2.0, 1e-3, ToleranceKind::Relative, inputs({}, {}, {8}));
  }
  const std::vector<std::string> keys = corpus_keys();
  {
    double frame = 0.0, onto = 0.0;
    for (std::size_t m = 0; m < keys.size(); ++m) {
      const MapObject F = standard_map(keys[m]);
      for (int k = 0; k < 10; ++k) {
        RngStream rng = stream(4, m * 100 + k);
        const Point x = random_point(F.domain(), rng);
        Point fx;
        try {
          fx = F(x);
        } catch (const ResampleRequest&) {
          continue;
        }
        onto = std::max(onto, point_residual(F.codomain(), fx));
        const double base = pullback_gram(F, x, tangent_frame(F.domain(), x)).trace();
        for (int r = 0; r < 10; ++r) {
          const double other = pullback_gram(F, x, random_frame(F.domain(), x, rng)).trace();
          frame = std::max(frame, std::abs(other - base) / std::max(1.0, base));
        }
      }
    }
    rec.add("frame independence", frame, 0.0, 1e-8, ToleranceKind::Absolute, inputs(keys, {seed}, {10}));
    rec.add("lands on codomain", onto, 0.0, 1e-10, ToleranceKind::Absolute, inputs(keys, {seed}, {10}));
  }
  {
    double sym = 0.0, tframe = 0.0;
    for (const std::string key : {"rational(conic)", "eigenmap", "perturbed(CP2,0.2)", "squash(0.2)", "theta(2)"}) {
      const MapObject F = standard_map(key);
      for (int k = 0; k < 10; ++k) {
        RngStream rng = stream(5, k);
        const Point x = random_point(F.domain(), rng);
        const Vec v = random_unit_tangent(F.domain(), x, rng), w = random_unit_tangent(F.domain(), x, rng);
        const Point fx = F(x);
        sym = std::max(sym, (second_form(F, x, fx, v, w) - second_form(F, x, fx, w, v)).norm());
        const Vec t0 = tension(F, x);
        const Vec t1 = tension(F, x, random_frame(F.domain(), x, rng));
        tframe = std::max(tframe, (t0 - t1).norm());
      }
    }
    rec.add("alpha symmetry", sym, 0.0, 1e-5, ToleranceKind::Absolute, inputs({}, {seed}, {10}));
    rec.add("tension frame independence", tframe, 0.0, 1e-5, ToleranceKind::Absolute, inputs({}, {seed}, {10}));
  }
  {
    // Log-log slope of the finite-difference error against the analytic
    // differential as h halves from 1e-2.
    double worst = 0.0;
    for (const std::string key : {"rational(conic)", "theta(2)", "eigenmap", "dilation(CP2,4)", "rational(random3,7)"}) {
      const MapObject F = standard_map(key);
      RngStream rng = stream(6, 0);
      const Point x = random_point(F.domain(), rng);
      const Vec v = random_unit_tangent(F.domain(), x, rng);
      const Point fx = F(x);
      const Vec exact = F.analytic_differential(x, fx, v);
      std::vector<double> lh, le;
      for (int k = 0; k <= 6; ++k) {
        const double h = 1e-2 * std::pow(0.5, k);
        const double err = (fd_directional(F, x, fx, v, h) - exact).norm();
        lh.push_back(std::log(h));
        le.push_back(std::log(err));
      }
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(lh.size());
      for (std::size_t i = 0; i < lh.size(); ++i) sx += lh[i], sy += le[i], sxx += lh[i] * lh[i], sxy += lh[i] * le[i];
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      worst = std::max(worst, std::abs(slope - 2.0));
    }
    rec.add("differential order", worst, 0.0, 0.2, ToleranceKind::Absolute, inputs({}, {seed}, {7}),
            "largest |slope - 2| of log error against log h");
  }
  {
    double unit = 0.0, holo = 0.0;
    for (const std::string key : {"rational(line)", "rational(conic)", "rational(random3,7)", "dilation(CP2,4)"}) {
      const MapObject F = standard_map(key);
      for (int k = 0; k < 20; ++k) {
        RngStream rng = stream(7, k);
        const Point x = random_point(F.domain(), rng);
        const Point fx = F(x);
        const TangentFrame fr = random_frame(F.domain(), x, rng);
        for (std::size_t i = 0; i < fr.vectors.size(); i += 2)
          unit = std::max(unit, std::abs(directional(F, x, fx, fr.vectors[i]).norm() -
                                         directional(F, x, fx, fr.vectors[i + 1]).norm()));
        holo = std::max(holo, holomorphy_residual(F, x));
      }
    }
    rec.add("unitary frame", unit, 0.0, 1e-6, ToleranceKind::Absolute, inputs({}, {seed}, {20}), "|dF e| = |dF J e|");
    rec.add("holomorphy", holo, 0.0, 1e-6, ToleranceKind::Absolute, inputs({}, {seed}, {20}), "dF J = J dF");
  }
  {
    double spread = 0.0;
    for (double t : {2.0, 8.0}) {
      const MapObject F = make_theta(t);
      for (int k = 0; k < 20; ++k) {
        RngStream rng = stream(8, k);
        const Point x = random_point(F.domain(), rng);
        const GramMatrix G = pullback_gram(F, x, tangent_frame(F.domain(), x));
        spread = std::max(spread, (G.eigenvalues.maxCoeff() - G.eigenvalues.minCoeff()) / G.eigenvalues.maxCoeff());
      }
    }
    rec.add("theta conformal", spread, 0.0, 1e-6, ToleranceKind::Absolute, inputs({"theta(2)", "theta(8)"}, {seed}, {20}));
  }
  {
    double seam = 0.0, fixed = 0.0, one = 0.0;
    const Manifold RP3 = Manifold::real_projective(3);
    for (double t : {2.0, 4.0, 16.0}) {
      const MapObject F = make_capped_theta(t);
      const double pt = theta_cap_angle(t);
      for (int k = 0; k < 1000; ++k) {
        RngStream rng = stream(9, k);
        Vec dir = random_point(Manifold::sphere(2), rng);
        auto at = [&](double psi) {
          Point x(4);
          x[0] = std::cos(psi);
          x.tail(3) = std::sin(psi) * dir;
          return x;
        };
        seam = std::max(seam, distance(RP3, F(at(pt * (1 - 1e-12))), F(at(pt * (1 + 1e-12)))));
        fixed = std::max(fixed, distance(RP3, F(at(0.5 * kPi)), at(0.5 * kPi)));
      }
    }
    for (int k = 0; k < 100; ++k) {
      RngStream rng = stream(10, k);
      const Point x = random_point(RP3, rng);
      one = std::max(one, distance(RP3, make_capped_theta(1.0)(x), x));
      const Point s = random_point(Manifold::sphere(3), rng);
      one = std::max(one, (make_theta(1.0)(s) - s).norm());
      const Point z = random_point(Manifold::complex_projective(2), rng);
      one = std::max(one, distance(Manifold::complex_projective(2), make_projective_dilation(2, 1.0)(z), z));
    }
    rec.add("capped seam", seam, 0.0, 1e-8, ToleranceKind::Absolute, inputs({"capped_theta"}, {seed}, {1000}));
    rec.add("capped fixes Q0", fixed, 0.0, 1e-8, ToleranceKind::Absolute, inputs({"capped_theta"}, {seed}, {1000}));
    rec.add("parameter one is identity", one, 0.0, 1e-12, ToleranceKind::Absolute, inputs({}, {seed}, {100}));
  }
  {
    const Manifold CP2 = Manifold::complex_projective(2);
    double tg = 0.0;
    for (const auto& s : sample_lines(2, 20, seed)) {
      const MapObject L = s.element.as_map();
      RngStream rng = stream(11, s.index);
      tg = std::max(tg, second_form_sup(L, random_point(Manifold::complex_projective(1), rng)));
    }
    rec.add("lines totally geodesic", tg, 0.0, 1e-5, ToleranceKind::Absolute, inputs({}, {seed}, {20}));
  }
  {
    // Every corpus energy lies above its bound at the stated invariants.
    const QuadratureGrid g2 = build_grid(Manifold::complex_projective(2), 8, GridScheme::ProductAngles);
    const QuadratureGrid g1 = build_grid(Manifold::complex_projective(1), 16, GridScheme::ProductAngles);
    const QuadratureGrid r3 = build_grid(Manifold::real_projective(3), 12, GridScheme::ProductAngles);
    double worst = std::numeric_limits<double>::infinity();
    for (const std::string key : {"identity(CP2)", "dilation(CP2,4)", "perturbed(CP2,0.2)"})
      for (double p : {2.0, 3.0})
        worst = std::min(worst, p_energy(standard_map(key), g2, p).value - eval_bound(BoundSpec::cpn_p(2, p, kPi)).value());
    for (const auto& [key, d] : std::vector<std::pair<std::string, int>>{{"rational(conic)", 2}, {"rational(random3,7)", 3}})
      worst = std::min(worst, p_energy(standard_map(key), g1, 2.0).value -
                                  eval_bound(BoundSpec::cpn_p(1, 2.0, d * kPi)).value());
    for (const std::string key : {"identity(RP3)", "perturbed(RP3,0.2)", "capped_theta(4)"})
      for (double p : {1.0, 2.0})
        worst = std::min(worst, p_energy(standard_map(key), r3, p).value - eval_bound(BoundSpec::rpn_p(3, p, kPi)).value());
    rec.add("corpus above bounds", worst, 0.0, 1e-3, ToleranceKind::AtLeast, inputs({}, {}, {8, 16, 12}),
            "smallest E_p - bound; A* = d pi for degree d, L* = pi for the identity class");
  }
  {
    // Hoelder chain, with equality for the identity.
    const Manifold CP2 = Manifold::complex_projective(2);
    const QuadratureGrid g = build_grid(CP2, 8, GridScheme::ProductAngles);
    const MapObject I = identity_map(CP2), P = standard_map("perturbed(CP2,0.2)");
    const double ei = p_energy(I, g, 4.0).value, hi = holder_bound(4.0, CP2.volume(), p_energy(I, g, 2.0).value);
    rec.add("hoelder equality", ei, hi, 1e-9, ToleranceKind::Relative, inputs({"identity(CP2)"}, {}, {8}));
    const double ep = p_energy(P, g, 4.0).value, hp = holder_bound(4.0, CP2.volume(), p_energy(P, g, 2.0).value);
    rec.add("hoelder inequality", ep - hp, 0.0, 0.0, ToleranceKind::Above, inputs({"perturbed(CP2,0.2)"}, {}, {8}));
  }
  {
    // Symmetry of random points and determinism of streams.
    const Manifold S3 = Manifold::sphere(3);
    const int K = 100000;
    std::vector<double> v(K);
    for (int k = 0; k < K; ++k) {
      RngStream rng = stream(12, k);
      v[k] = random_point(S3, rng)[1];
    }
    const double mean = ordered_sum(v) / K;
    rec.add("random point mean", std::abs(mean), 3.0 * 0.5 / std::sqrt(static_cast<double>(K)), 0.0,
            ToleranceKind::AtMost, inputs({"S3"}, {seed}, {K}), "|mean <x, e_1>| against 3 sigma");
    RngStream a = stream(13, 0), b = stream(13, 0);
    double same = 0.0;
    for (int k = 0; k < 100; ++k) same = std::max(same, (random_point(S3, a) - random_point(S3, b)).norm());
    rec.add("stream determinism", same, 0.0, 0.0, ToleranceKind::Absolute, inputs({"S3"}, {seed}, {100}));
  }
  {
    const Manifold S2 = Manifold::sphere(2);
    const DirectionSet ds = unit_tangent_quadrature(Manifold::sphere(3), Vec::Unit(4, 0), 6);
    Mat mom = Mat::Zero(4, 4);
    for (std::size_t k = 0; k < ds.directions.size(); ++k) mom += ds.weights[k] * ds.directions[k] * ds.directions[k].transpose();
    Mat expect = Mat::Zero(4, 4);
    for (int i = 1; i < 4; ++i) expect(i, i) = sphere_volume(2) / 3.0;
    rec.add("tangent design moments", (mom - expect).norm(), 0.0, 1e-12, ToleranceKind::Absolute, inputs({"S3"}, {}, {6}));
    const MeshMap mm = make_mesh_map(identity_map(Manifold::real_projective(2)), 4);
    const MeshMapResiduals r = check_mesh_map(mm);
    rec.add("mesh map invariants", std::max({r.area_error, r.weight_asymmetry, r.image_residual}), 0.0, 1e-3,
            ToleranceKind::Absolute, inputs({"identity(RP2)"}, {}, {4}));
    rec.add("mesh consistency double_cover", discrete_energy(make_mesh_map(standard_map("double_cover"), 4)),
            p_energy(standard_map("double_cover"), build_grid(S2, 4, GridScheme::Mesh), 2.0).value, 1e-2,
            ToleranceKind::Relative, inputs({"double_cover"}, {}, {4}));
  }
}

using ExperimentFn = void (*)(Recorder&, const ExperimentConfig&);

const std::vector<std::pair<std::string, ExperimentFn>>& registry() {
  static const std::vector<std::pair<std::string, ExperimentFn>> r = {
      {"croke", croke},
      {"line-formula", line_formula},
      {"rp2-family", rp2_family},
      {"bounds-identity", bounds_identity},
      {"squeeze", squeeze},
      {"theta", theta},
      {"capped-theta", capped_theta},
      {"holomorphic-corpus", holomorphic_corpus},
      {"harmonic-diagnostics", harmonic_diagnostics},
      {"jacobi", jacobi},
      {"trace-II", trace_ii},
      {"pu", pu},
      {"flow", flow},
      {"e1-geodesic", e1_geodesic},
      {"properties", properties},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<ExperimentReport> run_experiment(const std::string& name, const ExperimentConfig& config) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    Recorder rec(name, config);
    try {
      fn(rec, config);
    } catch (const std::exception& e) {
      rec.add("error", std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, ToleranceKind::Absolute, {}, e.what());
    }
    return rec.out;
  }
  throw UsageError("unknown experiment '" + name + "'");
}

std::vector<ExperimentReport> run_suite(const std::vector<SuiteEntry>& suite, bool parallel) {
  for (const auto& e : suite)
    if (std::find(experiment_names().begin(), experiment_names().end(), e.name) == experiment_names().end())
      throw UsageError("unknown experiment '" + e.name + "'");
  std::vector<std::vector<ExperimentReport>> parts(suite.size());
  if (parallel) {
    // Kernels inside each experiment run serially on their thread.
    const Exec saved = default_exec();
    set_default_exec(Exec::Serial);
    for_each_index(
        suite.size(), [&](std::size_t i) { parts[i] = run_experiment(suite[i].name, suite[i].config); },
        Exec::Parallel);
    set_default_exec(saved);
  } else {
    for (std::size_t i = 0; i < suite.size(); ++i) parts[i] = run_experiment(suite[i].name, suite[i].config);
  }
  std::vector<ExperimentReport> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

bool all_pass(const std::vector<ExperimentReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const ExperimentReport& r) { return r.pass; });
}

}  // namespace cpnlab
