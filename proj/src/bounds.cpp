#include "cpnlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "cpnlab/mesh.hpp"
#include "cpnlab/parallel.hpp"

namespace cpnlab {

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::CpnP: return "CPN_P";
    case BoundKind::RpnP: return "RPN_P";
    case BoundKind::Infimum: return "INFIMUM";
    case BoundKind::Rp3Interval: return "RP3_INTERVAL";
    case BoundKind::Pu: return "PU";
    case BoundKind::Elementary: return "ELEMENTARY";
  }
  return "?";
}

BoundSpec BoundSpec::cpn_p(int N, double p, double Astar) {
  BoundSpec s;
  s.kind = BoundKind::CpnP;
  s.N = N;
  s.p = p;
  s.Astar = Astar;
  return s;
}

BoundSpec BoundSpec::rpn_p(int n, double p, double Lstar) {
  BoundSpec s;
  s.kind = BoundKind::RpnP;
  s.n = n;
  s.p = p;
  s.Lstar = Lstar;
  return s;
}

BoundSpec BoundSpec::infimum(int N, double Astar) {
  BoundSpec s;
  s.kind = BoundKind::Infimum;
  s.N = N;
  s.Astar = Astar;
  return s;
}

BoundSpec BoundSpec::rp3_interval(double Bstar) {
  BoundSpec s;
  s.kind = BoundKind::Rp3Interval;
  s.Bstar = Bstar;
  return s;
}

BoundSpec BoundSpec::pu(double area, double systole) {
  BoundSpec s;
  s.kind = BoundKind::Pu;
  s.area = area;
  s.systole = systole;
  return s;
}

BoundSpec BoundSpec::elementary(double p, int n, double vol, double pvol) {
  BoundSpec s;
  s.kind = BoundKind::Elementary;
  s.p = p;
  s.n = n;
  s.vol = vol;
  s.pvol = pvol;
  return s;
}

double c_n(int N) {
  if (N < 1) throw DomainError("c_n: need N >= 1");
  return std::pow(kPi, N - 1) / factorial(N - 1);
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string("eval_bound: ") + what + " must be positive");
}

}  // namespace

BoundValue eval_bound(const BoundSpec& s) {
  BoundValue b;
  switch (s.kind) {
    case BoundKind::CpnP:
      if (s.N < 1) throw DomainError("eval_bound: CPN_P needs N >= 1");
      if (!(s.p >= 2.0)) throw DomainError("eval_bound: CPN_P needs p >= 2");
      require_positive(s.Astar, "A*");
      b.lo = std::pow(kPi, s.N) / (2.0 * factorial(s.N)) * std::pow(2.0 * s.N / kPi * s.Astar, 0.5 * s.p);
      b.strict = s.p > 2.0;
      break;
    case BoundKind::RpnP:
      if (s.n < 2) throw DomainError("eval_bound: RPN_P needs n >= 2");
      if (!(s.p >= 1.0)) throw DomainError("eval_bound: RPN_P needs p >= 1");
      require_positive(s.Lstar, "L*");
      b.lo = sphere_volume(s.n) / 4.0 * std::pow(std::sqrt(static_cast<double>(s.n)) * s.Lstar / kPi, s.p);
      break;
    case BoundKind::Infimum:
      require_positive(s.Astar, "A*");
      b.lo = c_n(s.N) * s.Astar;
      break;
    case BoundKind::Rp3Interval:
      require_positive(s.Bstar, "B*");
      b.lo = 0.75 * kPi * s.Bstar;
      b.hi = kPi * s.Bstar;
      b.interval = true;
      break;
    case BoundKind::Pu:
      require_positive(s.area, "area");
      require_positive(s.systole, "systole");
      b.lo = s.area - 2.0 / kPi * s.systole * s.systole;
      break;
    case BoundKind::Elementary:
      require_positive(s.vol, "vol");
      if (s.pvol < 0.0) throw DomainError("eval_bound: pullback volume must be nonnegative");
      if (s.n < 1 || s.p < s.n) throw DomainError("eval_bound: ELEMENTARY needs p >= n >= 1");
      b.lo = std::pow(s.n, 0.5 * s.p) * std::pow(s.pvol, s.p / s.n) / (2.0 * std::pow(s.vol, (s.p - s.n) / s.n));
      break;
  }
  if (!b.interval) b.hi = b.lo;
  return b;
}

namespace {

double parse_number(std::string t) {
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  if (t.empty()) throw DomainError("parse_bound: empty number");
  const auto pos = t.find("pi");
  if (pos == std::string::npos) return std::stod(t);
  if (pos + 2 != t.size()) throw DomainError("parse_bound: malformed number '" + t + "'");
  std::string coeff = t.substr(0, pos);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  return (coeff.empty() ? 1.0 : std::stod(coeff)) * kPi;
}

}  // namespace

BoundSpec parse_bound(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw DomainError("parse_bound: expected NAME(args)");
  const std::string name = text.substr(0, open);
  std::vector<double> a;
  std::string cur;
  for (std::size_t i = open + 1; i + 1 < text.size(); ++i) {
    if (text[i] == ',') {
      a.push_back(parse_number(cur));
      cur.clear();
    } else {
      cur += text[i];
    }
  }
  a.push_back(parse_number(cur));
  auto need = [&](std::size_t k) {
    if (a.size() != k) throw DomainError("parse_bound: " + name + " takes " + std::to_string(k) + " arguments");
  };
  if (name == "CPN_P") return need(3), BoundSpec::cpn_p(static_cast<int>(a[0]), a[1], a[2]);
  if (name == "RPN_P") return need(3), BoundSpec::rpn_p(static_cast<int>(a[0]), a[1], a[2]);
  if (name == "INFIMUM") return need(2), BoundSpec::infimum(static_cast<int>(a[0]), a[1]);
  if (name == "RP3_INTERVAL") return need(1), BoundSpec::rp3_interval(a[0]);
  if (name == "PU") return need(2), BoundSpec::pu(a[0], a[1]);
  if (name == "ELEMENTARY") return need(4), BoundSpec::elementary(a[0], static_cast<int>(a[1]), a[2], a[3]);
  throw DomainError("parse_bound: unknown bound '" + name + "'");
}

double graph_systole(const ConformalFactor& mu, int level, int ring) {
  if (level < 1 || ring < 1) throw DomainError("graph_systole: need mesh level >= 1 and ring >= 1");
  const TriMesh mesh = icosphere(level);
  const auto anti = antipodes(mesh);
  const std::size_t nv = mesh.vertices.size();

  std::vector<std::vector<int>> nbr(nv);
  for (const Edge& e : edges(mesh)) {
    nbr[e.i].push_back(e.j);
    nbr[e.j].push_back(e.i);
  }
  // Connect every vertex to all vertices within `ring` hops, weighted by the
  // integral of sqrt(mu) along the great-circle arc (Simpson, 8 panels).
  std::vector<std::vector<std::pair<int, double>>> adj(nv);
  for (std::size_t s = 0; s < nv; ++s) {
    std::vector<int> reach{static_cast<int>(s)}, frontier{static_cast<int>(s)};
    for (int r = 0; r < ring; ++r) {
      std::vector<int> next;
      for (int u : frontier)
        for (int v : nbr[u])
          if (std::find(reach.begin(), reach.end(), v) == reach.end()) {
            reach.push_back(v);
            next.push_back(v);
          }
      frontier.swap(next);
    }
    const Eigen::Vector3d& a = mesh.vertices[s];
    for (std::size_t k = 1; k < reach.size(); ++k) {
      const Eigen::Vector3d& b = mesh.vertices[reach[k]];
      const double len = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
      const Eigen::Vector3d t = (b - a.dot(b) * a).normalized();
      constexpr int panels = 8;
      double acc = 0.0;
      for (int q = 0; q <= panels; ++q) {
        const double ang = len * q / panels;
        const double m = mu(std::cos(ang) * a + std::sin(ang) * t);
        if (!(m > 0.0)) throw DomainError("graph_systole: conformal factor must be positive");
        acc += (q == 0 || q == panels ? 1.0 : (q % 2 ? 4.0 : 2.0)) * std::sqrt(m);
      }
      adj[s].push_back({reach[k], len * acc / (3.0 * panels)});
    }
  }

  // One source per antipodal pair.
  std::vector<int> sources;
  for (std::size_t v = 0; v < nv; ++v)
    if (static_cast<int>(v) < anti[v]) sources.push_back(static_cast<int>(v));

  const double inf = std::numeric_limits<double>::infinity();
  const auto lengths = map_indices<double>(sources.size(), [&](std::size_t k) {
    const int s = sources[k], target = anti[s];
    std::vector<double> dist(nv, inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      if (u == target) return d;
      for (const auto& [v, w] : adj[u])
        if (d + w < dist[v]) {
          dist[v] = d + w;
          pq.push({dist[v], v});
        }
    }
    return inf;
  });
  const double best = *std::min_element(lengths.begin(), lengths.end());
  if (!std::isfinite(best)) throw DomainError("graph_systole: mesh graph is disconnected");
  return best;
}

namespace {

double mesh_area(const ConformalFactor& mu, int level) {
  const TriMesh mesh = icosphere(level);
  const auto w = voronoi_areas(mesh);
  std::vector<double> terms(w.size());
  for (std::size_t v = 0; v < w.size(); ++v) terms[v] = w[v] * mu(mesh.vertices[v]);
  // RP^2 is half of the sphere.
  return 0.5 * ordered_sum(terms);
}

}  // namespace

SystoleResult systole_rp2(const ConformalFactor& mu, int level, int ring) {
  SystoleResult r;
  r.level = level;
  r.ring = ring;
  r.systole = graph_systole(mu, level, ring);
  r.refined = graph_systole(mu, level + 1, ring);
  r.uncertainty = std::abs(r.systole - r.refined);
  r.area = mesh_area(mu, level + 1);
  r.area_uncertainty = std::abs(r.area - mesh_area(mu, level));
  // The finer systole is the estimate; its error is bounded by the change
  // from the coarser level.
  r.slack = eval_bound(BoundSpec::pu(r.area, r.refined)).value();
  r.slack_uncertainty = r.area_uncertainty + 4.0 / kPi * r.refined * r.uncertainty;
  return r;
}

}  // namespace cpnlab
