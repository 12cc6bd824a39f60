#include "cpnlab/flow.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace cpnlab {

namespace {

bool unit_surface(const Manifold& M) {
  return (M.kind() == Manifold::Kind::Sphere || M.kind() == Manifold::Kind::RealProjective) && M.param() == 2 &&
         M.radius() == 1.0;
}

std::vector<std::vector<std::pair<int, double>>> adjacency(const MeshMap& m) {
  std::vector<std::vector<std::pair<int, double>>> adj(m.size());
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    adj[m.edges[e].i].push_back({m.edges[e].j, m.weights[e]});
    adj[m.edges[e].j].push_back({m.edges[e].i, m.weights[e]});
  }
  return adj;
}

double energy_of(const MeshMap& m, const std::vector<Point>& image, Exec exec) {
  const auto terms = map_indices<double>(
      m.edges.size(),
      [&](std::size_t e) {
        const double d = distance(m.codomain, image[m.edges[e].i], image[m.edges[e].j]);
        return 0.5 * m.weights[e] * d * d;
      },
      exec);
  return ordered_sum(terms);
}

std::vector<Vec> tension_of(const MeshMap& m, const std::vector<Point>& image,
                            const std::vector<std::vector<std::pair<int, double>>>& adj, Exec exec) {
  return map_indices<Vec>(
      m.size(),
      [&](std::size_t i) {
        Vec t = Vec::Zero(image[i].size());
        for (const auto& [j, w] : adj[i]) t += w * log_map(m.codomain, image[i], image[j]);
        return Vec(t / m.areas[i]);
      },
      exec);
}

}  // namespace

MeshMap make_mesh_map(const Manifold& domain, const Manifold& codomain, int level) {
  if (!unit_surface(domain)) throw DomainError("make_mesh_map: domain must be the unit S^2 or RP^2");
  if (level < 1) throw DomainError("make_mesh_map: need mesh level >= 1");
  MeshMap m;
  m.domain = domain;
  m.codomain = codomain;
  m.mesh = icosphere(level);
  const std::size_t nv = m.mesh.vertices.size();
  m.cls.assign(nv, -1);
  std::vector<int> rep;
  if (domain.kind() == Manifold::Kind::RealProjective) {
    const auto anti = antipodes(m.mesh);
    for (std::size_t v = 0; v < nv; ++v) {
      if (m.cls[v] >= 0) continue;
      m.cls[v] = m.cls[anti[v]] = static_cast<int>(rep.size());
      rep.push_back(static_cast<int>(v));
    }
  } else {
    for (std::size_t v = 0; v < nv; ++v) {
      m.cls[v] = static_cast<int>(v);
      rep.push_back(static_cast<int>(v));
    }
  }
  for (int v : rep) m.positions.push_back(m.mesh.vertices[v]);

  const auto sphere_edges = edges(m.mesh);
  const auto w = cotangent_weights(m.mesh, sphere_edges, [&](int i, int j) {
    return std::acos(std::clamp(m.mesh.vertices[i].dot(m.mesh.vertices[j]), -1.0, 1.0));
  });
  std::map<std::pair<int, int>, std::size_t> seen;
  for (std::size_t e = 0; e < sphere_edges.size(); ++e) {
    int a = m.cls[sphere_edges[e].i], b = m.cls[sphere_edges[e].j];
    if (a == b) throw DomainError("make_mesh_map: mesh too coarse, an edge joins antipodes");
    if (a > b) std::swap(a, b);
    if (seen.emplace(std::make_pair(a, b), m.edges.size()).second) {
      m.edges.push_back({a, b});
      m.weights.push_back(w[e]);
    }
  }
  const auto vertex_areas = barycentric_areas(m.mesh);
  for (int v : rep) m.areas.push_back(vertex_areas[v]);
  return m;
}

MeshMap make_mesh_map(const MapObject& F, int level) {
  MeshMap m = make_mesh_map(F.domain(), F.codomain(), level);
  m.image = map_indices<Point>(m.size(), [&](std::size_t i) { return F(m.positions[i]); });
  return m;
}

MeshMapResiduals check_mesh_map(const MeshMap& m) {
  MeshMapResiduals r;
  double total = 0.0;
  for (double a : m.areas) total += a;
  r.area_error = std::abs(total - m.domain.volume()) / m.domain.volume();
  // Weights are stored once per undirected edge; compare the two directions
  // of the adjacency lists.
  const auto adj = adjacency(m);
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (const auto& [j, w] : adj[i])
      for (const auto& [k, w2] : adj[j])
        if (k == static_cast<int>(i)) r.weight_asymmetry = std::max(r.weight_asymmetry, std::abs(w - w2));
  for (const Point& p : m.image) r.image_residual = std::max(r.image_residual, point_residual(m.codomain, p));
  return r;
}

double discrete_energy(const MeshMap& m, Exec exec) { return energy_of(m, m.image, exec); }

std::vector<Vec> discrete_tension(const MeshMap& m, Exec exec) { return tension_of(m, m.image, adjacency(m), exec); }

double tension_sup(const std::vector<Vec>& tension) {
  double s = 0.0;
  for (const Vec& t : tension) s = std::max(s, t.norm());
  return s;
}

ConformalityDefect conformality_defect(const MeshMap& m, Exec exec) {
  const Manifold S2 = Manifold::sphere(2);
  struct Term {
    double area = 0.0;
    double defect = 0.0;
    bool skipped = false;
  };
  const auto terms = map_indices<Term>(
      m.mesh.triangles.size(),
      [&](std::size_t t) {
        const auto& tri = m.mesh.triangles[t];
        Term out;
        const Point a = m.mesh.vertices[tri[0]], b = m.mesh.vertices[tri[1]], c = m.mesh.vertices[tri[2]];
        try {
          const Vec d1 = log_map(S2, a, b), d2 = log_map(S2, a, c);
          const Vec t1 = d1.normalized();
          const Vec t2 = (d2 - d2.dot(t1) * t1).normalized();
          Eigen::Matrix2d D;
          D << d1.dot(t1), d2.dot(t1), d1.dot(t2), d2.dot(t2);
          if (std::abs(D.determinant()) < 1e-14) {
            out.skipped = true;
            return out;
          }
          const Point& fa = m.image_of_vertex(tri[0]);
          Mat f(fa.size(), 2);
          f.col(0) = log_map(m.codomain, fa, m.image_of_vertex(tri[1]));
          f.col(1) = log_map(m.codomain, fa, m.image_of_vertex(tri[2]));
          const Mat A = f * D.inverse();
          const Vec s = Eigen::JacobiSVD<Mat>(A).singularValues();
          out.area = std::abs(spherical_triangle_area(a, b, c));
          out.defect = (s[0] - s[1]) / (s[0] + s[1] + 1e-12);
        } catch (const ResampleRequest&) {
          out.skipped = true;
        }
        return out;
      },
      exec);
  std::vector<double> num, den;
  ConformalityDefect d;
  for (const Term& t : terms) {
    if (t.skipped) {
      ++d.skipped;
      continue;
    }
    num.push_back(t.area * t.defect);
    den.push_back(t.area);
  }
  const double total = ordered_sum(den);
  d.value = total > 0.0 ? ordered_sum(num) / total : 0.0;
  return d;
}

FlowResult flow_minimize(const MeshMap& m, const FlowOptions& opt, Exec exec) {
  if (!(opt.step > 0.0) || opt.iterations < 0) throw DomainError("flow_minimize: need step > 0 and iterations >= 0");
  FlowResult res;
  res.map = m;
  const auto adj = adjacency(m);
  std::vector<Point>& image = res.map.image;
  double energy = energy_of(m, image, exec);
  double step = opt.step;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<Vec> tau = tension_of(m, image, adj, exec);
  res.log.push_back({0, energy, tension_sup(tau), step, conformality_defect(res.map, exec).value});

  int it = 0;
  for (it = 1; it <= opt.iterations; ++it) {
    if (tension_sup(tau) < opt.tolerance) {
      res.converged = true;
      break;
    }
    std::vector<Point> cand;
    double e_new = 0.0;
    for (int halvings = 0;; ++halvings) {
      cand = map_indices<Point>(
          image.size(), [&](std::size_t i) { return exp_map(m.codomain, image[i], step * tau[i]); }, exec);
      e_new = energy_of(m, cand, exec);
      if (e_new <= energy) break;
      if (halvings == opt.max_halvings) {
        std::ostringstream msg;
        msg << "flow_minimize: energy did not decrease after " << opt.max_halvings << " halvings at iteration " << it
            << " (energy " << energy << ", candidate " << e_new << ", step " << step << ")";
        throw StallError(msg.str(), it, energy, step);
      }
      step *= 0.5;
    }
    image.swap(cand);
    energy = e_new;
    tau = tension_of(m, image, adj, exec);
    const bool with_defect = opt.defect_every > 0 && it % opt.defect_every == 0;
    res.log.push_back(
        {it, energy, tension_sup(tau), step, with_defect ? conformality_defect(res.map, exec).value : nan});
  }
  res.iterations = std::min(it, opt.iterations);
  res.final_tension = tension_sup(tau);
  if (!res.converged) res.converged = res.final_tension < opt.tolerance;
  if (std::isnan(res.log.back().defect)) res.log.back().defect = conformality_defect(res.map, exec).value;
  return res;
}

namespace {

struct Locator {
  std::shared_ptr<const MeshMap> m;
  std::vector<std::vector<int>> incident;

  explicit Locator(const MeshMap& map) : m(std::make_shared<const MeshMap>(map)) {
    incident.resize(m->mesh.vertices.size());
    for (std::size_t t = 0; t < m->mesh.triangles.size(); ++t)
      for (int v : m->mesh.triangles[t]) incident[v].push_back(static_cast<int>(t));
  }

  // Barycentric coordinates of the ray through x in triangle t.
  Eigen::Vector3d bary(int t, const Eigen::Vector3d& x) const {
    const auto& tri = m->mesh.triangles[t];
    Eigen::Matrix3d M;
    M.col(0) = m->mesh.vertices[tri[0]];
    M.col(1) = m->mesh.vertices[tri[1]];
    M.col(2) = m->mesh.vertices[tri[2]];
    Eigen::Vector3d l = M.partialPivLu().solve(x);
    return l / l.sum();
  }

  std::pair<int, Eigen::Vector3d> locate(const Eigen::Vector3d& x) const {
    int nearest = 0;
    double best_dot = -2.0;
    for (std::size_t v = 0; v < m->mesh.vertices.size(); ++v) {
      const double d = m->mesh.vertices[v].dot(x);
      if (d > best_dot) best_dot = d, nearest = static_cast<int>(v);
    }
    auto search = [&](const std::vector<int>& candidates, int& bt, Eigen::Vector3d& bl) {
      double best = -std::numeric_limits<double>::infinity();
      for (int t : candidates) {
        const Eigen::Vector3d l = bary(t, x);
        if (l.minCoeff() > best) best = l.minCoeff(), bt = t, bl = l;
      }
      return best;
    };
    int t = -1;
    Eigen::Vector3d l;
    if (search(incident[nearest], t, l) < -1e-9) {
      std::vector<int> all(m->mesh.triangles.size());
      for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
      search(all, t, l);
    }
    return {t, l};
  }

  Point operator()(const Point& x) const {
    const Eigen::Vector3d y = Eigen::Vector3d(x[0], x[1], x[2]).normalized();
    const auto [t, l] = locate(y);
    const auto& tri = m->mesh.triangles[t];
    int top = 0;
    for (int k = 1; k < 3; ++k)
      if (l[k] > l[top]) top = k;
    Point c = m->image_of_vertex(tri[top]);
    for (int round = 0; round < 3; ++round) {
      Vec s = Vec::Zero(c.size());
      for (int k = 0; k < 3; ++k) s += l[k] * log_map(m->codomain, c, m->image_of_vertex(tri[k]));
      c = exp_map(m->codomain, c, s);
    }
    return c;
  }
};

}  // namespace

MapObject interpolate(const MeshMap& m, const std::string& name) {
  auto loc = std::make_shared<const Locator>(m);
  return MapObject(m.domain, m.codomain, [loc](const Point& x) { return (*loc)(x); }, name, Smoothness::Lipschitz);
}

void write_mesh_csv(const TriMesh& mesh, std::ostream& vertices, std::ostream& triangles) {
  vertices << "x,y,z\n" << std::setprecision(17);
  for (const auto& v : mesh.vertices) vertices << v[0] << ',' << v[1] << ',' << v[2] << '\n';
  triangles << "i,j,k\n";
  for (const auto& t : mesh.triangles) triangles << t[0] << ',' << t[1] << ',' << t[2] << '\n';
}

namespace {

std::vector<std::vector<double>> read_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TriMesh read_mesh_csv(std::istream& vertices, std::istream& triangles) {
  TriMesh mesh;
  for (const auto& r : read_rows(vertices)) {
    if (r.size() != 3) throw DomainError("read_mesh_csv: vertex rows need 3 columns");
    mesh.vertices.emplace_back(r[0], r[1], r[2]);
  }
  for (const auto& r : read_rows(triangles)) {
    if (r.size() != 3) throw DomainError("read_mesh_csv: triangle rows need 3 columns");
    std::array<int, 3> t{static_cast<int>(r[0]), static_cast<int>(r[1]), static_cast<int>(r[2])};
    for (int v : t)
      if (v < 0 || v >= static_cast<int>(mesh.vertices.size()))
        throw DomainError("read_mesh_csv: triangle index out of range");
    mesh.triangles.push_back(t);
  }
  return mesh;
}

void write_mesh_map_csv(const MeshMap& m, std::ostream& out) {
  const Eigen::Index d = m.image.empty() ? 0 : m.image.front().size();
  out << "class,x,y,z";
  for (Eigen::Index k = 0; k < d; ++k) out << ",f" << k;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << i << ',' << m.positions[i][0] << ',' << m.positions[i][1] << ',' << m.positions[i][2];
    for (Eigen::Index k = 0; k < d; ++k) out << ',' << m.image[i][k];
    out << '\n';
  }
}

void write_flow_log_csv(const std::vector<FlowLogRow>& log, std::ostream& out) {
  out << "iteration,energy,tension,step,defect\n" << std::setprecision(17);
  for (const auto& r : log)
    out << r.iteration << ',' << r.energy << ',' << r.tension << ',' << r.step << ',' << r.defect << '\n';
}

}  // namespace cpnlab
