#include "cpnlab/mesh.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace cpnlab {

namespace {

using V3 = Eigen::Vector3d;

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

TriMesh icosphere(int level) {
  if (level < 0) throw std::invalid_argument("icosphere: negative level");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  const double raw[12][3] = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                             {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (const auto& p : raw) m.vertices.push_back(V3(p[0], p[1], p[2]).normalized());
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int l = 0; l < level; ++l) {
    std::map<std::uint64_t, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = edge_key(a, b);
      if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      const int idx = static_cast<int>(m.vertices.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * m.triangles.size());
    for (const auto& tri : m.triangles) {
      const int a = tri[0], b = tri[1], c = tri[2];
      const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  return m;
}

double spherical_triangle_area(const V3& a, const V3& b, const V3& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

std::vector<double> voronoi_areas(const TriMesh& mesh) {
  std::vector<double> area(mesh.vertices.size(), 0.0);
  for (const auto& tri : mesh.triangles) {
    const V3& a = mesh.vertices[tri[0]];
    const V3& b = mesh.vertices[tri[1]];
    const V3& c = mesh.vertices[tri[2]];
    V3 cc = (b - a).cross(c - a).normalized();
    if (cc.dot(a + b + c) < 0.0) cc = -cc;
    const V3 mab = (a + b).normalized();
    const V3 mbc = (b + c).normalized();
    const V3 mca = (c + a).normalized();
    area[tri[0]] += spherical_triangle_area(a, mab, cc) + spherical_triangle_area(a, cc, mca);
    area[tri[1]] += spherical_triangle_area(b, mbc, cc) + spherical_triangle_area(b, cc, mab);
    area[tri[2]] += spherical_triangle_area(c, mca, cc) + spherical_triangle_area(c, cc, mbc);
  }
  return area;
}

std::vector<double> barycentric_areas(const TriMesh& mesh) {
  std::vector<double> area(mesh.vertices.size(), 0.0);
  for (const auto& tri : mesh.triangles) {
    const double a = spherical_triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                             mesh.vertices[tri[2]]) /
                     3.0;
    for (int k : tri) area[k] += a;
  }
  return area;
}

std::vector<int> antipodes(const TriMesh& mesh) {
  auto key = [](const V3& v) {
    return std::make_tuple(std::llround(v.x() * 1e9), std::llround(v.y() * 1e9), std::llround(v.z() * 1e9));
  };
  std::map<std::tuple<long long, long long, long long>, int> index;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) index.emplace(key(mesh.vertices[i]), static_cast<int>(i));
  std::vector<int> out(mesh.vertices.size(), -1);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    auto it = index.find(key(-mesh.vertices[i]));
    if (it == index.end()) throw std::runtime_error("antipodes: mesh is not antipodally symmetric");
    out[i] = it->second;
  }
  return out;
}

std::vector<Edge> edges(const TriMesh& mesh) {
  std::map<std::uint64_t, Edge> seen;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      seen.emplace(edge_key(a, b), Edge{a, b});
    }
  }
  std::vector<Edge> out;
  out.reserve(seen.size());
  for (const auto& [k, e] : seen) out.push_back(e);
  return out;
}

std::vector<double> cotangent_weights(const TriMesh& mesh, const std::vector<Edge>& edge_list,
                                      const std::function<double(int, int)>& edge_length) {
  std::map<std::uint64_t, std::size_t> slot;
  for (std::size_t e = 0; e < edge_list.size(); ++e) slot.emplace(edge_key(edge_list[e].i, edge_list[e].j), e);
  std::vector<double> w(edge_list.size(), 0.0);
  for (const auto& tri : mesh.triangles) {
    const double l[3] = {edge_length(tri[1], tri[2]), edge_length(tri[2], tri[0]), edge_length(tri[0], tri[1])};
    const double s = 0.5 * (l[0] + l[1] + l[2]);
    const double area = std::sqrt(std::max(0.0, s * (s - l[0]) * (s - l[1]) * (s - l[2])));
    if (area <= 0.0) continue;
    // Angle opposite edge k has cot = (l_a^2 + l_b^2 - l_k^2) / (4 area).
    for (int k = 0; k < 3; ++k) {
      const double la = l[(k + 1) % 3], lb = l[(k + 2) % 3];
      const double cot = (la * la + lb * lb - l[k] * l[k]) / (4.0 * area);
      const int i = tri[(k + 1) % 3], j = tri[(k + 2) % 3];
      w[slot.at(edge_key(i, j))] += 0.5 * cot;
    }
  }
  return w;
}

}  // namespace cpnlab
