#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace cpnlab {

// Triangulated unit sphere. Triangles are oriented counter-clockwise seen
// from outside.
struct TriMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
};

// Subdivided icosahedron: level 0 is the icosahedron, each level splits every
// triangle into four. Antipodally symmetric at every level.
TriMesh icosphere(int level);

// Signed area of the geodesic triangle (a, b, c) on the unit sphere.
double spherical_triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c);

// Per-vertex spherical Voronoi areas (circumcentric dual cells). They tile
// the sphere, so the total is 4 pi up to rounding.
std::vector<double> voronoi_areas(const TriMesh& mesh);

// One third of each incident spherical triangle.
std::vector<double> barycentric_areas(const TriMesh& mesh);

// Index of -v for every vertex v.
std::vector<int> antipodes(const TriMesh& mesh);

struct Edge {
  int i;
  int j;
};

// Unique undirected edges with i < j.
std::vector<Edge> edges(const TriMesh& mesh);

// Cotangent weights w_ij = (cot a + cot b) / 2 computed from the flat
// triangles with the given edge lengths.
std::vector<double> cotangent_weights(const TriMesh& mesh, const std::vector<Edge>& edge_list,
                                      const std::function<double(int, int)>& edge_length);

}  // namespace cpnlab
