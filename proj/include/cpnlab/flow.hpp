#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpnlab/maps.hpp"
#include "cpnlab/mesh.hpp"
#include "cpnlab/parallel.hpp"

namespace cpnlab {

// Piecewise map from a meshed S^2 or RP^2 into a model codomain. RP^2 is the
// S^2 mesh with antipodal vertices identified: `cls` sends every sphere
// vertex to its class, and edges, weights, areas and images are indexed by
// class.
struct MeshMap {
  Manifold domain = Manifold::sphere(2);
  Manifold codomain = Manifold::sphere(2);
  TriMesh mesh;
  std::vector<int> cls;
  // Class representatives on the unit sphere.
  std::vector<Point> positions;
  std::vector<Edge> edges;
  std::vector<double> weights;
  std::vector<double> areas;
  std::vector<Point> image;

  std::size_t size() const { return positions.size(); }
  const Point& image_of_vertex(int v) const { return image[cls[v]]; }
};

// Domain S^2 or RP^2 at the given icosphere level, image sampled from F.
MeshMap make_mesh_map(const MapObject& F, int level);
MeshMap make_mesh_map(const Manifold& domain, const Manifold& codomain, int level);

struct MeshMapResiduals {
  double weight_asymmetry = 0.0;
  double area_error = 0.0;  // relative to the domain area
  double image_residual = 0.0;
};
MeshMapResiduals check_mesh_map(const MeshMap& m);

// (1/2) sum over edges of w_ij d(F_i, F_j)^2.
double discrete_energy(const MeshMap& m, Exec exec = default_exec());

// tau_i = (1 / A_i) sum_j w_ij log_{F_i} F_j, the negative energy gradient
// per unit area.
std::vector<Vec> discrete_tension(const MeshMap& m, Exec exec = default_exec());
double tension_sup(const std::vector<Vec>& tension);

struct ConformalityDefect {
  double value = 0.0;
  int skipped = 0;
};
// Area-weighted mean of (s1 - s2) / (s1 + s2 + eps) over triangles, s1 >= s2
// the singular values of the affine map between log-coordinates of the
// domain and image triangles.
ConformalityDefect conformality_defect(const MeshMap& m, Exec exec = default_exec());

class StallError : public std::runtime_error {
 public:
  StallError(const std::string& what, int iteration, double energy, double step)
      : std::runtime_error(what), iteration(iteration), energy(energy), step(step) {}
  int iteration;
  double energy;
  double step;
};

struct FlowLogRow {
  int iteration = 0;
  double energy = 0.0;
  double tension = 0.0;
  double step = 0.0;
  // NaN on rows where the defect was not evaluated.
  double defect = 0.0;
};

struct FlowOptions {
  double step = 1e-3;
  int iterations = 2000;
  double tolerance = 1e-6;
  int defect_every = 50;
  int max_halvings = 10;
};

struct FlowResult {
  MeshMap map;
  std::vector<FlowLogRow> log;
  int iterations = 0;
  bool converged = false;
  double final_tension = 0.0;
};

// Projected gradient descent: every vertex moves to exp_{F_i}(step tau_i)
// at once. A step that does not lower the energy is halved, up to
// max_halvings times, then StallError.
FlowResult flow_minimize(const MeshMap& m, const FlowOptions& opt = {}, Exec exec = default_exec());

// Barycentric interpolation in the codomain (three rounds of exp/log
// averaging of the corner images).
MapObject interpolate(const MeshMap& m, const std::string& name = "mesh_map");

void write_mesh_csv(const TriMesh& mesh, std::ostream& vertices, std::ostream& triangles);
TriMesh read_mesh_csv(std::istream& vertices, std::istream& triangles);
// One row per class: position, then image components.
void write_mesh_map_csv(const MeshMap& m, std::ostream& out);
void write_flow_log_csv(const std::vector<FlowLogRow>& log, std::ostream& out);

}  // namespace cpnlab
