#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "kmr/invariants.hpp"

namespace kmr {

// Displacement Re(integral of Phi) along a polyline lifted from `start`.
// The polyline lives in the chart selected by start.at_infinity and must
// begin at start's coordinate; the result is zero for a single-node path.
// The continued lift at the end of the path is written to *end_point when
// given. Throws NumericalError when the path runs into an end, where the
// integral diverges.
std::array<double, 3> immerse(const SurfaceParams& p, const TorusPoint& start,
                              const std::vector<Complex>& path,
                              TorusPoint* end_point = nullptr);

struct MeshRequest {
  SurfaceParams params;
  int resolution = 16;              // raster density per patch, >= 2
  double eps = 0.05;                // clip where |g| leaves [eps, 1/eps]
  std::array<int, 2> copies{1, 1};  // translate counts along PA and P1
};

// Raster patches: 2 sheets x 4 quadrants x 4 radial bands per lattice copy.
// Bands 0 and 1 raster the unit z-disk (disk around z = 0, annulus out to
// |z| = 1); bands 2 and 3 raster the unit u-disk the same way (annulus from
// |z| = 1 inward in u, disk around z = infinity). The band split leaves a
// thin ring gap at the two branch-point radii.
struct PatchInfo {
  int sheet = 1;     // 1: lift continued from the base point, 2: deck image
  int quadrant = 0;  // z-plane quadrant, counterclockwise from the positive axes
  int band = 0;
  std::array<int, 2> copy{0, 0};
  std::string name;  // "copy0,0/sheet1/q0/band1"
  int first_vertex = 0;
  int vertex_count = 0;
  int first_triangle = 0;
  int triangle_count = 0;
};

// Domain location of a vertex: chart coordinate and lift.
struct VertexSite {
  Complex zeta;
  Complex w;
  bool u_chart = false;
};

struct Mesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<double, 3>> normals;  // stereographic image of g
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> vertex_patch;  // index into patches, one per vertex
  std::vector<VertexSite> sites;
  std::vector<PatchInfo> patches;
};

// Triangulates the immersed surface. Vertices of a patch are joined to the
// patch anchor by raster chords and anchors are joined to the base point
// (z = 1 on sheet 1, rotated away when an end sits there) by a fixed
// spanning tree, so identical requests produce identical meshes. Vertices
// where |g| leaves [eps, 1/eps] are omitted together with their triangles,
// as are raster cells that straddle an end: the two rims of such a cell
// differ by a lattice translation, not by the local integral. Throws
// DomainError for an invalid request and NumericalError naming the patch
// whose integration failed.
Mesh build_mesh(const MeshRequest& req);

enum class MeshFormat { OBJ, PLY };

// ASCII export, byte-stable for identical meshes. An empty mesh produces a
// header-only file.
void export_mesh(const Mesh& m, MeshFormat f, std::ostream& out);
void export_mesh(const Mesh& m, MeshFormat f, const std::string& path);

}  // namespace kmr
