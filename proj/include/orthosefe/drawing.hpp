#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "orthosefe/constraints.hpp"
#include "orthosefe/instance.hpp"

namespace orthosefe {

struct StOrdering {
  std::vector<VertexId> order;  // v_1 .. v_n
  std::vector<int> pos;         // vertex id -> index in order
};

// Vertex ordering of the biconnected shared graph with s first, t last, and
// a lower and a higher shared neighbour for every interior vertex. (s,t)
// must be a shared edge.
StOrdering st_order(const Instance& inst, VertexId s, VertexId t);

using GridPoint = std::pair<int, int>;

// Per vertex, the compass port ('N','E','S','W') each incident union edge
// attaches to. A port may host at most one edge of each graph.
struct PortAssignment {
  std::map<VertexId, std::map<Edge, char>> port;
};

struct OrthogonalDrawing {
  std::map<VertexId, GridPoint> pos;
  std::map<Edge, std::vector<GridPoint>> paths;  // rectilinear vertex-to-vertex paths
  PortAssignment ports;
  Edge root{0, 1};  // the base edge drawn with exactly three bends
};

int bend_count(const std::vector<GridPoint>& path);

// Orthogonal grid drawing of the union graph: every edge bends at most three
// times, the base edge exactly three times, and the per-graph sub-drawings
// are crossing-free. The rotation system must pass check_sefe_orthogonality.
// Coordinates stay within 24 * n in each dimension.
OrthogonalDrawing draw(const Instance& inst, const RotationSystem& rot);

// Checks rectilinearity, endpoint/vertex consistency, bend counts, and
// per-graph crossing-freeness. Violations use kind "drawing".
Verdict validate_drawing(const Instance& inst, const OrthogonalDrawing& d);

struct SvgStyle {
  int scale = 24;
  int margin = 30;
  std::vector<std::string> colors = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd"};
};

// Deterministic vector-graphics text: shared edges black, one colour per
// graph for exclusive edges.
std::string export_svg(const Instance& inst, const OrthogonalDrawing& d,
                       const SvgStyle& style = {});

}  // namespace orthosefe
