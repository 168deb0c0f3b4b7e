#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace endlox {

using EdgeId = int;
using TriId = int;
using VertId = int;

// Raised when gluing data does not describe an oriented surface:
// an edge with more than two incidences, inconsistent side directions, etc.
struct NonSurfaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One triangle given by its three sides in ccw order.
// Side i runs from corner i to corner i+1 (mod 3); forward[i] tells whether
// that traversal agrees with the edge's own direction.
struct Tri {
  std::array<EdgeId, 3> edge{-1, -1, -1};
  std::array<bool, 3> forward{true, true, true};
};

// Location of a triangle side on an edge.
struct SideRef {
  TriId tri = -1;
  int side = -1;  // 0..2
  bool valid() const { return tri >= 0; }
};

// A corner of a triangle: the wedge at corner index c of triangle t,
// between incoming side (c+2)%3 and outgoing side c.
struct CornerRef {
  TriId tri = -1;
  int corner = -1;
  bool operator==(const CornerRef&) const = default;
};

// Finite triangulated surface with oriented triangles.
// Vertices, boundary edges and boundary cycles are derived from the gluing.
class Complex {
 public:
  Complex() = default;  // empty placeholder; not a valid surface
  Complex(int num_edges, std::vector<Tri> tris);

  int num_edges() const { return num_edges_; }
  int num_tris() const { return static_cast<int>(tris_.size()); }
  int num_verts() const { return num_verts_; }
  const Tri& tri(TriId t) const { return tris_[t]; }
  const std::vector<Tri>& tris() const { return tris_; }

  // Up to two (triangle, side) incidences per edge; second invalid on boundary.
  const std::array<SideRef, 2>& sides(EdgeId e) const { return incid_[e]; }
  bool is_boundary_edge(EdgeId e) const { return !incid_[e][1].valid(); }
  // The side of `e` other than (t, s); invalid for boundary edges.
  SideRef other_side(EdgeId e, TriId t, int s) const;

  // Vertex at an edge end (end 0 = tail, 1 = head w.r.t. the edge direction).
  VertId vert_at(EdgeId e, int end) const { return vert_of_end_[2 * e + end]; }
  // Vertex at corner c of triangle t.
  VertId vert_at(const CornerRef& c) const;
  bool is_boundary_vert(VertId v) const { return vert_boundary_[v]; }
  // Number of triangle corners incident to a vertex.
  int corner_degree(VertId v) const { return corner_deg_[v]; }

  // Boundary circles, each a cyclic list of boundary edges walked so that the
  // surface lies on a consistent side. Every boundary edge appears once.
  const std::vector<std::vector<EdgeId>>& boundary_cycles() const { return bd_cycles_; }
  // Index of the boundary cycle containing e, or -1.
  int boundary_cycle_of(EdgeId e) const { return bd_cycle_of_[e]; }

  int euler_characteristic() const { return num_verts_ - num_edges_ + num_tris(); }
  bool connected() const;

  // Corner index (0..2) of the corner shared by sides sa and sb of a triangle.
  static int shared_corner(int sa, int sb);

  // --- sub complexes ---
  // Extract the sub complex spanned by the given triangles. Edges incident to
  // kept triangles are kept; edges on the frontier become boundary edges.
  struct Extraction;
  Extraction extract(const std::vector<TriId>& keep) const;

 private:
  void derive();

  int num_edges_ = 0;
  int num_verts_ = 0;
  std::vector<Tri> tris_;
  std::vector<std::array<SideRef, 2>> incid_;
  std::vector<VertId> vert_of_end_;       // 2 per edge
  std::vector<bool> vert_boundary_;
  std::vector<int> corner_deg_;
  std::vector<std::vector<EdgeId>> bd_cycles_;
  std::vector<int> bd_cycle_of_;
};

struct Complex::Extraction {
  Complex sub;
  std::vector<EdgeId> edge_to_parent;  // sub edge -> parent edge
  std::map<EdgeId, EdgeId> parent_to_sub;
  std::vector<TriId> tri_to_parent;
};

// Grid-based builders used by fixtures and the oracle surfaces. Squares are
// split along the (x,y)->(x+1,y+1) diagonal into a lower and an upper triangle.
namespace gridgen {

struct GridComplex {
  Complex complex;
  // Edge lookup by role. h(x,y): horizontal edge from (x,y) to (x+1,y);
  // v(x,y): vertical from (x,y) to (x,y+1); d(x,y): diagonal of square (x,y).
  std::map<std::array<int, 3>, EdgeId> horiz, vert, diag;  // key {x,y,0}
  EdgeId h(int x, int y) const { return horiz.at({x, y, 0}); }
  EdgeId v(int x, int y) const { return vert.at({x, y, 0}); }
  EdgeId d(int x, int y) const { return diag.at({x, y, 0}); }
};

// A rectangular grid nx by ny of squares, optionally wrapped in x and/or y,
// with the listed squares omitted (their diagonals are not created and the
// rim of each omitted square becomes boundary).
GridComplex build_grid(int nx, int ny, bool wrap_x, bool wrap_y,
                       const std::vector<std::pair<int, int>>& holes);

// Truncates every vertex of an ideal triangulation into a boundary circle
// and fan-triangulates the resulting hexagons. `ideal` uses the same Tri
// encoding over `num_edges` abstract edges; every vertex becomes a puncture
// circle. Returns the complex plus, per ideal edge, the id of its middle
// piece in the result.
struct Truncated {
  Complex complex;
  std::vector<EdgeId> piece_of_edge;
};
Truncated truncate_ideal(int num_edges, const std::vector<Tri>& ideal);

}  // namespace gridgen

}  // namespace endlox
