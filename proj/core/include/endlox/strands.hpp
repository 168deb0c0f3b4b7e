#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "endlox/complex.hpp"

namespace endlox {

// Normal-coordinate data on a fixed complex: crossings per interior edge,
// arc-endpoint counts per boundary edge.
using Coords = std::vector<int>;

struct NotEmbeddedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A curve system realized transversally to the triangulation.
//
// Points live on edges with an explicit transverse order; chords join two
// points inside a triangle. Families ("owners") are separately embedded
// systems; crossings only occur between distinct owners. All state is
// integral and deterministic.
class StrandSystem {
 public:
  explicit StrandSystem(const Complex& K);

  const Complex& complex() const { return *K_; }

  // Lays out `coords` with the canonical corner nesting. Boundary-edge entries
  // are arc endpoints. Endpoints on `pinned_edges` take no part in half-bigon
  // moves (used for window-frontier stubs of end-to-end arcs). Throws
  // NotEmbeddedError if the vector violates matching, parity or the corner
  // inequalities.
  void add_family(const Coords& coords, int owner,
                  const std::set<EdgeId>& pinned_edges = {});

  // Forced transverse intersections between owners 0 and 1 as configured.
  int crossings() const;

  // Removes bigons and same-edge boundary half-bigons between owners 0 and 1
  // until none remain; returns the resulting crossing number. Both families
  // must be individually taut.
  int reduce_pair();

  // Single-family tightening: same-side chord removal, interior-vertex
  // excursion removal, and weight-reducing vertex pushes, to a fixed point.
  // Only call with one family alive. Components that collapse entirely (null
  // curves, vertex links, boundary nubbins) are deleted and counted in
  // trivial_removed().
  void tighten();
  // Per-triangle normalization only (finger removal to a fixed point); keeps
  // every strand's route otherwise intact. Single family.
  void normalize_triangles();
  int trivial_removed() const { return trivial_removed_; }

  // Coordinates after each legal single weight-neutral vertex push of the
  // (single alive) family, each re-tightened. Position variants of the same
  // isotopy class, used to escape plateau traps in pair minimization.
  std::vector<Coords> neutral_push_variants() const;


  // Current coordinates of one family (-1 = all).
  Coords coords(int owner) const;

  // --- component tracing ---
  struct Component {
    bool closed = false;
    std::vector<int> points;
    std::vector<int> chords;  // chords[i] joins points[i], points[i+1 mod n]
  };
  std::vector<Component> components(int owner) const;
  Coords component_coords(const Component& c) const;

  // --- complement regions ---
  struct RegionCycle {
    bool all_surface_boundary = false;
    int full_boundary_circle = -1;  // index of the circle this cycle covers
                                    // entirely, or -1
    std::array<bool, 2> has_strand{false, false};
    std::array<int, 2> strand_passes{0, 0};  // strand segment-sides per owner
    int surface_passes = 0;
    int crossing_corners = 0;
  };
  struct Region {
    int chi = 0;
    int faces = 0;
    std::vector<RegionCycle> cycles;
  };
  // Complement regions of the union of all alive strands, with exact
  // combinatorial Euler characteristics.
  std::vector<Region> regions() const;

  // --- clipping ---
  struct ClippedPiece {
    Coords coords;  // on the extracted sub complex
    bool closed = false;
  };
  // Pieces of `owner`'s strands inside the extracted sub complex.
  std::vector<ClippedPiece> clip(int owner, const Complex::Extraction& ex) const;

  // --- structure access (mapping-class surgery works through these) ---
  struct PtView {
    EdgeId edge;
    int owner;
    bool endpoint;
    std::array<int, 2> chords;
  };
  struct ChordView {
    TriId tri;
    std::array<int, 2> pts;
    std::array<int, 2> sides;
    int owner;
  };
  bool pt_alive(int p) const { return pts_[p].alive; }
  bool chord_alive(int c) const { return chords_[c].alive; }
  PtView pt(int p) const;
  ChordView chord(int c) const;
  int num_pts() const { return (int)pts_.size(); }
  int num_chords() const { return (int)chords_.size(); }
  int alive_chords(int owner) const;
  const std::vector<int>& edge_points(EdgeId e) const { return order_[e]; }
  int point_pos(int p) const { return pts_[p].pos; }

  struct Crossing {
    int chord_a, chord_b;  // owner-0 chord, owner-1 chord
    TriId tri;
  };
  std::vector<Crossing> crossing_list() const;
  // Partner chords crossing `chord`, sorted along it from its pts[0] end.
  // Exact straight-chord geometry; throws on degenerate seeds (internal
  // jitter makes this effectively impossible).
  std::vector<int> crossing_order(int chord) const;

  // Exact side predicates in the chord's triangle (straight-chord geometry).
  // A chord is directed pt[0] -> pt[1]; "left" is w.r.t. the triangle's ccw
  // orientation. before_is_left: do points earlier in the edge order at the
  // chord's endpoint `end` lie left of the directed chord?
  bool before_is_left(int chord, int end) const;
  // Side (+1 left / -1 right) of the endpoint `end_u` of chord u relative to
  // the directed chord `ref` (same triangle).
  int point_side(int ref, int u, int end_u) const;
  // Side of the crossing point of chords u and v relative to directed `ref`
  // (all three in one triangle; u,v must cross).
  int crossing_side(int ref, int u, int v) const;

  // Component coordinate vectors of the complete resolution of all owner-0 /
  // owner-1 crossings, with the uniform reconnection `which` (0 or 1) at
  // every crossing. The configuration itself is unchanged.
  std::vector<Coords> smoothing_components(int which) const;

  int insert_point(EdgeId e, int at, int owner);
  int add_chord(TriId t, int p0, int s0, int p1, int s1, int owner);
  void delete_chord(int c);
  void delete_point(int p);
  void delete_family(int owner);
  void retag_family(int from, int to);

  void check_valid() const;

 private:
  struct Pt {
    EdgeId e = -1;
    int owner = 0;
    bool alive = false;
    bool pinned = false;
    std::array<int, 2> chord{-1, -1};
    int pos = -1;
    bool endpoint() const { return chord[1] < 0; }
  };
  struct Ch {
    TriId t = -1;
    int owner = 0;
    bool alive = false;
    std::array<int, 2> pt{-1, -1};
    std::array<int, 2> side{-1, -1};
  };

  int new_pt(EdgeId e, int owner);
  void attach(int pt, int chord);
  void detach(int pt, int chord);
  int boundary_pos(int chord_end, const Ch& c) const;
  bool interleaved(const Ch& a, const Ch& b) const;
  int side_rank(const Ch& c, int end) const;

  struct RunInfo {
    VertId v = -1;
    int deg = 0;
    std::vector<int> chords;
    int pred = -1, succ = -1;
    int pe = -1, px = -1;
    bool whole_component = false;
    int delta = 0;
  };
  std::vector<RunInfo> find_runs() const;
  bool run_is_innermost(const RunInfo& r) const;
  void apply_push(const RunInfo& r);
  bool remove_same_side_chord();
  bool try_bigon_from(int ca, int cb);
  bool half_bigon_pass();
  struct RunStep {
    int pa, pb;
  };
  struct CorridorEnd {
    std::vector<RunStep> steps;
    bool closed = false;
    int close_a = -1, close_b = -1;  // closing crossing chords when closed
  };
  std::optional<CorridorEnd> walk_corridor(int pa, int pb, int prev_ca, int prev_cb);
  void swap_adjacent(int pa, int pb);

  const Complex* K_;
  std::vector<Pt> pts_;
  std::vector<Ch> chords_;
  std::vector<std::vector<int>> order_;
  int trivial_removed_ = 0;
};

// Exact minimal crossing number of two taut coordinate vectors under
// fixed endpoint positions (slide moves are handled by the curve layer).
int pair_crossings_reduced(const Complex& K, const Coords& a, const Coords& b,
                           const std::set<EdgeId>& pinned = {});

}  // namespace endlox
