#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "endlox/complex.hpp"
#include "endlox/strands.hpp"

namespace endlox {

struct UnresolvedLabelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GluingMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rows of a tube cross-section. The moving row carries the genus gadgets and
// translates rigidly under a shift; the two damping rows shear; the static
// row (with any pockets or plumbing circles) is fixed pointwise.
enum Row : int { kRowMoving = 0, kRowDampA = 1, kRowStatic = 2, kRowDampB = 3 };

// Address of an edge of the infinite periodic complex.
// tube >= 0: tube-local edges; tube == -1: plumbing circles (col = plumb id).
struct EdgeKey {
  int tube = 0;
  int col = 0;
  int row = 0;
  int cell = 0;
  int code = 0;
  auto operator<=>(const EdgeKey&) const = default;
};

// Edge codes within one cell. Plain cells use V, DIAG, B. Gadget cells
// (moving row) and frame cells (static row with pocket/plumbing) add the
// frame and handle codes.
enum EdgeCode : int {
  kV = 0,     // left vertical of the cell
  kB = 1,     // bottom seam piece of the cell
  kDiag = 2,  // diagonal of a plain cell
  // frame (moving-row gadget cell or static frame cell)
  kSpoke0 = 10, kSpoke1 = 11, kSpoke2 = 12, kSpoke3 = 13,
  kTrap0 = 20, kTrap1 = 21, kTrap2 = 22, kTrap3 = 23,
  kInner0 = 30, kInner1 = 31, kInner2 = 32, kInner3 = 33,
  // handle piece (2x2 wrapped grid minus one square, 7 interior edges)
  kTor0 = 40, kTor1 = 41, kTor2 = 42, kTor3 = 43, kTor4 = 44, kTor5 = 45, kTor6 = 46,
};

using ModelCoords = std::map<EdgeKey, int>;

// A finitely-described curve or arc of the infinite surface: a finite
// coordinate map plus, for proper end-to-end arcs, spine tails that continue
// periodically into the named ends.
struct ModelCurve {
  ModelCoords coords;
  struct Tail {
    std::string end;
    int from_col = 0;  // spine pattern fills columns beyond this one
  };
  std::vector<Tail> tails;
  bool closed() const;
  bool operator==(const ModelCurve&) const = default;
  bool operator<(const ModelCurve& o) const {
    if (coords != o.coords) return coords < o.coords;
    if (tails.size() != o.tails.size()) return tails.size() < o.tails.size();
    for (size_t i = 0; i < tails.size(); ++i) {
      if (tails[i].end != o.tails[i].end) return tails[i].end < o.tails[i].end;
      if (tails[i].from_col != o.tails[i].from_col)
        return tails[i].from_col < o.tails[i].from_col;
    }
    return false;
  }
};
inline bool operator==(const ModelCurve::Tail& a, const ModelCurve::Tail& b) {
  return a.end == b.end && a.from_col == b.from_col;
}

struct TubeSpec {
  std::string name;
  int genus = 1;
  std::string end_neg, end_pos;  // ends at col -> -inf and +inf
  std::optional<int> pocket_col; // blown-up puncture frame on the static row
  std::string pocket_name;
};

struct PlumbSpec {
  int tube_a = 0, tube_b = 0;  // static frames at column 0 glued together
};

struct EndInfo {
  std::string label;
  int tube;
  int sign;  // -1 or +1
};

// Infinite-type surface assembled from parallel genus tubes, optional
// pockets, and plumbing circles joining static rows.
class SurfaceModel {
 public:
  std::string name;
  std::vector<TubeSpec> tubes;
  std::vector<PlumbSpec> plumbs;
  std::vector<EndInfo> ends;

  int tube_index(const std::string& n) const;
  int end_index(const std::string& label) const;
  const EndInfo& end(const std::string& label) const;

  void validate() const;

  // Canonical curves.
  ModelCurve tube_circle(int tube, int col) const;       // cross-section class
  ModelCurve pocket_circle(int tube) const;              // pushoff of a pocket
  ModelCurve spine_arc(int tube) const;                  // end-to-end line arc
  // Spine tail pattern for one column of a tube (used by Window).
  void add_spine_column(ModelCoords& c, int tube, int col) const;
};

// A finite window: the columns [-radius, radius] of every tube, all gadgets
// included, with one frontier circle per end.
class Window {
 public:
  Window(const SurfaceModel& model, int radius);

  const SurfaceModel& model() const { return *model_; }
  const Complex& complex() const { return cx_; }
  int radius() const { return radius_; }

  EdgeId edge(const EdgeKey& k) const;
  bool has_edge(const EdgeKey& k) const { return edge_of_.count(k) > 0; }
  const EdgeKey& key(EdgeId e) const { return key_of_[e]; }

  // Frontier edge-cycle of one end (the verticals at +-(radius+1)).
  std::vector<EdgeId> frontier_edges(const std::string& end_label) const;
  std::set<EdgeId> frontier_all() const;

  // Materialization: finite coords plus spine stubs ending on the frontier
  // for tailed arcs. Throws if the finite support does not fit.
  Coords materialize(const ModelCurve& c) const;
  // Lift window coordinates back to model addresses; tails are re-attached
  // from `tails` (caller-tracked, since window coords cannot see past the
  // frontier).
  ModelCurve lift(const Coords& w, const std::vector<ModelCurve::Tail>& tails) const;

  // Zone of a triangle, for the shear transport.
  struct TriZone {
    int tube = -1;  // -1: plumbing-owned (static)
    int col = 0;
    int row = kRowStatic;
  };
  const TriZone& tri_zone(TriId t) const { return tri_zone_[t]; }

  // Witness sub complexes: per tube a column interval.
  struct SubsurfaceSpec {
    std::map<int, std::pair<int, int>> cols;  // tube -> [lo, hi]
    bool operator<(const SubsurfaceSpec& o) const { return cols < o.cols; }
    bool operator==(const SubsurfaceSpec& o) const { return cols == o.cols; }
  };
  // All triangles of the spec (requires the interval to fit in the window).
  std::vector<TriId> subsurface_tris(const SubsurfaceSpec& s) const;

 private:
  const SurfaceModel* model_;
  int radius_;
  Complex cx_;
  std::map<EdgeKey, EdgeId> edge_of_;
  std::vector<EdgeKey> key_of_;
  std::vector<TriZone> tri_zone_;

  friend class WindowBuilder;
  Window(const SurfaceModel& m, int radius, Complex cx, std::map<EdgeKey, EdgeId> eo,
         std::vector<EdgeKey> ko, std::vector<TriZone> tz)
      : model_(&m),
        radius_(radius),
        cx_(std::move(cx)),
        edge_of_(std::move(eo)),
        key_of_(std::move(ko)),
        tri_zone_(std::move(tz)) {}
};

// Canonical serialization of a model curve (bit-exact, documented in README).
std::string serialize_model_curve(const ModelCurve& c);

// Support extent in columns across all tubes; [0,0] for empty.
std::pair<int, int> support_cols(const ModelCurve& c);

// Smallest window radius that fits the curve plus margin.
int fitting_radius(const std::vector<const ModelCurve*>& curves, int margin);

}  // namespace endlox
