#pragma once

#include <optional>
#include <string>
#include <vector>

#include "endlox/curve.hpp"
#include "endlox/model.hpp"
#include "endlox/oracle.hpp"

namespace endlox {

struct UndefinedProjectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotOverlappingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Caps {
  int coord = 16;  // enumeration cap M
  int depth = 8;   // surgery search depth D
};

// A certified interval for an arc-and-curve graph distance. `lo` comes from a
// ladder of exact facts; `hi` always carries a re-checkable vertex path.
struct DistanceInterval {
  int lo = 0;
  int hi = -1;  // -1 = no finite upper bound found
  enum LoReason {
    kLoEqual,         // 0: same vertex
    kLoDistinct,      // 1: distinct vertices
    kLoIntersecting,  // 2: no disjoint realization
    kLoFilling,       // 3: the pair fills
    kLoExhaustive,    // >=k: capped enumeration found no shorter chain
  } lo_reason = kLoEqual;
  enum HiReason { kHiNone, kHiExplicitPath, kHiSurgeryPath } hi_reason = kHiNone;
  bool cap_conditional = false;  // lo depends on an enumeration cap
  int cap_coord = 0, cap_depth = 0;
  // Interior vertices of a witness path a = p0, p1, ..., pN = b (the ends are
  // the inputs); consecutive entries certified disjoint on recheck.
  std::vector<Coords> hi_path;

  bool finite() const { return hi >= 0; }
  bool exact() const { return hi == lo; }
};

// Merge rule for diameters: diam >= any pairwise lo, diam <= max pairwise hi.
DistanceInterval interval_max(const DistanceInterval& a, const DistanceInterval& b);

// Distance between two reduced vertices of the arc-and-curve graph of Z.
// When `oracle` covers both vertices, its table sharpens lo (cap-conditional)
// and supplies geodesic upper paths.
DistanceInterval graph_distance(const Complex& Z, const Coords& a, const Coords& b,
                                const Caps& caps, const SmallArcGraph* oracle = nullptr);

// Subsurface projection machinery bound to one witness subsurface of a
// window.
class WitnessProjector {
 public:
  WitnessProjector(const Window& W, const Window::SubsurfaceSpec& spec);

  const Complex& sub() const { return ex_.sub; }
  const Window& window() const { return *W_; }
  const Window::SubsurfaceSpec& spec() const { return spec_; }
  const Complex::Extraction& extraction() const { return ex_; }

  // pi_Z of a model curve: the isotopy classes of the essential pieces cut
  // out on Z. Empty means the curve misses Z (projection undefined).
  std::vector<Coords> project(const ModelCurve& a) const;
  std::vector<Coords> project_window(const Coords& wcoords,
                                     const std::set<EdgeId>& pinned) const;

  // diam of the union of two projection sets.
  DistanceInterval distance(const std::vector<Coords>& A, const std::vector<Coords>& B,
                            const Caps& caps, const SmallArcGraph* oracle = nullptr) const;

  // d_Z(a, b) with the partial-definition error when a projection is empty.
  DistanceInterval proj_distance(const ModelCurve& a, const ModelCurve& b,
                                 const Caps& caps,
                                 const SmallArcGraph* oracle = nullptr) const;

 private:
  const Window* W_;
  Window::SubsurfaceSpec spec_;
  Complex::Extraction ex_;
};

// Overlap test: the boundary of each subsurface must cut the other
// essentially. Boundary multicurves are passed as model curves.
bool subsurfaces_overlap(const Window& W, const Window::SubsurfaceSpec& X,
                         const std::vector<ModelCurve>& bdX,
                         const Window::SubsurfaceSpec& Z,
                         const std::vector<ModelCurve>& bdZ, const Caps& caps);

struct BehrstockReport {
  DistanceInterval dX;  // d_X(alpha, bdZ)
  DistanceInterval dZ;  // d_Z(alpha, bdX)
  int empirical_min_hi = -1;
  bool consistent_with_bound = false;  // min(lo_X, lo_Z) <= B
  int bound = 10;
};

// The Behrstock inequality check for overlapping subsurfaces and a curve
// meeting both.
BehrstockReport behrstock_check(const Window& W, const Window::SubsurfaceSpec& X,
                                const std::vector<ModelCurve>& bdX,
                                const Window::SubsurfaceSpec& Z,
                                const std::vector<ModelCurve>& bdZ,
                                const ModelCurve& alpha, const Caps& caps, int bound = 10);

// Re-verification of a stored interval: lo facts recomputed from scratch,
// hi path checked pairwise disjoint and correctly anchored.
bool recheck_interval(const Complex& Z, const Coords& a, const Coords& b,
                      const DistanceInterval& iv);

}  // namespace endlox
