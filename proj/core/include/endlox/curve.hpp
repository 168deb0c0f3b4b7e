#pragma once

#include <set>
#include <string>
#include <vector>

#include "endlox/complex.hpp"
#include "endlox/strands.hpp"

namespace endlox {

struct InessentialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Result of putting a raw coordinate vector in reduced (taut) form.
struct NormalizeResult {
  Coords coords;        // canonical representative; all-zero if nothing is left
  int components = 0;   // essential components remaining
  int dropped = 0;      // trivial components removed
};

// Reduce to the taut normal form: per-triangle normality, excursion removal,
// essentialness screening of every component, and endpoint-slide
// canonicalization for single arcs. Throws NotEmbeddedError on invalid input.
// If `reject_inessential` is set, any trivial component raises
// InessentialError instead of being dropped.
NormalizeResult normalize_system(const Complex& K, const Coords& raw,
                                 const std::set<EdgeId>& pinned = {},
                                 bool reject_inessential = false);

// Number of connected strands the vector traces.
int count_components(const Complex& K, const Coords& a);

// Geometric (minimal-position) intersection number of two reduced systems.
// For arc pairs with free endpoints on a common boundary circle the minimum
// over endpoint slides is taken.
int intersection_number(const Complex& K, const Coords& a, const Coords& b,
                        const std::set<EdgeId>& pinned = {});

// Isotopy: reduced-form equality with an exact cobounding-region fallback
// (taut forms are not unique on triangulations with material vertices).
bool isotopic(const Complex& K, const Coords& a, const Coords& b,
              const std::set<EdgeId>& pinned = {});

// True iff every complementary region of a and b in minimal position is a
// disk or a peripheral annulus. Both inputs reduced and essential.
bool fills(const Complex& K, const Coords& a, const Coords& b);

// Number of complementary regions of the system (for separating tests).
int complement_components(const Complex& K, const Coords& a);

// Slide one endpoint of a single reduced arc across the boundary vertex at
// the chosen end of its current boundary edge. endpoint_idx selects the arc
// end by trace order; dir 0 slides across the tail vertex, 1 the head vertex
// of that boundary edge. Returns the re-tightened coordinates.
Coords pivot_arc(const Complex& K, const Coords& arc, int endpoint_idx, int dir);

// Canonical bit-exact serialization of a coordinate vector.
std::string serialize_coords(const Coords& c);

}  // namespace endlox
