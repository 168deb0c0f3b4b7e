#pragma once

#include <string>
#include <vector>

#include "endlox/model.hpp"

namespace endlox {

struct NotEndperiodicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Generator of a mapping class: a Dehn twist about an essential closed curve,
// or a handleshift along one tube (translation on the moving row, shear on
// the damping rows, identity on the static row).
struct Generator {
  enum Kind { kTwist, kShift } kind = kShift;
  ModelCurve curve;  // twist curve (reduced, closed, essential)
  int power = 0;     // twist power or shift steps; nonzero
  int tube = -1;     // shift tube
};

// A word of generators, applied right to left (function composition).
struct MappingClass {
  std::vector<Generator> word;

  static MappingClass identity() { return {}; }
  static MappingClass twist(ModelCurve c, int power);
  static MappingClass shift(int tube, int steps);
  MappingClass inverse() const;
  MappingClass then_after(const MappingClass& rhs) const;  // this o rhs
  MappingClass power(int k) const;
  bool is_identity_word() const { return word.empty(); }
};

// Exact action on curves. The working window is enlarged internally so the
// image's support always fits.
ModelCurve apply(const SurfaceModel& S, const MappingClass& phi, const ModelCurve& c);

// Twist support check: every twist curve's support must lie inside the given
// column ranges (used to enforce "g restricts to the identity off Y").
bool supported_in(const MappingClass& phi, const Window::SubsurfaceSpec& spec);

// Endperiodicity verification by bounded search.
struct EndVerdict {
  std::string end;
  bool attracting = false;  // else repelling
  int period = 0;           // p with t^p nesting the neighborhood
  int depth = 0;            // n0 of the verified tail neighborhood
};
struct EndPartition {
  std::vector<EndVerdict> ends;
  int p_max = 0, n_max = 0;  // the caps used
};
EndPartition check_endperiodic(const SurfaceModel& S, const MappingClass& t,
                               int p_max = 4, int n_max = 8);

}  // namespace endlox
