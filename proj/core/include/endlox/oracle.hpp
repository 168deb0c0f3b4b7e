#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "endlox/complex.hpp"
#include "endlox/curve.hpp"

namespace endlox {

struct CapTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exhaustively built arc-and-curve graph of a small subsurface: every
// essential connected class with a representative of total coordinate <= cap,
// edges given by disjoint realizability, all-pairs distances by BFS.
struct SmallArcGraph {
  std::string surface;
  int cap = 0;
  std::vector<Coords> verts;                // canonical forms, sorted
  std::vector<std::vector<int>> adj;        // sorted neighbor lists
  std::vector<std::vector<int16_t>> dist;   // -1 = unreachable
  std::map<Coords, int> index;

  int find(const Coords& c) const {
    auto it = index.find(c);
    return it == index.end() ? -1 : it->second;
  }
  bool connected() const;
};

// Oracle surfaces. The three supported topologies.
struct OracleSurface {
  Complex complex;
  std::string name;
};
OracleSurface make_oracle_surface(const std::string& name);  // torus1|sphere4|torus2

// Exhaustive enumeration with canonical deduplication. memory_guard caps the
// raw vector count visited before aborting with CapTooLargeError.
SmallArcGraph build_small_graph(const Complex& K, const std::string& surface_id,
                                int cap, long long memory_guard = 200'000'000);

// Distinct geodesics from a to b, up to max_count.
std::vector<std::vector<int>> geodesic_samples(const SmallArcGraph& g, int a, int b,
                                               int max_count);

// Flat text table: vertices, edges, distance matrix. Bit-exact.
std::string serialize_graph(const SmallArcGraph& g);

// Naive minimal-position crossing count: the exact minimum, over every
// transverse ordering of the two families along the edges, of the forced
// chord crossings. Exponential; gates the fast reduction path on small
// inputs. Returns -1 if the search exceeds `budget` configurations.
int brute_min_crossings(const Complex& K, const Coords& a, const Coords& b,
                        long long budget = 50'000'000);

}  // namespace endlox
