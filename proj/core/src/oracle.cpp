#include "endlox/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace endlox {

bool SmallArcGraph::connected() const {
  if (verts.empty()) return true;
  std::vector<bool> seen(verts.size(), false);
  std::deque<int> q{0};
  seen[0] = true;
  size_t n = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++n;
        q.push_back(w);
      }
  }
  return n == verts.size();
}

OracleSurface make_oracle_surface(const std::string& name) {
  using gridgen::truncate_ideal;
  if (name == "torus1") {
    // once-punctured torus, both triangles at the single vertex
    std::vector<Tri> ideal{Tri{{0, 1, 2}, {true, true, false}},
                           Tri{{2, 0, 1}, {true, false, false}}};
    auto t = truncate_ideal(3, ideal);
    return OracleSurface{std::move(t.complex), name};
  }
  if (name == "sphere4") {
    // tetrahedron boundary; the four vertices blow up into the four circles
    std::vector<Tri> ideal{
        Tri{{0, 3, 1}, {true, true, false}},   // (1,2,3): e12, e23, e13
        Tri{{1, 5, 2}, {true, true, false}},   // (1,3,4): e13, e34, e14
        Tri{{2, 4, 0}, {true, false, false}},  // (1,4,2): e14, e24, e12
        Tri{{4, 5, 3}, {true, false, false}},  // (2,4,3): e24, e34, e23
    };
    auto t = truncate_ideal(6, ideal);
    return OracleSurface{std::move(t.complex), name};
  }
  if (name == "torus2") {
    // twice-punctured torus from a 2-square flat torus with both vertices
    // blown up; edges: a=0, b=1, p=2, q=3, d1=4, d2=5
    std::vector<Tri> ideal{
        Tri{{0, 3, 4}, {true, true, false}},
        Tri{{4, 0, 2}, {true, false, false}},
        Tri{{1, 2, 5}, {true, true, false}},
        Tri{{5, 1, 3}, {true, false, false}},
    };
    auto t = truncate_ideal(6, ideal);
    return OracleSurface{std::move(t.complex), name};
  }
  throw std::invalid_argument("unknown oracle surface: " + name);
}

namespace {

// Constraint data used to prune the DFS: for each triangle, the list of its
// edges; a complete triangle must satisfy parity and the corner inequalities.
struct Pruner {
  const Complex* K;
  // For each edge, triangles completed when this edge is the last assigned
  // (w.r.t. the chosen order).
  std::vector<std::vector<TriId>> completes;
  std::vector<int> order;      // DFS assignment order of edges
  std::vector<int> rank;       // edge -> order position
};

Pruner make_pruner(const Complex& K) {
  Pruner p;
  p.K = &K;
  // Order edges triangle by triangle so constraints close early.
  p.rank.assign(K.num_edges(), -1);
  int next = 0;
  for (TriId t = 0; t < K.num_tris(); ++t)
    for (int s = 0; s < 3; ++s) {
      EdgeId e = K.tri(t).edge[s];
      if (p.rank[e] < 0) {
        p.rank[e] = next++;
        p.order.push_back(e);
      }
    }
  p.completes.assign(K.num_edges(), {});
  for (TriId t = 0; t < K.num_tris(); ++t) {
    EdgeId last = K.tri(t).edge[0];
    for (int s = 1; s < 3; ++s)
      if (p.rank[K.tri(t).edge[s]] > p.rank[last]) last = K.tri(t).edge[s];
    p.completes[last].push_back(t);
  }
  return p;
}

bool triangle_ok(const Complex& K, const Coords& w, TriId t) {
  const Tri& tr = K.tri(t);
  int a = w[tr.edge[0]], b = w[tr.edge[1]], c = w[tr.edge[2]];
  if ((a + b + c) % 2) return false;
  return a <= b + c && b <= a + c && c <= a + b;
}

}  // namespace

SmallArcGraph build_small_graph(const Complex& K, const std::string& surface_id,
                                int cap, long long memory_guard) {
  if (cap > 16) throw CapTooLargeError("oracle cap exceeds supported range");
  Pruner pr = make_pruner(K);
  SmallArcGraph g;
  g.surface = surface_id;
  g.cap = cap;

  Coords w(K.num_edges(), 0);
  long long visited = 0;

  std::function<void(int, int)> rec = [&](int idx, int budget) {
    if (++visited > memory_guard) throw CapTooLargeError("oracle enumeration guard tripped");
    if (idx == (int)pr.order.size()) {
      bool nonzero = false;
      for (int x : w)
        if (x) nonzero = true;
      if (!nonzero) return;
      // Validity is guaranteed by the per-triangle checks; keep connected,
      // essential classes via their canonical form.
      try {
        if (count_components(K, w) != 1) return;
        auto nr = normalize_system(K, w);
        if (nr.components != 1 || nr.dropped > 0) return;
        if (g.index.emplace(nr.coords, (int)g.verts.size()).second)
          g.verts.push_back(nr.coords);
      } catch (const NotEmbeddedError&) {
        return;
      }
      return;
    }
    EdgeId e = pr.order[idx];
    for (int v = 0; v <= budget; ++v) {
      w[e] = v;
      bool ok = true;
      for (TriId t : pr.completes[e])
        if (!triangle_ok(K, w, t)) {
          ok = false;
          break;
        }
      if (ok) rec(idx + 1, budget - v);
    }
    w[e] = 0;
  };
  rec(0, cap);

  // Canonical order: sort, rebuild index.
  std::sort(g.verts.begin(), g.verts.end());
  g.index.clear();
  for (int i = 0; i < (int)g.verts.size(); ++i) g.index.emplace(g.verts[i], i);

  // Adjacency by disjointness.
  int n = (int)g.verts.size();
  g.adj.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (intersection_number(K, g.verts[i], g.verts[j]) == 0) {
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
      }

  // All-pairs BFS.
  g.dist.assign(n, std::vector<int16_t>(n, -1));
  for (int s = 0; s < n; ++s) {
    auto& D = g.dist[s];
    D[s] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int u : g.adj[v])
        if (D[u] < 0) {
          D[u] = (int16_t)(D[v] + 1);
          q.push_back(u);
        }
    }
  }
  return g;
}

std::vector<std::vector<int>> geodesic_samples(const SmallArcGraph& g, int a, int b,
                                               int max_count) {
  std::vector<std::vector<int>> out;
  if (a == b) {
    out.push_back({a});
    return out;
  }
  int d = g.dist[a][b];
  if (d < 0) return out;
  std::vector<int> path{a};
  std::function<void(int)> rec = [&](int v) {
    if ((int)out.size() >= max_count) return;
    if (v == b) {
      out.push_back(path);
      return;
    }
    int dv = g.dist[v][b];
    for (int u : g.adj[v]) {
      if (g.dist[u][b] != dv - 1) continue;
      path.push_back(u);
      rec(u);
      path.pop_back();
      if ((int)out.size() >= max_count) return;
    }
  };
  rec(a);
  return out;
}

namespace {

// Chord data for the brute-force crossing minimum.
struct BruteChord {
  TriId tri;
  // per endpoint: edge, side of the triangle, rank among its own family
  std::array<EdgeId, 2> edge;
  std::array<int, 2> side;
  std::array<int, 2> rank;
  int owner;
};

}  // namespace

int brute_min_crossings(const Complex& K, const Coords& a, const Coords& b,
                        long long budget) {
  // Realize each family alone to extract its forced chord structure.
  std::vector<BruteChord> chords;
  std::vector<int> na(K.num_edges(), 0), nb(K.num_edges(), 0);
  for (int owner = 0; owner < 2; ++owner) {
    const Coords& c = owner ? b : a;
    StrandSystem sys(K);
    sys.add_family(c, 0);
    for (int ch = 0; ch < sys.num_chords(); ++ch) {
      if (!sys.chord_alive(ch)) continue;
      auto cv = sys.chord(ch);
      BruteChord bc;
      bc.tri = cv.tri;
      bc.owner = owner;
      for (int e = 0; e < 2; ++e) {
        int pid = cv.pts[e];
        auto pv = sys.pt(pid);
        bc.edge[e] = pv.edge;
        bc.side[e] = cv.sides[e];
        bc.rank[e] = sys.point_pos(pid);
      }
      chords.push_back(bc);
    }
    for (EdgeId e = 0; e < K.num_edges(); ++e) (owner ? nb : na)[e] = c[e];
  }

  // Enumerate, per edge with points of both families, the positions of the
  // a-points within the merged order. A merged position map turns (owner,
  // rank) into a merged rank; triangle crossings follow from interleaving.
  std::vector<EdgeId> mixed;
  for (EdgeId e = 0; e < K.num_edges(); ++e)
    if (na[e] > 0 && nb[e] > 0) mixed.push_back(e);

  // merged rank of a point: position in the chosen shuffle
  // shuffle per edge: a bitmask choice encoded as a vector of merged slots
  std::vector<std::vector<int>> a_slot(K.num_edges()), b_slot(K.num_edges());
  for (EdgeId e = 0; e < K.num_edges(); ++e) {
    a_slot[e].assign(std::max(na[e], 0), 0);
    b_slot[e].assign(std::max(nb[e], 0), 0);
    // default: a first, then b
    for (int i = 0; i < na[e]; ++i) a_slot[e][i] = i;
    for (int i = 0; i < nb[e]; ++i) b_slot[e][i] = na[e] + i;
  }

  auto total_crossings = [&]() {
    // group chords by tri
    int total = 0;
    std::map<TriId, std::vector<const BruteChord*>> by_tri;
    for (const auto& c : chords) by_tri[c.tri].push_back(&c);
    constexpr int kStride = 1 << 20;
    auto bpos = [&](const BruteChord& c, int end) {
      const Tri& tr = K.tri(c.tri);
      int merged = (c.owner == 0 ? a_slot : b_slot)[c.edge[end]][c.rank[end]];
      int n = na[c.edge[end]] + nb[c.edge[end]];
      int r = tr.forward[c.side[end]] ? merged : n - 1 - merged;
      return c.side[end] * kStride + r;
    };
    for (auto& [t, v] : by_tri) {
      for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j) {
          if (v[i]->owner == v[j]->owner) continue;
          int a1 = bpos(*v[i], 0), a2 = bpos(*v[i], 1);
          if (a1 > a2) std::swap(a1, a2);
          int b1 = bpos(*v[j], 0), b2 = bpos(*v[j], 1);
          bool in1 = b1 > a1 && b1 < a2;
          bool in2 = b2 > a1 && b2 < a2;
          if (in1 != in2) ++total;
        }
    }
    return total;
  };

  long long visited = 0;
  int best = -1;
  // DFS over edges: choose the subset of merged slots taken by family a.
  std::function<void(size_t)> rec = [&](size_t idx) {
    if (best == 0) return;
    if (idx == mixed.size()) {
      ++visited;
      int c = total_crossings();
      if (best < 0 || c < best) best = c;
      return;
    }
    EdgeId e = mixed[idx];
    int n = na[e] + nb[e];
    // enumerate subsets of size na[e] (combinations)
    std::vector<int> comb(na[e]);
    std::function<void(int, int)> choose = [&](int start, int k) {
      if (best == 0) return;
      if (++visited > budget) throw CapTooLargeError("brute force budget");
      if (k == na[e]) {
        for (int i = 0; i < na[e]; ++i) a_slot[e][i] = comb[i];
        int bi = 0;
        std::set<int> used(comb.begin(), comb.end());
        for (int s = 0; s < n; ++s)
          if (!used.count(s)) b_slot[e][bi++] = s;
        rec(idx + 1);
        return;
      }
      for (int s = start; s < n; ++s) {
        comb[k] = s;
        choose(s + 1, k + 1);
      }
    };
    choose(0, 0);
  };
  try {
    rec(0);
  } catch (const CapTooLargeError&) {
    return -1;
  }
  return best;
}

std::string serialize_graph(const SmallArcGraph& g) {
  std::ostringstream os;
  os << "surface " << g.surface << "\ncap " << g.cap << "\nvertices " << g.verts.size()
     << "\n";
  for (size_t i = 0; i < g.verts.size(); ++i)
    os << "v " << i << " " << serialize_coords(g.verts[i]) << "\n";
  size_t edges = 0;
  for (const auto& a : g.adj) edges += a.size();
  os << "edges " << edges / 2 << "\n";
  for (size_t i = 0; i < g.adj.size(); ++i)
    for (int j : g.adj[i])
      if ((int)i < j) os << "e " << i << " " << j << "\n";
  os << "distances\n";
  for (size_t i = 0; i < g.verts.size(); ++i) {
    os << "d " << i;
    for (size_t j = 0; j < g.verts.size(); ++j) os << " " << g.dist[i][j];
    os << "\n";
  }
  return os.str();
}

}  // namespace endlox
