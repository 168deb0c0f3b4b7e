#include "endlox/complex.hpp"

#include <algorithm>
#include <numeric>

namespace endlox {

namespace {
// Union-find over edge-end slots (2*edge + end).
struct DSU {
  std::vector<int> p;
  explicit DSU(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};
}  // namespace

Complex::Complex(int num_edges, std::vector<Tri> tris)
    : num_edges_(num_edges), tris_(std::move(tris)) {
  if (num_edges_ <= 0) throw NonSurfaceError("complex has no edges");
  incid_.assign(num_edges_, {SideRef{}, SideRef{}});
  for (TriId t = 0; t < num_tris(); ++t) {
    for (int s = 0; s < 3; ++s) {
      EdgeId e = tris_[t].edge[s];
      if (e < 0 || e >= num_edges_) throw NonSurfaceError("triangle references unknown edge");
      if (!incid_[e][0].valid()) {
        incid_[e][0] = {t, s};
      } else if (!incid_[e][1].valid()) {
        incid_[e][1] = {t, s};
      } else {
        throw NonSurfaceError("edge " + std::to_string(e) + " has more than two incidences");
      }
    }
  }
  // Orientation: an interior edge must be traversed forward by one side and
  // backward by the other, otherwise the gluing reverses orientation.
  for (EdgeId e = 0; e < num_edges_; ++e) {
    if (!incid_[e][0].valid())
      throw NonSurfaceError("edge " + std::to_string(e) + " belongs to no triangle");
    if (incid_[e][1].valid()) {
      bool f0 = tris_[incid_[e][0].tri].forward[incid_[e][0].side];
      bool f1 = tris_[incid_[e][1].tri].forward[incid_[e][1].side];
      if (f0 == f1)
        throw NonSurfaceError("edge " + std::to_string(e) + " glued without reversing direction");
    }
  }
  derive();
}

SideRef Complex::other_side(EdgeId e, TriId t, int s) const {
  const auto& in = incid_[e];
  if (in[0].tri == t && in[0].side == s) return in[1];
  return in[0];
}

VertId Complex::vert_at(const CornerRef& c) const {
  // Corner c is the start of side c: look at that side's starting edge-end.
  const Tri& tr = tris_[c.tri];
  EdgeId e = tr.edge[c.corner];
  int end = tr.forward[c.corner] ? 0 : 1;
  return vert_at(e, end);
}

int Complex::shared_corner(int sa, int sb) {
  // Side i runs corner i -> corner i+1. Sides i and i+1 share corner i+1;
  // sides i and i+2 share corner i.
  if ((sa + 1) % 3 == sb) return sb;
  if ((sb + 1) % 3 == sa) return sa;
  throw std::logic_error("shared_corner: identical sides");
}

void Complex::derive() {
  // Identify edge-ends: within a triangle the finish of side s meets the
  // start of side s+1; across an interior edge the two sides' matching ends
  // coincide (handled implicitly because both sides reference the same edge).
  DSU dsu(2 * num_edges_);
  auto end_slot = [&](TriId t, int s, bool start) {
    EdgeId e = tris_[t].edge[s];
    bool fwd = tris_[t].forward[s];
    int end = (start == fwd) ? 0 : 1;  // start of a forward side = tail
    return 2 * e + end;
  };
  for (TriId t = 0; t < num_tris(); ++t)
    for (int s = 0; s < 3; ++s)
      dsu.unite(end_slot(t, s, /*start=*/false), end_slot(t, (s + 1) % 3, /*start=*/true));

  std::map<int, VertId> root_to_vert;
  vert_of_end_.assign(2 * num_edges_, -1);
  for (int slot = 0; slot < 2 * num_edges_; ++slot) {
    int r = dsu.find(slot);
    auto it = root_to_vert.find(r);
    if (it == root_to_vert.end()) it = root_to_vert.emplace(r, (int)root_to_vert.size()).first;
    vert_of_end_[slot] = it->second;
  }
  num_verts_ = static_cast<int>(root_to_vert.size());

  corner_deg_.assign(num_verts_, 0);
  for (TriId t = 0; t < num_tris(); ++t)
    for (int c = 0; c < 3; ++c) corner_deg_[vert_at(CornerRef{t, c})]++;

  vert_boundary_.assign(num_verts_, false);
  for (EdgeId e = 0; e < num_edges_; ++e)
    if (is_boundary_edge(e)) {
      vert_boundary_[vert_at(e, 0)] = true;
      vert_boundary_[vert_at(e, 1)] = true;
    }

  // Boundary cycles. Walk each boundary edge against its unique side's
  // direction so that consecutive edges share a vertex. At a boundary vertex
  // exactly two boundary edge-ends meet.
  bd_cycle_of_.assign(num_edges_, -1);
  std::map<std::pair<VertId, int>, std::vector<EdgeId>> bd_ends_at;  // (vert, end)->edges
  std::map<VertId, std::vector<std::pair<EdgeId, int>>> at_vert;
  for (EdgeId e = 0; e < num_edges_; ++e)
    if (is_boundary_edge(e)) {
      at_vert[vert_at(e, 0)].push_back({e, 0});
      at_vert[vert_at(e, 1)].push_back({e, 1});
    }
  for (auto& [v, ends] : at_vert) {
    if (ends.size() != 2)
      throw NonSurfaceError("boundary vertex with " + std::to_string(ends.size()) +
                            " boundary edge-ends (non-manifold gluing)");
  }
  std::vector<bool> used(num_edges_, false);
  for (EdgeId e0 = 0; e0 < num_edges_; ++e0) {
    if (!is_boundary_edge(e0) || used[e0]) continue;
    std::vector<EdgeId> cyc;
    EdgeId e = e0;
    int arrive_end = 1;  // walk tail -> head first
    while (true) {
      cyc.push_back(e);
      used[e] = true;
      bd_cycle_of_[e] = static_cast<int>(bd_cycles_.size());
      VertId v = vert_at(e, arrive_end);
      auto& ends = at_vert.at(v);
      auto [ne, nend] = (ends[0].first == e && ends[0].second == arrive_end) ? ends[1] : ends[0];
      e = ne;
      arrive_end = 1 - nend;  // leave through the other end next
      if (e == e0) break;
    }
    bd_cycles_.push_back(std::move(cyc));
  }
}

bool Complex::connected() const {
  if (num_tris() == 0) return true;
  std::vector<bool> seen(num_tris(), false);
  std::vector<TriId> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    TriId t = stack.back();
    stack.pop_back();
    for (int s = 0; s < 3; ++s) {
      EdgeId e = tris_[t].edge[s];
      SideRef o = other_side(e, t, s);
      if (o.valid() && !seen[o.tri]) {
        seen[o.tri] = true;
        ++count;
        stack.push_back(o.tri);
      }
    }
  }
  return count == num_tris();
}

Complex::Extraction Complex::extract(const std::vector<TriId>& keep) const {
  std::vector<bool> in(num_tris(), false);
  for (TriId t : keep) in[t] = true;
  std::map<EdgeId, EdgeId> pe2se;
  std::vector<EdgeId> se2pe;
  std::vector<Tri> subtris;
  std::vector<TriId> t2p;
  for (TriId t = 0; t < num_tris(); ++t) {
    if (!in[t]) continue;
    Tri nt = tris_[t];
    for (int s = 0; s < 3; ++s) {
      EdgeId e = nt.edge[s];
      auto it = pe2se.find(e);
      if (it == pe2se.end()) {
        it = pe2se.emplace(e, (EdgeId)se2pe.size()).first;
        se2pe.push_back(e);
      }
      nt.edge[s] = it->second;
    }
    subtris.push_back(nt);
    t2p.push_back(t);
  }
  Complex sub(static_cast<int>(se2pe.size()), std::move(subtris));
  return Extraction{std::move(sub), std::move(se2pe), std::move(pe2se), std::move(t2p)};
}

namespace gridgen {

GridComplex build_grid(int nx, int ny, bool wrap_x, bool wrap_y,
                       const std::vector<std::pair<int, int>>& holes) {
  std::map<std::array<int, 3>, EdgeId> horiz, vert, diag;
  int next = 0;
  auto wrap = [&](int x, int y) {
    if (wrap_x) x = ((x % nx) + nx) % nx;
    if (wrap_y) y = ((y % ny) + ny) % ny;
    return std::pair<int, int>{x, y};
  };
  std::vector<std::vector<bool>> hole(nx, std::vector<bool>(ny, false));
  for (auto& [hx, hy] : holes) hole[hx][hy] = true;

  auto get = [&](std::map<std::array<int, 3>, EdgeId>& m, int x, int y) {
    auto key = std::array<int, 3>{x, y, 0};
    auto it = m.find(key);
    if (it == m.end()) it = m.emplace(key, next++).first;
    return it->second;
  };
  // Horizontal edge h(x,y) exists for squares (x,y) [bottom] and (x,y-1) [top].
  // Create edges lazily from square rims; omitted squares create no diagonal.
  std::vector<Tri> tris;
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      if (hole[x][y]) continue;
      // Square (x,y): corners (x,y),(x+1,y),(x+1,y+1),(x,y+1).
      auto [bxx, byy] = wrap(x, y);
      EdgeId bottom = get(horiz, bxx, byy);
      auto [txx, tyy] = wrap(x, y + 1);
      EdgeId top = get(horiz, txx, wrap_y ? tyy : y + 1);
      EdgeId left = get(vert, bxx, byy);
      auto [rxx, ryy] = wrap(x + 1, y);
      EdgeId right = get(vert, wrap_x ? rxx : x + 1, byy);
      EdgeId dd = get(diag, bxx, byy);
      // Lower triangle (x,y)->(x+1,y)->(x+1,y+1), ccw: bottom fwd, right fwd, diag bwd.
      tris.push_back(Tri{{bottom, right, dd}, {true, true, false}});
      // Upper triangle (x,y)->(x+1,y+1)->(x,y+1): diag fwd, top bwd, left bwd.
      tris.push_back(Tri{{dd, top, left}, {true, false, false}});
    }
  }
  Complex K(next, std::move(tris));
  return GridComplex{std::move(K), std::move(horiz), std::move(vert), std::move(diag)};
}

Truncated truncate_ideal(int num_edges, const std::vector<Tri>& ideal) {
  // Edge ids in the result: pieces first (one per ideal edge), then link arcs
  // (3 per triangle), then fan diagonals (3 per triangle).
  int F = (int)ideal.size();
  auto piece = [&](EdgeId e) { return e; };
  auto link = [&](TriId t, int corner) { return num_edges + 3 * t + corner; };
  auto diag = [&](TriId t, int k) { return num_edges + 3 * F + 3 * t + k; };

  std::vector<Tri> tris;
  for (TriId t = 0; t < F; ++t) {
    const Tri& tr = ideal[t];
    EdgeId p0 = piece(tr.edge[0]), p1 = piece(tr.edge[1]), p2 = piece(tr.edge[2]);
    bool f0 = tr.forward[0], f1 = tr.forward[1], f2 = tr.forward[2];
    EdgeId l0 = link(t, 0), l1 = link(t, 1), l2 = link(t, 2);
    EdgeId g1 = diag(t, 0), g2 = diag(t, 1), g3 = diag(t, 2);
    // Hexagon ccw: piece(s0), link(c1), piece(s1), link(c2), piece(s2), link(c0),
    // fanned from the hexagon corner at the start of side 0.
    tris.push_back(Tri{{p0, l1, g1}, {f0, true, false}});
    tris.push_back(Tri{{g1, p1, g2}, {true, f1, false}});
    tris.push_back(Tri{{g2, l2, g3}, {true, true, false}});
    tris.push_back(Tri{{g3, p2, l0}, {true, f2, true}});
  }
  Complex K(num_edges + 6 * F, std::move(tris));
  Truncated out{std::move(K), {}};
  out.piece_of_edge.resize(num_edges);
  for (EdgeId e = 0; e < num_edges; ++e) out.piece_of_edge[e] = e;
  return out;
}

}  // namespace gridgen

}  // namespace endlox
