#include "endlox/curve.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace endlox {

namespace {

// Any complementary region certifying that a single realized component is
// trivial: a disk touching the strand, or a strand/boundary annulus.
bool has_trivializing_region(const std::vector<StrandSystem::Region>& regions) {
  for (const auto& r : regions) {
    bool touches = false, full_circle = false;
    for (const auto& cyc : r.cycles) {
      if (cyc.has_strand[0] || cyc.has_strand[1]) touches = true;
      if (cyc.full_boundary_circle >= 0) full_circle = true;
    }
    if (r.chi == 1 && touches) return true;
    if (r.chi == 0 && touches && full_circle && r.cycles.size() == 2) return true;
  }
  return false;
}

long long total_weight(const Coords& c) {
  long long s = 0;
  for (int w : c) s += w;
  return s;
}

struct EndpointHandle {
  EdgeId edge = -1;
  int slot = -1;
};

struct PivotOut {
  Coords coords;
  EndpointHandle moved;
  VertId crossed = -1;
};

// Slides the arc endpoint identified by `h` across `across` (a vertex of
// h.edge) onto the next boundary edge, re-tightens, and reports where the
// endpoint now rests. Returns nothing when another attachment point blocks
// the slide (an endpoint can never pass through one).
std::optional<PivotOut> pivot_endpoint(const Complex& K, const Coords& arc,
                                       EndpointHandle h, VertId across) {
  StrandSystem sys(K);
  sys.add_family(arc, 0);
  const auto& ord = sys.edge_points(h.edge);
  if (h.slot < 0 || h.slot >= (int)ord.size())
    throw std::invalid_argument("pivot: bad endpoint slot");
  int p = ord[h.slot];
  auto pv = sys.pt(p);
  if (!pv.endpoint || !K.is_boundary_edge(h.edge))
    throw std::invalid_argument("pivot: not an endpoint");
  int dir = (K.vert_at(h.edge, 0) == across) ? 0 : 1;
  if (K.vert_at(h.edge, dir) != across)
    throw std::invalid_argument("pivot: vertex not on endpoint edge");
  VertId v = across;
  int extreme = (dir == 0) ? 0 : (int)ord.size() - 1;
  if (h.slot != extreme) return std::nullopt;  // blocked by another endpoint

  // Walk the corner fan at v from h.edge to the next boundary edge.
  auto corners_at_end = [&](EdgeId e, int end) {
    std::vector<CornerRef> out;
    for (const SideRef& sr : K.sides(e)) {
      if (!sr.valid()) continue;
      bool fwd = K.tri(sr.tri).forward[sr.side];
      int corner = (fwd == (end == 0)) ? sr.side : (sr.side + 1) % 3;
      out.push_back(CornerRef{sr.tri, corner});
    }
    return out;
  };
  auto corner_edge_ends = [&](const CornerRef& c) {
    const Tri& tr = K.tri(c.tri);
    int s0 = c.corner, s2 = (c.corner + 2) % 3;
    std::pair<EdgeId, int> a{tr.edge[s0], tr.forward[s0] ? 0 : 1};
    std::pair<EdgeId, int> b{tr.edge[s2], tr.forward[s2] ? 1 : 0};
    return std::make_pair(a, b);  // a: start of side s0, b: end of side s2
  };

  struct FanStep {
    TriId tri;
    int side_in;
    int side_out;
    EdgeId e_out;
    int e_out_end;
  };
  std::vector<FanStep> fan;
  std::pair<EdgeId, int> cur{h.edge, dir};
  CornerRef prev_corner{-1, -1};
  while (true) {
    auto cs = corners_at_end(cur.first, cur.second);
    CornerRef nxt{-1, -1};
    for (const auto& c : cs)
      if (!(c == prev_corner)) nxt = c;
    if (nxt.tri < 0) throw std::logic_error("pivot: fan walk failed");
    auto [ea_, eb_] = corner_edge_ends(nxt);
    const Tri& tr = K.tri(nxt.tri);
    int s0 = nxt.corner, s2 = (nxt.corner + 2) % 3;
    int side_in, side_out;
    std::pair<EdgeId, int> out_end;
    if (ea_ == cur) {
      side_in = s0;
      side_out = s2;
      out_end = eb_;
    } else if (eb_ == cur) {
      side_in = s2;
      side_out = s0;
      out_end = ea_;
    } else {
      throw std::logic_error("pivot: corner does not touch entry edge");
    }
    (void)tr;
    fan.push_back(FanStep{nxt.tri, side_in, side_out, out_end.first, out_end.second});
    if (K.is_boundary_edge(out_end.first)) break;
    cur = out_end;
    prev_corner = nxt;
  }

  // Remove the endpoint and its chord; lay the detour hugging v.
  int old_chord = pv.chords[0];
  auto cv = sys.chord(old_chord);
  int w = cv.pts[0] == p ? cv.pts[1] : cv.pts[0];
  int w_side = cv.pts[0] == p ? cv.sides[1] : cv.sides[0];
  TriId w_tri = cv.tri;
  if (w_tri != fan.front().tri)
    throw std::logic_error("pivot: endpoint chord not in the fan's first triangle");
  sys.delete_chord(old_chord);
  sys.delete_point(p);

  auto v_slot = [&](EdgeId e, int end_at_v) {
    return end_at_v == 0 ? 0 : (int)sys.edge_points(e).size();
  };
  const FanStep& last = fan.back();
  EdgeId new_edge = last.e_out;
  int new_edge_v_end = last.e_out_end;
  int pprime = sys.insert_point(new_edge, v_slot(new_edge, new_edge_v_end), 0);
  int carry = pprime;
  int carry_side = last.side_out;
  for (int i = (int)fan.size() - 1; i >= 1; --i) {
    const FanStep& st = fan[i];
    const FanStep& prv = fan[i - 1];
    int np = sys.insert_point(prv.e_out, v_slot(prv.e_out, prv.e_out_end), 0);
    sys.add_chord(st.tri, carry, carry_side, np, st.side_in, 0);
    carry = np;
    carry_side = prv.side_out;
  }
  sys.add_chord(fan.front().tri, carry, carry_side, w, w_side, 0);

  sys.tighten();

  PivotOut out;
  out.coords = sys.coords(0);
  out.crossed = v;
  // The moved endpoint is the boundary point nearest v on its edge.
  out.moved.edge = new_edge;
  const auto& ord2 = sys.edge_points(new_edge);
  if (ord2.empty()) throw std::logic_error("pivot: endpoint vanished from target edge");
  out.moved.slot = (new_edge_v_end == 0) ? 0 : (int)ord2.size() - 1;
  return out;
}

// First endpoint handle of a freshly realized arc (scan order).
std::optional<std::array<EndpointHandle, 2>> arc_handles(const Complex& K,
                                                         const Coords& a) {
  StrandSystem sys(K);
  sys.add_family(a, 0);
  std::array<EndpointHandle, 2> hs;
  int found = 0;
  for (EdgeId e = 0; e < K.num_edges(); ++e) {
    if (!K.is_boundary_edge(e)) continue;
    const auto& ord = sys.edge_points(e);
    for (int i = 0; i < (int)ord.size(); ++i) {
      if (found < 2) hs[found] = EndpointHandle{e, i};
      ++found;
    }
  }
  if (found != 2) return std::nullopt;
  return hs;
}

// All positions of a single reduced arc under endpoint slides: directional
// walks around each endpoint's boundary circle, stopping at the other
// attachment point (or after a full lap). Includes the input.
std::vector<Coords> slide_positions(const Complex& K, const Coords& arc,
                                    const std::set<EdgeId>& pinned) {
  std::vector<Coords> out{arc};
  auto hs0 = arc_handles(K, arc);
  if (!hs0) return out;
  if (pinned.count((*hs0)[0].edge) || pinned.count((*hs0)[1].edge)) return out;

  // One directional walk of the endpoint `h`; pushes every position reached.
  auto walk = [&](const Coords& start, EndpointHandle h, int initial_end,
                  std::vector<std::pair<Coords, EndpointHandle>>* sink) {
    int lap = (int)K.boundary_cycles()[K.boundary_cycle_of(h.edge)].size();
    Coords cur = start;
    VertId last = -1;
    for (int step = 0; step < lap; ++step) {
      VertId v0 = K.vert_at(h.edge, 0), v1 = K.vert_at(h.edge, 1);
      if (v0 == v1) break;  // one-edge circle
      VertId across;
      if (step == 0)
        across = K.vert_at(h.edge, initial_end);
      else
        across = (v0 == last) ? v1 : v0;
      auto po = pivot_endpoint(K, cur, h, across);
      if (!po) break;  // blocked
      cur = po->coords;
      h = po->moved;
      last = po->crossed;
      sink->push_back({cur, h});
    }
  };

  auto other_handle = [&](const Coords& c, const EndpointHandle& moved) {
    StrandSystem sys(K);
    sys.add_family(c, 0);
    for (EdgeId e = 0; e < K.num_edges(); ++e) {
      if (!K.is_boundary_edge(e)) continue;
      const auto& ord = sys.edge_points(e);
      for (int i = 0; i < (int)ord.size(); ++i) {
        if (e == moved.edge && i == moved.slot) continue;
        return EndpointHandle{e, i};
      }
    }
    throw std::logic_error("arc lost an endpoint");
  };

  // Endpoint-0 positions (both directions), each paired with the handle.
  std::vector<std::pair<Coords, EndpointHandle>> pos0{{arc, (*hs0)[0]}};
  walk(arc, (*hs0)[0], 0, &pos0);
  walk(arc, (*hs0)[0], 1, &pos0);
  for (const auto& [c0, h0] : pos0) {
    out.push_back(c0);
    std::vector<std::pair<Coords, EndpointHandle>> pos1;
    EndpointHandle h1 = other_handle(c0, h0);
    walk(c0, h1, 0, &pos1);
    walk(c0, h1, 1, &pos1);
    for (auto& [c1, unused] : pos1) out.push_back(c1);
  }
  return out;
}

// Bounded plateau of position variants of one tightened system: breadth
// first over weight-neutral vertex pushes.
std::vector<Coords> plateau_variants(const Complex& K, const Coords& start,
                                     const std::set<EdgeId>& pinned, int cap) {
  std::vector<Coords> out;
  std::set<Coords> seen{start};
  std::deque<Coords> q{start};
  while (!q.empty() && (int)out.size() < cap) {
    Coords cur = q.front();
    q.pop_front();
    StrandSystem sys(K);
    sys.add_family(cur, 0, pinned);
    for (auto& nb : sys.neutral_push_variants()) {
      if (seen.insert(nb).second) {
        out.push_back(nb);
        q.push_back(nb);
        if ((int)out.size() >= cap) break;
      }
    }
  }
  return out;
}

bool is_arc_vector(const Complex& K, const Coords& a) {
  int ends = 0;
  for (EdgeId e = 0; e < K.num_edges(); ++e)
    if (K.is_boundary_edge(e)) ends += a[e];
  return ends == 2;
}

}  // namespace

int count_components(const Complex& K, const Coords& a) {
  StrandSystem sys(K);
  sys.add_family(a, 0);
  return (int)sys.components(0).size();
}

int complement_components(const Complex& K, const Coords& a) {
  StrandSystem sys(K);
  sys.add_family(a, 0);
  return (int)sys.regions().size();
}

NormalizeResult normalize_system(const Complex& K, const Coords& raw,
                                 const std::set<EdgeId>& pinned,
                                 bool reject_inessential) {
  StrandSystem sys(K);
  sys.add_family(raw, 0, pinned);
  sys.tighten();
  NormalizeResult res;
  res.dropped = sys.trivial_removed();

  Coords kept(K.num_edges(), 0);
  int ncomp = 0;
  for (const auto& comp : sys.components(0)) {
    Coords cc = sys.component_coords(comp);
    StrandSystem single(K);
    single.add_family(cc, 0, pinned);
    if (has_trivializing_region(single.regions())) {
      res.dropped++;
      continue;
    }
    for (EdgeId e = 0; e < K.num_edges(); ++e) kept[e] += cc[e];
    ++ncomp;
  }
  if (res.dropped && reject_inessential)
    throw InessentialError("system contains a trivial component");

  res.components = ncomp;
  if (ncomp == 1 && is_arc_vector(K, kept)) {
    Coords best = kept;
    long long bw = total_weight(best);
    for (const auto& p : slide_positions(K, kept, pinned)) {
      long long w = total_weight(p);
      if (w < bw || (w == bw && p < best)) {
        best = p;
        bw = w;
      }
    }
    kept = best;
  }
  res.coords = std::move(kept);
  return res;
}

int intersection_number(const Complex& K, const Coords& a, const Coords& b,
                        const std::set<EdgeId>& pinned) {
  int base = pair_crossings_reduced(K, a, b, pinned);
  if (base == 0) return 0;
  // Taut positions are not unique; minimize over a bounded plateau of
  // position variants of either side before trusting a positive count.
  {
    StrandSystem sa(K);
    sa.add_family(a, 0, pinned);
    sa.tighten();
    Coords ta = sa.coords(0);
    for (const auto& va : plateau_variants(K, ta, pinned, 12)) {
      base = std::min(base, pair_crossings_reduced(K, va, b, pinned));
      if (base == 0) return 0;
    }
    StrandSystem sb(K);
    sb.add_family(b, 0, pinned);
    sb.tighten();
    Coords tb = sb.coords(0);
    for (const auto& vb : plateau_variants(K, tb, pinned, 12)) {
      base = std::min(base, pair_crossings_reduced(K, a, vb, pinned));
      if (base == 0) return 0;
    }
  }
  if (!is_arc_vector(K, a) || !is_arc_vector(K, b)) return base;
  // Slide minimization applies when both are arcs with free endpoints on a
  // common boundary circle.
  auto on_circles = [&](const Coords& c) {
    std::set<int> out;
    for (EdgeId e = 0; e < K.num_edges(); ++e)
      if (K.is_boundary_edge(e) && c[e] > 0) {
        if (pinned.count(e)) return std::set<int>{};
        out.insert(K.boundary_cycle_of(e));
      }
    return out;
  };
  auto ca = on_circles(a);
  auto cb = on_circles(b);
  bool share = false;
  for (int c : ca)
    if (cb.count(c)) share = true;
  if (!share) return base;
  int best = base;
  for (const auto& pos : slide_positions(K, a, pinned)) {
    int v = pair_crossings_reduced(K, pos, b, pinned);
    best = std::min(best, v);
    if (best == 0) break;
  }
  return best;
}

bool isotopic(const Complex& K, const Coords& a, const Coords& b,
              const std::set<EdgeId>& pinned) {
  if (a == b) return true;
  auto ca = normalize_system(K, a, pinned).coords;
  auto cb = normalize_system(K, b, pinned).coords;
  if (ca == cb) return true;
  // Taut forms are not unique on triangulations with material vertices, so
  // fall back to the geometric test: disjoint connected curves are isotopic
  // iff they cobound an annulus (closed) or a boundary strip (arcs).
  if (count_components(K, ca) != 1 || count_components(K, cb) != 1) return false;
  bool arc_a = is_arc_vector(K, ca), arc_b = is_arc_vector(K, cb);
  if (arc_a != arc_b) return false;
  if (intersection_number(K, ca, cb, pinned) != 0) return false;
  // For arcs, slide a onto its minimizing relative position first.
  Coords pos_a = ca;
  if (arc_a) {
    int best = pair_crossings_reduced(K, pos_a, cb, pinned);
    for (const auto& pos : slide_positions(K, ca, pinned)) {
      int v = pair_crossings_reduced(K, pos, cb, pinned);
      if (v < best) {
        best = v;
        pos_a = pos;
      }
      if (best == 0) break;
    }
    if (best != 0) return false;
  }
  StrandSystem sys(K);
  sys.add_family(pos_a, 0, pinned);
  sys.add_family(cb, 1, pinned);
  if (sys.reduce_pair() != 0) return false;
  int seg_a = sys.alive_chords(0);
  int seg_b = sys.alive_chords(1);
  for (const auto& r : sys.regions()) {
    if (!arc_a) {
      // annulus bounded by one full copy of each
      if (r.chi != 0 || r.cycles.size() != 2) continue;
      const auto& c0 = r.cycles[0];
      const auto& c1 = r.cycles[1];
      auto pure = [](const StrandSystem::RegionCycle& c, int owner) {
        return c.surface_passes == 0 && c.strand_passes[owner] > 0 &&
               c.strand_passes[1 - owner] == 0;
      };
      bool ok01 = pure(c0, 0) && pure(c1, 1) && c0.strand_passes[0] == seg_a &&
                  c1.strand_passes[1] == seg_b;
      bool ok10 = pure(c0, 1) && pure(c1, 0) && c0.strand_passes[1] == seg_b &&
                  c1.strand_passes[0] == seg_a;
      if (ok01 || ok10) return true;
    } else {
      // strip: a disk whose single cycle uses each arc fully once
      if (r.chi != 1 || r.cycles.size() != 1) continue;
      const auto& c0 = r.cycles[0];
      if (c0.strand_passes[0] == seg_a && c0.strand_passes[1] == seg_b && seg_a > 0 &&
          seg_b > 0)
        return true;
    }
  }
  return false;
}

bool fills(const Complex& K, const Coords& a, const Coords& b) {
  if (isotopic(K, a, b)) return false;
  Coords best_a = a;
  int best = pair_crossings_reduced(K, a, b);
  if (best > 0 && is_arc_vector(K, a) && is_arc_vector(K, b)) {
    for (const auto& pos : slide_positions(K, a, {})) {
      int v = pair_crossings_reduced(K, pos, b);
      if (v < best) {
        best = v;
        best_a = pos;
      }
    }
  }
  if (best == 0) return false;  // each curve witnesses non-filling
  StrandSystem sys(K);
  sys.add_family(best_a, 0);
  sys.add_family(b, 1);
  sys.reduce_pair();
  for (const auto& r : sys.regions()) {
    if (r.chi == 1) continue;
    if (r.chi == 0 && r.cycles.size() == 2) {
      bool full = false;
      for (const auto& cyc : r.cycles)
        if (cyc.full_boundary_circle >= 0) full = true;
      if (full) continue;
    }
    return false;
  }
  return true;
}

Coords pivot_arc(const Complex& K, const Coords& arc, int endpoint_idx, int dir) {
  auto hs = arc_handles(K, arc);
  if (!hs) throw std::invalid_argument("pivot_arc needs a single two-ended arc");
  EndpointHandle h = (*hs)[endpoint_idx ? 1 : 0];
  VertId across = K.vert_at(h.edge, dir);
  auto po = pivot_endpoint(K, arc, h, across);
  if (!po) throw std::invalid_argument("pivot_arc: slide blocked by an attachment point");
  return po->coords;
}

std::string serialize_coords(const Coords& c) {
  std::ostringstream os;
  bool first = true;
  for (size_t e = 0; e < c.size(); ++e) {
    if (!c[e]) continue;
    if (!first) os << ' ';
    os << 'e' << e << ':' << c[e];
    first = false;
  }
  return os.str();
}

}  // namespace endlox
