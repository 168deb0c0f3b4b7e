#include "endlox/model.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace endlox {

bool ModelCurve::closed() const { return tails.empty(); }

int SurfaceModel::tube_index(const std::string& n) const {
  for (int i = 0; i < (int)tubes.size(); ++i)
    if (tubes[i].name == n) return i;
  throw UnresolvedLabelError("unknown tube: " + n);
}

int SurfaceModel::end_index(const std::string& label) const {
  for (int i = 0; i < (int)ends.size(); ++i)
    if (ends[i].label == label) return i;
  throw UnresolvedLabelError("unknown end: " + label);
}

const EndInfo& SurfaceModel::end(const std::string& label) const {
  return ends[end_index(label)];
}

void SurfaceModel::validate() const {
  if (tubes.empty()) throw GluingMismatchError("surface has no tubes");
  if (ends.size() != 2 * tubes.size())
    throw GluingMismatchError("each tube must contribute exactly two ends");
  for (const auto& t : tubes) {
    if (t.genus < 1) throw GluingMismatchError("tube genus must be >= 1");
    end(t.end_neg);
    end(t.end_pos);
  }
  for (const auto& p : plumbs) {
    if (p.tube_a < 0 || p.tube_a >= (int)tubes.size() || p.tube_b < 0 ||
        p.tube_b >= (int)tubes.size() || p.tube_a == p.tube_b)
      throw GluingMismatchError("bad plumbing spec");
  }
  for (const auto& t : tubes)
    if (t.pocket_col && (*t.pocket_col != 0))
      throw GluingMismatchError("pockets are supported at column 0 only");
}

namespace {
constexpr int kRows = 4;
}

ModelCurve SurfaceModel::tube_circle(int tube, int col) const {
  ModelCurve c;
  auto& m = c.coords;
  for (int r = 0; r < kRows; ++r) m[EdgeKey{tube, col, r, 0, kB}] = 1;
  // Moving-row gadget cell: pass left of the hole.
  m[EdgeKey{tube, col, kRowMoving, 0, kSpoke3}] = 1;
  m[EdgeKey{tube, col, kRowMoving, 0, kTrap3}] = 1;
  m[EdgeKey{tube, col, kRowMoving, 0, kSpoke0}] = 1;
  m[EdgeKey{tube, col, kRowMoving, 0, kTrap0}] = 1;
  auto cross_plain_or_frame = [&](int row) {
    bool frame = false;
    if (row == kRowStatic) {
      const TubeSpec& ts = tubes[tube];
      if (ts.pocket_col && *ts.pocket_col == col) frame = true;
      for (const auto& p : plumbs)
        if ((p.tube_a == tube || p.tube_b == tube) && col == 0) frame = true;
    }
    if (frame) {
      m[EdgeKey{tube, col, row, 0, kSpoke3}] = 1;
      m[EdgeKey{tube, col, row, 0, kTrap3}] = 1;
      m[EdgeKey{tube, col, row, 0, kSpoke0}] = 1;
      m[EdgeKey{tube, col, row, 0, kTrap0}] = 1;
    } else {
      m[EdgeKey{tube, col, row, 0, kDiag}] = 1;
    }
  };
  cross_plain_or_frame(kRowDampA);
  cross_plain_or_frame(kRowStatic);
  cross_plain_or_frame(kRowDampB);
  return c;
}

void SurfaceModel::add_spine_column(ModelCoords& m, int tube, int col) const {
  int g = tubes[tube].genus;
  for (int c = 0; c < g; ++c) {
    m[EdgeKey{tube, col, kRowMoving, c, kV}] += 1;
    m[EdgeKey{tube, col, kRowMoving, c, kSpoke0}] += 1;
    m[EdgeKey{tube, col, kRowMoving, c, kTrap0}] += 1;
    m[EdgeKey{tube, col, kRowMoving, c, kSpoke1}] += 1;
    m[EdgeKey{tube, col, kRowMoving, c, kTrap1}] += 1;
  }
}

ModelCurve SurfaceModel::spine_arc(int tube) const {
  ModelCurve c;
  c.tails.push_back({tubes[tube].end_neg, 0});
  c.tails.push_back({tubes[tube].end_pos, -1});
  // Column 0 and anything beyond comes from the tails; from_col -1 on the
  // positive side makes column 0 part of the positive tail so the two tails
  // meet cleanly.
  return c;
}

ModelCurve SurfaceModel::pocket_circle(int tube) const {
  const TubeSpec& ts = tubes[tube];
  if (!ts.pocket_col) throw UnresolvedLabelError("tube has no pocket");
  ModelCurve c;
  for (int i = 0; i < 4; ++i) {
    c.coords[EdgeKey{tube, *ts.pocket_col, kRowStatic, 0, kSpoke0 + i}] = 1;
    c.coords[EdgeKey{tube, *ts.pocket_col, kRowStatic, 0, kTrap0 + i}] = 1;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Window builder
// ---------------------------------------------------------------------------

namespace {

struct Builder {
  const SurfaceModel* M;
  int radius;
  std::map<EdgeKey, EdgeId> edge_of;
  std::vector<EdgeKey> key_of;
  std::vector<Tri> tris;
  std::vector<Window::TriZone> zones;

  EdgeId E(const EdgeKey& k) {
    auto it = edge_of.find(k);
    if (it != edge_of.end()) return it->second;
    EdgeId id = (EdgeId)key_of.size();
    edge_of.emplace(k, id);
    key_of.push_back(k);
    return id;
  }

  void tri(Window::TriZone z, EdgeId a, bool fa, EdgeId b, bool fb, EdgeId c, bool fc) {
    tris.push_back(Tri{{a, b, c}, {fa, fb, fc}});
    zones.push_back(z);
  }

  // Outer edges of cell (tube, col, row, c).
  EdgeId bottom(int t, int k, int r, int c) { return E({t, k, r, c, kB}); }
  EdgeId top(int t, int k, int r, int c) { return E({t, k, (r + 3) % 4, c, kB}); }
  EdgeId left(int t, int k, int r, int c) { return E({t, k, r, c, kV}); }
  EdgeId right(int t, int k, int r, int c) {
    int g = M->tubes[t].genus;
    if (c + 1 < g) return E({t, k, r, c + 1, kV});
    return E({t, k + 1, r, 0, kV});
  }

  void plain_cell(int t, int k, int r, int c) {
    EdgeId B = bottom(t, k, r, c), T = top(t, k, r, c), L = left(t, k, r, c),
           R = right(t, k, r, c), D = E({t, k, r, c, kDiag});
    Window::TriZone z{t, k, r};
    tri(z, B, true, R, true, D, false);
    tri(z, D, true, T, false, L, false);
  }

  // Frame with inner circle edges in[0..3] (directions: in[i] runs I_i->I_{i+1}
  // unless flip, in which case the inner sides are traversed forward).
  void frame_cell(int t, int k, int r, int c, const std::array<EdgeId, 4>& in,
                  const std::array<bool, 4>& in_fwd_for_t2) {
    EdgeId B = bottom(t, k, r, c), T = top(t, k, r, c), L = left(t, k, r, c),
           R = right(t, k, r, c);
    std::array<EdgeId, 4> outer{B, R, T, L};
    std::array<bool, 4> outer_fwd{true, true, false, false};
    std::array<EdgeId, 4> sp, td;
    for (int i = 0; i < 4; ++i) {
      sp[i] = E({t, k, r, c, kSpoke0 + i});
      td[i] = E({t, k, r, c, kTrap0 + i});
    }
    Window::TriZone z{t, k, r};
    for (int i = 0; i < 4; ++i) {
      tri(z, outer[i], outer_fwd[i], sp[(i + 1) % 4], true, td[i], false);
      tri(z, td[i], true, in[i], in_fwd_for_t2[i], sp[i], false);
    }
  }

  // 2x2 wrapped grid minus one square, glued into the inner circle of a
  // moving-row frame. in[] are the frame's inner edges (I_i -> I_{i+1}).
  void handle_piece(int t, int k, int c, const std::array<EdgeId, 4>& in) {
    auto T0 = E({t, k, kRowMoving, c, kTor0});  // h00
    auto T1 = E({t, k, kRowMoving, c, kTor1});  // h01
    auto T2 = E({t, k, kRowMoving, c, kTor2});  // v00
    auto T3 = E({t, k, kRowMoving, c, kTor3});  // v10
    auto T4 = E({t, k, kRowMoving, c, kTor4});  // d00
    auto T5 = E({t, k, kRowMoving, c, kTor5});  // d01
    auto T6 = E({t, k, kRowMoving, c, kTor6});  // d10
    Window::TriZone z{t, k, kRowMoving};
    tri(z, T0, true, T3, true, T4, false);        // sq(0,0) lower
    tri(z, T4, true, T1, false, T2, false);       // sq(0,0) upper
    tri(z, in[0], true, T2, true, T6, false);     // sq(1,0) lower
    tri(z, T6, true, in[2], true, T3, false);     // sq(1,0) upper
    tri(z, T1, true, in[3], true, T5, false);     // sq(0,1) lower
    tri(z, T5, true, T0, false, in[1], true);     // sq(0,1) upper
  }

  void build() {
    for (int t = 0; t < (int)M->tubes.size(); ++t) {
      const TubeSpec& ts = M->tubes[t];
      int g = ts.genus;
      for (int k = -radius; k <= radius; ++k) {
        for (int c = 0; c < g; ++c) {
          // moving row: frame + handle
          std::array<EdgeId, 4> in;
          for (int i = 0; i < 4; ++i) in[i] = E({t, k, kRowMoving, c, kInner0 + i});
          frame_cell(t, k, kRowMoving, c, in, {false, false, false, false});
          handle_piece(t, k, c, in);
          // damping rows and static row
          plain_cell(t, k, kRowDampA, c);
          plain_cell(t, k, kRowDampB, c);
          bool pocket = ts.pocket_col && *ts.pocket_col == k && c == 0;
          bool plumb = false;
          int plumb_id = -1;
          bool plumb_first = false;
          for (int pi = 0; pi < (int)M->plumbs.size(); ++pi) {
            const auto& p = M->plumbs[pi];
            if (k == 0 && c == 0 && (p.tube_a == t || p.tube_b == t)) {
              plumb = true;
              plumb_id = pi;
              plumb_first = (p.tube_a == t);
            }
          }
          if (pocket && plumb)
            throw GluingMismatchError("cell cannot host both pocket and plumbing");
          if (pocket) {
            std::array<EdgeId, 4> pin;
            for (int i = 0; i < 4; ++i) pin[i] = E({t, k, kRowStatic, c, kInner0 + i});
            frame_cell(t, k, kRowStatic, c, pin, {false, false, false, false});
          } else if (plumb) {
            std::array<EdgeId, 4> sh;
            for (int i = 0; i < 4; ++i) sh[i] = E({-1, plumb_id, 0, 0, kInner0 + i});
            if (plumb_first) {
              frame_cell(t, k, kRowStatic, c, sh, {false, false, false, false});
            } else {
              // inverted traversal so the shared circle is consistent
              std::array<EdgeId, 4> perm{sh[0], sh[3], sh[2], sh[1]};
              frame_cell(t, k, kRowStatic, c, perm, {true, true, true, true});
            }
          } else {
            plain_cell(t, k, kRowStatic, c);
          }
        }
      }
    }
  }
};

}  // namespace

Window::Window(const SurfaceModel& model, int radius) : model_(&model), radius_(radius) {
  Builder b;
  b.M = &model;
  b.radius = radius;
  b.build();
  cx_ = Complex((int)b.key_of.size(), std::move(b.tris));
  edge_of_ = std::move(b.edge_of);
  key_of_ = std::move(b.key_of);
  tri_zone_ = std::move(b.zones);
}

EdgeId Window::edge(const EdgeKey& k) const {
  auto it = edge_of_.find(k);
  if (it == edge_of_.end()) throw UnresolvedLabelError("edge key outside window");
  return it->second;
}

std::vector<EdgeId> Window::frontier_edges(const std::string& end_label) const {
  const EndInfo& e = model_->end(end_label);
  int col = e.sign > 0 ? radius_ + 1 : -radius_;
  std::vector<EdgeId> out;
  for (int r = 0; r < kRows; ++r) out.push_back(edge(EdgeKey{e.tube, col, r, 0, kV}));
  return out;
}

std::set<EdgeId> Window::frontier_all() const {
  std::set<EdgeId> out;
  for (const auto& e : model_->ends)
    for (EdgeId id : frontier_edges(e.label)) out.insert(id);
  return out;
}

Coords Window::materialize(const ModelCurve& c) const {
  Coords w(cx_.num_edges(), 0);
  for (const auto& [k, v] : c.coords) {
    auto it = edge_of_.find(k);
    if (it == edge_of_.end())
      throw UnresolvedLabelError("curve support does not fit the window");
    w[it->second] += v;
  }
  for (const auto& tail : c.tails) {
    const EndInfo& e = model_->end(tail.end);
    ModelCoords stub;
    if (e.sign > 0) {
      for (int k = tail.from_col + 1; k <= radius_; ++k)
        model_->add_spine_column(stub, e.tube, k);
      stub[EdgeKey{e.tube, radius_ + 1, kRowMoving, 0, kV}] += 1;  // endpoint
    } else {
      // The col -radius spine fill already crosses the frontier vertical
      // V(-radius), which is a boundary edge: that crossing is the endpoint.
      for (int k = -radius_; k <= tail.from_col - 1; ++k)
        model_->add_spine_column(stub, e.tube, k);
    }
    for (const auto& [k, v] : stub) {
      auto it = edge_of_.find(k);
      if (it == edge_of_.end()) throw UnresolvedLabelError("tail stub outside window");
      w[it->second] += v;
    }
  }
  return w;
}

ModelCurve Window::lift(const Coords& w,
                        const std::vector<ModelCurve::Tail>& tails) const {
  Coords rest = w;
  ModelCurve out;
  for (const auto& tail : tails) {
    const EndInfo& e = model_->end(tail.end);
    // Strip the spine pattern column by column from the frontier inward.
    int sign = e.sign;
    int from = sign > 0 ? radius_ : -radius_;
    if (sign > 0) {
      EdgeId fep = edge(EdgeKey{e.tube, radius_ + 1, kRowMoving, 0, kV});
      if (rest[fep] < 1) throw std::logic_error("lift: missing tail endpoint");
      rest[fep] -= 1;
    }
    auto column_is_spine = [&](int k) {
      ModelCoords stub;
      model_->add_spine_column(stub, e.tube, k);
      for (const auto& [key, v] : stub) {
        auto it = edge_of_.find(key);
        if (it == edge_of_.end()) return false;
        if (rest[it->second] < v) return false;
      }
      // also require the column to carry nothing else
      for (const auto& [key, id] : edge_of_) {
        if (key.tube != e.tube || key.col != k) continue;
        int expect = 0;
        auto sit = stub.find(key);
        if (sit != stub.end()) expect = sit->second;
        if (rest[id] != expect) return false;
      }
      return true;
    };
    int k = from;
    int stripped = 0;
    while ((sign > 0 ? k > -radius_ : k < radius_)) {
      if (!column_is_spine(k)) break;
      ModelCoords stub;
      model_->add_spine_column(stub, e.tube, k);
      for (const auto& [key, v] : stub) rest[edge(key)] -= v;
      ++stripped;
      k -= sign;
    }
    if (stripped == 0) throw std::logic_error("lift: no spine stub found for tail");
    out.tails.push_back({tail.end, k});
  }
  for (EdgeId id = 0; id < (EdgeId)rest.size(); ++id)
    if (rest[id]) out.coords[key_of_[id]] = rest[id];
  return out;
}

std::vector<TriId> Window::subsurface_tris(const SubsurfaceSpec& s) const {
  std::vector<TriId> out;
  for (TriId t = 0; t < cx_.num_tris(); ++t) {
    const TriZone& z = tri_zone_[t];
    if (z.tube < 0) {
      // plumbing-owned triangles do not exist (frames belong to tubes)
      continue;
    }
    auto it = s.cols.find(z.tube);
    if (it == s.cols.end()) continue;
    if (z.col >= it->second.first && z.col <= it->second.second) out.push_back(t);
  }
  return out;
}

std::string serialize_model_curve(const ModelCurve& c) {
  std::ostringstream os;
  for (const auto& [k, v] : c.coords)
    os << k.tube << '.' << k.col << '.' << k.row << '.' << k.cell << '.' << k.code << ':'
       << v << ' ';
  for (const auto& t : c.tails) os << "tail(" << t.end << ',' << t.from_col << ") ";
  std::string s = os.str();
  if (!s.empty()) s.pop_back();
  return s;
}

std::pair<int, int> support_cols(const ModelCurve& c) {
  int lo = 0, hi = 0;
  bool first = true;
  for (const auto& [k, v] : c.coords) {
    if (!v || k.tube < 0) continue;
    if (first) {
      lo = hi = k.col;
      first = false;
    } else {
      lo = std::min(lo, k.col);
      hi = std::max(hi, k.col);
    }
  }
  for (const auto& t : c.tails) {
    if (first) {
      lo = hi = t.from_col;
      first = false;
    } else {
      lo = std::min(lo, t.from_col);
      hi = std::max(hi, t.from_col);
    }
  }
  return {lo, hi};
}

int fitting_radius(const std::vector<const ModelCurve*>& curves, int margin) {
  int r = 1;
  for (const auto* c : curves) {
    auto [lo, hi] = support_cols(*c);
    r = std::max({r, std::abs(lo), std::abs(hi)});
  }
  return r + margin;
}

}  // namespace endlox
