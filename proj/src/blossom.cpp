#include "mdgs/blossom.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <utility>

namespace mdgs {

namespace {

constexpr std::int32_t kNone = -1;

// Ids 0..n-1 are the vertices (trivial blossoms); ids n..2n-1 are slots for
// non-trivial blossoms, recycled through a free list.
class Matcher {
 public:
  Matcher(std::int32_t n, const std::vector<WeightedEdge>& edges)
      : n_(n), edges_(edges) {
    max_weight_ = 0.0;
    for (const auto& e : edges_) max_weight_ = std::max(max_weight_, e.weight);
    adj_.resize(n_);
    for (std::int32_t k = 0; k < static_cast<std::int32_t>(edges_.size()); ++k) {
      assert(edges_[k].u != edges_[k].v);
      adj_[edges_[k].u].push_back(k);
      adj_[edges_[k].v].push_back(k);
    }
    const std::int32_t slots = 2 * n_;
    mate_.assign(n_, kNone);
    label_.assign(slots, 0);
    label_edge_.assign(slots, {kNone, kNone});
    in_blossom_.resize(n_);
    for (std::int32_t v = 0; v < n_; ++v) in_blossom_[v] = v;
    parent_.assign(slots, kNone);
    base_.assign(slots, kNone);
    for (std::int32_t v = 0; v < n_; ++v) base_[v] = v;
    best_edge_.assign(slots, kNone);
    dual_.assign(slots, 0.0);
    for (std::int32_t v = 0; v < n_; ++v) dual_[v] = max_weight_;
    allow_.assign(edges_.size(), 0);
    childs_.resize(n_);
    link_edge_.resize(n_);
    link_vw_.resize(n_);
    my_best_.resize(n_);
    has_my_best_.assign(n_, 0);
    for (std::int32_t b = 2 * n_ - 1; b >= n_; --b) free_.push_back(b);
  }

  std::vector<std::int32_t> run();

 private:
  double slack(std::int32_t k) const {
    return dual_[edges_[k].u] + dual_[edges_[k].v] - 2.0 * edges_[k].weight;
  }
  std::int32_t other(std::int32_t k, std::int32_t v) const {
    return edges_[k].u == v ? edges_[k].v : edges_[k].u;
  }
  bool nontrivial(std::int32_t b) const { return b >= n_; }
  std::vector<std::int32_t>& childs(std::int32_t b) { return childs_[b - n_]; }
  std::vector<std::int32_t>& link_edge(std::int32_t b) { return link_edge_[b - n_]; }
  std::vector<std::pair<std::int32_t, std::int32_t>>& link_vw(std::int32_t b) {
    return link_vw_[b - n_];
  }

  void leaves_of(std::int32_t b, std::vector<std::int32_t>& out) {
    if (!nontrivial(b)) {
      out.push_back(b);
      return;
    }
    for (std::int32_t c : childs(b)) leaves_of(c, out);
  }

  void assign_label(std::int32_t w, int t, std::pair<std::int32_t, std::int32_t> from);
  std::int32_t scan_blossom(std::int32_t v, std::int32_t w);
  void add_blossom(std::int32_t base, std::int32_t k);
  void expand_blossom(std::int32_t b, bool endstage);
  void augment_blossom(std::int32_t b, std::int32_t v);
  void augment_matching(std::int32_t v, std::int32_t w);

  std::int32_t n_;
  const std::vector<WeightedEdge>& edges_;
  double max_weight_;
  std::vector<std::vector<std::int32_t>> adj_;

  std::vector<std::int32_t> mate_;
  std::vector<int> label_;
  std::vector<std::pair<std::int32_t, std::int32_t>> label_edge_;
  std::vector<std::int32_t> in_blossom_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> base_;
  std::vector<std::int32_t> best_edge_;
  std::vector<double> dual_;
  std::vector<std::int8_t> allow_;
  std::vector<std::int32_t> queue_;
  std::vector<std::int32_t> free_;

  // Non-trivial blossom payloads, indexed by id - n.
  std::vector<std::vector<std::int32_t>> childs_;
  std::vector<std::vector<std::int32_t>> link_edge_;
  std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> link_vw_;
  std::vector<std::vector<std::int32_t>> my_best_;
  std::vector<std::int8_t> has_my_best_;
};

void Matcher::assign_label(std::int32_t w, int t, std::pair<std::int32_t, std::int32_t> from) {
  const std::int32_t b = in_blossom_[w];
  assert(label_[w] == 0 && label_[b] == 0);
  label_[w] = label_[b] = t;
  label_edge_[w] = label_edge_[b] = from;
  best_edge_[w] = best_edge_[b] = kNone;
  if (t == 1) {
    // S-blossom: queue its vertices for scanning.
    leaves_of(b, queue_);
  } else {
    // T-blossom: its base's mate becomes an S-vertex.
    const std::int32_t base = base_[b];
    assert(mate_[base] != kNone);
    assign_label(mate_[base], 1, {base, mate_[base]});
  }
}

std::int32_t Matcher::scan_blossom(std::int32_t v, std::int32_t w) {
  // Trace back from both ends, leaving breadcrumbs, until the paths meet
  // (a new blossom) or both hit single vertices (an augmenting path).
  std::vector<std::int32_t> path;
  std::int32_t base = kNone;
  while (v != kNone) {
    std::int32_t b = in_blossom_[v];
    if (label_[b] & 4) {
      base = base_[b];
      break;
    }
    assert(label_[b] == 1);
    path.push_back(b);
    label_[b] = 5;
    if (label_edge_[b].first == kNone) {
      assert(mate_[base_[b]] == kNone);
      v = kNone;
    } else {
      assert(label_edge_[b].first == mate_[base_[b]]);
      v = label_edge_[b].first;
      b = in_blossom_[v];
      assert(label_[b] == 2);
      v = label_edge_[b].first;
    }
    if (w != kNone) std::swap(v, w);
  }
  for (std::int32_t b : path) label_[b] = 1;
  return base;
}

void Matcher::add_blossom(std::int32_t base, std::int32_t k) {
  std::int32_t v = edges_[k].u;
  std::int32_t w = edges_[k].v;
  const std::int32_t bb = in_blossom_[base];
  std::int32_t bv = in_blossom_[v];
  std::int32_t bw = in_blossom_[w];

  assert(!free_.empty());
  const std::int32_t b = free_.back();
  free_.pop_back();
  base_[b] = base;
  parent_[b] = kNone;
  parent_[bb] = b;

  auto& path = childs(b);
  auto& edgs = link_edge(b);
  auto& vws = link_vw(b);
  path.clear();
  edgs.clear();
  vws.clear();

  // Trace back from v to the base.
  while (bv != bb) {
    parent_[bv] = b;
    path.push_back(bv);
    vws.push_back(label_edge_[bv]);
    assert(label_[bv] == 2 || (label_[bv] == 1 && label_edge_[bv].first == mate_[base_[bv]]));
    v = label_edge_[bv].first;
    bv = in_blossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(vws.begin(), vws.end());
  vws.push_back({edges_[k].u, edges_[k].v});
  // Trace back from w to the base.
  while (bw != bb) {
    parent_[bw] = b;
    path.push_back(bw);
    vws.push_back({label_edge_[bw].second, label_edge_[bw].first});
    assert(label_[bw] == 2 || (label_[bw] == 1 && label_edge_[bw].first == mate_[base_[bw]]));
    w = label_edge_[bw].first;
    bw = in_blossom_[w];
  }
  // Resolve edge ids for the connecting pairs.
  edgs.assign(vws.size(), kNone);
  for (std::size_t i = 0; i < vws.size(); ++i) {
    const auto [a, c] = vws[i];
    for (std::int32_t kk : adj_[a]) {
      if (other(kk, a) == c) {
        edgs[i] = kk;
        break;
      }
    }
    assert(edgs[i] != kNone);
  }

  assert(label_[bb] == 1);
  label_[b] = 1;
  label_edge_[b] = label_edge_[bb];
  dual_[b] = 0.0;

  std::vector<std::int32_t> leaves;
  leaves_of(b, leaves);
  for (std::int32_t x : leaves) {
    if (label_[in_blossom_[x]] == 2) queue_.push_back(x);
    in_blossom_[x] = b;
  }

  // Least-slack edges from the new blossom to every S-blossom.
  std::vector<std::int32_t> best_to(2 * n_, kNone);
  for (std::int32_t bc : path) {
    std::vector<std::int32_t> candidate_edges;
    if (nontrivial(bc) && has_my_best_[bc - n_]) {
      candidate_edges = std::move(my_best_[bc - n_]);
    } else {
      std::vector<std::int32_t> sub;
      leaves_of(bc, sub);
      for (std::int32_t x : sub) {
        candidate_edges.insert(candidate_edges.end(), adj_[x].begin(), adj_[x].end());
      }
    }
    for (std::int32_t kk : candidate_edges) {
      std::int32_t i = edges_[kk].u, j = edges_[kk].v;
      if (in_blossom_[j] == b) std::swap(i, j);
      const std::int32_t bj = in_blossom_[j];
      if (bj != b && label_[bj] == 1 &&
          (best_to[bj] == kNone || slack(kk) < slack(best_to[bj]))) {
        best_to[bj] = kk;
      }
    }
    if (nontrivial(bc)) {
      my_best_[bc - n_].clear();
      has_my_best_[bc - n_] = 0;
    }
    best_edge_[bc] = kNone;
  }
  auto& mine = my_best_[b - n_];
  mine.clear();
  for (std::int32_t kk : best_to) {
    if (kk != kNone) mine.push_back(kk);
  }
  has_my_best_[b - n_] = 1;
  best_edge_[b] = kNone;
  for (std::int32_t kk : mine) {
    if (best_edge_[b] == kNone || slack(kk) < slack(best_edge_[b])) best_edge_[b] = kk;
  }
}

void Matcher::expand_blossom(std::int32_t b, bool endstage) {
  auto& path = childs(b);
  const int len = static_cast<int>(path.size());
  auto wrap = [&](int j) { return j < 0 ? j + len : j; };

  for (std::int32_t s : path) {
    parent_[s] = kNone;
    if (!nontrivial(s)) {
      in_blossom_[s] = s;
    } else if (endstage && dual_[s] == 0.0) {
      expand_blossom(s, endstage);
    } else {
      std::vector<std::int32_t> sub;
      leaves_of(s, sub);
      for (std::int32_t x : sub) in_blossom_[x] = s;
    }
  }

  if (!endstage && label_[b] == 2) {
    // Relabel the sub-blossoms along the path from the entry child to the
    // base, making the traversed edges allowable.
    const std::int32_t entry_child = in_blossom_[label_edge_[b].second];
    int j = static_cast<int>(std::find(path.begin(), path.end(), entry_child) - path.begin());
    int jstep;
    if (j & 1) {
      j -= len;
      jstep = 1;
    } else {
      jstep = -1;
    }
    auto [v, w] = label_edge_[b];
    auto& edgs = link_edge(b);
    auto& vws = link_vw(b);
    while (j != 0) {
      std::int32_t q;
      std::int32_t ek;
      if (jstep == 1) {
        q = vws[wrap(j)].second;
        ek = edgs[wrap(j)];
      } else {
        q = vws[wrap(j - 1)].first;
        ek = edgs[wrap(j - 1)];
      }
      label_[w] = 0;
      label_[q] = 0;
      assign_label(w, 2, {v, w});
      allow_[ek] = 1;
      j += jstep;
      std::int32_t ek2;
      if (jstep == 1) {
        v = vws[wrap(j)].first;
        w = vws[wrap(j)].second;
        ek2 = edgs[wrap(j)];
      } else {
        w = vws[wrap(j - 1)].first;
        v = vws[wrap(j - 1)].second;
        ek2 = edgs[wrap(j - 1)];
      }
      allow_[ek2] = 1;
      j += jstep;
    }
    // Relabel the base sub-blossom without stepping through to its mate.
    const std::int32_t bw = path[0];
    label_[w] = label_[bw] = 2;
    label_edge_[w] = label_edge_[bw] = {v, w};
    best_edge_[bw] = kNone;
    j += jstep;
    while (path[wrap(j)] != entry_child) {
      const std::int32_t bv = path[wrap(j)];
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      std::vector<std::int32_t> sub;
      leaves_of(bv, sub);
      std::int32_t reached = kNone;
      for (std::int32_t x : sub) {
        if (label_[x] != 0) {
          reached = x;
          break;
        }
      }
      if (reached != kNone) {
        assert(label_[reached] == 2);
        assert(in_blossom_[reached] == bv);
        label_[reached] = 0;
        label_[mate_[base_[bv]]] = 0;
        assign_label(reached, 2, label_edge_[reached]);
      }
      j += jstep;
    }
  }

  label_[b] = 0;
  label_edge_[b] = {kNone, kNone};
  best_edge_[b] = kNone;
  parent_[b] = kNone;
  base_[b] = kNone;
  childs(b).clear();
  link_edge(b).clear();
  link_vw(b).clear();
  my_best_[b - n_].clear();
  has_my_best_[b - n_] = 0;
  free_.push_back(b);
}

void Matcher::augment_blossom(std::int32_t b, std::int32_t v) {
  // Bubble up from v to an immediate sub-blossom of b.
  std::int32_t t = v;
  while (parent_[t] != b) t = parent_[t];
  if (nontrivial(t)) augment_blossom(t, v);

  auto& path = childs(b);
  auto& vws = link_vw(b);
  auto& edgs = link_edge(b);
  const int len = static_cast<int>(path.size());
  auto wrap = [&](int j) { return j < 0 ? j + len : j; };

  const int i = static_cast<int>(std::find(path.begin(), path.end(), t) - path.begin());
  int j = i;
  int jstep;
  if (i & 1) {
    j -= len;
    jstep = 1;
  } else {
    jstep = -1;
  }
  while (j != 0) {
    j += jstep;
    std::int32_t tt = path[wrap(j)];
    std::int32_t w, x;
    if (jstep == 1) {
      w = vws[wrap(j)].first;
      x = vws[wrap(j)].second;
    } else {
      x = vws[wrap(j - 1)].first;
      w = vws[wrap(j - 1)].second;
    }
    if (nontrivial(tt)) augment_blossom(tt, w);
    j += jstep;
    tt = path[wrap(j)];
    if (nontrivial(tt)) augment_blossom(tt, x);
    mate_[w] = x;
    mate_[x] = w;
  }
  std::rotate(path.begin(), path.begin() + i, path.end());
  std::rotate(vws.begin(), vws.begin() + i, vws.end());
  std::rotate(edgs.begin(), edgs.begin() + i, edgs.end());
  base_[b] = base_[path[0]];
  assert(base_[b] == v);
}

void Matcher::augment_matching(std::int32_t v, std::int32_t w) {
  for (auto [s, j] : {std::pair{v, w}, std::pair{w, v}}) {
    while (true) {
      const std::int32_t bs = in_blossom_[s];
      assert(label_[bs] == 1);
      assert((label_edge_[bs].first == kNone && mate_[base_[bs]] == kNone) ||
             label_edge_[bs].first == mate_[base_[bs]]);
      if (nontrivial(bs)) augment_blossom(bs, s);
      mate_[s] = j;
      if (label_edge_[bs].first == kNone) break;  // reached a single vertex
      const std::int32_t t = label_edge_[bs].first;
      const std::int32_t bt = in_blossom_[t];
      assert(label_[bt] == 2);
      s = label_edge_[bt].first;
      j = label_edge_[bt].second;
      assert(base_[bt] == t);
      if (nontrivial(bt)) augment_blossom(bt, j);
      mate_[j] = s;
    }
  }
}

std::vector<std::int32_t> Matcher::run() {
  if (n_ == 0) return mate_;
  while (true) {
    // A stage: find one augmenting path and flip it.
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(label_edge_.begin(), label_edge_.end(), std::pair{kNone, kNone});
    std::fill(best_edge_.begin(), best_edge_.end(), kNone);
    for (std::int32_t b = n_; b < 2 * n_; ++b) {
      my_best_[b - n_].clear();
      has_my_best_[b - n_] = 0;
    }
    std::fill(allow_.begin(), allow_.end(), 0);
    queue_.clear();

    for (std::int32_t v = 0; v < n_; ++v) {
      if (mate_[v] == kNone && label_[in_blossom_[v]] == 0) {
        assign_label(v, 1, {kNone, kNone});
      }
    }

    bool augmented = false;
    while (true) {
      // A substage: grow the forest or pump the duals.
      while (!queue_.empty() && !augmented) {
        const std::int32_t v = queue_.back();
        queue_.pop_back();
        assert(label_[in_blossom_[v]] == 1);
        for (std::int32_t k : adj_[v]) {
          const std::int32_t w = other(k, v);
          const std::int32_t bv = in_blossom_[v];
          const std::int32_t bw = in_blossom_[w];
          if (bv == bw) continue;
          double kslack = 0.0;
          if (!allow_[k]) {
            kslack = slack(k);
            if (kslack <= 0.0) allow_[k] = 1;
          }
          if (allow_[k]) {
            if (label_[bw] == 0) {
              assign_label(w, 2, {v, w});
            } else if (label_[bw] == 1) {
              const std::int32_t base = scan_blossom(v, w);
              if (base != kNone) {
                add_blossom(base, k);
              } else {
                augment_matching(v, w);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              assert(label_[bw] == 2);
              label_[w] = 2;
              label_edge_[w] = {v, w};
            }
          } else if (label_[bw] == 1) {
            if (best_edge_[bv] == kNone || kslack < slack(best_edge_[bv])) best_edge_[bv] = k;
          } else if (label_[w] == 0) {
            if (best_edge_[w] == kNone || kslack < slack(best_edge_[w])) best_edge_[w] = k;
          }
        }
      }
      if (augmented) break;

      // Dual adjustment.
      int deltatype = 1;
      double delta = std::numeric_limits<double>::infinity();
      std::int32_t deltaedge = kNone, deltablossom = kNone;
      for (std::int32_t v = 0; v < n_; ++v) delta = std::min(delta, dual_[v]);

      for (std::int32_t v = 0; v < n_; ++v) {
        if (label_[in_blossom_[v]] == 0 && best_edge_[v] != kNone) {
          const double d = slack(best_edge_[v]);
          if (d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = best_edge_[v];
          }
        }
      }
      for (std::int32_t b = 0; b < 2 * n_; ++b) {
        if (b >= n_ && base_[b] == kNone) continue;
        if (parent_[b] == kNone && label_[b] == 1 && best_edge_[b] != kNone) {
          const double d = slack(best_edge_[b]) / 2.0;
          if (d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = best_edge_[b];
          }
        }
      }
      for (std::int32_t b = n_; b < 2 * n_; ++b) {
        if (base_[b] != kNone && parent_[b] == kNone && label_[b] == 2 && dual_[b] < delta) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }

      for (std::int32_t v = 0; v < n_; ++v) {
        const int l = label_[in_blossom_[v]];
        if (l == 1) {
          dual_[v] -= delta;
        } else if (l == 2) {
          dual_[v] += delta;
        }
      }
      for (std::int32_t b = n_; b < 2 * n_; ++b) {
        if (base_[b] != kNone && parent_[b] == kNone) {
          if (label_[b] == 1) {
            dual_[b] += delta;
          } else if (label_[b] == 2) {
            dual_[b] -= delta;
          }
        }
      }

      if (deltatype == 1) {
        break;  // optimum reached
      } else if (deltatype == 2) {
        allow_[deltaedge] = 1;
        std::int32_t i = edges_[deltaedge].u;
        if (label_[in_blossom_[i]] != 1) i = edges_[deltaedge].v;
        assert(label_[in_blossom_[i]] == 1);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allow_[deltaedge] = 1;
        const std::int32_t i = edges_[deltaedge].u;
        assert(label_[in_blossom_[i]] == 1);
        queue_.push_back(i);
      } else {
        expand_blossom(deltablossom, false);
      }
    }

    if (!augmented) break;

    // End of stage: expand S-blossoms whose dual dropped to zero.
    for (std::int32_t b = n_; b < 2 * n_; ++b) {
      if (base_[b] != kNone && parent_[b] == kNone && label_[b] == 1 && dual_[b] == 0.0) {
        expand_blossom(b, true);
      }
    }
  }
  return mate_;
}

}  // namespace

std::vector<std::int32_t> max_weight_matching(std::int32_t num_vertices,
                                              const std::vector<WeightedEdge>& edges) {
  Matcher m(num_vertices, edges);
  return m.run();
}

}  // namespace mdgs
