#include "qtopo/planarity.hpp"

#include <algorithm>
#include <vector>

namespace qtopo {

namespace {

constexpr int kNone = -1;

struct Interval {
  int low = kNone;
  int high = kNone;
  bool empty() const { return low == kNone && high == kNone; }
};

struct ConflictPair {
  Interval left;
  Interval right;
};

// Orientation phase computes lowpoints and nesting depths over a DFS tree;
// the testing phase maintains a stack of conflict pairs of return-edge
// intervals. Edges are numbered once and oriented on first traversal.
//
// Buffers live in a thread-local instance and are only resized, since the
// designer calls this for every candidate edge.
class LrPlanarity {
 public:
  bool run(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
    n_ = static_cast<int>(n);
    m_ = edges.size();
    if (n_ > 2 && m_ > 3 * n - 6) return false;

    offset_.assign(n + 1, 0);
    for (auto [a, b] : edges) {
      ++offset_[static_cast<std::size_t>(a) + 1];
      ++offset_[static_cast<std::size_t>(b) + 1];
    }
    for (std::size_t v = 0; v < n; ++v) offset_[v + 1] += offset_[v];
    fill_.assign(offset_.begin(), offset_.end() - 1);
    adj_.resize(2 * m_);
    for (std::size_t id = 0; id < m_; ++id) {
      const auto [a, b] = edges[id];
      adj_[fill_[a]++] = {b, static_cast<int>(id)};
      adj_[fill_[b]++] = {a, static_cast<int>(id)};
    }
    src_.assign(m_, kNone);
    dst_.assign(m_, kNone);
    lowpt_.assign(m_, 0);
    lowpt2_.assign(m_, 0);
    nesting_.assign(m_, 0);
    ref_.assign(m_, kNone);
    lowpt_edge_.assign(m_, kNone);
    stack_bottom_.assign(m_, 0);
    height_.assign(n, kNone);
    parent_edge_.assign(n, kNone);
    out_.resize(2 * m_);
    out_count_.assign(n, 0);
    stack_.clear();
    roots_.clear();

    for (int v = 0; v < n_; ++v) {
      if (height_[v] == kNone) {
        height_[v] = 0;
        roots_.push_back(v);
        orient(v);
      }
    }
    for (int v = 0; v < n_; ++v) {
      // insertion sort keeps equal nesting depths in traversal order
      int* first = out_.data() + offset_[v];
      for (int i = 1; i < out_count_[v]; ++i) {
        const int x = first[i];
        int j = i;
        for (; j > 0 && nesting_[first[j - 1]] > nesting_[x]; --j) first[j] = first[j - 1];
        first[j] = x;
      }
    }
    for (int r : roots_) {
      if (!test(r)) return false;
    }
    return true;
  }

 private:
  void orient(int v) {
    const int e = parent_edge_[v];
    for (int k = offset_[v]; k < offset_[v + 1]; ++k) {
      const auto [w, id] = adj_[k];
      if (src_[id] != kNone) continue;
      src_[id] = v;
      dst_[id] = w;
      out_[offset_[v] + out_count_[v]++] = id;
      lowpt_[id] = height_[v];
      lowpt2_[id] = height_[v];
      if (height_[w] == kNone) {
        parent_edge_[w] = id;
        height_[w] = height_[v] + 1;
        orient(w);
      } else {
        lowpt_[id] = height_[w];
      }
      nesting_[id] = 2 * lowpt_[id];
      if (lowpt2_[id] < height_[v]) ++nesting_[id];  // chordal
      if (e != kNone) {
        if (lowpt_[id] < lowpt_[e]) {
          lowpt2_[e] = std::min(lowpt_[e], lowpt2_[id]);
          lowpt_[e] = lowpt_[id];
        } else if (lowpt_[id] > lowpt_[e]) {
          lowpt2_[e] = std::min(lowpt2_[e], lowpt_[id]);
        } else {
          lowpt2_[e] = std::min(lowpt2_[e], lowpt2_[id]);
        }
      }
    }
  }

  bool conflicting(const Interval& i, int b) const {
    return !i.empty() && lowpt_[i.high] > lowpt_[b];
  }

  int lowest(const ConflictPair& p) const {
    if (p.left.empty()) return lowpt_[p.right.low];
    if (p.right.empty()) return lowpt_[p.left.low];
    return std::min(lowpt_[p.left.low], lowpt_[p.right.low]);
  }

  bool test(int v) {
    const int e = parent_edge_[v];
    const int* outs = out_.data() + offset_[v];
    for (int i = 0; i < out_count_[v]; ++i) {
      const int ei = outs[i];
      const int w = dst_[ei];
      stack_bottom_[ei] = stack_.size();
      if (ei == parent_edge_[w]) {
        if (!test(w)) return false;
      } else {
        lowpt_edge_[ei] = ei;
        stack_.push_back({Interval{}, Interval{ei, ei}});
      }
      if (lowpt_[ei] < height_[v]) {
        if (i == 0) {
          lowpt_edge_[e] = lowpt_edge_[ei];
        } else if (!add_constraints(ei, e)) {
          return false;
        }
      }
    }
    if (e != kNone) remove_back_edges(e);
    return true;
  }

  bool add_constraints(int ei, int e) {
    ConflictPair p;
    // merge return edges of ei into p.right
    do {
      ConflictPair q = stack_.back();
      stack_.pop_back();
      if (!q.left.empty()) std::swap(q.left, q.right);
      if (!q.left.empty()) return false;
      if (lowpt_[q.right.low] > lowpt_[e]) {
        if (p.right.empty()) {
          p.right = q.right;
        } else {
          ref_[p.right.low] = q.right.high;
        }
        p.right.low = q.right.low;
      } else {
        ref_[q.right.low] = lowpt_edge_[e];
      }
    } while (stack_.size() != stack_bottom_[ei]);

    // merge conflicting return edges of earlier siblings into p.left
    while (!stack_.empty() &&
           (conflicting(stack_.back().left, ei) || conflicting(stack_.back().right, ei))) {
      ConflictPair q = stack_.back();
      stack_.pop_back();
      if (conflicting(q.right, ei)) std::swap(q.left, q.right);
      if (conflicting(q.right, ei)) return false;
      if (p.right.low != kNone) ref_[p.right.low] = q.right.high;
      if (q.right.low != kNone) p.right.low = q.right.low;
      if (p.left.empty()) {
        p.left = q.left;
      } else {
        ref_[p.left.low] = q.left.high;
      }
      p.left.low = q.left.low;
    }
    if (!(p.left.empty() && p.right.empty())) stack_.push_back(p);
    return true;
  }

  void remove_back_edges(int e) {
    const int u = src_[e];
    while (!stack_.empty() && lowest(stack_.back()) == height_[u]) stack_.pop_back();
    if (!stack_.empty()) {
      ConflictPair p = stack_.back();
      stack_.pop_back();
      while (p.left.high != kNone && dst_[p.left.high] == u) p.left.high = ref_[p.left.high];
      if (p.left.high == kNone && p.left.low != kNone) {
        ref_[p.left.low] = p.right.low;
        p.left.low = kNone;
      }
      while (p.right.high != kNone && dst_[p.right.high] == u) p.right.high = ref_[p.right.high];
      if (p.right.high == kNone && p.right.low != kNone) {
        ref_[p.right.low] = p.left.low;
        p.right.low = kNone;
      }
      stack_.push_back(p);
    }
    if (lowpt_[e] < height_[u]) {
      const int hl = stack_.back().left.high;
      const int hr = stack_.back().right.high;
      ref_[e] = (hl != kNone && (hr == kNone || lowpt_[hl] > lowpt_[hr])) ? hl : hr;
    }
  }

  int n_ = 0;
  std::size_t m_ = 0;
  std::vector<int> offset_, fill_;
  std::vector<std::pair<int, int>> adj_;  // (neighbor, edge id), grouped by vertex
  std::vector<int> src_, dst_, lowpt_, lowpt2_, nesting_, ref_, lowpt_edge_;
  std::vector<std::size_t> stack_bottom_;
  std::vector<int> height_, parent_edge_;
  std::vector<int> out_, out_count_;  // out edges share the adjacency offsets
  std::vector<int> roots_;
  std::vector<ConflictPair> stack_;
};

}  // namespace

bool is_planar_with(const CouplingGraph& g, std::span<const std::pair<Vertex, Vertex>> extra) {
  thread_local LrPlanarity lr;
  thread_local std::vector<std::pair<int, int>> edges;
  edges.clear();
  for (Vertex u = 0; u < g.size(); ++u) {
    for (Vertex w : g.neighbors(u)) {
      if (u < w) edges.emplace_back(static_cast<int>(u), static_cast<int>(w));
    }
  }
  for (auto [u, v] : extra) {
    if (u == v || g.has_edge(u, v)) continue;
    const std::pair<int, int> k{static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))};
    if (std::find(edges.begin() + static_cast<std::ptrdiff_t>(g.edge_count()), edges.end(), k) ==
        edges.end()) {
      edges.push_back(k);
    }
  }
  return lr.run(g.size(), edges);
}

bool is_planar(const CouplingGraph& g) { return is_planar_with(g, {}); }

}  // namespace qtopo
