#include "qtopo/small_graphs.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <tuple>

#include "qtopo/planarity.hpp"

namespace qtopo {

namespace {

using Rows = std::vector<std::uint8_t>;

Rows rows_of(const CouplingGraph& g) {
  if (g.size() > kSmallGraphCap) {
    throw std::invalid_argument("graph of " + std::to_string(g.size()) +
                                " vertexes exceeds the small-graph cap of " +
                                std::to_string(kSmallGraphCap));
  }
  Rows rows(g.size(), 0);
  for (const Edge& e : g.edges()) {
    rows[e.u] |= static_cast<std::uint8_t>(1u << e.v);
    rows[e.v] |= static_cast<std::uint8_t>(1u << e.u);
  }
  return rows;
}

std::uint32_t code_for(const Rows& rows, const std::vector<Vertex>& order) {
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      code = (code << 1) | ((rows[order[i]] >> order[j]) & 1u);
    }
  }
  return code;
}

// Iterated degree refinement; returns an isomorphism-invariant color per
// vertex.
std::vector<int> refine(const Rows& rows) {
  const std::size_t n = rows.size();
  std::vector<int> color(n);
  for (std::size_t v = 0; v < n; ++v) color[v] = std::popcount(static_cast<unsigned>(rows[v]));
  std::size_t classes = 0;
  while (true) {
    std::vector<std::pair<int, std::vector<int>>> sig(n);
    for (std::size_t v = 0; v < n; ++v) {
      sig[v].first = color[v];
      for (std::size_t w = 0; w < n; ++w) {
        if ((rows[v] >> w) & 1u) sig[v].second.push_back(color[w]);
      }
      std::sort(sig[v].second.begin(), sig[v].second.end());
    }
    auto uniq = sig;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (std::size_t v = 0; v < n; ++v) {
      color[v] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[v]) - uniq.begin());
    }
    if (uniq.size() == classes) break;
    classes = uniq.size();
  }
  return color;
}

std::pair<std::uint32_t, std::vector<Vertex>> canonicalize(const Rows& rows) {
  const std::size_t n = rows.size();
  const auto color = refine(rows);
  std::vector<Vertex> order(n);
  for (std::size_t v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return color[a] < color[b]; });

  // cells of equal color, permuted independently
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && color[order[j]] == color[order[i]]) ++j;
    cells.emplace_back(i, j);
    i = j;
  }

  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  std::vector<Vertex> best_order = order;
  auto visit = [&](auto&& self, std::size_t cell) -> void {
    if (cell == cells.size()) {
      const auto c = code_for(rows, order);
      if (c < best) {
        best = c;
        best_order = order;
      }
      return;
    }
    auto first = order.begin() + static_cast<std::ptrdiff_t>(cells[cell].first);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(cells[cell].second);
    std::sort(first, last);
    do {
      self(self, cell + 1);
    } while (std::next_permutation(first, last));
  };
  visit(visit, 0);
  return {best, best_order};
}

CouplingGraph from_rows(const Rows& rows) {
  CouplingGraph g(rows.size());
  for (std::size_t u = 0; u < rows.size(); ++u) {
    for (std::size_t v = u + 1; v < rows.size(); ++v) {
      if ((rows[u] >> v) & 1u) g.add_edge(u, v);
    }
  }
  return g;
}

Rows permuted(const Rows& rows, const std::vector<Vertex>& order) {
  const std::size_t n = rows.size();
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  Rows out(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if ((rows[u] >> v) & 1u) out[pos[u]] |= static_cast<std::uint8_t>(1u << pos[v]);
    }
  }
  return out;
}

std::size_t edge_count(const Rows& rows) {
  std::size_t twice = 0;
  for (auto r : rows) twice += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(r)));
  return twice / 2;
}

bool within(const Rows& rows, const ConstraintSet& c) {
  for (auto r : rows) {
    if (static_cast<std::size_t>(std::popcount(static_cast<unsigned>(r))) > c.max_degree) {
      return false;
    }
  }
  return !c.require_planar || rows.size() < 5 || is_planar(from_rows(rows));
}

}  // namespace

CanonicalCode canonical_code(const CouplingGraph& g) {
  const Rows rows = rows_of(g);
  return {rows.size(), canonicalize(rows).first};
}

std::vector<Vertex> canonical_order(const CouplingGraph& g) {
  return canonicalize(rows_of(g)).second;
}

bool are_isomorphic(const CouplingGraph& a, const CouplingGraph& b) {
  if (a.size() != b.size() || a.edge_count() != b.edge_count()) {
    // still enforce the size contract on both operands
    rows_of(a);
    rows_of(b);
    return false;
  }
  return canonical_code(a) == canonical_code(b);
}

std::vector<CouplingGraph> enumerate_connected_graphs(std::size_t n,
                                                      const ConstraintSet& constraints,
                                                      std::size_t max_edges) {
  validate(constraints);
  if (n < 1 || n > kSmallGraphCap) {
    throw std::invalid_argument("enumeration supports 1 to " + std::to_string(kSmallGraphCap) +
                                " vertexes, got " + std::to_string(n));
  }

  using Key = std::tuple<std::size_t, std::size_t, bool, std::size_t>;
  static std::mutex mutex;
  static std::map<Key, std::vector<CouplingGraph>> cache;
  const Key key{n, constraints.max_degree, constraints.require_planar, max_edges};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  // Every connected graph has a vertex whose removal leaves it connected, and
  // the degree bound, planarity and the edge budget all survive vertex
  // deletion; so growing connected graphs one vertex at a time reaches every
  // class.
  std::map<std::uint32_t, Rows> level{{0u, Rows(1, 0)}};
  for (std::size_t size = 2; size <= n; ++size) {
    std::map<std::uint32_t, Rows> next;
    const std::size_t remaining = n - size;
    for (const auto& [code, rows] : level) {
      for (unsigned mask = 1; mask < (1u << (size - 1)); ++mask) {
        Rows grown = rows;
        grown.push_back(static_cast<std::uint8_t>(mask));
        for (std::size_t v = 0; v + 1 < size; ++v) {
          if ((mask >> v) & 1u) grown[v] |= static_cast<std::uint8_t>(1u << (size - 1));
        }
        const std::size_t e = edge_count(grown);
        if (e + remaining > max_edges) continue;
        if (!within(grown, constraints)) continue;
        auto [c, order] = canonicalize(grown);
        if (!next.count(c)) next.emplace(c, permuted(grown, order));
      }
    }
    level = std::move(next);
  }

  std::vector<std::pair<std::size_t, std::uint32_t>> keys;
  for (const auto& [code, rows] : level) {
    if (edge_count(rows) <= max_edges) keys.emplace_back(edge_count(rows), code);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<CouplingGraph> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(from_rows(level.at(k.second)));

  std::lock_guard lock(mutex);
  cache.emplace(key, out);
  return out;
}

}  // namespace qtopo
