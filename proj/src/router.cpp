#include "qtopo/router.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "qtopo/random.hpp"

namespace qtopo {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

using Distances = std::vector<std::vector<std::uint32_t>>;

Distances all_pairs(const CouplingGraph& g) {
  Distances d(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    const auto row = shortest_paths(g, v);
    d[v].resize(g.size());
    for (Vertex u = 0; u < g.size(); ++u) {
      d[v][u] = row[u] == kUnreachable ? std::numeric_limits<std::uint32_t>::max()
                                       : static_cast<std::uint32_t>(row[u]);
    }
  }
  return d;
}

void check_map(const Circuit& c, const CouplingGraph& pcg, const QubitMap& map) {
  if (c.num_qubits() > pcg.size()) {
    throw std::invalid_argument("circuit has " + std::to_string(c.num_qubits()) +
                                " qubits but the coupling graph only " + std::to_string(pcg.size()));
  }
  if (map.size() != c.num_qubits()) throw std::invalid_argument("initial map does not cover every qubit");
  std::vector<char> used(pcg.size(), 0);
  for (Vertex p : map) {
    if (p >= pcg.size() || used[p]) throw std::invalid_argument("initial map is not an injection into the graph");
    used[p] = 1;
  }
  if (map.empty()) return;
  const auto reach = shortest_paths(pcg, map.front());
  for (Vertex p : map) {
    if (reach[p] == kUnreachable) throw std::invalid_argument("mapped vertexes are not connected");
  }
}

class Router {
 public:
  Router(const Circuit& c, const CouplingGraph& pcg, const Distances& dist, const QubitMap& initial,
         const RouterOptions& options)
      : c_(c), pcg_(pcg), dist_(dist), opt_(options), rng_(options.seed) {
    l2p_ = initial;
    p2l_.assign(pcg.size(), kNone);
    for (Qubit q = 0; q < l2p_.size(); ++q) p2l_[l2p_[q]] = q;
    build_dag();
    decay_.assign(pcg.size(), 1.0);
    entries_.resize(pcg.size());
    mark_.assign(c.size(), 0);
  }

  RoutedCircuit run() {
    RoutedCircuit out;
    out.circuit = Circuit(pcg_.size(), c_.name());
    for (const auto& reg : c_.cregs()) out.circuit.add_creg(reg);
    out.initial_map = l2p_;
    out.g_ori = count_two_qubit_gates(c_);

    std::vector<std::size_t> front;
    for (std::size_t g = 0; g < c_.size(); ++g) {
      if (preds_[g] == 0) front.push_back(g);
    }
    std::size_t since_progress = 0;
    std::size_t since_reset = 0;
    // swaps without executing a gate before falling back to a shortest path
    const std::size_t patience = 10 * std::max<std::size_t>(pcg_.size(), 4);

    while (!front.empty()) {
      std::vector<std::size_t> blocked;
      bool progressed = false;
      for (std::size_t i = 0; i < front.size(); ++i) {
        const std::size_t g = front[i];
        if (!executable(g)) {
          blocked.push_back(g);
          continue;
        }
        emit(out, g);
        progressed = true;
        for (std::size_t s : succs_[g]) {
          if (--preds_[s] == 0) front.push_back(s);
        }
      }
      front = std::move(blocked);
      if (front.empty()) break;
      if (progressed) {
        std::fill(decay_.begin(), decay_.end(), 1.0);
        since_progress = 0;
        since_reset = 0;
        continue;
      }

      if (since_progress >= patience) {
        force(out, front);
        since_progress = 0;
        continue;
      }
      const auto [p, q] = choose_swap(front);
      swap(out, p, q);
      ++since_progress;
      decay_[p] += opt_.decay;
      decay_[q] += opt_.decay;
      if (++since_reset >= opt_.decay_reset) {
        std::fill(decay_.begin(), decay_.end(), 1.0);
        since_reset = 0;
      }
    }
    out.final_map = l2p_;
    return out;
  }

 private:
  void build_dag() {
    preds_.assign(c_.size(), 0);
    succs_.assign(c_.size(), {});
    std::vector<std::size_t> last(c_.num_qubits(), kNone);
    for (std::size_t g = 0; g < c_.size(); ++g) {
      for (Qubit q : c_.gates()[g].qubits) {
        const std::size_t p = last[q];
        if (p != kNone && (succs_[p].empty() || succs_[p].back() != g)) {
          succs_[p].push_back(g);
          ++preds_[g];
        }
        last[q] = g;
      }
    }
  }

  bool executable(std::size_t g) const {
    const Gate& gate = c_.gates()[g];
    if (!gate.is_two_qubit()) return true;
    return pcg_.has_edge(l2p_[gate.qubits[0]], l2p_[gate.qubits[1]]);
  }

  void emit(RoutedCircuit& out, std::size_t g) {
    Gate gate = c_.gates()[g];
    for (Qubit& q : gate.qubits) q = l2p_[q];
    out.circuit.add(std::move(gate));
    out.inserted.push_back(false);
  }

  void swap(RoutedCircuit& out, Vertex p, Vertex q) {
    out.circuit.add(Gate::two_qubit("swap", p, q));
    out.inserted.push_back(true);
    ++out.g_add;
    const std::size_t a = p2l_[p], b = p2l_[q];
    p2l_[p] = b;
    p2l_[q] = a;
    if (a != kNone) l2p_[a] = q;
    if (b != kNone) l2p_[b] = p;
  }

  std::uint32_t distance(std::size_t g) const {
    const Gate& gate = c_.gates()[g];
    return dist_[l2p_[gate.qubits[0]]][l2p_[gate.qubits[1]]];
  }

  // Up to extended_size two-qubit gates reachable from the front layer.
  std::vector<std::size_t> extended_set(const std::vector<std::size_t>& front) {
    std::vector<std::size_t> ext;
    ++stamp_;
    std::deque<std::size_t> queue;
    for (std::size_t g : front) {
      mark_[g] = stamp_;
      queue.push_back(g);
    }
    while (!queue.empty() && ext.size() < opt_.extended_size) {
      const std::size_t g = queue.front();
      queue.pop_front();
      for (std::size_t s : succs_[g]) {
        if (mark_[s] == stamp_) continue;
        mark_[s] = stamp_;
        if (c_.gates()[s].is_two_qubit()) {
          ext.push_back(s);
          if (ext.size() == opt_.extended_size) break;
        }
        queue.push_back(s);
      }
    }
    return ext;
  }

  std::pair<Vertex, Vertex> choose_swap(const std::vector<std::size_t>& front) {
    std::vector<std::size_t> two;
    for (std::size_t g : front) {
      if (c_.gates()[g].is_two_qubit()) two.push_back(g);
    }
    const auto ext = extended_set(front);

    // entries_[p] lists (set, gate) pairs with an operand on physical p
    std::vector<Vertex> touched;
    auto index = [&](const std::vector<std::size_t>& set, int which) {
      for (std::size_t g : set) {
        for (Qubit q : c_.gates()[g].qubits) {
          const Vertex p = l2p_[q];
          if (entries_[p].empty()) touched.push_back(p);
          entries_[p].push_back({which, g});
        }
      }
    };
    index(two, 0);
    index(ext, 1);

    double front_sum = 0.0, ext_sum = 0.0;
    for (std::size_t g : two) front_sum += distance(g);
    for (std::size_t g : ext) ext_sum += distance(g);

    std::vector<std::pair<Vertex, Vertex>> candidates;
    for (std::size_t g : two) {
      for (Qubit q : c_.gates()[g].qubits) {
        const Vertex p = l2p_[q];
        for (Vertex n : pcg_.neighbors(p)) candidates.emplace_back(std::min(p, n), std::max(p, n));
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    auto moved = [](Vertex x, Vertex p, Vertex q) { return x == p ? q : x == q ? p : x; };
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<Vertex, Vertex>> ties;
    for (const auto& [p, q] : candidates) {
      double df = 0.0, de = 0.0;
      for (Vertex end : {p, q}) {
        for (const auto& [which, g] : entries_[end]) {
          const Gate& gate = c_.gates()[g];
          const Vertex a = l2p_[gate.qubits[0]], b = l2p_[gate.qubits[1]];
          // a gate on both p and q is counted once, from p
          if (end == q && (a == p || b == p)) continue;
          const double delta = static_cast<double>(dist_[moved(a, p, q)][moved(b, p, q)]) -
                               static_cast<double>(dist_[a][b]);
          (which == 0 ? df : de) += delta;
        }
      }
      double h = (front_sum + df) / static_cast<double>(two.size());
      if (!ext.empty()) h += opt_.extended_weight * (ext_sum + de) / static_cast<double>(ext.size());
      h *= std::max(decay_[p], decay_[q]);
      if (h < best - 1e-12) {
        best = h;
        ties.clear();
      }
      if (h <= best + 1e-12) ties.emplace_back(p, q);
    }
    for (Vertex p : touched) entries_[p].clear();
    return ties[ties.size() == 1 ? 0 : rng_.below(ties.size())];
  }

  // Walks the first blocked two-qubit gate together along a shortest path.
  void force(RoutedCircuit& out, const std::vector<std::size_t>& front) {
    for (std::size_t g : front) {
      const Gate& gate = c_.gates()[g];
      if (!gate.is_two_qubit()) continue;
      const Qubit a = gate.qubits[0], b = gate.qubits[1];
      while (dist_[l2p_[a]][l2p_[b]] > 1) {
        const Vertex from = l2p_[a];
        for (Vertex n : pcg_.neighbors(from)) {
          if (dist_[n][l2p_[b]] + 1 == dist_[from][l2p_[b]]) {
            swap(out, from, n);
            break;
          }
        }
      }
      return;
    }
  }

  const Circuit& c_;
  const CouplingGraph& pcg_;
  const Distances& dist_;
  RouterOptions opt_;
  Rng rng_;
  QubitMap l2p_;
  std::vector<std::size_t> p2l_;
  std::vector<std::size_t> preds_;
  std::vector<std::vector<std::size_t>> succs_;
  std::vector<double> decay_;
  std::vector<std::vector<std::pair<int, std::size_t>>> entries_;
  std::vector<std::uint64_t> mark_;
  std::uint64_t stamp_ = 0;
};

Circuit two_qubit_skeleton(const Circuit& c, bool reversed) {
  Circuit s(c.num_qubits());
  std::vector<const Gate*> gates;
  for (const Gate& g : c.gates()) {
    if (g.is_two_qubit()) gates.push_back(&g);
  }
  if (reversed) std::reverse(gates.begin(), gates.end());
  for (const Gate* g : gates) s.add(Gate::two_qubit(g->name, g->qubits[0], g->qubits[1]));
  return s;
}

}  // namespace

std::optional<double> g_ap(const RoutedCircuit& r) {
  if (r.g_ori == 0) return std::nullopt;
  return static_cast<double>(r.g_add) / static_cast<double>(r.g_ori);
}

RoutedCircuit route(const Circuit& c, const CouplingGraph& pcg, const QubitMap& initial,
                    const RouterOptions& options) {
  check_map(c, pcg, initial);
  const auto dist = all_pairs(pcg);
  return Router(c, pcg, dist, initial, options).run();
}

std::string_view to_string(MapPolicy policy) {
  return policy == MapPolicy::Identity ? "identity" : "reverse_traversal";
}

MapPolicy parse_map_policy(std::string_view name) {
  if (name == "identity") return MapPolicy::Identity;
  if (name == "reverse_traversal") return MapPolicy::ReverseTraversal;
  throw std::invalid_argument("unknown map policy '" + std::string(name) + "'");
}

QubitMap identity_map(const Circuit& c, const CouplingGraph& pcg) {
  if (c.num_qubits() > pcg.size()) throw std::invalid_argument("circuit is larger than the coupling graph");
  Vertex center = 0;
  std::size_t radius = kUnreachable;
  for (Vertex v = 0; v < pcg.size(); ++v) {
    const auto d = shortest_paths(pcg, v);
    std::size_t ecc = 0;
    for (std::size_t x : d) {
      if (x != kUnreachable) ecc = std::max(ecc, x);
    }
    if (ecc < radius) {
      radius = ecc;
      center = v;
    }
  }
  std::vector<Vertex> order{center};
  std::vector<char> seen(pcg.size(), 0);
  seen[center] = 1;
  for (std::size_t i = 0; i < order.size() && order.size() < c.num_qubits(); ++i) {
    for (Vertex n : pcg.neighbors(order[i])) {
      if (!seen[n]) {
        seen[n] = 1;
        order.push_back(n);
      }
    }
  }
  if (order.size() < c.num_qubits()) throw std::invalid_argument("coupling graph component is too small");
  order.resize(c.num_qubits());
  return order;
}

QubitMap reverse_traversal_map(const Circuit& c, const CouplingGraph& pcg, const QubitMap& start,
                               const RouterOptions& options, std::size_t iterations) {
  check_map(c, pcg, start);
  const auto dist = all_pairs(pcg);
  const Circuit forward = two_qubit_skeleton(c, false);
  const Circuit backward = two_qubit_skeleton(c, true);
  QubitMap map = start;
  for (std::size_t i = 0; i < iterations; ++i) {
    RouterOptions o = options;
    o.seed = derive_seed(options.seed, 2 * i);
    map = Router(forward, pcg, dist, map, o).run().final_map;
    o.seed = derive_seed(options.seed, 2 * i + 1);
    map = Router(backward, pcg, dist, map, o).run().final_map;
  }
  return map;
}

QubitMap initial_map(const Circuit& c, const CouplingGraph& pcg, MapPolicy policy,
                     const RouterOptions& options) {
  auto map = identity_map(c, pcg);
  if (policy == MapPolicy::ReverseTraversal) map = reverse_traversal_map(c, pcg, map, options);
  return map;
}

}  // namespace qtopo
