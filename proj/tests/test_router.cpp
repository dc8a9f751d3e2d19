#include "doctest.h"

#include "oracles.hpp"
#include "qtopo/designer.hpp"
#include "qtopo/lattice.hpp"
#include "qtopo/qasm.hpp"
#include "qtopo/random.hpp"
#include "qtopo/router.hpp"

using namespace qtopo;

namespace {

CouplingGraph path(std::size_t n) {
  CouplingGraph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

QubitMap trivial(std::size_t n) {
  QubitMap m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = i;
  return m;
}

std::size_t lower_bound(const Circuit& c, const CouplingGraph& g, const QubitMap& map) {
  std::size_t total = 0;
  for (const auto& gate : c.gates()) {
    if (!gate.is_two_qubit()) continue;
    total += shortest_paths(g, map[gate.qubits[0]])[map[gate.qubits[1]]] - 1;
  }
  return total;
}

}  // namespace

TEST_CASE("chain on a path needs no swaps") {
  const auto c = parse_qasm("qreg q[3]; cx q[0],q[1]; cx q[1],q[2];");
  const auto r = route(c, path(3), trivial(3));
  CHECK(r.g_add == 0);
  CHECK(g_ap(r) == 0.0);
  CHECK(oracle::check_routing(c, path(3), r).empty());
}

TEST_CASE("distance-two gate needs exactly one swap") {
  const auto c = parse_qasm("qreg q[3]; cx q[0],q[2];");
  const auto r = route(c, path(3), trivial(3));
  CHECK(r.g_add == 1);
  CHECK(r.circuit.size() == 2);
  CHECK(r.inserted == std::vector<bool>{true, false});
  CHECK(oracle::check_routing(c, path(3), r).empty());
}

TEST_CASE("g_ap arithmetic") {
  RoutedCircuit r;
  r.g_ori = 6;
  r.g_add = 3;
  CHECK(g_ap(r) == 0.5);
  r.g_ori = 0;
  CHECK_FALSE(g_ap(r).has_value());
}

TEST_CASE("random circuits on a 3x3 grid pass the map replay") {
  const auto grid = make_lattice({LatticeKind::Square, 3, 3});
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto c = generate_random_circuit({8, 30, 0.8, seed});
    const auto map = identity_map(c, grid);
    RouterOptions o;
    o.seed = seed;
    const auto r = route(c, grid, map, o);
    CHECK(oracle::check_routing(c, grid, r) == "");
    CHECK(r.initial_map == map);
    // determinism
    const auto again = route(c, grid, map, o);
    CHECK(again.circuit == r.circuit);
    CHECK(again.final_map == r.final_map);
  }
}

TEST_CASE("non-gate instructions are carried through") {
  const auto c = parse_qasm(
      "qreg q[4]; creg c[4]; h q[0]; cx q[0],q[3]; barrier q[0],q[3]; measure q[3] -> c[3];"
      "cx q[1],q[3]; rz(0.5) q[1]; cx q[2],q[0]; measure q[0] -> c[0];");
  const auto g = path(4);
  const auto r = route(c, g, trivial(4));
  CHECK(oracle::check_routing(c, g, r).empty());
  CHECK(r.circuit.cregs() == c.cregs());
  CHECK(r.circuit.size() == c.size() + r.g_add);
}

TEST_CASE("routing on every topology kind, including designed ones") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto c = generate_random_circuit({14, 40, 0.8, 900 + seed});
    std::vector<CouplingGraph> graphs;
    for (auto kind : {LatticeKind::Triangular, LatticeKind::CrossSquare, LatticeKind::Square}) {
      graphs.push_back(make_lattice(lattice_for_qubits(kind, 14)));
    }
    const auto designed = design(c);
    graphs.push_back(designed.pcg);
    for (const auto& g : graphs) {
      for (auto policy : {MapPolicy::Identity, MapPolicy::ReverseTraversal}) {
        RouterOptions o;
        o.seed = seed;
        const auto r = route(c, g, initial_map(c, g, policy, o), o);
        CHECK(oracle::check_routing(c, g, r) == "");
      }
    }
    const auto r = route(c, designed.pcg, designed.placement);
    CHECK(oracle::check_routing(c, designed.pcg, r) == "");
  }
}

TEST_CASE("initial maps") {
  SUBCASE("two qubits on two vertexes") {
    const auto c = parse_qasm("qreg q[2]; cx q[0],q[1];");
    const auto g = path(2);
    CHECK(identity_map(c, g) == QubitMap{0, 1});
    CHECK(identity_map(c, g) == identity_map(c, g));
  }
  SUBCASE("identity starts at the center") {
    const auto c = parse_qasm("qreg q[3]; cx q[0],q[1];");
    CHECK(identity_map(c, path(5)) == QubitMap{2, 1, 3});
  }
  SUBCASE("reverse traversal is deterministic and injective") {
    const auto c = generate_random_circuit({9, 20, 0.8, 4});
    const auto g = make_lattice({LatticeKind::Triangular, 3, 4});
    RouterOptions o;
    o.seed = 8;
    const auto a = initial_map(c, g, MapPolicy::ReverseTraversal, o);
    CHECK(a == initial_map(c, g, MapPolicy::ReverseTraversal, o));
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }
  SUBCASE("reverse traversal rarely loses to the identity start") {
    const auto g = make_lattice({LatticeKind::Square, 4, 4});
    std::size_t wins = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto c = generate_random_circuit({16, 30, 0.8, 2000 + seed});
      RouterOptions o;
      o.seed = seed;
      const auto plain = route(c, g, initial_map(c, g, MapPolicy::Identity, o), o);
      const auto refined = route(c, g, initial_map(c, g, MapPolicy::ReverseTraversal, o), o);
      wins += *g_ap(refined) <= *g_ap(plain);
    }
    MESSAGE("reverse traversal no worse on " << wins << " of 50");
    CHECK(wins >= 40);
  }
}

TEST_CASE("adding a coupler never raises the distance lower bound") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = make_lattice({LatticeKind::Square, 3, 4});
    const auto c = generate_random_circuit({10, 15, 0.8, seed});
    const auto map = identity_map(c, g);
    const auto before = lower_bound(c, g, map);
    Rng rng(seed);
    for (int k = 0; k < 3; ++k) {
      const Vertex u = rng.below(12), v = rng.below(12);
      if (u != v && !g.has_edge(u, v)) g.add_edge(u, v);
    }
    CHECK(lower_bound(c, g, map) <= before);
  }
}

TEST_CASE("invalid inputs") {
  const auto c = parse_qasm("qreg q[3]; cx q[0],q[2];");
  CHECK_THROWS_AS(route(c, path(2), QubitMap{0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(route(c, path(3), QubitMap{0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(route(c, path(3), QubitMap{0, 1}), std::invalid_argument);
  CouplingGraph split(4);
  split.add_edge(0, 1);
  split.add_edge(2, 3);
  CHECK_THROWS_AS(route(c, split, QubitMap{0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_policy("random"), std::invalid_argument);
  CHECK(parse_map_policy("reverse_traversal") == MapPolicy::ReverseTraversal);
}
