#include "doctest.h"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "qtopo/designer.hpp"
#include "qtopo/planarity.hpp"
#include "qtopo/qasm.hpp"
#include "qtopo/random.hpp"
#include "qtopo/small_graphs.hpp"

using namespace qtopo;

namespace {

std::string fixture(const std::string& name) { return std::string(QTOPO_FIXTURES) + "/" + name; }

const Circuit& worked_circuit() {
  static const Circuit c = read_qasm_file(fixture("worked_example.qasm"));
  return c;
}

// Transcribed block-count matrix of the eight-qubit worked example.
CouplingGraph worked_ccg() {
  CouplingGraph g(8);
  const Edge edges[] = {{0, 6, 3}, {1, 6, 1}, {2, 6, 1}, {3, 6, 4}, {4, 6, 3}, {5, 6, 5},
                        {6, 7, 5}, {5, 7, 3}, {3, 7, 2}, {0, 7, 2}, {4, 7, 2}, {2, 7, 2},
                        {3, 5, 2}, {0, 5, 2}, {4, 5, 1}, {0, 3, 1}, {1, 3, 1}};
  for (const auto& e : edges) g.add_edge(e.u, e.v, e.weight);
  return g;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Eigen::MatrixXd random_interaction(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < m.cols(); ++b) m(a, b) = m(b, a) = static_cast<double>(rng.below(10)) / 2.0;
  }
  return m;
}

bool same_edges(const CouplingGraph& a, const CouplingGraph& b) {
  return a.size() == b.size() && a.edges() == b.edges();
}

CouplingGraph path(std::size_t n) {
  CouplingGraph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

}  // namespace

TEST_CASE("worked-example circuit realizes the transcribed matrix") {
  auto ccg = profile(worked_circuit());
  CHECK(ccg.edges() == worked_ccg().edges());
  CHECK_FALSE(check_constraints(ccg, {}).planar);
}

TEST_CASE("ranking") {
  SUBCASE("worked example") {
    CHECK(rank_vertexes(worked_ccg()).order == std::vector<Vertex>{6, 7, 5, 3, 0, 4, 2, 1});
  }
  SUBCASE("single edge ties on every key") {
    CouplingGraph g(2);
    g.add_edge(0, 1, 3);
    CHECK(rank_vertexes(g).order == std::vector<Vertex>{0, 1});
  }
  SUBCASE("dispersion breaks ties in the direction of smaller spread") {
    // 0 and 1 both have degree 2 and total weight 6; 0 has weights {3,3}, 1 has {1,5}
    CouplingGraph g(5);
    g.add_edge(0, 2, 3);
    g.add_edge(0, 3, 3);
    g.add_edge(1, 2, 1);
    g.add_edge(1, 4, 5);
    const auto r = rank_vertexes(g);
    CHECK(r.stats[1].dispersion == doctest::Approx(2.0));
    CHECK(std::find(r.order.begin(), r.order.end(), 0) < std::find(r.order.begin(), r.order.end(), 1));
  }
  SUBCASE("random CCGs match the triple-sort oracle and are scale invariant") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto g = oracle::random_graph(10, 0.4, seed, 4);
      const auto r = rank_vertexes(g);
      CHECK(r.order == oracle::rank_order(g));
      auto scaled = g;
      for (const auto& e : g.edges()) scaled.set_weight(e.u, e.v, e.weight * 7);
      CHECK(rank_vertexes(scaled).order == r.order);
    }
  }
}

TEST_CASE("prune") {
  SUBCASE("worked example, one media vertex") {
    const Vertex media[] = {6};
    const auto r = prune(worked_ccg(), media);
    CHECK(r.pruned.edge_count() == 7);
    CHECK(r.pruned.degree(6) == 7);
    CHECK(r.pruned.weight(5, 6) == 5);
    CHECK(r.recover_set.size() == 10);
  }
  SUBCASE("every vertex is media") {
    const std::vector<Vertex> all{0, 1, 2, 3, 4, 5, 6, 7};
    const auto r = prune(worked_ccg(), all);
    CHECK(r.recover_set.empty());
    CHECK(r.pruned == worked_ccg());
  }
  SUBCASE("random CCGs: survivor predicate and partition") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto g = oracle::random_graph(12, 0.35, seed, 5);
      Rng rng(seed);
      std::vector<Vertex> media;
      for (Vertex v = 0; v < 12; ++v) {
        if (rng.below(4) == 0) media.push_back(v);
      }
      if (media.empty()) media.push_back(0);
      const auto r = prune(g, media);
      auto in = [&](Vertex v) { return std::count(media.begin(), media.end(), v) > 0; };
      for (const auto& e : g.edges()) {
        CHECK(r.pruned.has_edge(e.u, e.v) == (in(e.u) || in(e.v)));
        if (r.pruned.has_edge(e.u, e.v)) CHECK(r.pruned.weight(e.u, e.v) == e.weight);
      }
      CHECK(r.pruned.edge_count() + r.recover_set.size() == g.edge_count());
      for (const auto& e : r.recover_set) CHECK(g.weight(e.u, e.v) == e.weight);
    }
  }
  CHECK_THROWS(prune(worked_ccg(), std::vector<Vertex>{}));
}

TEST_CASE("media structure search") {
  const ConstraintSet c;
  SUBCASE("seven neighbors fit on a single edge") {
    const auto s = search_media_structures(7, c);
    REQUIRE(s.size() == 1);
    CHECK(s[0].size() == 2);
    CHECK(s[0].edge_count() == 1);
    // 1 = e <= D n - k = 6 * 2 - 7 = 5
    CHECK(s[0].edge_count() <= 6 * 2 - 7);
  }
  SUBCASE("degree equal to the bound needs no split") {
    CHECK_THROWS_AS(search_media_structures(6, c), std::invalid_argument);
  }
  SUBCASE("feasibility table") {
    // brute force is affordable up to six structure vertexes (k <= 26)
    std::map<std::size_t, std::vector<CouplingGraph>> brute;
    for (std::size_t k = 7; k <= 26; ++k) {
      // smallest n with some connected e (n - 1 <= e) meeting both bounds
      std::size_t want_n = 0;
      for (std::size_t n = 2; n <= 8 && want_n == 0; ++n) {
        for (std::size_t e = n - 1; e <= n * (n - 1) / 2; ++e) {
          if (k + e <= 6 * n && k + 2 * e <= 6 * n) want_n = n;
        }
      }
      const auto found = search_media_structures(k, c);
      REQUIRE_FALSE(found.empty());
      std::size_t expected = 0;
      if (!brute.count(want_n)) brute[want_n] = oracle::brute_force_connected(want_n, 6);
      for (const auto& g : brute[want_n]) {
        if (k + 2 * g.edge_count() <= 6 * want_n) ++expected;
      }
      CHECK(found.size() == expected);
      for (const auto& g : found) {
        CHECK(g.size() == want_n);
        CHECK(g.edge_count() + 1 >= g.size());
        CHECK(k <= 6 * g.size() - g.edge_count());
        CHECK(is_connected(g));
      }
    }
    const auto thirteen = search_media_structures(13, c);
    REQUIRE(thirteen.size() == 1);
    CHECK(thirteen[0].size() == 3);
  }
  CHECK(split_capacity(c) == 34);
  CHECK_THROWS_AS(search_media_structures(35, c), std::domain_error);
}

TEST_CASE("allocation") {
  SUBCASE("worked example") {
    const auto interaction = interaction_matrix(block_matrix(worked_circuit()),
                                                compute_s(worked_circuit(), 6), 0.5);
    CouplingGraph edge(2);
    edge.add_edge(0, 1);
    const std::vector<Vertex> nbrs{0, 1, 2, 3, 4, 5, 7};
    const auto ms = allocate(interaction.values, edge, nbrs, 6);
    CHECK(sorted(ms.alloc[0]) == std::vector<std::size_t>{0, 3, 4, 5, 7});
    CHECK(sorted(ms.alloc[1]) == std::vector<std::size_t>{1, 2});

    // moving q4 across and q1 back costs more
    MediaStructure swapped = ms;
    swapped.alloc = {{5, 0, 3, 7, 1}, {4, 2}};
    CHECK(score_allocation(ms, interaction.values) < score_allocation(swapped, interaction.values));
    CHECK(score_allocation(ms, interaction.values) ==
          doctest::Approx(oracle::allocation_score(interaction.values, edge, ms.alloc)));
  }
  SUBCASE("a single neighbor goes to the roomiest vertex") {
    const auto structure = path(3);
    const std::vector<Vertex> one{2};
    const auto ms = allocate(random_interaction(4, 1), structure, one, 6);
    CHECK(ms.alloc[0] == std::vector<Vertex>{2});
    CHECK(score_allocation(ms, random_interaction(4, 1)) == 0.0);
  }
  SUBCASE("three-vertex path, five neighbors: exhaustive bound and greedy trace") {
    const auto structure = path(3);
    const std::vector<Vertex> nbrs{0, 1, 2, 3, 4};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto inter = random_interaction(5, seed);
      for (std::size_t d : {3, 4, 6}) {
        const auto ms = allocate(inter, structure, nbrs, d);
        const double f = score_allocation(ms, inter);
        CHECK(f >= oracle::min_allocation_score(inter, structure, nbrs, d) - 1e-9);
        CHECK(ms.alloc == oracle::greedy_allocation(inter, structure, nbrs, d));
        for (Vertex i = 0; i < 3; ++i) CHECK(structure.degree(i) + ms.alloc[i].size() <= d);
      }
    }
  }
  SUBCASE("structure that cannot absorb the neighbors") {
    const std::vector<Vertex> nbrs{0, 1, 2, 3, 4};
    CHECK_THROWS_AS(allocate(random_interaction(5, 3), path(3), nbrs, 2), std::domain_error);
  }
}

TEST_CASE("allocation score") {
  const auto inter = random_interaction(6, 11);
  SUBCASE("everything on one vertex") {
    MediaStructure ms{path(3), {{}, {0, 1, 2, 3}, {}}, {}};
    CHECK(score_allocation(ms, inter) == 0.0);
  }
  SUBCASE("two neighbors on adjacent vertexes count both orders") {
    MediaStructure ms{path(2), {{0}, {1}}, {}};
    CHECK(score_allocation(ms, inter) == doctest::Approx(2 * inter(0, 1)));
  }
  SUBCASE("invariant under relabeling the structure") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng rng(seed);
      const auto structures = enumerate_connected_graphs(4, {}, 5);
      const auto& s = structures[rng.below(structures.size())];
      MediaStructure ms{s, std::vector<std::vector<Vertex>>(4), {}};
      for (Vertex p = 0; p < 6; ++p) ms.alloc[rng.below(4)].push_back(p);
      std::vector<Vertex> perm{0, 1, 2, 3};
      rng.shuffle(perm);
      MediaStructure moved{CouplingGraph(4), std::vector<std::vector<Vertex>>(4), {}};
      for (const auto& e : s.edges()) moved.graph.add_edge(perm[e.u], perm[e.v]);
      for (Vertex i = 0; i < 4; ++i) moved.alloc[perm[i]] = ms.alloc[i];
      CHECK(score_allocation(moved, inter) == doctest::Approx(score_allocation(ms, inter)));
    }
  }
}

TEST_CASE("splitting a media vertex") {
  SUBCASE("worked example, one media vertex") {
    const Vertex media[] = {6};
    auto graph = prune(worked_ccg(), media).pruned;
    std::vector<Vertex> owner{0, 1, 2, 3, 4, 5, 6, 7};
    const auto interaction = interaction_matrix(block_matrix(worked_circuit()),
                                                compute_s(worked_circuit(), 6), 0.5);
    const auto rec = split_media_vertex(graph, 6, interaction.values, owner, {});
    CHECK(rec.structure.size() == 2);
    CHECK(rec.placed[rec.home] == 6);
    CHECK(rec.placed[1 - rec.home] == 8);
    CHECK(sorted(rec.alloc[rec.home]) == std::vector<std::size_t>{0, 3, 4, 5, 7});
    CHECK(sorted(rec.alloc[1 - rec.home]) == std::vector<std::size_t>{1, 2});
    CHECK(graph.size() == 9);
    CHECK(graph.degree(6) == 6);
    CHECK(graph.has_edge(6, 8));
    CHECK(graph.has_edge(1, 8));
    CHECK(graph.weight(5, 6) == 5);
    CHECK(owner.back() == 6);
    CHECK(check_constraints(graph, {}).ok());
  }
  SUBCASE("degree D + 1 with equal weights") {
    CouplingGraph star(8);
    for (Vertex v = 1; v < 8; ++v) star.add_edge(0, v, 2);
    std::vector<Vertex> owner{0, 1, 2, 3, 4, 5, 6, 7};
    Eigen::MatrixXd inter = Eigen::MatrixXd::Constant(8, 8, 1.0);
    inter.diagonal().setZero();
    const auto rec = split_media_vertex(star, 0, inter, owner, {});
    std::vector<Vertex> nbrs{1, 2, 3, 4, 5, 6, 7};
    CHECK(rec.score == doctest::Approx(oracle::min_allocation_score(inter, rec.structure, nbrs, 6)));
  }
  SUBCASE("random degree-9 vertexes") {
    std::size_t optimal = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Rng rng(seed);
      CouplingGraph star(10);
      for (Vertex v = 1; v < 10; ++v) star.add_edge(0, v, static_cast<Weight>(1 + rng.below(6)));
      std::vector<Vertex> owner(10);
      std::iota(owner.begin(), owner.end(), Vertex{0});
      const auto inter = random_interaction(10, 1000 + seed);
      auto graph = star;
      const auto rec = split_media_vertex(graph, 0, inter, owner, {});
      CHECK(check_constraints(graph, {}).ok());
      CHECK(rec.structure.size() == 2);
      std::vector<Vertex> nbrs{1, 2, 3, 4, 5, 6, 7, 8, 9};
      double exhaustive = std::numeric_limits<double>::infinity();
      double greedy = std::numeric_limits<double>::infinity();
      for (const auto& s : search_media_structures(9, {})) {
        exhaustive = std::min(exhaustive, oracle::min_allocation_score(inter, s, nbrs, 6));
        greedy = std::min(greedy, oracle::allocation_score(
                                      inter, s, oracle::greedy_allocation(inter, s, nbrs, 6)));
      }
      CHECK(rec.score >= exhaustive - 1e-9);
      CHECK(rec.score == doctest::Approx(greedy));
      optimal += rec.score <= exhaustive + 1e-9;
      // every neighbor attached exactly once
      std::vector<Vertex> all;
      for (const auto& a : rec.alloc) all.insert(all.end(), a.begin(), a.end());
      CHECK(sorted(all) == nbrs);
    }
    MESSAGE("greedy allocation optimal in " << optimal << " of 40 random splits");
  }
  SUBCASE("degree beyond the split capacity trims the lightest edges") {
    CouplingGraph star(41);
    for (Vertex v = 1; v < 41; ++v) star.add_edge(0, v, static_cast<Weight>(v));
    std::vector<Vertex> owner(41);
    std::iota(owner.begin(), owner.end(), Vertex{0});
    const auto rec = split_media_vertex(star, 0, random_interaction(41, 5), owner, {});
    CHECK(rec.trimmed.size() == 6);
    for (const auto& e : rec.trimmed) CHECK(e.v <= 6);
    CHECK(check_constraints(star, {}).ok());
    CHECK(rec.structure.size() == 8);
  }
  SUBCASE("vertex within the bound") {
    auto g = path(3);
    std::vector<Vertex> owner{0, 1, 2};
    CHECK_THROWS_AS(split_media_vertex(g, 1, random_interaction(3, 0), owner, {}), std::invalid_argument);
  }
}

TEST_CASE("recover") {
  SUBCASE("empty recover set") {
    const auto g = path(4);
    CHECK(recover(g, {}, {}).graph == g);
  }
  SUBCASE("worked example after the split") {
    const auto run = run_pipeline(worked_ccg(), rank_vertexes(worked_ccg()), 1,
                                  circuit_interactions(worked_circuit(), 0.5), {});
    CHECK(run.dropped.empty());
    CHECK(run.bridges.empty());
    // the order is weight-descending with canonical ties
    const std::vector<Edge> kept{{5, 7, 3}, {0, 5, 2}, {0, 7, 2}, {2, 7, 2}, {3, 5, 2},
                                 {3, 7, 2}, {4, 7, 2}, {1, 3, 1}};
    CHECK(run.recovered == kept);
    CHECK(run.rejected == std::vector<Edge>{{0, 3, 1}, {4, 5, 1}});
    CHECK(same_edges(oracle::replay_pipeline(worked_ccg(), run), run.pcg));
    CHECK(run.pcg.size() == 9);
    CHECK(run.pcg.edge_count() == 16);
    CHECK(check_constraints(run.pcg, {}).ok());
    CHECK_FALSE(edge_fits(run.pcg, 0, 3, {}));
    CHECK_FALSE(edge_fits(run.pcg, 4, 5, {}));
  }
  SUBCASE("random small graphs replayed edge by edge") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      Rng rng(seed);
      const std::size_t d = 3 + rng.below(4);
      auto base = oracle::random_graph(8, 0.2, seed, 0);
      // keep the start legitimate
      for (const auto& e : base.edges()) {
        if (base.degree(e.u) > d || base.degree(e.v) > d) base.remove_edge(e.u, e.v);
      }
      if (!is_planar(base)) continue;
      std::vector<Edge> candidates;
      const auto extra = oracle::random_graph(8, 0.6, 7000 + seed, 9);
      for (const auto& e : extra.edges()) {
        if (!base.has_edge(e.u, e.v)) candidates.push_back(e);
      }
      const ConstraintSet c{d, true};
      const auto r = recover(base, candidates, c);
      // replay
      auto g = base;
      std::vector<Edge> order = candidates;
      std::stable_sort(order.begin(), order.end(), [](const Edge& a, const Edge& b) {
        return a.weight != b.weight ? a.weight > b.weight : std::pair(a.u, a.v) < std::pair(b.u, b.v);
      });
      std::vector<Edge> kept;
      for (const auto& e : order) {
        if (oracle::edge_admissible(g, e.u, e.v, d)) {
          g.add_edge(e.u, e.v, e.weight);
          kept.push_back(e);
        }
      }
      CHECK(r.kept == kept);
      CHECK(r.graph == g);
      CHECK(check_constraints(r.graph, c).ok());
      // monotone
      for (const auto& e : base.edges()) CHECK(r.graph.has_edge(e.u, e.v));
      CHECK(r.graph.total_weight() >= base.total_weight());
      // every rejection still holds at the end
      for (const auto& e : r.rejected) CHECK_FALSE(oracle::edge_admissible(r.graph, e.u, e.v, d));
    }
  }
}

TEST_CASE("media count selection") {
  const DesignOptions options;
  SUBCASE("already legitimate CCG attains the minimum score") {
    CouplingGraph grid(9);
    for (Vertex r = 0; r < 3; ++r) {
      for (Vertex c = 0; c < 3; ++c) {
        if (c + 1 < 3) grid.add_edge(3 * r + c, 3 * r + c + 1, 1 + static_cast<Weight>(r));
        if (r + 1 < 3) grid.add_edge(3 * r + c, 3 * r + c + 3, 2);
      }
    }
    const auto audit = select_media_count(grid, ccg_interactions(grid), options);
    CHECK(audit.candidates.size() == 9);
    CHECK(audit.candidates.back().pcg.edges() == grid.edges());
    CHECK(audit.candidates.back().score == grid.total_weight());
    CHECK(audit.candidates[audit.chosen].score == grid.total_weight());
  }
  SUBCASE("star within the degree bound") {
    CouplingGraph star(6);
    for (Vertex v = 1; v < 6; ++v) star.add_edge(0, v, static_cast<Weight>(v));
    const auto audit = select_media_count(star, ccg_interactions(star), options);
    CHECK(audit.candidates[audit.chosen].media_count == 1);
    CHECK(audit.candidates[audit.chosen].pcg.edges() == star.edges());
  }
  SUBCASE("worked example keeps the one- and two-media snapshots") {
    const auto ccg = worked_ccg();
    const auto audit = select_media_count(ccg, circuit_interactions(worked_circuit(), 0.5), options);
    REQUIRE(audit.candidates.size() == 8);
    CHECK(audit.candidates[0].media_count == 1);
    CHECK(audit.candidates[1].media_count == 2);
    CHECK(audit.candidates[1].prune.media == std::vector<Vertex>{6, 7});
    CHECK(audit.candidates[1].prune.pruned.edge_count() == 12);
    for (const auto& run : audit.candidates) CHECK(audit.candidates[audit.chosen].score <= run.score);
    CHECK(audit.candidates[audit.chosen].score <= audit.candidates[0].score);
  }
}

TEST_CASE("design") {
  SUBCASE("path-shaped coupling") {
    const auto c = parse_qasm("qreg q[5]; cx q[0],q[1]; cx q[1],q[2]; cx q[0],q[1]; cx q[2],q[3]; cx q[3],q[4];");
    const auto r = design(c);
    CHECK(r.ancilla_count == 0);
    CHECK(r.pcg.edges() == profile(c).edges());
  }
  SUBCASE("qubits without two-qubit gates are still connected") {
    const auto c = parse_qasm("qreg q[6]; cx q[0],q[1]; h q[2]; cx q[3],q[4];");
    const auto r = design(c);
    CHECK(is_connected(r.pcg));
    CHECK(check_constraints(r.pcg, {}).ok());
  }
  SUBCASE("random circuits: invariants and audit replay") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const auto circuit = generate_random_circuit({12, 20 + 5 * seed, 0.8, 300 + seed});
      const auto ccg = profile(circuit);
      const auto r = design(circuit);
      CHECK(check_constraints(r.pcg, {}).ok());
      CHECK(is_connected(r.pcg));
      CHECK(r.pcg.size() == 12 + r.ancilla_count);
      CHECK(std::set<Vertex>(r.placement.begin(), r.placement.end()).size() == 12);
      const auto& chosen = r.audit.candidates[r.audit.chosen];
      CHECK(same_edges(oracle::replay_pipeline(ccg, chosen), chosen.pcg));
      CHECK(chosen.pcg == r.pcg);
      CHECK(chosen.score == placement_score(ccg.adjacency_matrix(), r.pcg, r.placement));

      // no invented couplings between original qubits
      std::set<std::pair<Vertex, Vertex>> allowed;
      for (const auto& e : ccg.edges()) allowed.insert({e.u, e.v});
      for (const auto& e : chosen.bridges) allowed.insert({e.u, e.v});
      for (const auto& e : r.pcg.edges()) {
        if (e.v < 12) CHECK(allowed.count({e.u, e.v}) == 1);
      }
      // determinism
      CHECK(design(circuit).pcg == r.pcg);
    }
  }
}
