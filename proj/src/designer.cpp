#include "qtopo/designer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "qtopo/planarity.hpp"
#include "qtopo/small_graphs.hpp"

namespace qtopo {

namespace {

double dispersion_of(std::vector<Weight> w, Dispersion kind) {
  if (w.size() <= 1) return 0.0;
  if (kind == Dispersion::Range) {
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    return static_cast<double>(*hi - *lo);
  }
  const double n = static_cast<double>(w.size());
  const double mean = static_cast<double>(std::accumulate(w.begin(), w.end(), Weight{0})) / n;
  double var = 0.0;
  for (Weight x : w) var += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
  var /= n;
  return kind == Dispersion::Variance ? var : std::sqrt(var);
}

// Integer key ordering vertexes of equal degree and total weight by
// dispersion: n * sum(w^2) - (sum w)^2 is n^2 times the variance.
Weight spread_key(const std::vector<Weight>& w, Dispersion kind) {
  if (w.size() <= 1) return 0;
  if (kind == Dispersion::Range) {
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    return *hi - *lo;
  }
  Weight sum = 0, squares = 0;
  for (Weight x : w) {
    sum += x;
    squares += x * x;
  }
  return static_cast<Weight>(w.size()) * squares - sum * sum;
}

bool by_recovery_priority(const Edge& a, const Edge& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  return std::pair(a.u, a.v) < std::pair(b.u, b.v);
}

// Best structure and allocation per (k, D, local interaction matrix). Media
// vertexes are split in rank order and keep all their edges in every prune,
// so consecutive media counts repeat the same leading splits.
struct SplitMemo {
  std::map<std::pair<std::size_t, std::vector<double>>, std::pair<MediaStructure, double>> best;
};

Edge canonical(Vertex a, Vertex b, Weight w) { return a < b ? Edge{a, b, w} : Edge{b, a, w}; }

// Joins every component to the one holding `root` with the first fitting
// edge in (component vertex, main vertex) order.
std::vector<Edge> bridge_components(CouplingGraph& g, Vertex root, const ConstraintSet& c) {
  std::vector<Edge> added;
  auto comps = connected_components(g);
  if (comps.size() <= 1) return added;
  std::vector<Vertex> main;
  for (const auto& comp : comps) {
    if (std::binary_search(comp.begin(), comp.end(), root)) main = comp;
  }
  for (const auto& comp : comps) {
    if (std::binary_search(comp.begin(), comp.end(), root)) continue;
    bool joined = false;
    for (Vertex a : comp) {
      if (g.degree(a) >= c.max_degree) continue;
      for (Vertex b : main) {
        if (edge_fits(g, a, b, c)) {
          g.add_edge(a, b);
          added.push_back(canonical(a, b, 0));
          joined = true;
          break;
        }
      }
      if (joined) break;
    }
    if (!joined) throw std::runtime_error("cannot connect a component within the constraints");
    std::vector<Vertex> merged;
    std::merge(main.begin(), main.end(), comp.begin(), comp.end(), std::back_inserter(merged));
    main = std::move(merged);
  }
  return added;
}

}  // namespace

VertexRank rank_vertexes(const CouplingGraph& ccg, Dispersion dispersion) {
  if (ccg.size() == 0) throw std::invalid_argument("cannot rank an empty graph");
  VertexRank r;
  r.stats.resize(ccg.size());
  std::vector<Weight> spread(ccg.size());
  for (Vertex v = 0; v < ccg.size(); ++v) {
    std::vector<Weight> w;
    for (Vertex u : ccg.neighbors(v)) w.push_back(ccg.weight(u, v));
    spread[v] = spread_key(w, dispersion);
    r.stats[v] = {w.size(), std::accumulate(w.begin(), w.end(), Weight{0}),
                  dispersion_of(std::move(w), dispersion)};
  }
  r.order.resize(ccg.size());
  std::iota(r.order.begin(), r.order.end(), Vertex{0});
  std::sort(r.order.begin(), r.order.end(), [&](Vertex a, Vertex b) {
    const auto& x = r.stats[a];
    const auto& y = r.stats[b];
    if (x.degree != y.degree) return x.degree > y.degree;
    if (x.total_weight != y.total_weight) return x.total_weight > y.total_weight;
    if (spread[a] != spread[b]) return spread[a] < spread[b];
    return a < b;
  });
  return r;
}

PruneResult prune(const CouplingGraph& ccg, std::span<const Vertex> media) {
  if (media.empty()) throw std::invalid_argument("prune needs at least one media vertex");
  std::vector<char> is_media(ccg.size(), 0);
  for (Vertex v : media) {
    if (v >= ccg.size()) throw std::out_of_range("media vertex out of range");
    is_media[v] = 1;
  }
  PruneResult r;
  r.media.assign(media.begin(), media.end());
  r.pruned = CouplingGraph(ccg.size());
  for (Vertex v = 0; v < ccg.size(); ++v) r.pruned.set_label(v, ccg.labels()[v]);
  for (const Edge& e : ccg.edges()) {
    if (is_media[e.u] || is_media[e.v]) {
      r.pruned.add_edge(e.u, e.v, e.weight);
    } else {
      r.recover_set.push_back(e);
    }
  }
  return r;
}

std::size_t split_capacity(const ConstraintSet& c) {
  validate(c);
  // a tree on the largest allowed vertex count leaves the most free degree
  const std::size_t n = kSmallGraphCap;
  return c.max_degree * n - 2 * (n - 1);
}

std::vector<CouplingGraph> search_media_structures(std::size_t k, const ConstraintSet& c) {
  validate(c);
  const std::size_t d = c.max_degree;
  if (k <= d) {
    throw std::invalid_argument("a vertex of degree " + std::to_string(k) +
                                " needs no media structure under max degree " + std::to_string(d));
  }
  for (std::size_t n = 2; n <= kSmallGraphCap; ++n) {
    if (d * n < k + 2 * (n - 1)) continue;
    // k <= D n - 2 e implies the looser k <= D n - e
    const std::size_t max_edges = (d * n - k) / 2;
    auto found = enumerate_connected_graphs(n, c, max_edges);
    if (!found.empty()) return found;
  }
  throw std::domain_error("no media structure with at most " + std::to_string(kSmallGraphCap) +
                          " vertexes absorbs " + std::to_string(k) + " neighbors");
}

MediaStructure allocate(const Eigen::MatrixXd& interaction, const CouplingGraph& structure,
                        std::span<const Vertex> neighbors, std::size_t max_degree) {
  const std::size_t n = structure.size();
  const std::size_t k = neighbors.size();
  std::vector<std::size_t> free(n);
  std::size_t capacity = 0;
  for (Vertex i = 0; i < n; ++i) {
    if (structure.degree(i) > max_degree) throw std::domain_error("structure exceeds max degree");
    free[i] = max_degree - structure.degree(i);
    capacity += free[i];
  }
  if (capacity < k) throw std::domain_error("structure cannot absorb all neighbors");
  for (Vertex p : neighbors) {
    if (p >= static_cast<Vertex>(interaction.rows()) || p >= static_cast<Vertex>(interaction.cols())) {
      throw std::out_of_range("neighbor outside the interaction matrix");
    }
  }

  const auto dist = distance_matrix(structure).cast<double>().eval();
  auto inter = [&](std::size_t a, std::size_t b) {
    return interaction(static_cast<Eigen::Index>(neighbors[a]), static_cast<Eigen::Index>(neighbors[b]));
  };

  MediaStructure ms;
  ms.graph = structure;
  ms.alloc.resize(n);
  if (k == 0) return ms;

  // mass[j][m] = sum of I(p, m) over p allocated to structure vertex j
  std::vector<std::vector<double>> mass(n, std::vector<double>(k, 0.0));
  std::vector<double> pull(k, 0.0);  // sum over all allocated p of I(p, m)
  std::vector<char> done(k, 0);

  auto place = [&](std::size_t m, std::size_t i) {
    done[m] = 1;
    --free[i];
    ms.alloc[i].push_back(neighbors[m]);
    ms.picks.push_back(neighbors[m]);
    for (std::size_t x = 0; x < k; ++x) {
      mass[i][x] += inter(m, x);
      pull[x] += inter(m, x);
    }
  };

  std::size_t first = 0;
  double best = -1.0;
  for (std::size_t m = 0; m < k; ++m) {
    double e = 0.0;
    for (std::size_t l = 0; l < k; ++l) e += inter(m, l);
    if (e > best) {
      best = e;
      first = m;
    }
  }
  std::size_t roomiest = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (free[i] > free[roomiest]) roomiest = i;
  }
  place(first, roomiest);

  for (std::size_t step = 1; step < k; ++step) {
    std::size_t m = k;
    for (std::size_t x = 0; x < k; ++x) {
      if (!done[x] && (m == k || pull[x] > pull[m])) m = x;
    }
    std::size_t target = n;
    double lowest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (free[i] == 0) continue;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * mass[j][m];
      if (target == n || s < lowest) {
        target = i;
        lowest = s;
      }
    }
    place(m, target);
  }
  return ms;
}

double score_allocation(const MediaStructure& ms, const Eigen::MatrixXd& interaction) {
  const auto dist = distance_matrix(ms.graph);
  double f = 0.0;
  for (std::size_t i = 0; i < ms.alloc.size(); ++i) {
    for (std::size_t j = 0; j < ms.alloc.size(); ++j) {
      if (i == j) continue;
      const auto c = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (c == kUnreachable) throw std::domain_error("media structure is disconnected");
      double pair = 0.0;
      for (Vertex p : ms.alloc[i]) {
        for (Vertex q : ms.alloc[j]) pair += interaction(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      }
      f += static_cast<double>(c) * pair;
    }
  }
  return f;
}

namespace {

SplitRecord split_impl(CouplingGraph& graph, Vertex v, const Eigen::MatrixXd& interaction,
                       std::vector<Vertex>& owner, const ConstraintSet& c, SplitMemo* memo) {
  validate(c);
  if (owner.size() != graph.size()) throw std::invalid_argument("owner map does not cover the graph");
  const std::size_t d = c.max_degree;
  if (graph.degree(v) <= d) throw std::invalid_argument("vertex is within the degree bound");

  SplitRecord rec;
  rec.origin = v;
  std::vector<Vertex> nbrs(graph.neighbors(v).begin(), graph.neighbors(v).end());

  const std::size_t cap = std::max(split_capacity(c), d);
  if (nbrs.size() > cap) {
    auto order = nbrs;
    std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
      const Weight wa = graph.weight(v, a), wb = graph.weight(v, b);
      return wa != wb ? wa < wb : a > b;
    });
    order.resize(nbrs.size() - cap);
    for (Vertex p : order) {
      rec.trimmed.push_back(canonical(v, p, graph.weight(v, p)));
      graph.remove_edge(v, p);
    }
    nbrs.assign(graph.neighbors(v).begin(), graph.neighbors(v).end());
  }
  const std::size_t k = nbrs.size();
  if (k <= d) {
    rec.structure = CouplingGraph(1);
    rec.placed = {v};
    rec.alloc = {nbrs};
    return rec;
  }

  const auto ki = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(ki, ki);
  for (Eigen::Index a = 0; a < ki; ++a) {
    for (Eigen::Index b = 0; b < ki; ++b) {
      const Vertex oa = owner[nbrs[static_cast<std::size_t>(a)]];
      const Vertex ob = owner[nbrs[static_cast<std::size_t>(b)]];
      if (oa != ob) local(a, b) = interaction(static_cast<Eigen::Index>(oa), static_cast<Eigen::Index>(ob));
    }
  }
  std::vector<Vertex> ids(k);
  std::iota(ids.begin(), ids.end(), Vertex{0});

  std::optional<MediaStructure> best;
  std::pair<std::size_t, std::vector<double>> key{d, std::vector<double>(local.data(), local.data() + local.size())};
  if (memo) {
    if (auto it = memo->best.find(key); it != memo->best.end()) {
      best = it->second.first;
      rec.score = it->second.second;
    }
  }
  if (!best) {
    for (const auto& candidate : search_media_structures(k, c)) {
      auto ms = allocate(local, candidate, ids, d);
      const double f = score_allocation(ms, local);
      if (!best || f < rec.score) {
        best = std::move(ms);
        rec.score = f;
      }
    }
    if (memo) memo->best.emplace(std::move(key), std::pair{*best, rec.score});
  }

  const std::size_t n = best->graph.size();
  Weight heaviest = -1;
  for (std::size_t i = 0; i < n; ++i) {
    Weight w = 0;
    for (Vertex p : best->alloc[i]) w += graph.weight(v, nbrs[p]);
    if (w > heaviest) {
      heaviest = w;
      rec.home = i;
    }
  }

  std::vector<Weight> weights(k);
  for (std::size_t p = 0; p < k; ++p) {
    weights[p] = graph.weight(v, nbrs[p]);
    graph.remove_edge(v, nbrs[p]);
  }
  rec.structure = best->graph;
  rec.placed.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == rec.home) {
      rec.placed[i] = v;
      continue;
    }
    rec.placed[i] = graph.add_vertex("a" + std::to_string(graph.size()));
    owner.push_back(owner[v]);
  }
  for (const Edge& e : rec.structure.edges()) graph.add_edge(rec.placed[e.u], rec.placed[e.v]);
  rec.alloc.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (Vertex p : best->alloc[i]) {
      graph.add_edge(rec.placed[i], nbrs[p], weights[p]);
      rec.alloc[i].push_back(nbrs[p]);
    }
  }
  return rec;
}

}  // namespace

SplitRecord split_media_vertex(CouplingGraph& graph, Vertex v, const Eigen::MatrixXd& interaction,
                               std::vector<Vertex>& owner, const ConstraintSet& c) {
  return split_impl(graph, v, interaction, owner, c, nullptr);
}

RecoverResult recover(CouplingGraph graph, std::span<const Edge> recover_set,
                      const ConstraintSet& c) {
  validate(c);
  std::vector<Edge> order(recover_set.begin(), recover_set.end());
  for (Edge& e : order) e = canonical(e.u, e.v, e.weight);
  std::sort(order.begin(), order.end(), by_recovery_priority);
  RecoverResult r;
  // An edge between two components of a planar graph keeps it planar, so
  // such candidates only need the degree check.
  const bool planar = !c.require_planar || is_planar(graph);
  std::vector<Vertex> root(graph.size());
  std::iota(root.begin(), root.end(), Vertex{0});
  auto find = [&](Vertex x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const Edge& e : graph.edges()) root[find(e.u)] = find(e.v);
  for (const Edge& e : order) {
    bool fits = false;
    if (planar && e.v < graph.size() && e.u != e.v && find(e.u) != find(e.v)) {
      fits = graph.degree(e.u) < c.max_degree && graph.degree(e.v) < c.max_degree;
    } else {
      fits = edge_fits(graph, e.u, e.v, c);
    }
    if (fits) {
      graph.add_edge(e.u, e.v, e.weight);
      root[find(e.u)] = find(e.v);
      r.kept.push_back(e);
    } else {
      r.rejected.push_back(e);
    }
  }
  r.graph = std::move(graph);
  return r;
}

Weight placement_score(const CountMatrix& m, const CouplingGraph& pcg,
                       std::span<const Vertex> placement) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (placement.size() != n) throw std::invalid_argument("placement does not cover every qubit");
  const Weight penalty = n == 0 ? 0 : static_cast<Weight>(pcg.size()) * m.maxCoeff();
  Weight score = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto dist = shortest_paths(pcg, placement[a]);
    for (std::size_t b = a + 1; b < n; ++b) {
      const Weight w = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (w == 0) continue;
      const std::size_t hop = dist[placement[b]];
      score += hop == kUnreachable ? penalty : w * static_cast<Weight>(hop);
    }
  }
  return score;
}

InteractionSource circuit_interactions(const Circuit& c, double alpha) {
  struct State {
    Circuit circuit{1};
    CountMatrix m;
    double alpha = 0.5;
    std::mutex mutex;
    std::map<Vertex, Eigen::MatrixXd> cache;
  };
  auto state = std::make_shared<State>();
  state->circuit = c;
  state->m = block_matrix(c);
  state->alpha = alpha;
  interaction_matrix(state->m, state->m, alpha);  // validates alpha
  return [state](Vertex v) {
    {
      std::lock_guard lock(state->mutex);
      if (auto it = state->cache.find(v); it != state->cache.end()) return it->second;
    }
    auto values = interaction_matrix(state->m, compute_s(state->circuit, v), state->alpha).values;
    std::lock_guard lock(state->mutex);
    return state->cache.emplace(v, std::move(values)).first->second;
  };
}

InteractionSource ccg_interactions(const CouplingGraph& ccg) {
  auto m = std::make_shared<const Eigen::MatrixXd>(ccg.adjacency_matrix().cast<double>());
  return [m](Vertex) { return *m; };
}

namespace {

PipelineRun pipeline_impl(const CouplingGraph& ccg, const VertexRank& rank, std::size_t media_count,
                          const InteractionSource& interactions, const ConstraintSet& c, SplitMemo* memo) {
  validate(c);
  if (media_count < 1 || media_count > ccg.size()) throw std::invalid_argument("media count out of range");
  PipelineRun run;
  run.media_count = media_count;
  run.prune = prune(ccg, std::span(rank.order).first(media_count));

  CouplingGraph graph = run.prune.pruned;
  std::vector<Vertex> owner(ccg.size());
  std::iota(owner.begin(), owner.end(), Vertex{0});
  std::vector<Edge> pending = run.prune.recover_set;

  for (Vertex v : run.prune.media) {
    if (graph.degree(v) <= c.max_degree) continue;
    run.splits.push_back(split_impl(graph, v, interactions(v), owner, c, memo));
    const auto& trimmed = run.splits.back().trimmed;
    pending.insert(pending.end(), trimmed.begin(), trimmed.end());
  }

  if (!check_constraints(graph, c).ok()) {
    // rebuild from the structures' internal edges, re-adding the rest by weight
    CouplingGraph base(graph.size());
    for (Vertex v = 0; v < graph.size(); ++v) base.set_label(v, graph.labels()[v]);
    for (const auto& s : run.splits) {
      for (const Edge& e : s.structure.edges()) base.add_edge(s.placed[e.u], s.placed[e.v]);
    }
    std::vector<Edge> rest;
    for (const Edge& e : graph.edges()) {
      if (!base.has_edge(e.u, e.v)) rest.push_back(e);
    }
    auto legal = recover(std::move(base), rest, c);
    graph = std::move(legal.graph);
    run.dropped = std::move(legal.rejected);
    pending.insert(pending.end(), run.dropped.begin(), run.dropped.end());
  }

  auto rec = recover(std::move(graph), pending, c);
  run.recovered = std::move(rec.kept);
  run.rejected = std::move(rec.rejected);
  run.pcg = std::move(rec.graph);
  run.bridges = bridge_components(run.pcg, rank.order.front(), c);

  std::vector<Vertex> placement(ccg.size());
  std::iota(placement.begin(), placement.end(), Vertex{0});
  run.score = placement_score(ccg.adjacency_matrix(), run.pcg, placement);
  return run;
}

}  // namespace

PipelineRun run_pipeline(const CouplingGraph& ccg, const VertexRank& rank, std::size_t media_count,
                         const InteractionSource& interactions, const ConstraintSet& c) {
  return pipeline_impl(ccg, rank, media_count, interactions, c, nullptr);
}

DesignAudit select_media_count(const CouplingGraph& ccg, const InteractionSource& interactions,
                               const DesignOptions& options) {
  DesignAudit audit;
  audit.rank = rank_vertexes(ccg, options.dispersion);
  std::vector<std::size_t> counts;
  if (options.media_count) {
    counts.push_back(*options.media_count);
  } else {
    counts.resize(ccg.size());
    std::iota(counts.begin(), counts.end(), std::size_t{1});
  }
  SplitMemo memo;
  for (std::size_t n : counts) {
    audit.candidates.push_back(pipeline_impl(ccg, audit.rank, n, interactions, options.constraints, &memo));
    if (audit.candidates.back().score < audit.candidates[audit.chosen].score) {
      audit.chosen = audit.candidates.size() - 1;
    }
  }
  return audit;
}

DesignResult design(const CouplingGraph& ccg, const InteractionSource& interactions,
                    const DesignOptions& options) {
  DesignResult r;
  r.audit = select_media_count(ccg, interactions, options);
  r.pcg = r.audit.candidates[r.audit.chosen].pcg;
  r.placement.resize(ccg.size());
  std::iota(r.placement.begin(), r.placement.end(), Vertex{0});
  r.ancilla_count = r.pcg.size() - ccg.size();
  return r;
}

DesignResult design(const Circuit& circuit, const DesignOptions& options) {
  return design(profile(circuit), circuit_interactions(circuit, options.alpha), options);
}

}  // namespace qtopo
