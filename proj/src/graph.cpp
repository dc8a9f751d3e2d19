#include "qtopo/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "qtopo/planarity.hpp"

namespace qtopo {

namespace {

std::pair<Vertex, Vertex> key(Vertex u, Vertex v) { return {std::min(u, v), std::max(u, v)}; }

}  // namespace

CouplingGraph::CouplingGraph(std::size_t num_vertexes)
    : adjacency_(num_vertexes), labels_(num_vertexes) {}

Vertex CouplingGraph::add_vertex(std::string label) {
  adjacency_.emplace_back();
  labels_.push_back(std::move(label));
  return adjacency_.size() - 1;
}

void CouplingGraph::check_vertex(Vertex v) const {
  if (v >= adjacency_.size()) {
    throw std::out_of_range("vertex " + std::to_string(v) + " out of range for graph of " +
                            std::to_string(adjacency_.size()));
  }
}

void CouplingGraph::add_edge(Vertex u, Vertex v, Weight weight) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
  if (weight < 0) throw std::invalid_argument("negative edge weight");
  auto [it, inserted] = weights_.emplace(key(u, v), weight);
  if (!inserted) {
    throw std::invalid_argument("duplicate edge {" + std::to_string(u) + ", " +
                                std::to_string(v) + "}");
  }
  auto insert_sorted = [](std::vector<Vertex>& list, Vertex x) {
    list.insert(std::lower_bound(list.begin(), list.end(), x), x);
  };
  insert_sorted(adjacency_[u], v);
  insert_sorted(adjacency_[v], u);
}

void CouplingGraph::remove_edge(Vertex u, Vertex v) {
  if (weights_.erase(key(u, v)) == 0) {
    throw std::invalid_argument("no edge {" + std::to_string(u) + ", " + std::to_string(v) +
                                "}");
  }
  auto erase = [](std::vector<Vertex>& list, Vertex x) {
    list.erase(std::lower_bound(list.begin(), list.end(), x));
  };
  erase(adjacency_[u], v);
  erase(adjacency_[v], u);
}

bool CouplingGraph::has_edge(Vertex u, Vertex v) const { return weights_.count(key(u, v)) != 0; }

Weight CouplingGraph::weight(Vertex u, Vertex v) const {
  auto it = weights_.find(key(u, v));
  return it == weights_.end() ? 0 : it->second;
}

void CouplingGraph::set_weight(Vertex u, Vertex v, Weight weight) {
  auto it = weights_.find(key(u, v));
  if (it == weights_.end()) throw std::invalid_argument("set_weight on missing edge");
  it->second = weight;
}

std::size_t CouplingGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& a : adjacency_) d = std::max(d, a.size());
  return d;
}

Weight CouplingGraph::total_weight() const {
  Weight total = 0;
  for (const auto& [e, w] : weights_) total += w;
  return total;
}

std::vector<Edge> CouplingGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(weights_.size());
  for (const auto& [e, w] : weights_) out.push_back({e.first, e.second, w});
  return out;
}

void CouplingGraph::set_label(Vertex v, std::string label) {
  check_vertex(v);
  labels_[v] = std::move(label);
}

Eigen::Matrix<Weight, Eigen::Dynamic, Eigen::Dynamic> CouplingGraph::adjacency_matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::Matrix<Weight, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<Weight, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (const auto& [e, w] : weights_) {
    m(static_cast<Eigen::Index>(e.first), static_cast<Eigen::Index>(e.second)) = w;
    m(static_cast<Eigen::Index>(e.second), static_cast<Eigen::Index>(e.first)) = w;
  }
  return m;
}

CouplingGraph CouplingGraph::from_adjacency_matrix(
    const Eigen::Ref<const Eigen::Matrix<Weight, Eigen::Dynamic, Eigen::Dynamic>>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("adjacency matrix must be square");
  CouplingGraph g(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0) throw std::invalid_argument("adjacency matrix has a nonzero diagonal");
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) != m(j, i)) throw std::invalid_argument("adjacency matrix is not symmetric");
      if (m(i, j) > 0) {
        g.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j), m(i, j));
      }
    }
  }
  return g;
}

void validate(const ConstraintSet& c) {
  if (c.max_degree < 2) throw std::invalid_argument("max_degree must be at least 2");
}

ViolationReport check_constraints(const CouplingGraph& g, const ConstraintSet& c) {
  validate(c);
  ViolationReport report;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.degree(v) > c.max_degree) report.over_degree.push_back({v, g.degree(v)});
  }
  report.planarity_checked = c.require_planar;
  report.planar = is_planar(g);
  return report;
}

bool edge_fits(const CouplingGraph& g, Vertex u, Vertex v, const ConstraintSet& c) {
  if (u == v || g.has_edge(u, v)) return false;
  if (g.degree(u) + 1 > c.max_degree || g.degree(v) + 1 > c.max_degree) return false;
  if (!c.require_planar) return true;
  const std::pair<Vertex, Vertex> extra[] = {{u, v}};
  return is_planar_with(g, extra);
}

std::vector<std::size_t> shortest_paths(const CouplingGraph& g, Vertex from) {
  std::vector<std::size_t> dist(g.size(), kUnreachable);
  if (from >= g.size()) throw std::out_of_range("shortest_paths source out of range");
  std::deque<Vertex> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

Eigen::Matrix<std::size_t, Eigen::Dynamic, Eigen::Dynamic> distance_matrix(
    const CouplingGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::Matrix<std::size_t, Eigen::Dynamic, Eigen::Dynamic> d(n, n);
  for (Vertex s = 0; s < g.size(); ++s) {
    const auto row = shortest_paths(g, s);
    for (Vertex t = 0; t < g.size(); ++t) {
      d(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = row[t];
    }
  }
  return d;
}

std::vector<std::vector<Vertex>> connected_components(const CouplingGraph& g) {
  std::vector<std::vector<Vertex>> out;
  std::vector<bool> seen(g.size(), false);
  for (Vertex s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp{s};
    seen[s] = true;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (Vertex w : g.neighbors(comp[i])) {
        if (!seen[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool is_connected(const CouplingGraph& g) { return connected_components(g).size() <= 1; }

}  // namespace qtopo
