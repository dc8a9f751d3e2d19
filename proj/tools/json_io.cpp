#include "json_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace qtopo::io {

namespace {

json edge_list(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const Edge& e : edges) out.push_back({e.u, e.v, e.weight});
  return out;
}

std::string key(const std::pair<std::string, std::size_t>& k) {
  return k.first + ":" + std::to_string(k.second);
}

json interval(const Interval& i) { return {{"mean", i.mean}, {"lo", i.lo}, {"hi", i.hi}}; }

json comparison(const BaselineComparison& c) {
  return {{"topology", c.topology},
          {"mean", c.mean},
          {"improvement", c.improvement},
          {"cells_won", c.cells_won},
          {"cells", c.cells}};
}

}  // namespace

json graph_to_json(const CouplingGraph& g, bool weights) {
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    if (weights) {
      edges.push_back({e.u, e.v, e.weight});
    } else {
      edges.push_back({e.u, e.v});
    }
  }
  return {{"n", g.size()}, {"edges", std::move(edges)}, {"labels", g.labels()}};
}

CouplingGraph graph_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
      throw FormatError("graph JSON needs \"n\" and \"edges\"");
    }
    const auto n = j.at("n").get<long long>();
    if (n < 1) throw FormatError("graph JSON needs n >= 1");
    CouplingGraph g(static_cast<std::size_t>(n));
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) throw FormatError("edge must be [u, v] or [u, v, w]");
      const auto u = e[0].get<long long>(), v = e[1].get<long long>();
      const Weight w = e.size() == 3 ? e[2].get<Weight>() : 0;
      if (u < 0 || v < 0 || u >= n || v >= n) throw FormatError("edge endpoint out of range");
      if (w < 0) throw FormatError("negative edge weight");
      if (u == v || g.has_edge(static_cast<Vertex>(u), static_cast<Vertex>(v))) {
        throw FormatError("self-loop or duplicate edge [" + std::to_string(u) + ", " + std::to_string(v) + "]");
      }
      g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v), w);
    }
    if (j.contains("labels")) {
      const auto& labels = j.at("labels");
      if (!labels.is_array() || labels.size() != g.size()) throw FormatError("labels must list every vertex");
      for (Vertex v = 0; v < g.size(); ++v) g.set_label(v, labels[v].get<std::string>());
    }
    return g;
  } catch (const json::exception& e) {
    throw FormatError(std::string("graph JSON: ") + e.what());
  }
}

json map_to_json(const QubitMap& map, const CouplingGraph& pcg) {
  json labels = json::array();
  for (Vertex v : map) labels.push_back(pcg.labels().at(v));
  return {{"map", map}, {"labels", std::move(labels)}};
}

QubitMap map_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("map")) throw FormatError("placement JSON needs \"map\"");
    return j.at("map").get<QubitMap>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("placement JSON: ") + e.what());
  }
}

json audit_to_json(const DesignAudit& audit, const CouplingGraph& ccg) {
  json stats = json::array();
  for (const auto& s : audit.rank.stats) {
    stats.push_back({{"degree", s.degree}, {"total_weight", s.total_weight}, {"dispersion", s.dispersion}});
  }
  json candidates = json::array();
  for (const auto& run : audit.candidates) {
    json splits = json::array();
    for (const auto& s : run.splits) {
      splits.push_back({{"origin", s.origin},
                        {"structure", graph_to_json(s.structure, false)},
                        {"placed", s.placed},
                        {"home", s.home},
                        {"alloc", s.alloc},
                        {"score", s.score},
                        {"trimmed", edge_list(s.trimmed)}});
    }
    candidates.push_back({{"media_count", run.media_count},
                          {"media", run.prune.media},
                          {"pruned", graph_to_json(run.prune.pruned, true)},
                          {"recover_set", edge_list(run.prune.recover_set)},
                          {"splits", std::move(splits)},
                          {"dropped", edge_list(run.dropped)},
                          {"recovered", edge_list(run.recovered)},
                          {"rejected", edge_list(run.rejected)},
                          {"bridges", edge_list(run.bridges)},
                          {"pcg", graph_to_json(run.pcg, false)},
                          {"score", run.score}});
  }
  return {{"ccg", graph_to_json(ccg, true)},
          {"rank", {{"order", audit.rank.order}, {"stats", std::move(stats)}}},
          {"candidates", std::move(candidates)},
          {"chosen", audit.chosen},
          {"media_count", audit.candidates.at(audit.chosen).media_count}};
}

json summary_to_json(const BenchSummary& s) {
  json cells = json::array();
  for (const auto& c : s.cells) {
    cells.push_back({{"n_qubits", c.n_qubits},
                     {"depth", c.depth},
                     {"topology", c.topology},
                     {"count", c.count},
                     {"g_ap", interval(c.g_ap)}});
  }
  json trends = json::object();
  for (const auto& [k, t] : s.depth_trends) {
    trends[key(k)] = {{"topology", k.first},
                      {"n_qubits", k.second},
                      {"S", t.s},
                      {"variance", t.variance},
                      {"Z", t.z},
                      {"verdict", std::string(to_string(t.verdict))}};
  }
  json slopes = json::object();
  for (const auto& [k, v] : s.qubit_slopes) {
    slopes[key(k)] = {{"topology", k.first}, {"depth", k.second}, {"slope", v}};
  }
  json baselines = json::array();
  for (const auto& b : s.baselines) baselines.push_back(comparison(b));
  json histograms = json::object();
  for (const auto& [t, h] : s.histograms) histograms[t] = {{"edges", h.edges}, {"counts", h.counts}};
  json out = {{"cells", std::move(cells)},
              {"depth_trends", std::move(trends)},
              {"qubit_slopes", std::move(slopes)},
              {"topology_means", s.topology_means},
              {"baselines", std::move(baselines)},
              {"cells_won_all", s.cells_won_all},
              {"cell_groups", s.cell_groups},
              {"histograms", std::move(histograms)},
              {"failures", s.failures}};
  out["spqpd_mean"] = s.spqpd_mean ? json(*s.spqpd_mean) : json(nullptr);
  out["best_baseline"] = s.best_baseline ? comparison(*s.best_baseline) : json(nullptr);
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace qtopo::io
