// qtopo command-line entry point.
//
// Artifacts (graphs, maps, circuits, CSV) go to the --out style paths, or to
// stdout for "-". A one-line report goes to stderr; with --json it is a JSON
// object, as are errors.
//
// Exit codes: 0 ok, 1 internal error, 2 usage, 3 unreadable or invalid
// input, 4 a result that violates the hardware constraints.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json_io.hpp"
#include "qtopo/bench.hpp"
#include "qtopo/circuit.hpp"
#include "qtopo/designer.hpp"
#include "qtopo/lattice.hpp"
#include "qtopo/profiler.hpp"
#include "qtopo/qasm.hpp"
#include "qtopo/router.hpp"

namespace {

using namespace qtopo;
using io::json;

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kInput = 3, kConstraint = 4 };

class ConstraintFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool g_json = false;

void report(const std::string& command, json fields) {
  if (g_json) {
    fields["command"] = command;
    std::cerr << fields.dump() << "\n";
    return;
  }
  std::cerr << command << ":";
  for (const auto& [k, v] : fields.items()) std::cerr << " " << k << "=" << v.dump();
  std::cerr << "\n";
}

int fail(const char* category, int code, const std::string& message) {
  if (g_json) {
    std::cerr << json{{"error", {{"category", category}, {"message", message}}}}.dump() << "\n";
  } else {
    std::cerr << "error[" << category << "]: " << message << "\n";
  }
  return code;
}

void require_legal(const CouplingGraph& g, const ConstraintSet& c, const std::string& what) {
  const auto r = check_constraints(g, c);
  if (r.ok()) return;
  std::ostringstream msg;
  msg << what << " violates the constraints:";
  if (!r.planar) msg << " non-planar;";
  for (const auto& v : r.over_degree) msg << " vertex " << v.vertex << " has degree " << v.degree << ";";
  throw ConstraintFailure(msg.str());
}

Dispersion parse_dispersion(const std::string& s) {
  if (s == "std") return Dispersion::StdDev;
  if (s == "variance") return Dispersion::Variance;
  if (s == "range") return Dispersion::Range;
  throw std::invalid_argument("unknown dispersion '" + s + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct RouterFlags {
  std::size_t extended_size = 20;
  double extended_weight = 0.5;
  double decay = 0.001;
  std::size_t decay_reset = 5;

  void attach(CLI::App* app) {
    app->add_option("--extended-size", extended_size, "Lookahead gates")->capture_default_str();
    app->add_option("--extended-weight", extended_weight, "Lookahead weight")->capture_default_str();
    app->add_option("--decay", decay, "Decay increment per swap")->capture_default_str();
    app->add_option("--decay-reset", decay_reset, "Swaps between decay resets")->capture_default_str();
  }
  RouterOptions options(std::uint64_t seed) const {
    RouterOptions o;
    o.extended_size = extended_size;
    o.extended_weight = extended_weight;
    o.decay = decay;
    o.decay_reset = decay_reset;
    o.seed = seed;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar coupling-graph design and swap-routing toolkit"};
  app.require_subcommand(1);
  const auto kPolicies = CLI::IsMember({"identity", "reverse_traversal"});
  app.add_flag("--json", g_json, "Machine-readable reports and errors on stderr");

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "Circuit coupling graph of a QASM file");
  std::string p_circuit, p_out = "-";
  profile_cmd->add_option("--circuit", p_circuit, "OpenQASM 2.0 input")->required();
  profile_cmd->add_option("--out", p_out, "CCG JSON output")->capture_default_str();

  // design
  auto* design_cmd = app.add_subcommand("design", "Design a planar bounded-degree coupling graph");
  std::string d_circuit, d_ccg, d_out, d_placement, d_audit, d_dispersion = "std";
  std::size_t d_degree = 6;
  double d_alpha = 0.5;
  std::optional<std::size_t> d_media;
  bool d_matrices = false;
  auto* d_circuit_opt = design_cmd->add_option("--circuit", d_circuit, "OpenQASM 2.0 input");
  auto* d_ccg_opt = design_cmd->add_option("--ccg", d_ccg, "CCG JSON input (I = M)");
  d_circuit_opt->excludes(d_ccg_opt);
  design_cmd->add_option("--out", d_out, "PCG JSON output")->required();
  design_cmd->add_option("--placement", d_placement, "Placement JSON output");
  auto* d_audit_opt = design_cmd->add_option("--audit", d_audit, "Audit JSON output");
  design_cmd->add_option("--max-degree", d_degree, "Coupler limit per qubit")
      ->envname("QTOPO_MAX_DEGREE")
      ->capture_default_str();
  design_cmd->add_option("--alpha", d_alpha, "Weight of the S matrix in I = M + a*S")
      ->envname("QTOPO_ALPHA")
      ->capture_default_str();
  design_cmd->add_option("--media-count", d_media, "Fix N instead of searching");
  design_cmd->add_option("--dispersion", d_dispersion, "std, variance or range")
      ->check(CLI::IsMember({"std", "variance", "range"}))
      ->capture_default_str();
  design_cmd->add_flag("--dump-matrices", d_matrices, "Add M and per-split I to the audit")->needs(d_audit_opt);

  // lattice
  auto* lattice_cmd = app.add_subcommand("lattice", "Generate a lattice coupling graph");
  std::string l_kind, l_out = "-";
  std::size_t l_qubits = 0, l_rows = 0, l_cols = 0;
  bool l_all_faces = false;
  lattice_cmd->add_option("--kind", l_kind, "triangular, cross_square or square")
      ->check(CLI::IsMember({"triangular", "cross_square", "square"}))
      ->required();
  auto* l_qubits_opt = lattice_cmd->add_option("--qubits", l_qubits, "Smallest near-square lattice");
  auto* l_rows_opt = lattice_cmd->add_option("--rows", l_rows, "Explicit rows");
  auto* l_cols_opt = lattice_cmd->add_option("--cols", l_cols, "Explicit columns");
  l_rows_opt->needs(l_cols_opt)->excludes(l_qubits_opt);
  l_cols_opt->needs(l_rows_opt);
  lattice_cmd->add_flag("--all-faces", l_all_faces, "Cross every face (exceeds degree 6)");
  lattice_cmd->add_option("--out", l_out, "Graph JSON output")->capture_default_str();

  // route
  auto* route_cmd = app.add_subcommand("route", "Insert swaps so every gate is on a coupler");
  std::string r_circuit, r_pcg, r_placement, r_policy = "identity", r_out = "-", r_summary;
  std::uint64_t r_seed = 0;
  RouterFlags r_flags;
  route_cmd->add_option("--circuit", r_circuit, "OpenQASM 2.0 input")->required();
  route_cmd->add_option("--pcg", r_pcg, "PCG JSON")->required();
  route_cmd->add_option("--placement", r_placement, "Start map JSON (else breadth-first from the center)");
  route_cmd->add_option("--policy", r_policy, "identity or reverse_traversal")
      ->check(kPolicies)
      ->envname("QTOPO_POLICY")
      ->capture_default_str();
  route_cmd->add_option("--seed", r_seed, "Tie-break seed")->envname("QTOPO_SEED")->capture_default_str();
  route_cmd->add_option("--out", r_out, "Routed QASM output")->capture_default_str();
  route_cmd->add_option("--summary", r_summary, "Summary JSON output");
  r_flags.attach(route_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Random-circuit benchmark over topologies");
  std::string b_preset, b_csv = "-", b_summary, b_policy = "reverse_traversal";
  std::vector<std::size_t> b_qubits, b_depths;
  std::vector<std::string> b_topologies;
  std::optional<std::size_t> b_samples;
  std::optional<std::uint64_t> b_seed;
  std::optional<double> b_density;
  std::size_t b_threads = 0, b_bins = 20, b_degree = 6;
  double b_alpha = 0.5;
  bool b_timings = false;
  RouterFlags b_flags;
  bench_cmd->add_option("--preset", b_preset, "desk or smoke");
  bench_cmd->add_option("--qubits", b_qubits, "Qubit counts")->delimiter(',');
  bench_cmd->add_option("--depths", b_depths, "Circuit depths")->delimiter(',');
  bench_cmd->add_option("--samples", b_samples, "Circuits per cell");
  bench_cmd->add_option("--topologies", b_topologies, "spqpd and lattice kinds")->delimiter(',');
  bench_cmd->add_option("--seed", b_seed, "Base seed")->envname("QTOPO_SEED");
  bench_cmd->add_option("--density", b_density, "Two-qubit density of random layers");
  bench_cmd->add_option("--policy", b_policy, "Start-map refinement")
      ->check(kPolicies)
      ->envname("QTOPO_POLICY")
      ->capture_default_str();
  bench_cmd->add_option("--max-degree", b_degree, "Coupler limit per qubit")
      ->envname("QTOPO_MAX_DEGREE")
      ->capture_default_str();
  bench_cmd->add_option("--alpha", b_alpha, "Weight of the S matrix")->envname("QTOPO_ALPHA")->capture_default_str();
  bench_cmd->add_option("--threads", b_threads, "Worker threads (0 = all cores)")->envname("QTOPO_THREADS");
  bench_cmd->add_flag("--timings", b_timings, "Record wall-clock columns (output is no longer reproducible)");
  bench_cmd->add_option("--bins", b_bins, "Histogram bins")->capture_default_str();
  bench_cmd->add_option("--csv", b_csv, "Record CSV output")->capture_default_str();
  bench_cmd->add_option("--summary", b_summary, "Summary JSON output");
  b_flags.attach(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", kUsage, e.what());
  }

  try {
    if (*profile_cmd) {
      const Circuit c = read_qasm_file(p_circuit);
      const CouplingGraph ccg = profile(c);
      io::write_text(p_out, dump(io::graph_to_json(ccg, true)));
      report("profile", {{"qubits", c.num_qubits()},
                         {"two_qubit_gates", count_two_qubit_gates(c)},
                         {"edges", ccg.edge_count()},
                         {"total_weight", ccg.total_weight()}});
    } else if (*design_cmd) {
      if (d_circuit.empty() == d_ccg.empty()) {
        return fail("usage", kUsage, "design needs exactly one of --circuit and --ccg");
      }
      DesignOptions options;
      options.constraints.max_degree = d_degree;
      options.alpha = d_alpha;
      options.media_count = d_media;
      options.dispersion = parse_dispersion(d_dispersion);
      validate(options.constraints);

      CouplingGraph ccg;
      InteractionSource interactions;
      if (!d_circuit.empty()) {
        const Circuit c = read_qasm_file(d_circuit);
        ccg = profile(c);
        interactions = circuit_interactions(c, d_alpha);
      } else {
        ccg = io::graph_from_json(io::read_json_file(d_ccg));
        interactions = ccg_interactions(ccg);
      }
      const DesignResult r = design(ccg, interactions, options);
      require_legal(r.pcg, options.constraints, "designed PCG");
      io::write_text(d_out, dump(io::graph_to_json(r.pcg, false)));
      if (!d_placement.empty()) io::write_text(d_placement, dump(io::map_to_json(r.placement, r.pcg)));
      if (!d_audit.empty()) {
        json audit = io::audit_to_json(r.audit, ccg);
        audit["constraints"] = {{"max_degree", d_degree}, {"planar", true}};
        audit["alpha"] = d_alpha;
        if (d_matrices) {
          json per_split = json::object();
          for (const auto& s : r.audit.candidates[r.audit.chosen].splits) {
            per_split[std::to_string(s.origin)] = matrix_json(interactions(s.origin));
          }
          audit["matrices"] = {{"M", matrix_json(ccg.adjacency_matrix().cast<double>())}, {"I", per_split}};
        }
        io::write_text(d_audit, dump(audit));
      }
      report("design", {{"qubits", ccg.size()},
                        {"vertexes", r.pcg.size()},
                        {"ancillas", r.ancilla_count},
                        {"edges", r.pcg.edge_count()},
                        {"media_count", r.audit.candidates[r.audit.chosen].media_count},
                        {"score", r.audit.candidates[r.audit.chosen].score}});
    } else if (*lattice_cmd) {
      const LatticeKind kind = parse_lattice_kind(l_kind);
      LatticeSpec spec;
      if (l_rows > 0) {
        spec = {kind, l_rows, l_cols};
      } else if (l_qubits > 0) {
        spec = lattice_for_qubits(kind, l_qubits);
      } else {
        return fail("usage", kUsage, "lattice needs --qubits or --rows/--cols");
      }
      if (l_all_faces) spec.cross_faces = CrossFaces::All;
      const CouplingGraph g = make_lattice(spec);
      require_legal(g, lattice_constraints(kind), std::string(to_string(kind)) + " lattice");
      io::write_text(l_out, dump(io::graph_to_json(g, false)));
      report("lattice", {{"kind", std::string(to_string(kind))},
                         {"rows", spec.rows},
                         {"cols", spec.cols},
                         {"edges", g.edge_count()},
                         {"max_degree", g.max_degree()}});
    } else if (*route_cmd) {
      const Circuit c = read_qasm_file(r_circuit);
      const CouplingGraph pcg = io::graph_from_json(io::read_json_file(r_pcg));
      const MapPolicy policy = parse_map_policy(r_policy);
      const RouterOptions options = r_flags.options(r_seed);
      QubitMap start = r_placement.empty() ? identity_map(c, pcg) : io::map_from_json(io::read_json_file(r_placement));
      if (policy == MapPolicy::ReverseTraversal) start = reverse_traversal_map(c, pcg, start, options);
      const RoutedCircuit routed = route(c, pcg, start, options);

      std::string text = to_qasm(routed.circuit);
      if (routed.g_add > 0) {
        const std::string include = "include \"qelib1.inc\";\n";
        text.insert(text.find(include) + include.size(), "gate swap a,b { cx a,b; cx b,a; cx a,b; }\n");
      }
      io::write_text(r_out, text);
      const auto ratio = g_ap(routed);
      json summary = {{"g_ori", routed.g_ori},
                      {"g_add", routed.g_add},
                      {"g_ap", ratio ? json(*ratio) : json(nullptr)},
                      {"outcome", ratio ? "ok" : "no_two_qubit_gates"},
                      {"depth_in", circuit_depth(c)},
                      {"depth_out", circuit_depth(routed.circuit)},
                      {"policy", std::string(to_string(policy))},
                      {"seed", r_seed},
                      {"initial_map", routed.initial_map},
                      {"final_map", routed.final_map}};
      if (!r_summary.empty()) io::write_text(r_summary, dump(summary));
      summary.erase("initial_map");
      summary.erase("final_map");
      report("route", summary);
    } else if (*bench_cmd) {
      BenchConfig config = b_preset.empty() ? BenchConfig{} : bench_preset(b_preset);
      if (!b_qubits.empty()) config.qubits = b_qubits;
      if (!b_depths.empty()) config.depths = b_depths;
      if (!b_topologies.empty()) config.topologies = b_topologies;
      if (b_samples) config.samples = *b_samples;
      if (b_seed) config.seed = *b_seed;
      if (b_density) config.two_qubit_density = *b_density;
      if (config.qubits.empty() || config.depths.empty()) {
        return fail("usage", kUsage, "bench needs --preset or both --qubits and --depths");
      }
      config.policy = parse_map_policy(b_policy);
      config.design.constraints.max_degree = b_degree;
      config.design.alpha = b_alpha;
      config.router = b_flags.options(0);
      config.threads = b_threads;
      config.timings = b_timings;

      const auto records = run_suite(config);
      for (const auto& r : records) {
        if (!r.error.empty()) report("bench", {{"circuit_id", r.circuit_id}, {"topology", r.topology}, {"error", r.error}});
      }
      io::write_text(b_csv, to_csv(records));
      const BenchSummary s = summarize(records, b_bins);
      if (!b_summary.empty()) {
        json j = io::summary_to_json(s);
        j["config"] = {{"qubits", config.qubits},
                       {"depths", config.depths},
                       {"samples", config.samples},
                       {"topologies", config.topologies},
                       {"seed", config.seed},
                       {"density", config.two_qubit_density},
                       {"policy", std::string(to_string(config.policy))}};
        io::write_text(b_summary, dump(j));
      }
      json fields = {{"records", records.size()}, {"failures", s.failures}};
      if (s.best_baseline) {
        fields["best_baseline"] = s.best_baseline->topology;
        fields["improvement"] = s.best_baseline->improvement;
      }
      report("bench", fields);
    }
  } catch (const QasmError& e) {
    return fail("input", kInput, e.what());
  } catch (const io::FormatError& e) {
    return fail("input", kInput, e.what());
  } catch (const ConstraintFailure& e) {
    return fail("constraint", kConstraint, e.what());
  } catch (const std::invalid_argument& e) {
    return fail("input", kInput, e.what());
  } catch (const std::out_of_range& e) {
    return fail("input", kInput, e.what());
  } catch (const std::runtime_error& e) {
    return fail("io", kInput, e.what());
  } catch (const std::exception& e) {
    return fail("internal", kInternal, e.what());
  }
  return kOk;
}
