#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtopo/designer.hpp"
#include "qtopo/router.hpp"
#include "qtopo/stats.hpp"

namespace qtopo {

/// Topology names: "spqpd" (designed per circuit), or a lattice kind name.
struct BenchConfig {
  std::vector<std::size_t> qubits;
  std::vector<std::size_t> depths;
  std::size_t samples = 1;
  std::vector<std::string> topologies{"spqpd", "triangular", "cross_square"};
  std::uint64_t seed = 0;
  double two_qubit_density = 0.8;
  DesignOptions design;
  RouterOptions router;  // router.seed is replaced per circuit
  MapPolicy policy = MapPolicy::ReverseTraversal;
  /// Wall-clock columns are written as 0 unless set, so output stays
  /// byte-identical across runs.
  bool timings = false;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

/// n in {16, 24, 32, 48}, depth in {50, 100, 200, 400}, 20 samples.
BenchConfig desk_preset();
/// Accepts "desk" and "smoke".
BenchConfig bench_preset(const std::string& name);

struct BenchRecord {
  std::string circuit_id;
  std::size_t n_qubits = 0;
  std::size_t depth = 0;
  std::string topology;
  std::uint64_t seed = 0;
  std::size_t g_ori = 0;
  std::size_t g_add = 0;
  std::optional<double> g_ap;
  double design_ms = 0;
  double route_ms = 0;
  std::string error;  // non-empty when the record failed
};

/// Seed of sample `s` in cell (n, depth); independent of grid order so the
/// same circuit appears in every config that contains the cell.
std::uint64_t sample_seed(std::uint64_t base, std::size_t n, std::size_t depth, std::size_t sample);

/// Runs every (n, depth, sample) circuit on every topology. Records are
/// ordered by n, depth, sample, then topology as listed in the config.
/// Failures are recorded in BenchRecord::error and the suite continues.
std::vector<BenchRecord> run_suite(const BenchConfig& config);

std::string to_csv(const std::vector<BenchRecord>& records);
/// Inverse of to_csv (error text is not part of the schema).
std::vector<BenchRecord> parse_csv(const std::string& text);

struct CellSummary {
  std::size_t n_qubits = 0;
  std::size_t depth = 0;
  std::string topology;
  std::size_t count = 0;  // records with a defined g_ap
  Interval g_ap;          // lo == hi == mean below 2 samples
};

struct BaselineComparison {
  std::string topology;
  double mean = 0;
  /// (baseline mean - spqpd mean) / spqpd mean over all paired records.
  double improvement = 0;
  std::size_t cells_won = 0;  // cells where spqpd's mean is strictly lower
  std::size_t cells = 0;
};

struct BenchSummary {
  std::vector<CellSummary> cells;
  /// Mann-Kendall of cell means along depth, keyed by (topology, n); only
  /// for rows with at least 4 depths.
  std::map<std::pair<std::string, std::size_t>, TrendResult> depth_trends;
  /// Least-squares slope of cell means along n, keyed by (topology, depth).
  std::map<std::pair<std::string, std::size_t>, double> qubit_slopes;
  std::map<std::string, double> topology_means;
  std::optional<double> spqpd_mean;
  std::vector<BaselineComparison> baselines;
  /// Improvement over the baseline with the lowest mean.
  std::optional<BaselineComparison> best_baseline;
  /// Cells where spqpd beats every baseline.
  std::size_t cells_won_all = 0;
  std::size_t cell_groups = 0;
  std::map<std::string, Histogram> histograms;  // shared edges over [0, max g_ap]
  std::size_t failures = 0;
};

/// Pure function of the records.
BenchSummary summarize(const std::vector<BenchRecord>& records, std::size_t bins = 20);

}  // namespace qtopo
