#include "qtopo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qtopo/lattice.hpp"
#include "qtopo/random.hpp"

namespace qtopo {

namespace {

constexpr const char* kSpqpd = "spqpd";
constexpr const char* kHeader = "circuit_id,n_qubits,depth,topology,seed,g_ori,g_add,g_ap,design_ms,route_ms";

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Task {
  std::size_t n;
  std::size_t depth;
  std::size_t sample;
};

std::vector<BenchRecord> run_task(const BenchConfig& config, const Task& task) {
  const std::uint64_t seed = sample_seed(config.seed, task.n, task.depth, task.sample);
  const std::string id =
      "n" + std::to_string(task.n) + "_d" + std::to_string(task.depth) + "_s" + std::to_string(task.sample);
  RouterOptions router = config.router;
  router.seed = seed;

  std::vector<BenchRecord> out;
  std::optional<Circuit> circuit;
  std::string circuit_error;
  try {
    circuit = generate_random_circuit({task.n, task.depth, config.two_qubit_density, seed});
  } catch (const std::exception& e) {
    circuit_error = e.what();
  }

  for (const auto& topology : config.topologies) {
    BenchRecord r;
    r.circuit_id = id;
    r.n_qubits = task.n;
    r.depth = task.depth;
    r.topology = topology;
    r.seed = seed;
    if (!circuit) {
      r.error = circuit_error;
      out.push_back(std::move(r));
      continue;
    }
    try {
      const auto t0 = std::chrono::steady_clock::now();
      CouplingGraph pcg(1);
      QubitMap start;
      if (topology == kSpqpd) {
        auto d = design(*circuit, config.design);
        pcg = std::move(d.pcg);
        start = std::move(d.placement);
      } else {
        pcg = make_lattice(lattice_for_qubits(parse_lattice_kind(topology), task.n));
        start = identity_map(*circuit, pcg);
      }
      const double design_ms = ms_since(t0);
      const auto t1 = std::chrono::steady_clock::now();
      if (config.policy == MapPolicy::ReverseTraversal) {
        start = reverse_traversal_map(*circuit, pcg, start, router);
      }
      const auto routed = route(*circuit, pcg, start, router);
      const double route_ms = ms_since(t1);
      r.g_ori = routed.g_ori;
      r.g_add = routed.g_add;
      r.g_ap = g_ap(routed);
      if (config.timings) {
        r.design_ms = design_ms;
        r.route_ms = route_ms;
      }
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

BenchConfig desk_preset() {
  BenchConfig c;
  c.qubits = {16, 24, 32, 48};
  c.depths = {50, 100, 200, 400};
  c.samples = 20;
  c.seed = 2024;
  return c;
}

BenchConfig bench_preset(const std::string& name) {
  if (name == "desk") return desk_preset();
  if (name == "smoke") {
    BenchConfig c;
    c.qubits = {8, 12};
    c.depths = {10, 20, 40, 80};
    c.samples = 3;
    c.seed = 2024;
    return c;
  }
  throw std::invalid_argument("unknown bench preset '" + name + "'");
}

std::uint64_t sample_seed(std::uint64_t base, std::size_t n, std::size_t depth, std::size_t sample) {
  return derive_seed(derive_seed(derive_seed(base, n), depth), sample);
}

std::vector<BenchRecord> run_suite(const BenchConfig& config) {
  if (config.topologies.empty()) throw std::invalid_argument("no topologies configured");
  for (const auto& t : config.topologies) {
    if (t != kSpqpd) parse_lattice_kind(t);
  }
  std::vector<Task> tasks;
  for (std::size_t n : config.qubits) {
    for (std::size_t d : config.depths) {
      for (std::size_t s = 0; s < config.samples; ++s) tasks.push_back({n, d, s});
    }
  }
  std::vector<std::vector<BenchRecord>> results(tasks.size());
  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(tasks.size(), 1));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = run_task(config, tasks[i]);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<BenchRecord> records;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(records));
  return records;
}

std::string to_csv(const std::vector<BenchRecord>& records) {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& r : records) {
    out += r.circuit_id + "," + std::to_string(r.n_qubits) + "," + std::to_string(r.depth) + "," + r.topology +
           "," + std::to_string(r.seed) + "," + std::to_string(r.g_ori) + "," + std::to_string(r.g_add) + "," +
           (r.g_ap ? format_double(*r.g_ap) : "") + "," + format_double(r.design_ms) + "," +
           format_double(r.route_ms) + "\n";
  }
  return out;
}

std::vector<BenchRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::invalid_argument("unexpected CSV header");
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1) {
      f.push_back(line.substr(start, pos - start));
    }
    f.push_back(line.substr(start));
    if (f.size() != 10) throw std::invalid_argument("CSV row with " + std::to_string(f.size()) + " fields");
    BenchRecord r;
    r.circuit_id = f[0];
    r.n_qubits = std::stoull(f[1]);
    r.depth = std::stoull(f[2]);
    r.topology = f[3];
    r.seed = std::stoull(f[4]);
    r.g_ori = std::stoull(f[5]);
    r.g_add = std::stoull(f[6]);
    if (!f[7].empty()) r.g_ap = std::stod(f[7]);
    r.design_ms = std::stod(f[8]);
    r.route_ms = std::stod(f[9]);
    records.push_back(std::move(r));
  }
  return records;
}

BenchSummary summarize(const std::vector<BenchRecord>& records, std::size_t bins) {
  BenchSummary s;
  using Cell = std::tuple<std::size_t, std::size_t, std::string>;
  std::vector<std::string> topologies;
  std::map<Cell, std::vector<double>> cells;
  std::map<std::string, std::vector<double>> by_topology;
  // per circuit, g_ap by topology, for paired means
  std::map<std::string, std::map<std::string, double>> paired;
  double top = 0;
  for (const auto& r : records) {
    if (std::find(topologies.begin(), topologies.end(), r.topology) == topologies.end()) {
      topologies.push_back(r.topology);
    }
    if (!r.g_ap) {
      s.failures += !r.error.empty();
      continue;
    }
    cells[Cell{r.n_qubits, r.depth, r.topology}].push_back(*r.g_ap);
    by_topology[r.topology].push_back(*r.g_ap);
    paired[r.circuit_id][r.topology] = *r.g_ap;
    top = std::max(top, *r.g_ap);
  }

  std::map<Cell, double> means;
  std::set<std::size_t> ns, depths;
  for (const auto& [cell, values] : cells) {
    CellSummary c;
    std::tie(c.n_qubits, c.depth, c.topology) = cell;
    c.count = values.size();
    if (values.size() >= 2) {
      c.g_ap = confidence_interval(values);
    } else {
      c.g_ap = {values[0], values[0], values[0]};
    }
    means[cell] = c.g_ap.mean;
    ns.insert(c.n_qubits);
    depths.insert(c.depth);
    s.cells.push_back(std::move(c));
  }

  for (const auto& t : topologies) {
    for (std::size_t n : ns) {
      std::vector<double> series;
      for (std::size_t d : depths) {
        if (auto it = means.find({n, d, t}); it != means.end()) series.push_back(it->second);
      }
      if (series.size() >= 4) s.depth_trends[{t, n}] = mann_kendall(series);
    }
    for (std::size_t d : depths) {
      std::vector<double> xs, ys;
      for (std::size_t n : ns) {
        if (auto it = means.find({n, d, t}); it != means.end()) {
          xs.push_back(static_cast<double>(n));
          ys.push_back(it->second);
        }
      }
      if (xs.size() >= 2) s.qubit_slopes[{t, d}] = linreg_slope(xs, ys);
    }
    if (auto it = by_topology.find(t); it != by_topology.end()) {
      double sum = 0;
      for (double x : it->second) sum += x;
      s.topology_means[t] = sum / static_cast<double>(it->second.size());
      s.histograms[t] = histogram(it->second, bins, top > 0 ? top : 1);
    }
  }

  if (auto it = s.topology_means.find(kSpqpd); it != s.topology_means.end()) s.spqpd_mean = it->second;
  if (!s.spqpd_mean) return s;

  std::vector<std::string> baselines;
  for (const auto& t : topologies) {
    if (t != kSpqpd) baselines.push_back(t);
  }
  for (const auto& b : baselines) {
    BaselineComparison cmp;
    cmp.topology = b;
    double sum_b = 0, sum_s = 0;
    std::size_t pairs = 0;
    for (const auto& [id, values] : paired) {
      auto sb = values.find(b), ss = values.find(kSpqpd);
      if (sb == values.end() || ss == values.end()) continue;
      sum_b += sb->second;
      sum_s += ss->second;
      ++pairs;
    }
    if (pairs == 0) continue;
    cmp.mean = sum_b / static_cast<double>(pairs);
    cmp.improvement = sum_s > 0 ? (sum_b - sum_s) / sum_s : 0;
    for (std::size_t n : ns) {
      for (std::size_t d : depths) {
        auto mb = means.find({n, d, b}), ms = means.find({n, d, kSpqpd});
        if (mb == means.end() || ms == means.end()) continue;
        ++cmp.cells;
        cmp.cells_won += ms->second < mb->second;
      }
    }
    if (!s.best_baseline || cmp.mean < s.best_baseline->mean) s.best_baseline = cmp;
    s.baselines.push_back(std::move(cmp));
  }
  for (std::size_t n : ns) {
    for (std::size_t d : depths) {
      auto ms = means.find({n, d, kSpqpd});
      if (ms == means.end()) continue;
      bool all = !baselines.empty();
      for (const auto& b : baselines) {
        auto mb = means.find({n, d, b});
        all = all && mb != means.end() && ms->second < mb->second;
      }
      ++s.cell_groups;
      s.cells_won_all += all;
    }
  }
  return s;
}

}  // namespace qtopo
