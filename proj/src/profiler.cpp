#include "qtopo/profiler.hpp"

#include <limits>
#include <vector>

namespace qtopo {

namespace {

constexpr std::size_t kNoGate = std::numeric_limits<std::size_t>::max();

struct TwoQubitStream {
  std::vector<std::pair<Qubit, Qubit>> gates;
  std::vector<std::vector<std::size_t>> by_qubit;  // positions in `gates`
};

TwoQubitStream two_qubit_stream(const Circuit& c) {
  TwoQubitStream s;
  s.by_qubit.resize(c.num_qubits());
  for (const Gate& g : c.gates()) {
    if (!g.is_two_qubit()) continue;
    s.by_qubit[g.qubits[0]].push_back(s.gates.size());
    s.by_qubit[g.qubits[1]].push_back(s.gates.size());
    s.gates.emplace_back(g.qubits[0], g.qubits[1]);
  }
  return s;
}

}  // namespace

CountMatrix block_matrix(const Circuit& c) {
  const auto n = static_cast<Eigen::Index>(c.num_qubits());
  CountMatrix m = CountMatrix::Zero(n, n);
  // partner in the last two-qubit gate touching each qubit
  std::vector<std::size_t> last(c.num_qubits(), kNoGate);
  for (const Gate& g : c.gates()) {
    if (!g.is_two_qubit()) continue;
    const Qubit a = g.qubits[0], b = g.qubits[1];
    if (last[a] != b || last[b] != a) {
      ++m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      ++m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a));
    }
    last[a] = b;
    last[b] = a;
  }
  return m;
}

CouplingGraph profile(const Circuit& c) {
  CouplingGraph g = CouplingGraph::from_adjacency_matrix(block_matrix(c));
  for (Vertex v = 0; v < g.size(); ++v) g.set_label(v, "q" + std::to_string(v));
  return g;
}

CountMatrix compute_s(const Circuit& c, Qubit v) {
  if (v >= c.num_qubits()) throw std::out_of_range("compute_s: qubit out of range");
  const std::size_t n = c.num_qubits();
  const auto stream = two_qubit_stream(c);

  // runs[m][l] = blocks on {m, v} inside the circuit restricted to {m, l, v}
  std::vector<std::vector<Weight>> runs(n, std::vector<Weight>(n, 0));
  std::vector<std::size_t> mark(n, kNoGate);
  std::vector<Qubit> breakers;
  for (Qubit m = 0; m < n; ++m) {
    if (m == v) continue;
    const auto& pm = stream.by_qubit[m];
    const auto& pv = stream.by_qubit[v];
    std::size_t i = 0, j = 0, gap = 0;
    bool started = false;
    breakers.clear();
    // merge the two position lists; a gate on {m, v} appears in both
    while (i < pm.size() || j < pv.size()) {
      std::size_t pos;
      if (j == pv.size() || (i < pm.size() && pm[i] < pv[j])) {
        pos = pm[i++];
      } else if (i == pm.size() || pv[j] < pm[i]) {
        pos = pv[j++];
      } else {
        pos = pm[i++];
        ++j;
      }
      const auto [a, b] = stream.gates[pos];
      const bool on_m = a == m || b == m;
      const bool on_v = a == v || b == v;
      if (on_m && on_v) {
        if (!started) {
          started = true;
          for (Qubit l = 0; l < n; ++l) runs[m][l] = 1;
        } else {
          for (Qubit l : breakers) ++runs[m][l];
        }
        breakers.clear();
        ++gap;
      } else if (started) {
        const Qubit partner = on_m ? (a == m ? b : a) : (a == v ? b : a);
        if (mark[partner] != gap) {
          mark[partner] = gap;
          breakers.push_back(partner);
        }
      }
    }
    std::fill(mark.begin(), mark.end(), kNoGate);
  }

  const auto size = static_cast<Eigen::Index>(n);
  CountMatrix s = CountMatrix::Zero(size, size);
  for (Qubit m = 0; m < n; ++m) {
    for (Qubit l = 0; l < n; ++l) {
      if (m == l || m == v || l == v) continue;
      if (runs[m][l] > 0 && runs[l][m] > 0) {
        s(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(l)) = runs[m][l] + runs[l][m];
      }
    }
  }
  return s;
}

}  // namespace qtopo
