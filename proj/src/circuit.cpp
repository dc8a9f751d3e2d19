#include "qtopo/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qtopo/random.hpp"

namespace qtopo {

Gate Gate::one_qubit(std::string name, Qubit q, std::string params) {
  return Gate{GateKind::OneQubit, std::move(name), {q}, std::move(params), {}};
}

Gate Gate::two_qubit(std::string name, Qubit a, Qubit b, std::string params) {
  return Gate{GateKind::TwoQubit, std::move(name), {a, b}, std::move(params),
              {}};
}

Gate Gate::measure(Qubit q, std::string target) {
  return Gate{GateKind::Measure, "measure", {q}, {}, std::move(target)};
}

Gate Gate::barrier(std::vector<Qubit> qubits) {
  return Gate{GateKind::Barrier, "barrier", std::move(qubits), {}, {}};
}

Circuit::Circuit(std::size_t num_qubits, std::string name)
    : num_qubits_(num_qubits), name_(std::move(name)) {
  if (num_qubits_ == 0) {
    throw std::invalid_argument("circuit needs at least one qubit");
  }
}

void Circuit::add(Gate gate) {
  for (Qubit q : gate.qubits) {
    if (q >= num_qubits_) {
      throw std::out_of_range("gate '" + gate.name + "' uses qubit " +
                              std::to_string(q) + " outside register of " +
                              std::to_string(num_qubits_));
    }
  }
  switch (gate.kind) {
    case GateKind::TwoQubit:
      if (gate.qubits.size() != 2 || gate.qubits[0] == gate.qubits[1]) {
        throw std::invalid_argument("two-qubit gate '" + gate.name +
                                    "' needs two distinct qubits");
      }
      break;
    case GateKind::OneQubit:
    case GateKind::Measure:
      if (gate.qubits.size() != 1) {
        throw std::invalid_argument("gate '" + gate.name +
                                    "' takes exactly one qubit");
      }
      break;
    case GateKind::Barrier:
      if (gate.qubits.empty()) {
        throw std::invalid_argument("barrier without qubits");
      }
      break;
  }
  gates_.push_back(std::move(gate));
}

void Circuit::add_creg(ClassicalRegister reg) { cregs_.push_back(std::move(reg)); }

void Circuit::set_metadata(const std::string& key, std::string value) {
  metadata_[key] = std::move(value);
}

std::size_t count_two_qubit_gates(const Circuit& c) {
  return static_cast<std::size_t>(
      std::count_if(c.gates().begin(), c.gates().end(),
                    [](const Gate& g) { return g.is_two_qubit(); }));
}

std::size_t circuit_depth(const Circuit& c) {
  std::vector<std::size_t> level(c.num_qubits(), 0);
  std::size_t depth = 0;
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Barrier) continue;
    std::size_t top = 0;
    for (Qubit q : g.qubits) top = std::max(top, level[q]);
    ++top;
    for (Qubit q : g.qubits) level[q] = top;
    depth = std::max(depth, top);
  }
  return depth;
}

std::size_t pairs_per_layer(const RandomCircuitSpec& spec) {
  const auto max_pairs = spec.num_qubits / 2;
  auto pairs = static_cast<std::size_t>(
      std::llround(spec.two_qubit_density * static_cast<double>(spec.num_qubits) / 2.0));
  return std::clamp<std::size_t>(pairs, 1, max_pairs);
}

Circuit generate_random_circuit(const RandomCircuitSpec& spec) {
  if (spec.num_qubits < 2) {
    throw std::invalid_argument("random circuit needs at least two qubits");
  }
  if (spec.depth < 1) {
    throw std::invalid_argument("random circuit needs depth >= 1");
  }
  if (!(spec.two_qubit_density > 0.0 && spec.two_qubit_density <= 1.0)) {
    throw std::invalid_argument("two-qubit density must lie in (0, 1]");
  }

  static const char* const kOneQubitGates[] = {"h", "x", "y", "z", "s", "t"};

  Circuit c(spec.num_qubits,
            "random_n" + std::to_string(spec.num_qubits) + "_d" +
                std::to_string(spec.depth) + "_s" + std::to_string(spec.seed));
  c.set_metadata("generator", "layered_matching");
  c.set_metadata("two_qubit_density", std::to_string(spec.two_qubit_density));
  c.set_metadata("seed", std::to_string(spec.seed));

  Rng rng(spec.seed);
  const std::size_t pairs = pairs_per_layer(spec);
  std::vector<Qubit> order(spec.num_qubits);
  for (std::size_t layer = 0; layer < spec.depth; ++layer) {
    for (std::size_t q = 0; q < order.size(); ++q) order[q] = q;
    rng.shuffle(order);
    for (std::size_t p = 0; p < pairs; ++p) {
      c.add(Gate::two_qubit("cx", order[2 * p], order[2 * p + 1]));
    }
    for (std::size_t i = 2 * pairs; i < order.size(); ++i) {
      c.add(Gate::one_qubit(kOneQubitGates[rng.below(std::size(kOneQubitGates))],
                            order[i]));
    }
  }
  return c;
}

}  // namespace qtopo
