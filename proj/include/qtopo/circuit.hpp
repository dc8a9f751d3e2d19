#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qtopo {

using Qubit = std::size_t;

enum class GateKind { OneQubit, TwoQubit, Measure, Barrier };

/// A single circuit instruction over logical qubits.
///
/// `params` keeps the raw parameter text of a parameterized gate (without the
/// parentheses) and `target` the classical bit reference of a measurement, so
/// that a parsed program can be written back without loss.
struct Gate {
  GateKind kind = GateKind::OneQubit;
  std::string name;
  std::vector<Qubit> qubits;
  std::string params;
  std::string target;

  static Gate one_qubit(std::string name, Qubit q, std::string params = {});
  static Gate two_qubit(std::string name, Qubit a, Qubit b,
                        std::string params = {});
  static Gate measure(Qubit q, std::string target);
  static Gate barrier(std::vector<Qubit> qubits);

  bool is_two_qubit() const { return kind == GateKind::TwoQubit; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct ClassicalRegister {
  std::string name;
  std::size_t size = 0;

  friend bool operator==(const ClassicalRegister&,
                         const ClassicalRegister&) = default;
};

/// Ordered gate list over `num_qubits` logical qubits.
class Circuit {
 public:
  explicit Circuit(std::size_t num_qubits, std::string name = {});

  std::size_t num_qubits() const { return num_qubits_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<ClassicalRegister>& cregs() const { return cregs_; }
  const std::map<std::string, std::string>& metadata() const {
    return metadata_;
  }

  /// Appends a gate after validating its operands against the register.
  void add(Gate gate);
  void add_creg(ClassicalRegister reg);
  void set_metadata(const std::string& key, std::string value);

  std::size_t size() const { return gates_.size(); }

  /// Circuit body equality; name and metadata are descriptive only.
  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.num_qubits_ == b.num_qubits_ && a.gates_ == b.gates_ &&
           a.cregs_ == b.cregs_;
  }

 private:
  std::size_t num_qubits_;
  std::string name_;
  std::vector<Gate> gates_;
  std::vector<ClassicalRegister> cregs_;
  std::map<std::string, std::string> metadata_;
};

std::size_t count_two_qubit_gates(const Circuit& c);

/// Longest qubit-wise dependency chain. Barriers are not counted.
std::size_t circuit_depth(const Circuit& c);

struct RandomCircuitSpec {
  std::size_t num_qubits = 2;
  std::size_t depth = 1;
  double two_qubit_density = 0.8;
  std::uint64_t seed = 0;
};

/// Layered random circuit: each layer pairs a uniformly random subset of
/// qubits into disjoint `cx` gates and gives every other qubit a one-qubit
/// gate. Pure function of `spec`.
Circuit generate_random_circuit(const RandomCircuitSpec& spec);

/// Number of disjoint pairs placed in every generated layer.
std::size_t pairs_per_layer(const RandomCircuitSpec& spec);

}  // namespace qtopo
