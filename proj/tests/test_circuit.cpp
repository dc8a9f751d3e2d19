#include "doctest.h"

#include <fstream>
#include <sstream>

#include "qtopo/circuit.hpp"
#include "qtopo/qasm.hpp"
#include "qtopo/random.hpp"

using namespace qtopo;

namespace {

std::string fixture(const std::string& name) { return std::string(QTOPO_FIXTURES) + "/" + name; }

}  // namespace

TEST_CASE("single two-qubit statement") {
  const auto c = parse_qasm("qreg q[2]; cx q[0],q[1];");
  CHECK(c.num_qubits() == 2);
  REQUIRE(c.size() == 1);
  CHECK(c.gates()[0] == Gate::two_qubit("cx", 0, 1));
}

TEST_CASE("one-qubit gate and measurement") {
  const auto c = parse_qasm("qreg q[1]; creg c[1]; h q[0]; measure q[0] -> c[0];");
  REQUIRE(c.size() == 2);
  CHECK(c.gates()[0].kind == GateKind::OneQubit);
  CHECK(c.gates()[1].kind == GateKind::Measure);
  CHECK(c.gates()[1].target == "c[0]");
}

TEST_CASE("mixed five-statement program matches the hand-traced token stream") {
  // U ( pi / 2 , 0 , pi ) r [ 0 ] ;      -> one_qubit "u" on 0, params "pi/2,0,pi"
  // CX r [ 0 ] , r [ 1 ] ;               -> two_qubit "cx" (0, 1)
  // mygate r [ 2 ] , r [ 1 ] ;           -> two_qubit "mygate" (2, 1), declared arity 2
  // barrier r [ 0 ] , r [ 2 ] ;          -> barrier {0, 2}
  // measure r [ 1 ] -> out [ 2 ] ;       -> measure 1 into out[2]
  const auto c = read_qasm_file(fixture("mixed5.qasm"));
  CHECK(c.name() == "mixed5");
  CHECK(c.num_qubits() == 3);
  CHECK(c.cregs() == std::vector<ClassicalRegister>{{"out", 3}});
  const std::vector<Gate> want{
      Gate::one_qubit("u", 0, "pi/2,0,pi"), Gate::two_qubit("cx", 0, 1),
      Gate::two_qubit("mygate", 2, 1), Gate::barrier({0, 2}), Gate::measure(1, "out[2]")};
  CHECK(c.gates() == want);
  CHECK(count_two_qubit_gates(c) == 2);
}

TEST_CASE("parse errors carry positions") {
  auto error_at = [](const std::string& text) -> std::pair<std::size_t, std::size_t> {
    try {
      parse_qasm(text);
    } catch (const QasmError& e) {
      return {e.line(), e.column()};
    }
    FAIL("expected a QasmError");
    return {0, 0};
  };
  CHECK(error_at("qreg q[2];\ncx q[0] q[1];") == std::pair<std::size_t, std::size_t>{2, 9});
  CHECK(error_at("qreg q[2];\nqreg r[2];") == std::pair<std::size_t, std::size_t>{2, 1});
  CHECK(error_at("qreg q[3];\n  ccx q[0],q[1],q[2];") == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(error_at("qreg q[2];\ncx q[0],q[2];").first == 2);
  CHECK(error_at("qreg q[2]; creg c[1];\nif (c==1) x q[0];").first == 2);
  CHECK(error_at("qreg q[2];\ncx q[1],q[1];").first == 2);
  CHECK(error_at("h q[0];").first == 1);
  CHECK(error_at("qreg q[2]; h q[0]").first == 1);
  CHECK_THROWS_AS(parse_qasm(""), QasmError);
}

TEST_CASE("register broadcast for one-qubit gates and measurement") {
  const auto c = parse_qasm("qreg q[3]; creg c[3]; h q; measure q -> c; reset q[1];");
  CHECK(c.size() == 7);
  CHECK(c.gates()[3] == Gate::measure(0, "c[0]"));
  CHECK(c.gates()[6] == Gate::one_qubit("reset", 1));
}

TEST_CASE("random circuits") {
  SUBCASE("two qubits, full density -> one gate per layer") {
    const auto c = generate_random_circuit({2, 1, 1.0, 42});
    CHECK(c.size() == 1);
    CHECK(count_two_qubit_gates(c) == 1);
  }
  SUBCASE("deterministic") {
    const RandomCircuitSpec spec{17, 40, 0.8, 9};
    CHECK(generate_random_circuit(spec) == generate_random_circuit(spec));
    CHECK(to_qasm(generate_random_circuit(spec)) == to_qasm(generate_random_circuit(spec)));
    CHECK_FALSE(generate_random_circuit(spec) == generate_random_circuit({17, 40, 0.8, 10}));
  }
  SUBCASE("layers are qubit-disjoint and the depth equals the layer count") {
    const RandomCircuitSpec spec{30, 50, 0.8, 7};
    const auto c = generate_random_circuit(spec);
    const std::size_t per_layer = 30 - pairs_per_layer(spec);  // gates per layer
    REQUIRE(c.size() == per_layer * 50);
    for (std::size_t layer = 0; layer < 50; ++layer) {
      std::vector<int> used(30, 0);
      for (std::size_t k = 0; k < per_layer; ++k) {
        for (Qubit q : c.gates()[layer * per_layer + k].qubits) ++used[q];
      }
      for (int u : used) CHECK(u == 1);
    }
    CHECK(circuit_depth(c) == 50);
    CHECK(pairs_per_layer(spec) == 12);
  }
  CHECK_THROWS(generate_random_circuit({1, 5, 0.5, 0}));
  CHECK_THROWS(generate_random_circuit({4, 0, 0.5, 0}));
  CHECK_THROWS(generate_random_circuit({4, 5, 0.0, 0}));
}

TEST_CASE("two-qubit gate count") {
  CHECK(count_two_qubit_gates(Circuit(3)) == 0);
  CHECK(count_two_qubit_gates(read_qasm_file(fixture("block_merge.qasm"))) == 5);
  const auto c = generate_random_circuit({9, 30, 0.6, 3});
  std::size_t scan = 0;
  for (const auto& g : c.gates()) scan += g.qubits.size() == 2 && g.kind == GateKind::TwoQubit;
  CHECK(count_two_qubit_gates(c) == scan);
}

TEST_CASE("depth of parsed circuits is the longest qubit chain") {
  const auto c = parse_qasm("qreg q[3]; h q[0]; cx q[0],q[1]; x q[2]; cx q[1],q[2]; barrier q;");
  CHECK(circuit_depth(c) == 3);
}

TEST_CASE("canonical export round-trips") {
  static const char* const kOne[] = {"h", "x", "sdg", "rz", "u3"};
  static const char* const kTwo[] = {"cx", "cz", "swap", "rzz", "custom2"};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + rng.below(7);
    Circuit c(n);
    c.add_creg({"c", n});
    for (int i = 0; i < 30; ++i) {
      const Qubit a = rng.below(n);
      Qubit b = rng.below(n - 1);
      if (b >= a) ++b;
      switch (rng.below(4)) {
        case 0: {
          const char* name = kOne[rng.below(5)];
          c.add(Gate::one_qubit(name, a, name[0] == 'r' || name[0] == 'u' ? "0.25*pi,-1.5e-3" : ""));
          break;
        }
        case 1:
          c.add(Gate::two_qubit(kTwo[rng.below(5)], a, b));
          break;
        case 2:
          c.add(Gate::measure(a, "c[" + std::to_string(a) + "]"));
          break;
        default:
          c.add(Gate::barrier({a, b}));
      }
    }
    const auto text = to_qasm(c);
    const auto back = parse_qasm(text);
    CHECK(back == c);
    CHECK(to_qasm(back) == text);
  }
}
