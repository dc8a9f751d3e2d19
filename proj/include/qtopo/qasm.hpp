#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qtopo/circuit.hpp"

namespace qtopo {

/// Malformed or unsupported OpenQASM input, with the 1-based source position.
class QasmError : public std::runtime_error {
 public:
  QasmError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses the supported OpenQASM 2.0 subset: a single qreg, cregs, named
/// one- and two-qubit gate applications (user gates are opaque), measure,
/// barrier and reset. `include` lines are accepted and ignored. Gates acting
/// on more than two qubits and classically controlled statements are
/// rejected.
Circuit parse_qasm(std::string_view text);

Circuit read_qasm_file(const std::string& path);

/// Canonical text: header, one statement per line, lowercase gate names,
/// the quantum register always called `q`.
std::string to_qasm(const Circuit& c);

}  // namespace qtopo
