#include "qtopo/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace qtopo {

QasmError::QasmError(const std::string& what, std::size_t line,
                     std::size_t column)
    : std::runtime_error("qasm:" + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, String, Symbol, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (ch == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      const std::size_t l0 = line, c0 = col;
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) {
        advance(1);
      }
      if (i + 1 >= src.size()) throw QasmError("unterminated comment", l0, c0);
      advance(2);
      continue;
    }
    const std::size_t l0 = line, c0 = col, start = i;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                                src[i] == '_')) {
        advance(1);
      }
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), l0, c0});
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '.' ||
              ((src[i] == '+' || src[i] == '-') && (src[i - 1] == 'e' || src[i - 1] == 'E')))) {
        advance(1);
      }
      out.push_back({Tok::Number, std::string(src.substr(start, i - start)), l0, c0});
    } else if (ch == '"') {
      advance(1);
      while (i < src.size() && src[i] != '"' && src[i] != '\n') advance(1);
      if (i >= src.size() || src[i] != '"') {
        throw QasmError("unterminated string", l0, c0);
      }
      advance(1);
      out.push_back({Tok::String, std::string(src.substr(start + 1, i - start - 2)), l0, c0});
    } else if (ch == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      advance(2);
      out.push_back({Tok::Arrow, "->", l0, c0});
    } else if (std::string_view("[](){};,+-*/^=<>!").find(ch) != std::string_view::npos) {
      advance(1);
      if (ch == '=' && i < src.size() && src[i] == '=') advance(1);
      out.push_back({Tok::Symbol, std::string(src.substr(start, i - start)), l0, c0});
    } else {
      throw QasmError(std::string("unexpected character '") + ch + "'", l0, c0);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Operand: a register name plus an optional index (nullopt = whole register).
struct Operand {
  std::string reg;
  std::optional<std::size_t> index;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Circuit run() {
    while (peek().kind != Tok::End) statement();
    if (!circuit_) {
      const Token& t = peek();
      throw QasmError("program declares no qreg", t.line, t.column);
    }
    return std::move(*circuit_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void fail(const std::string& what, const Token& at) const {
    throw QasmError(what, at.line, at.column);
  }

  bool is_symbol(const char* s) const {
    return peek().kind == Tok::Symbol && peek().text == s;
  }

  const Token& expect_symbol(const char* s) {
    if (!is_symbol(s)) {
      fail(std::string("expected '") + s + "'" +
               (peek().kind == Tok::End ? " before end of input" : " near '" + peek().text + "'"),
           peek());
    }
    return take();
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what, peek());
    return take();
  }

  std::size_t expect_index() {
    const Token& t = expect(Tok::Number, "integer");
    if (!std::all_of(t.text.begin(), t.text.end(),
                     [](unsigned char c) { return std::isdigit(c); })) {
      fail("expected integer, got '" + t.text + "'", t);
    }
    return std::stoull(t.text);
  }

  void statement() {
    const Token& head = peek();
    if (head.kind != Tok::Ident) fail("expected statement, got '" + head.text + "'", head);
    const std::string word = head.text;
    if (word == "OPENQASM") {
      take();
      const Token& v = expect(Tok::Number, "version");
      if (v.text.rfind("2", 0) != 0) fail("only OpenQASM 2 is supported", v);
      expect_symbol(";");
    } else if (word == "include") {
      take();
      expect(Tok::String, "file name");
      expect_symbol(";");
    } else if (word == "qreg") {
      take();
      qreg(head);
    } else if (word == "creg") {
      take();
      creg();
    } else if (word == "gate") {
      take();
      gate_decl(true);
    } else if (word == "opaque") {
      take();
      gate_decl(false);
    } else if (word == "if") {
      fail("classically controlled operations are not supported", head);
    } else if (word == "measure") {
      take();
      measure();
    } else if (word == "barrier") {
      take();
      barrier();
    } else {
      application();
    }
  }

  void qreg(const Token& at) {
    const Token& name = expect(Tok::Ident, "register name");
    expect_symbol("[");
    const std::size_t n = expect_index();
    expect_symbol("]");
    expect_symbol(";");
    if (circuit_) fail("multiple quantum registers are not supported", at);
    if (n == 0) fail("quantum register of size zero", name);
    qreg_name_ = name.text;
    circuit_.emplace(n);
    flush_cregs();
  }

  void creg() {
    const Token& name = expect(Tok::Ident, "register name");
    expect_symbol("[");
    const std::size_t n = expect_index();
    expect_symbol("]");
    expect_symbol(";");
    cregs_[name.text] = n;
    pending_cregs_.push_back({name.text, n});
    if (circuit_) flush_cregs();
  }

  void flush_cregs() {
    for (auto& r : pending_cregs_) circuit_->add_creg(std::move(r));
    pending_cregs_.clear();
  }

  void gate_decl(bool has_body) {
    const Token& name = expect(Tok::Ident, "gate name");
    if (is_symbol("(")) {
      take();
      while (!is_symbol(")")) {
        if (peek().kind == Tok::End) fail("unterminated parameter list", peek());
        take();
      }
      take();
    }
    std::size_t arity = 0;
    while (peek().kind == Tok::Ident) {
      take();
      ++arity;
      if (!is_symbol(",")) break;
      take();
    }
    if (arity == 0) fail("gate declaration without qubit arguments", name);
    declared_[lower(name.text)] = arity;
    if (has_body) {
      expect_symbol("{");
      int depth = 1;
      while (depth > 0) {
        const Token& t = take();
        if (t.kind == Tok::End) fail("unterminated gate body", name);
        if (t.kind == Tok::Symbol && t.text == "{") ++depth;
        if (t.kind == Tok::Symbol && t.text == "}") --depth;
      }
    } else {
      expect_symbol(";");
    }
  }

  Operand operand() {
    const Token& name = expect(Tok::Ident, "register operand");
    Operand op{name.text, std::nullopt, name.line, name.column};
    if (is_symbol("[")) {
      take();
      op.index = expect_index();
      expect_symbol("]");
    }
    return op;
  }

  std::vector<Qubit> resolve(const Operand& op) {
    if (!circuit_) throw QasmError("operation before qreg declaration", op.line, op.column);
    if (op.reg != qreg_name_) {
      throw QasmError("unknown quantum register '" + op.reg + "'", op.line, op.column);
    }
    if (!op.index) {
      std::vector<Qubit> all(circuit_->num_qubits());
      for (std::size_t q = 0; q < all.size(); ++q) all[q] = q;
      return all;
    }
    if (*op.index >= circuit_->num_qubits()) {
      throw QasmError("qubit index " + std::to_string(*op.index) + " out of range",
                      op.line, op.column);
    }
    return {*op.index};
  }

  void measure() {
    Operand q = operand();
    if (peek().kind != Tok::Arrow) fail("expected '->' in measure", peek());
    take();
    Operand c = operand();
    expect_symbol(";");
    auto it = cregs_.find(c.reg);
    if (it == cregs_.end()) {
      throw QasmError("unknown classical register '" + c.reg + "'", c.line, c.column);
    }
    const auto qubits = resolve(q);
    if (c.index) {
      if (*c.index >= it->second) {
        throw QasmError("classical bit index out of range", c.line, c.column);
      }
      if (qubits.size() != 1) {
        throw QasmError("register measured into a single bit", q.line, q.column);
      }
      circuit_->add(Gate::measure(qubits[0], c.reg + "[" + std::to_string(*c.index) + "]"));
      return;
    }
    if (qubits.size() != it->second) {
      throw QasmError("register sizes differ in measure", c.line, c.column);
    }
    for (Qubit qb : qubits) {
      circuit_->add(Gate::measure(qb, c.reg + "[" + std::to_string(qb) + "]"));
    }
  }

  void barrier() {
    std::vector<Qubit> qubits;
    while (true) {
      auto part = resolve(operand());
      qubits.insert(qubits.end(), part.begin(), part.end());
      if (!is_symbol(",")) break;
      take();
    }
    expect_symbol(";");
    circuit_->add(Gate::barrier(std::move(qubits)));
  }

  void application() {
    const Token& head = take();
    const std::string name = lower(head.text);
    std::string params;
    if (is_symbol("(")) {
      take();
      int depth = 1;
      while (true) {
        const Token& t = take();
        if (t.kind == Tok::End) fail("unterminated parameter list", head);
        if (t.kind == Tok::Symbol && t.text == "(") ++depth;
        if (t.kind == Tok::Symbol && t.text == ")" && --depth == 0) break;
        params += t.text;
      }
    }
    std::vector<Operand> ops;
    while (true) {
      ops.push_back(operand());
      if (!is_symbol(",")) break;
      take();
    }
    expect_symbol(";");

    if (ops.size() > 2) {
      fail("gate '" + name + "' acts on " + std::to_string(ops.size()) +
               " qubits; at most two are supported",
           head);
    }
    if (auto it = declared_.find(name); it != declared_.end() && it->second != ops.size()) {
      fail("gate '" + name + "' declared with " + std::to_string(it->second) +
               " qubits but applied to " + std::to_string(ops.size()),
           head);
    }
    if (ops.size() == 1) {
      for (Qubit q : resolve(ops[0])) circuit_->add(Gate::one_qubit(name, q, params));
      return;
    }
    if (!ops[0].index || !ops[1].index) {
      fail("register broadcast is not supported for two-qubit gates", head);
    }
    const Qubit a = resolve(ops[0])[0];
    const Qubit b = resolve(ops[1])[0];
    if (a == b) fail("two-qubit gate '" + name + "' repeats qubit " + std::to_string(a), head);
    circuit_->add(Gate::two_qubit(name, a, b, params));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::optional<Circuit> circuit_;
  std::string qreg_name_;
  std::map<std::string, std::size_t> cregs_;
  std::vector<ClassicalRegister> pending_cregs_;
  std::map<std::string, std::size_t> declared_;
};

}  // namespace

Circuit parse_qasm(std::string_view text) { return Parser(text).run(); }

Circuit read_qasm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open circuit file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Circuit c = parse_qasm(ss.str());
  auto slash = path.find_last_of('/');
  std::string stem = path.substr(slash == std::string::npos ? 0 : slash + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem.resize(dot);
  c.set_name(stem);
  return c;
}

std::string to_qasm(const Circuit& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << c.num_qubits() << "];\n";
  for (const auto& r : c.cregs()) out << "creg " << r.name << "[" << r.size << "];\n";
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Measure:
        out << "measure q[" << g.qubits[0] << "] -> " << g.target << ";\n";
        break;
      case GateKind::Barrier: {
        out << "barrier ";
        for (std::size_t i = 0; i < g.qubits.size(); ++i) {
          out << (i ? "," : "") << "q[" << g.qubits[i] << "]";
        }
        out << ";\n";
        break;
      }
      case GateKind::OneQubit:
      case GateKind::TwoQubit: {
        out << lower(g.name);
        if (!g.params.empty()) out << "(" << g.params << ")";
        out << " ";
        for (std::size_t i = 0; i < g.qubits.size(); ++i) {
          out << (i ? "," : "") << "q[" << g.qubits[i] << "]";
        }
        out << ";\n";
        break;
      }
    }
  }
  return out.str();
}

}  // namespace qtopo
