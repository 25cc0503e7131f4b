#include "qsim/circuit_text.hpp"

#include <cctype>
#include <sstream>

namespace qsim {

ParseError::ParseError(int line, int column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    tokens.push_back(
        Token{line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

bool is_gate_name(const std::string& name) {
  static const char* names[] = {"X",  "Y",  "Z",    "H",  "S",  "RX",
                                "RY", "RZ", "CNOT", "CU", "ZZ", "CCX"};
  for (const char* n : names)
    if (name == n) return true;
  return false;
}

// Splits "NAME(a,b)" into NAME and {a, b}; "NAME" yields no parameters.
void split_call(const Token& tok, int line, std::string& name,
                std::vector<std::string>& args) {
  std::size_t open = tok.text.find('(');
  if (open == std::string::npos) {
    name = tok.text;
    return;
  }
  if (tok.text.back() != ')')
    throw ParseError(line, tok.column, "missing ')' in '" + tok.text + "'");
  name = tok.text.substr(0, open);
  std::string inner = tok.text.substr(open + 1, tok.text.size() - open - 2);
  if (inner.empty())
    throw ParseError(line, tok.column, "empty parameter list");
  std::size_t start = 0;
  while (true) {
    std::size_t comma = inner.find(',', start);
    args.push_back(inner.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
}

int parse_bit(const Token& tok, const std::string& text, int line) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  throw ParseError(line, tok.column, "expected a bit, got '" + text + "'");
}

}  // namespace

Network parse_circuit(const std::string& text) {
  Network net;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<Token> tokens = tokenize(line);
    if (tokens.empty()) continue;

    std::string condition;
    if (tokens.size() >= 2 && tokens[tokens.size() - 2].text == "IF") {
      condition = tokens.back().text;
      tokens.pop_back();
      tokens.pop_back();
    }

    auto expect_count = [&](std::size_t count, const std::string& what) {
      if (tokens.size() != count)
        throw ParseError(line_no, tokens[0].column,
                         tokens[0].text + " expects " + what);
    };

    Instruction ins;
    ins.source_line = line_no;
    ins.condition = condition;
    const std::string& head = tokens[0].text;

    if (head == "ADD") {
      expect_count(2, "one label");
      ins.kind = InstrKind::AddQubit;
      ins.targets = {tokens[1].text};
    } else if (head == "MEAS") {
      expect_count(4, "'<label> -> <cbit>'");
      if (tokens[2].text != "->")
        throw ParseError(line_no, tokens[2].column, "expected '->'");
      ins.kind = InstrKind::Measure;
      ins.targets = {tokens[1].text};
      ins.cbit = tokens[3].text;
    } else if (head == "RESET") {
      expect_count(2, "one label");
      ins.kind = InstrKind::Reset;
      ins.targets = {tokens[1].text};
    } else if (head == "DISCARD") {
      expect_count(2, "one label");
      ins.kind = InstrKind::Discard;
      ins.targets = {tokens[1].text};
    } else if (head == "CHECK") {
      expect_count(2, "one tag");
      ins.kind = InstrKind::Checkpoint;
      ins.tag = tokens[1].text;
    } else {
      std::string name;
      std::vector<std::string> args;
      split_call(tokens[0], line_no, name, args);
      for (std::size_t i = 1; i < tokens.size(); ++i)
        ins.targets.push_back(tokens[i].text);

      if (name == "BB") {
        if (args.size() != 2)
          throw ParseError(line_no, tokens[0].column,
                           "BB takes two bit parameters");
        int b_A = parse_bit(tokens[0], args[0], line_no);
        int b_B = parse_bit(tokens[0], args[1], line_no);
        ins.kind = InstrKind::ApplyOracle;
        ins.oracle = tokens[0].text;
        net.oracles.emplace(ins.oracle, parity_black_box(b_A, b_B));
      } else if (is_gate_name(name)) {
        ins.kind = InstrKind::ApplyGate;
        ins.gate_name = name;
        ins.params = args;
        try {
          make_gate(name, args);
        } catch (const Error& e) {
          throw ParseError(line_no, tokens[0].column, e.what());
        }
      } else {
        throw ParseError(line_no, tokens[0].column,
                         "unknown instruction '" + name + "'");
      }
    }
    net.instructions.push_back(std::move(ins));
  }
  return net;
}

std::string pretty_print(const Network& net) {
  std::string out;
  for (const Instruction& ins : net.instructions) {
    std::string line;
    switch (ins.kind) {
      case InstrKind::AddQubit:
        line = "ADD " + ins.targets[0];
        break;
      case InstrKind::ApplyGate: {
        line = ins.gate_name;
        if (!ins.params.empty()) {
          line += "(";
          for (std::size_t i = 0; i < ins.params.size(); ++i) {
            if (i) line += ",";
            line += ins.params[i];
          }
          line += ")";
        }
        for (const auto& t : ins.targets) line += " " + t;
        break;
      }
      case InstrKind::ApplyOracle: {
        line = ins.oracle;
        for (const auto& t : ins.targets) line += " " + t;
        break;
      }
      case InstrKind::Measure:
        line = "MEAS " + ins.targets[0] + " -> " + ins.cbit;
        break;
      case InstrKind::Reset:
        line = "RESET " + ins.targets[0];
        break;
      case InstrKind::Discard:
        line = "DISCARD " + ins.targets[0];
        break;
      case InstrKind::Checkpoint:
        line = "CHECK " + ins.tag;
        break;
    }
    if (!ins.condition.empty()) line += " IF " + ins.condition;
    out += line;
    out += "\n";
  }
  return out;
}

}  // namespace qsim
