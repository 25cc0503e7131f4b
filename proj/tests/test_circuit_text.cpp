#include "qsim/circuit_text.hpp"

#include <string>

#include "doctest.h"
#include "qsim/network.hpp"

using namespace qsim;

TEST_CASE("parse_circuit covers the grammar") {
  const std::string text =
      "# prepare, rotate, read out\n"
      "ADD q0\n"
      "ADD q1\n"
      "\n"
      "H q0\n"
      "RZ(-pi/4) q0   # angle kept verbatim\n"
      "CNOT q0 q1\n"
      "CU(y,pi/2) q0 q1\n"
      "CHECK mid\n"
      "MEAS q0 -> c0\n"
      "X q1 IF c0\n"
      "RESET q1\n"
      "DISCARD q1\n";
  Network net = parse_circuit(text);
  REQUIRE(net.instructions.size() == 11);

  CHECK(net.instructions[0].kind == InstrKind::AddQubit);
  CHECK(net.instructions[0].targets == std::vector<std::string>{"q0"});
  CHECK(net.instructions[0].source_line == 2);

  const Instruction& rz = net.instructions[3];
  CHECK(rz.kind == InstrKind::ApplyGate);
  CHECK(rz.gate_name == "RZ");
  CHECK(rz.params == std::vector<std::string>{"-pi/4"});
  CHECK(rz.source_line == 6);

  const Instruction& cu = net.instructions[5];
  CHECK(cu.gate_name == "CU");
  CHECK(cu.params == std::vector<std::string>{"y", "pi/2"});
  CHECK(cu.targets == std::vector<std::string>{"q0", "q1"});

  CHECK(net.instructions[6].kind == InstrKind::Checkpoint);
  CHECK(net.instructions[6].tag == "mid");

  const Instruction& m = net.instructions[7];
  CHECK(m.kind == InstrKind::Measure);
  CHECK(m.targets == std::vector<std::string>{"q0"});
  CHECK(m.cbit == "c0");

  const Instruction& x = net.instructions[8];
  CHECK(x.condition == "c0");
  CHECK(x.gate_name == "X");

  CHECK(net.instructions[9].kind == InstrKind::Reset);
  CHECK(net.instructions[10].kind == InstrKind::Discard);

  CHECK(validate(net).empty());
}

TEST_CASE("BB installs the parity oracle under its literal spelling") {
  Network net = parse_circuit("ADD A\nADD B\nADD C\nBB(1,0) A B C\n");
  const Instruction& call = net.instructions[3];
  CHECK(call.kind == InstrKind::ApplyOracle);
  CHECK(call.oracle == "BB(1,0)");
  REQUIRE(net.oracles.count("BB(1,0)") == 1);
  CHECK(net.oracles.at("BB(1,0)").entries() == parity_black_box(1, 0).entries());
  CHECK(validate(net).empty());
}

TEST_CASE("parse errors carry line and column") {
  auto check_pos = [](const std::string& text, int line, int column) {
    try {
      parse_circuit(text);
      FAIL("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == column);
    }
  };

  check_pos("ADD q\nFROB q\n", 2, 1);          // unknown instruction
  check_pos("ADD q\n  RZ(pi q\n", 2, 3);       // missing ')'
  check_pos("RZ() q\n", 1, 1);                 // empty parameter list
  check_pos("MEAS q c\n", 1, 1);               // wrong shape
  check_pos("ADD q\nMEAS q => c\n", 2, 8);     // bad arrow
  check_pos("BB(2,0) A B C\n", 1, 1);          // bit out of range
  check_pos("BB(1) A B C\n", 1, 1);            // wrong parameter count
  check_pos("S q\n", 1, 1);                    // S needs its angle
  check_pos("RZ(frog) q\n", 1, 1);             // unparseable angle
  check_pos("CHECK\n", 1, 1);                  // missing tag
  check_pos("ADD\n", 1, 1);                    // missing label
}

TEST_CASE("ParseError formats its message with the position") {
  try {
    parse_circuit("QUUX a\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()) ==
          "line 1, column 1: unknown instruction 'QUUX'");
  }
}

TEST_CASE("wrong target counts are validation problems, not parse errors") {
  Network net = parse_circuit("ADD a\nCNOT a\n");
  CHECK_FALSE(validate(net).empty());
}

TEST_CASE("pretty_print is parse's inverse") {
  const std::string text =
      "ADD A\n"
      "ADD B\n"
      "ADD C\n"
      "H A\n"
      "S(pi/2) A IF never\n"
      "RZ(3*pi/2) B\n"
      "BB(0,1) A B C\n"
      "CHECK one\n"
      "MEAS A -> c_A\n"
      "RESET B IF c_A\n"
      "DISCARD C\n";
  Network net = parse_circuit(text);
  std::string printed = pretty_print(net);
  CHECK(printed == text);
  Network reparsed = parse_circuit(printed);
  CHECK(reparsed.instructions == net.instructions);
}

TEST_CASE("pretty_print emits canonical spacing regardless of input") {
  Network net = parse_circuit("ADD   q\n   H    q   # messy\nMEAS q ->   c\n");
  CHECK(pretty_print(net) == "ADD q\nH q\nMEAS q -> c\n");
}
