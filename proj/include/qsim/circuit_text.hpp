#pragma once

// Line-oriented circuit file format.
//
//   ADD <label>
//   <GATE>[(<params>)] <labels...>     gates: X Y Z H S RX RY RZ CNOT CU ZZ CCX
//   BB(<bA>,<bB>) <A> <B> <C>          parity oracle
//   MEAS <label> -> <cbit>
//   RESET <label>
//   DISCARD <label>
//   CHECK <tag>
//
// Any instruction may end with "IF <cbit>". "#" starts a comment. Angles are
// radians; "pi" is understood (e.g. RZ(-pi/4)).

#include <string>

#include "qsim/network.hpp"
#include "qsim/statevec.hpp"

namespace qsim {

// Parse failure with position information. The CLI maps this to exit code 2.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Network parse_circuit(const std::string& text);

// Inverse of parse_circuit: parse(pretty_print(net)) reproduces the
// instruction list exactly.
std::string pretty_print(const Network& net);

}  // namespace qsim
