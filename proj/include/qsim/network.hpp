#pragma once

// The quantum network model: an ordered instruction list over labeled qubits,
// with measurement results stored in named classical bits and instructions
// optionally conditioned on those bits. Includes the parity-problem network
// and resource accounting.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsim/gates.hpp"
#include "qsim/measure.hpp"
#include "qsim/statevec.hpp"

namespace qsim {

enum class InstrKind {
  AddQubit,
  ApplyGate,
  ApplyOracle,
  Measure,
  Reset,
  Discard,
  Checkpoint,
};

struct Instruction {
  InstrKind kind;
  std::vector<std::string> targets;  // qubit labels, empty for Checkpoint

  // ApplyGate: canonical gate name (X, Y, Z, H, S, RX, RY, RZ, CNOT, CU, ZZ,
  // CCX) plus raw parameter tokens, kept as written so files round-trip.
  std::string gate_name;
  std::vector<std::string> params;

  std::string oracle;     // ApplyOracle: key into Network::oracles
  std::string cbit;       // Measure: destination classical bit
  std::string tag;        // Checkpoint
  std::string condition;  // classical bit that must be 1; empty = always
  int source_line = 0;    // 1-based line in the circuit file, 0 if built in code

  bool operator==(const Instruction& other) const;
};

struct Diagnostic {
  std::size_t instruction;  // index into Network::instructions
  int source_line;          // 0 when the instruction was built in code
  std::string message;
};

struct Network {
  std::vector<Instruction> instructions;
  std::map<std::string, GateMatrix> oracles;

  // Concatenates other's instructions and merges its oracle table.
  void append(const Network& other);
};

struct ExecutionTrace {
  Mixture final_state;
  std::map<std::string, int> classical_bits;
  std::map<std::string, PureState> checkpoints;
};

struct ResourceReport {
  std::size_t qubit_count = 0;     // space: number of qubits ever added
  std::size_t gate_count = 0;      // adds + gates + measures + resets + discards
  std::size_t oracle_calls = 0;
  std::size_t irreversible_ops = 0;  // measures + resets + discards
  std::size_t parallel_depth = 0;
};

// Parses angle tokens from circuit files and network builders: an optional
// sign, then either a decimal literal or "pi" with optional "*x" / "/x"
// factors (e.g. "pi", "-pi/4", "0.5", "3*pi/2"). Throws Error on anything
// else.
double parse_angle(const std::string& token);

// Builds the gate for a canonical name and raw parameter tokens.
GateMatrix make_gate(const std::string& name,
                     const std::vector<std::string>& params);

// Empty iff executable (with the given pre-existing input labels). Checks
// label liveness, duplicate adds, arities, parameter syntax, capacity, and
// that conditions refer to already-assigned classical bits.
std::vector<Diagnostic> validate(const Network& net,
                                 const std::vector<std::string>& input_labels = {});

// Runs the network starting from the empty register.
ExecutionTrace execute(const Network& net, Rng& rng);

// Runs the network with a pre-populated register (for networks that act on
// an input state instead of preparing their own).
ExecutionTrace execute(const Network& net, Rng& rng, const PureState& input);

ResourceReport resource_count(const Network& net);

// Permutation on |a_A a_B>|a_C>: adds b_A a_A xor b_B a_B into a_C.
GateMatrix parity_black_box(int b_A, int b_B);

// The three-qubit network that recovers both oracle bits with one oracle
// call: prepare A,B,C; H on A,B; not+H on C; oracle; H on A,B; measure A,B
// into c_A, c_B. Checkpoints "1".."5" bracket the preparation, the oracle,
// and the final Hadamards. The oracle slot "BB" must be supplied by the
// caller (it is the unknown being queried).
Network build_qparity();

struct ParityRun {
  int b_A;
  int b_B;
  ExecutionTrace trace;
  ResourceReport report;
};

// Convenience: installs parity_black_box(b_A, b_B) as the oracle and executes.
ParityRun run_parity(int b_A, int b_B, Rng& rng);

struct ClassicalParityResult {
  int b_A;
  int b_B;
  int queries;  // always 2: inputs 10 and 01 read the bits off directly
};

// Classical baseline: two black-box evaluations recover both bits.
ClassicalParityResult classical_parity_queries(int b_A, int b_B);

// {classical_bits, checkpoints} plus, optionally, the final state.
std::string trace_to_json(const ExecutionTrace& trace, bool include_checkpoints,
                          bool include_final);

}  // namespace qsim
