#pragma once

// The gate set as explicit unitary matrices, plus the stride kernel that
// applies a k-qubit gate to chosen labels of an n-qubit state without ever
// forming the 2^n x 2^n operator.

#include <cstddef>
#include <string>
#include <vector>

#include "qsim/statevec.hpp"

namespace qsim {

class GateMatrix {
 public:
  // Row-major 2^k x 2^k entries. No unitarity check here: is_unitary() is a
  // queryable predicate and tests construct non-unitary matrices on purpose.
  GateMatrix(std::string name, std::size_t arity, std::vector<cx> entries);

  const std::string& name() const { return name_; }
  std::size_t arity() const { return arity_; }
  std::size_t dim() const { return dim_; }
  const std::vector<cx>& entries() const { return entries_; }
  cx at(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

 private:
  std::string name_;
  std::size_t arity_;
  std::size_t dim_;
  std::vector<cx> entries_;
};

GateMatrix pauli(char axis);                      // 'x' | 'y' | 'z'
GateMatrix rotation(char axis, double angle);     // exp(-i sigma_axis angle/2)
GateMatrix hadamard();
GateMatrix phase_gate(double phi);                // diag(1, e^{i phi})
GateMatrix cnot();
GateMatrix toffoli();
GateMatrix zz_rotation(double theta);
// Block matrix [I 0; 0 u]; prepends a control qubit as the new most
// significant gate index bit. u must be unitary.
GateMatrix controlled(const GateMatrix& u);

bool is_unitary(const GateMatrix& m, double tol);

// Applies the gate to the named qubits. targets[0] binds to the gate's most
// significant index bit (for controlled matrices, the control).
PureState apply(const PureState& state, const GateMatrix& gate,
                const std::vector<std::string>& targets);

namespace detail {

// In-place kernel over a raw amplitude buffer of n qubits. shifts[i] is the
// bit position (from the least significant end) carried by the gate's i-th
// qubit. Skips zero matrix entries, so permutation and diagonal matrices cost
// O(2^n) regardless of arity.
void apply_inplace(std::vector<cx>& amps, std::size_t n, const GateMatrix& gate,
                   const std::vector<std::size_t>& shifts);

// Maps target labels to bit shifts for the kernel above.
std::vector<std::size_t> target_shifts(const PureState& state,
                                       const std::vector<std::string>& targets,
                                       std::size_t arity);

}  // namespace detail

}  // namespace qsim
