#pragma once

// The quantum half of the factoring pipeline: the modular multiplication
// operator, its Fourier-basis eigenvectors over a multiplicative cycle, phase
// kickback onto an ancilla register, the measured Fourier transform, order
// finding, and the factoring driver.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsim/gates.hpp"
#include "qsim/measure.hpp"
#include "qsim/network.hpp"
#include "qsim/numtheory.hpp"
#include "qsim/statevec.hpp"

namespace qsim {

// System register labels s{n-1}..s0, most significant first, so basis index x
// reads as the number x.
std::vector<std::string> system_labels(std::size_t n_sys);

// Ancilla (phase) register labels t{m-1}..t0, most significant first.
std::vector<std::string> ancilla_labels(std::size_t m);

// |x> -> |q x mod N> for x < N; basis states N <= x < 2^{n_sys} are fixed
// points, which keeps the operator a permutation on the full register.
class ModMulOperator {
 public:
  ModMulOperator(u64 q, u64 N);  // requires gcd(q, N) = 1, 1 <= q < N

  u64 q() const { return q_; }
  u64 modulus() const { return N_; }
  std::size_t system_qubits() const { return n_sys_; }

  u64 map_index(u64 x) const;
  GateMatrix matrix() const;  // the 2^{n_sys} permutation matrix

 private:
  u64 q_;
  u64 N_;
  std::size_t n_sys_;
};

// Factory matching the public contract (1 < q of use to callers).
ModMulOperator mod_mul_operator(u64 q, u64 N);

// Operator of q^e mod N, with the power computed by repeated squaring.
ModMulOperator powered(const ModMulOperator& op, u64 e);

// Eigenvector of the cycle walk with eigenvalue e^{i 2 pi m / k}: amplitude
// e^{-i 2 pi l m / k} / sqrt(k) on |q^l mod N>, where k is the cycle length.
PureState fourier_cycle_state(u64 q, u64 N, u64 m);

// Prepares m ancillas in uniform superposition and applies controlled
// op^{2^l} from the ancilla carrying bit l. The system register (labels
// s{n-1}..s0) is an input. On system eigenstate with eigenvalue
// e^{i 2 pi a / 2^m}, the ancillas finish in the phase register state u_a.
Network kickback_network(const ModMulOperator& op, std::size_t m_ancilla);

// Fourier-basis readout of the phase register using one Hadamard, one
// measurement, and conditioned phase gates per qubit, most significant qubit
// first. Input u_a yields classical bits a0..a{m-1}, the binary digits of a.
// Checkpoints: "1" before anything, then after each phase column and each
// Hadamard ("2" = after the first H, "3"/"4" = around the second H, ...).
Network measured_qft_network(std::size_t m);

struct OrderAttempt {
  std::vector<int> bits;  // a0..a{m-1} as measured
  u64 a = 0;
  std::optional<Fraction> fraction;
  std::optional<u64> order;  // set when the denominator passed verification
};

struct OrderFindOptions {
  std::size_t m = 0;  // 0 = use 2*ceil(log2 N)
  int max_attempts = 32;
};

struct OrderFindResult {
  u64 order = 0;
  std::size_t m = 0;
  std::vector<OrderAttempt> attempts;
};

// Prepares |1>, runs kickback + measured Fourier transform, recovers l/k from
// the measured a, and accepts the denominator only after checking
// q^s = 1 mod N and that no proper divisor of s already gives 1. Retries up
// to max_attempts. The detailed form reports every attempt and leaves
// order = 0 when the budget ran out; the plain form throws Error instead.
OrderFindResult quantum_order_find_detailed(u64 q, u64 N, Rng& rng,
                                            const OrderFindOptions& opts = {});
u64 quantum_order_find(u64 q, u64 N, Rng& rng,
                       const OrderFindOptions& opts = {});

struct FactorConfig {
  u64 quantum_threshold = 64;  // N above this uses the classical order search
  std::size_t m = 0;           // ancilla override for the quantum path; 0 = default
  int max_attempts = 32;
};

struct FactorRunRecord {
  u64 N = 0;
  std::optional<u64> q;        // absent on the even / prime-power shortcuts
  std::string backend;         // "quantum", "classical", or "none"
  std::optional<std::size_t> m;
  std::vector<int> measured_bits;
  std::optional<u64> a;
  std::optional<Fraction> fraction;
  std::optional<u64> order;
  std::optional<u64> r;        // q^{k/2} mod N
  u64 factor = 0;
  int attempts = 0;            // number of q draws
};

// The factoring pipeline: even check, prime-power check, then random q with
// gcd shortcut, order finding, and gcd(r -+ 1, N) extraction, retrying until
// a proper factor appears. Throws Error for prime N or an exhausted retry
// budget.
FactorRunRecord factor_find(u64 N, Rng& rng, const FactorConfig& config = {});

std::string to_json(const FactorRunRecord& rec);

}  // namespace qsim
