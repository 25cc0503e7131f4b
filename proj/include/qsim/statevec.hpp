#pragma once

// Pure states of labeled qubit registers. Amplitudes are stored densely in
// index order, with the first label owning the most significant bit of the
// index. A register with no qubits is the scalar state (a single amplitude).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsim {

using cx = std::complex<double>;

// Absolute tolerance for normalization and unitarity checks.
inline constexpr double k_norm_eps = 1e-10;

// Hard capacity of the dense representation.
inline constexpr std::size_t k_max_qubits = 24;

// Domain errors (bad labels, capacity, invalid arguments). The CLI maps these
// to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

class PureState {
 public:
  // The empty register: zero qubits, amplitude vector {1}.
  PureState();

  // Validating constructor: labels distinct, amps.size() == 2^labels.size(),
  // unit norm within k_norm_eps, label count within capacity.
  static PureState from_amplitudes(std::vector<std::string> labels,
                                   std::vector<cx> amps);

  std::size_t qubit_count() const { return labels_.size(); }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<cx>& amps() const { return amps_; }

  bool has_label(const std::string& label) const;
  // Position of a label in the register (0 = most significant). Throws on
  // unknown labels.
  std::size_t position(const std::string& label) const;

  double norm() const;

 private:
  struct Trusted {};  // internal tag: skip validation for already-checked data
  PureState(Trusted, std::vector<std::string> labels, std::vector<cx> amps);

  std::vector<std::string> labels_;
  std::vector<cx> amps_;

  friend class StateBuilder;
};

// Internal escape hatch used by the executor and the gate kernel to wrap
// buffers that are normalized by construction.
class StateBuilder {
 public:
  static PureState wrap(std::vector<std::string> labels, std::vector<cx> amps);
};

// |b1 b2 ...> for the given label/bit assignments.
PureState logical_state(const std::vector<std::pair<std::string, int>>& bits);

// <a|b>. The label sets must match; b is reindexed to a's label order first.
cx inner_product(const PureState& a, const PureState& b);

// Kronecker composition; a's labels come first (more significant).
PureState tensor(const PureState& a, const PureState& b);

// True iff |<a|b>| >= 1 - tol, i.e. the states differ only by a phase.
bool equal_up_to_global_phase(const PureState& a, const PureState& b,
                              double tol);

// Reorders the register; the physical state is unchanged.
PureState permute_labels(const PureState& s,
                         const std::vector<std::string>& new_order);

// {"labels":[...],"amps":[[re,im],...]} with 15-significant-digit numbers.
std::string to_json(const PureState& s);

}  // namespace qsim
