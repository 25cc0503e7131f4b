#pragma once

// Projective measurement with collapse, register add/reset/discard, mixtures,
// density operators, and Bloch coordinates. All randomness flows through an
// explicit seeded generator.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsim/gates.hpp"
#include "qsim/statevec.hpp"

namespace qsim {

// Deterministic random stream. Same seed, same sequence, on every platform
// (raw engine output is converted to doubles directly rather than through
// distribution objects, whose behavior varies across standard libraries).
// Single-owner: do not share one instance between concurrent consumers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform();                       // [0, 1)
  std::uint64_t below(std::uint64_t bound);  // uniform integer in [0, bound)

 private:
  std::uint64_t next();
  std::uint64_t state_[4];
};

struct Branch {
  double probability;
  PureState state;
};

// Probability distribution over pure states on a common label set. Branches
// below k_branch_floor are dropped at construction.
inline constexpr double k_branch_floor = 1e-15;

class Mixture {
 public:
  explicit Mixture(std::vector<Branch> branches);
  static Mixture pure(PureState s);

  const std::vector<Branch>& branches() const { return branches_; }

 private:
  std::vector<Branch> branches_;
};

class DensityOperator {
 public:
  // Row-major 2^n x 2^n matrix over the given labels.
  DensityOperator(std::vector<std::string> labels, std::vector<cx> entries);

  std::size_t qubit_count() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<cx>& entries() const { return entries_; }
  cx at(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

 private:
  std::vector<std::string> labels_;
  std::size_t dim_;
  std::vector<cx> entries_;
};

// (p0, p1) for measuring the labeled qubit; each is the squared norm of the
// corresponding projected component.
std::pair<double, double> measure_probs(const PureState& state,
                                        const std::string& label);

// Samples an outcome and collapses. The collapsed state is the projected
// component divided by the exact sqrt(p_outcome).
std::pair<int, PureState> measure(const PureState& state,
                                  const std::string& label, Rng& rng);

// Appends |0> with the new label at the least significant position.
PureState add_qubit(const PureState& state, const std::string& label);

// Measure-and-forget: both collapse branches with the measured qubit forced
// back to |0>, weighted by the outcome probabilities.
Mixture reset(const PureState& state, const std::string& label);

// reset applied branch-wise, then the |0> factor removed; the label is gone
// from the result.
Mixture discard(const Mixture& mix, const std::string& label);

DensityOperator density_of(const Mixture& mix);

// U rho U^dagger with the gate acting on the named labels. Gate must be
// unitary.
DensityOperator evolve_density(const DensityOperator& rho,
                               const GateMatrix& gate,
                               const std::vector<std::string>& targets);

// Coordinates (x,y,z) with rho = (I + x sigma_x + y sigma_y + z sigma_z)/2.
// Single-qubit operators only.
BlochVector bloch_of(const DensityOperator& rho);

// Test/debug validation: trace 1, Hermitian, and no probe direction with
// expectation below -1e-9. Throws Error on violation.
void validate_density(const DensityOperator& rho);

}  // namespace qsim
