#include "qsim/measure.hpp"

#include <algorithm>
#include <cmath>

namespace qsim {

namespace {

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

std::uint64_t splitmix(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : state_) s = splitmix(x);
}

std::uint64_t Rng::next() {
  // xoshiro256** step.
  std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error("Rng::below bound must be positive");
  // Rejection sampling over the largest multiple of bound that fits; unbiased
  // and consumes a deterministic-given-the-stream number of engine steps.
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

Mixture::Mixture(std::vector<Branch> branches) {
  double total = 0;
  for (const auto& b : branches) {
    if (b.probability < 0) throw Error("mixture branch probability negative");
    total += b.probability;
  }
  if (std::abs(total - 1.0) > k_norm_eps)
    throw Error("mixture probabilities must sum to 1");
  for (std::size_t i = 1; i < branches.size(); ++i)
    if (branches[i].state.labels() != branches[0].state.labels())
      throw Error("mixture branches must share one label set");
  for (auto& b : branches)
    if (b.probability >= k_branch_floor) branches_.push_back(std::move(b));
  if (branches_.empty()) throw Error("mixture needs at least one branch");
}

Mixture Mixture::pure(PureState s) {
  std::vector<Branch> b;
  b.push_back(Branch{1.0, std::move(s)});
  return Mixture(std::move(b));
}

DensityOperator::DensityOperator(std::vector<std::string> labels,
                                 std::vector<cx> entries)
    : labels_(std::move(labels)),
      dim_(std::size_t{1} << labels_.size()),
      entries_(std::move(entries)) {
  if (labels_.size() > k_max_qubits) throw Error("density operator too wide");
  if (entries_.size() != dim_ * dim_)
    throw Error("density operator entry count does not match label count");
}

std::pair<double, double> measure_probs(const PureState& state,
                                        const std::string& label) {
  const std::size_t shift = state.qubit_count() - 1 - state.position(label);
  const std::size_t bit = std::size_t{1} << shift;
  double p1 = 0;
  const auto& amps = state.amps();
  for (std::size_t i = 0; i < amps.size(); ++i)
    if (i & bit) p1 += std::norm(amps[i]);
  return {1.0 - p1, p1};
}

std::pair<int, PureState> measure(const PureState& state,
                                  const std::string& label, Rng& rng) {
  auto [p0, p1] = measure_probs(state, label);
  int outcome = rng.uniform() < p1 ? 1 : 0;
  double p = outcome ? p1 : p0;
  if (p <= 0) throw Error("measurement sampled a zero-probability outcome");

  const std::size_t shift = state.qubit_count() - 1 - state.position(label);
  const std::size_t bit = std::size_t{1} << shift;
  const double scale = 1.0 / std::sqrt(p);
  std::vector<cx> amps = state.amps();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    bool keep = ((i & bit) != 0) == (outcome == 1);
    amps[i] = keep ? amps[i] * scale : cx(0, 0);
  }
  return {outcome, StateBuilder::wrap(state.labels(), std::move(amps))};
}

PureState add_qubit(const PureState& state, const std::string& label) {
  if (state.has_label(label))
    throw Error("qubit label '" + label + "' already present");
  if (state.qubit_count() + 1 > k_max_qubits)
    throw Error("register capacity exceeded");
  std::vector<std::string> labels = state.labels();
  labels.push_back(label);
  std::vector<cx> amps(state.dim() * 2, cx(0, 0));
  for (std::size_t i = 0; i < state.dim(); ++i) amps[2 * i] = state.amps()[i];
  return StateBuilder::wrap(std::move(labels), std::move(amps));
}

Mixture reset(const PureState& state, const std::string& label) {
  auto [p0, p1] = measure_probs(state, label);
  const std::size_t shift = state.qubit_count() - 1 - state.position(label);
  const std::size_t bit = std::size_t{1} << shift;

  std::vector<Branch> branches;
  for (int outcome : {0, 1}) {
    double p = outcome ? p1 : p0;
    if (p < k_branch_floor) continue;
    const double scale = 1.0 / std::sqrt(p);
    std::vector<cx> amps(state.dim(), cx(0, 0));
    for (std::size_t i = 0; i < state.dim(); ++i) {
      if (((i & bit) != 0) != (outcome == 1)) continue;
      // Project, renormalize, and force the measured qubit back to |0>.
      amps[i & ~bit] = state.amps()[i] * scale;
    }
    branches.push_back(
        Branch{p, StateBuilder::wrap(state.labels(), std::move(amps))});
  }
  return Mixture(std::move(branches));
}

Mixture discard(const Mixture& mix, const std::string& label) {
  std::vector<Branch> out;
  for (const auto& branch : mix.branches()) {
    Mixture local = reset(branch.state, label);
    for (const auto& sub : local.branches()) {
      // The measured qubit now factors out as |0>; drop its bit position.
      const PureState& s = sub.state;
      const std::size_t shift = s.qubit_count() - 1 - s.position(label);
      const std::size_t bit = std::size_t{1} << shift;
      std::size_t low_mask = bit - 1;
      std::vector<cx> amps(s.dim() / 2);
      for (std::size_t i = 0; i < s.dim(); ++i) {
        if (i & bit) continue;
        amps[((i >> (shift + 1)) << shift) | (i & low_mask)] = s.amps()[i];
      }
      std::vector<std::string> labels;
      for (const auto& l : s.labels())
        if (l != label) labels.push_back(l);
      out.push_back(Branch{branch.probability * sub.probability,
                           StateBuilder::wrap(std::move(labels),
                                              std::move(amps))});
    }
  }
  return Mixture(std::move(out));
}

DensityOperator density_of(const Mixture& mix) {
  const auto& first = mix.branches().front().state;
  const std::size_t d = first.dim();
  std::vector<cx> rho(d * d, cx(0, 0));
  for (const auto& branch : mix.branches()) {
    const auto& v = branch.state.amps();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        rho[i * d + j] += branch.probability * v[i] * std::conj(v[j]);
  }
  return DensityOperator(first.labels(), std::move(rho));
}

DensityOperator evolve_density(const DensityOperator& rho,
                               const GateMatrix& gate,
                               const std::vector<std::string>& targets) {
  if (!is_unitary(gate, k_norm_eps))
    throw Error("evolve_density requires a unitary gate");

  // Reuse the state-vector kernel: rows of rho transform like kets under U,
  // columns like bras, so apply U to every column of rho and of rho^dagger.
  PureState probe = logical_state([&] {
    std::vector<std::pair<std::string, int>> bits;
    for (const auto& l : rho.labels()) bits.emplace_back(l, 0);
    return bits;
  }());
  std::vector<std::size_t> shifts =
      detail::target_shifts(probe, targets, gate.arity());

  const std::size_t d = rho.dim();
  const std::size_t n = rho.qubit_count();
  std::vector<cx> out(rho.entries());
  std::vector<cx> col(d);

  // Left multiply: each column j of rho maps to U (column j).
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) col[i] = out[i * d + j];
    detail::apply_inplace(col, n, gate, shifts);
    for (std::size_t i = 0; i < d; ++i) out[i * d + j] = col[i];
  }
  // Right multiply by U^dagger: conjugate rows, apply U, conjugate back.
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) col[j] = std::conj(out[i * d + j]);
    detail::apply_inplace(col, n, gate, shifts);
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = std::conj(col[j]);
  }
  return DensityOperator(rho.labels(), std::move(out));
}

BlochVector bloch_of(const DensityOperator& rho) {
  if (rho.qubit_count() != 1)
    throw Error("bloch_of requires a single-qubit density operator");
  return BlochVector{2 * rho.at(0, 1).real(), -2 * rho.at(0, 1).imag(),
                     (rho.at(0, 0) - rho.at(1, 1)).real()};
}

void validate_density(const DensityOperator& rho) {
  const std::size_t d = rho.dim();
  cx trace(0, 0);
  for (std::size_t i = 0; i < d; ++i) trace += rho.at(i, i);
  if (std::abs(trace - cx(1, 0)) > 1e-9)
    throw Error("density operator trace differs from 1");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (std::abs(rho.at(i, j) - std::conj(rho.at(j, i))) > 1e-9)
        throw Error("density operator is not Hermitian");
  // Positivity probe: diagonal entries plus 2x2 principal minors. Full
  // eigensolving is overkill for a validation hook.
  for (std::size_t i = 0; i < d; ++i)
    if (rho.at(i, i).real() < -1e-9)
      throw Error("density operator has a negative diagonal entry");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      double minor = rho.at(i, i).real() * rho.at(j, j).real() -
                     std::norm(rho.at(i, j));
      if (minor < -1e-9)
        throw Error("density operator fails a positivity probe");
    }
}

}  // namespace qsim
