#include "qsim/statevec.hpp"

#include <algorithm>
#include <cmath>

#include "qsim/json_writer.hpp"

namespace qsim {

namespace {

void check_labels_distinct(const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j])
        throw Error("duplicate qubit label '" + labels[i] + "'");
}

}  // namespace

PureState::PureState() : amps_{cx(1.0, 0.0)} {}

PureState::PureState(Trusted, std::vector<std::string> labels,
                     std::vector<cx> amps)
    : labels_(std::move(labels)), amps_(std::move(amps)) {}

PureState PureState::from_amplitudes(std::vector<std::string> labels,
                                     std::vector<cx> amps) {
  check_labels_distinct(labels);
  if (labels.size() > k_max_qubits)
    throw Error("register capacity exceeded: " + std::to_string(labels.size()) +
                " qubits requested, limit is " + std::to_string(k_max_qubits));
  if (amps.size() != (std::size_t{1} << labels.size()))
    throw Error("amplitude vector length must be 2^(number of labels)");
  double sq = 0.0;
  for (const cx& a : amps) sq += std::norm(a);
  if (std::abs(sq - 1.0) > k_norm_eps)
    throw Error("state is not normalized");
  return PureState(Trusted{}, std::move(labels), std::move(amps));
}

PureState StateBuilder::wrap(std::vector<std::string> labels,
                             std::vector<cx> amps) {
  return PureState(PureState::Trusted{}, std::move(labels), std::move(amps));
}

bool PureState::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t PureState::position(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error("unknown qubit label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

double PureState::norm() const {
  double sq = 0.0;
  for (const cx& a : amps_) sq += std::norm(a);
  return std::sqrt(sq);
}

PureState logical_state(
    const std::vector<std::pair<std::string, int>>& bits) {
  std::vector<std::string> labels;
  labels.reserve(bits.size());
  std::size_t index = 0;
  for (const auto& [label, bit] : bits) {
    if (bit != 0 && bit != 1) throw Error("logical bit must be 0 or 1");
    labels.push_back(label);
    index = (index << 1) | static_cast<std::size_t>(bit);
  }
  check_labels_distinct(labels);
  if (labels.size() > k_max_qubits) throw Error("register capacity exceeded");
  std::vector<cx> amps(std::size_t{1} << labels.size(), cx(0, 0));
  amps[index] = cx(1, 0);
  return StateBuilder::wrap(std::move(labels), std::move(amps));
}

cx inner_product(const PureState& a, const PureState& b) {
  const PureState* rhs = &b;
  PureState permuted;
  if (a.labels() != b.labels()) {
    permuted = permute_labels(b, a.labels());  // throws on mismatched sets
    rhs = &permuted;
  }
  cx sum(0, 0);
  for (std::size_t i = 0; i < a.dim(); ++i)
    sum += std::conj(a.amps()[i]) * rhs->amps()[i];
  return sum;
}

PureState tensor(const PureState& a, const PureState& b) {
  for (const std::string& label : b.labels())
    if (a.has_label(label))
      throw Error("tensor operands share label '" + label + "'");
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  if (labels.size() > k_max_qubits) throw Error("register capacity exceeded");
  std::vector<cx> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      amps[i * b.dim() + j] = a.amps()[i] * b.amps()[j];
  return StateBuilder::wrap(std::move(labels), std::move(amps));
}

bool equal_up_to_global_phase(const PureState& a, const PureState& b,
                              double tol) {
  return std::abs(inner_product(a, b)) >= 1.0 - tol;
}

PureState permute_labels(const PureState& s,
                         const std::vector<std::string>& new_order) {
  if (new_order.size() != s.qubit_count())
    throw Error("label permutation has wrong size");
  const std::size_t n = s.qubit_count();
  // For each qubit, where its bit sits now and where it goes.
  std::vector<std::size_t> from_shift(n), to_shift(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t p = s.position(new_order[i]);  // throws on unknown label
    if (seen[p]) throw Error("label permutation repeats '" + new_order[i] + "'");
    seen[p] = true;
    from_shift[i] = n - 1 - p;
    to_shift[i] = n - 1 - i;
  }
  std::vector<cx> amps(s.dim());
  for (std::size_t idx = 0; idx < s.dim(); ++idx) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < n; ++i)
      out |= ((idx >> from_shift[i]) & 1u) << to_shift[i];
    amps[out] = s.amps()[idx];
  }
  return StateBuilder::wrap(new_order, std::move(amps));
}

std::string to_json(const PureState& s) {
  Json labels = Json::array();
  for (const std::string& label : s.labels()) labels.push(Json::string(label));
  Json amps = Json::array();
  for (const cx& a : s.amps()) {
    Json pair = Json::array();
    pair.push(Json::real(a.real()));
    pair.push(Json::real(a.imag()));
    amps.push(std::move(pair));
  }
  Json obj = Json::object();
  obj.set("labels", std::move(labels));
  obj.set("amps", std::move(amps));
  return obj.dump();
}

}  // namespace qsim
