#include "qsim/gates.hpp"

#include <cmath>

namespace qsim {

namespace {

constexpr cx k_i(0.0, 1.0);

}  // namespace

GateMatrix::GateMatrix(std::string name, std::size_t arity,
                       std::vector<cx> entries)
    : name_(std::move(name)),
      arity_(arity),
      dim_(std::size_t{1} << arity),
      entries_(std::move(entries)) {
  if (arity_ == 0 || arity_ > k_max_qubits)
    throw Error("gate arity out of range");
  if (entries_.size() != dim_ * dim_)
    throw Error("gate '" + name_ + "' entry count does not match arity");
}

GateMatrix pauli(char axis) {
  switch (axis) {
    case 'x':
      return GateMatrix("X", 1, {0, 1, 1, 0});
    case 'y':
      return GateMatrix("Y", 1, {0, -k_i, k_i, 0});
    case 'z':
      return GateMatrix("Z", 1, {1, 0, 0, -1});
    default:
      throw Error("pauli axis must be x, y, or z");
  }
}

GateMatrix rotation(char axis, double angle) {
  // exp(-i sigma angle/2) = cos(angle/2) I - i sin(angle/2) sigma
  double c = std::cos(angle / 2), s = std::sin(angle / 2);
  switch (axis) {
    case 'x':
      return GateMatrix("RX", 1, {c, -k_i * s, -k_i * s, c});
    case 'y':
      return GateMatrix("RY", 1, {c, -s, s, c});
    case 'z':
      return GateMatrix("RZ", 1,
                        {std::polar(1.0, -angle / 2), 0, 0,
                         std::polar(1.0, angle / 2)});
    default:
      throw Error("rotation axis must be x, y, or z");
  }
}

GateMatrix hadamard() {
  double r = 1.0 / std::sqrt(2.0);
  return GateMatrix("H", 1, {r, r, r, -r});
}

GateMatrix phase_gate(double phi) {
  return GateMatrix("S", 1, {1, 0, 0, std::polar(1.0, phi)});
}

GateMatrix cnot() {
  return GateMatrix("CNOT", 2,
                    {1, 0, 0, 0,  //
                     0, 1, 0, 0,  //
                     0, 0, 0, 1,  //
                     0, 0, 1, 0});
}

GateMatrix toffoli() {
  // Id - |11><11| + |11><11| sigma_x on the third qubit: identity everywhere
  // except the |110>/|111> pair, which swaps.
  std::vector<cx> m(64, cx(0, 0));
  for (std::size_t b = 0; b < 8; ++b) {
    std::size_t to = (b >> 1) == 3 ? (b ^ 1u) : b;
    m[to * 8 + b] = 1;
  }
  return GateMatrix("CCX", 3, std::move(m));
}

GateMatrix zz_rotation(double theta) {
  cx minus = std::polar(1.0, -theta / 2), plus = std::polar(1.0, theta / 2);
  return GateMatrix("ZZ", 2,
                    {minus, 0, 0, 0,  //
                     0, plus, 0, 0,   //
                     0, 0, plus, 0,   //
                     0, 0, 0, minus});
}

GateMatrix controlled(const GateMatrix& u) {
  if (!is_unitary(u, k_norm_eps))
    throw Error("controlled() requires a unitary argument");
  std::size_t d = u.dim();
  std::vector<cx> m(4 * d * d, cx(0, 0));
  for (std::size_t i = 0; i < d; ++i) m[i * 2 * d + i] = 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m[(d + i) * 2 * d + (d + j)] = u.at(i, j);
  return GateMatrix("c" + u.name(), u.arity() + 1, std::move(m));
}

bool is_unitary(const GateMatrix& m, double tol) {
  // Accumulate M^dagger M from row nonzeros: row k contributes
  // conj(M_{ki}) M_{kj} only where both entries are nonzero, so the cost is
  // sum_k nnz(k)^2 plus the dense comparison. Modular-arithmetic oracles are
  // permutation matrices and would otherwise pay the full d^3.
  const std::size_t d = m.dim();
  std::vector<cx> prod(d * d, cx(0, 0));
  std::vector<std::pair<std::size_t, cx>> row;
  for (std::size_t k = 0; k < d; ++k) {
    row.clear();
    for (std::size_t c = 0; c < d; ++c)
      if (m.at(k, c) != cx(0, 0)) row.emplace_back(c, m.at(k, c));
    for (const auto& [i, vi] : row)
      for (const auto& [j, vj] : row) prod[i * d + j] += std::conj(vi) * vj;
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      cx expect = (i == j) ? cx(1, 0) : cx(0, 0);
      if (std::abs(prod[i * d + j] - expect) > tol) return false;
    }
  return true;
}

namespace detail {

std::vector<std::size_t> target_shifts(const PureState& state,
                                       const std::vector<std::string>& targets,
                                       std::size_t arity) {
  if (targets.size() != arity)
    throw Error("gate arity " + std::to_string(arity) + " but " +
                std::to_string(targets.size()) + " targets given");
  const std::size_t n = state.qubit_count();
  std::vector<std::size_t> shifts(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    shifts[i] = n - 1 - state.position(targets[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (targets[j] == targets[i])
        throw Error("duplicate gate target '" + targets[i] + "'");
  }
  return shifts;
}

void apply_inplace(std::vector<cx>& amps, std::size_t n, const GateMatrix& gate,
                   const std::vector<std::size_t>& shifts) {
  const std::size_t k = gate.arity();
  if (k > n) throw Error("gate is wider than the register");

  if (k == 1) {
    // Single-qubit gates dominate the running time, so this path avoids the
    // generic machinery: pairs are visited block-wise (contiguous inner loop),
    // diagonal matrices skip the untouched half, and real matrices use scalar
    // coefficients.
    const cx m00 = gate.at(0, 0), m01 = gate.at(0, 1);
    const cx m10 = gate.at(1, 0), m11 = gate.at(1, 1);
    const std::size_t bit = std::size_t{1} << shifts[0];
    const std::size_t dim = amps.size();

    if (m01 == cx(0, 0) && m10 == cx(0, 0)) {
      for (int half : {0, 1}) {
        cx factor = half ? m11 : m00;
        if (factor == cx(1, 0)) continue;
        for (std::size_t block = 0; block < dim; block += 2 * bit) {
          cx* p = amps.data() + block + (half ? bit : 0);
          for (std::size_t low = 0; low < bit; ++low) p[low] *= factor;
        }
      }
      return;
    }

    const bool real_matrix = m00.imag() == 0 && m01.imag() == 0 &&
                             m10.imag() == 0 && m11.imag() == 0;
    if (real_matrix) {
      const double w00 = m00.real(), w01 = m01.real();
      const double w10 = m10.real(), w11 = m11.real();
      for (std::size_t block = 0; block < dim; block += 2 * bit) {
        cx* p = amps.data() + block;
        cx* q = p + bit;
        for (std::size_t low = 0; low < bit; ++low) {
          cx a = p[low], b = q[low];
          p[low] = w00 * a + w01 * b;
          q[low] = w10 * a + w11 * b;
        }
      }
      return;
    }

    for (std::size_t block = 0; block < dim; block += 2 * bit) {
      cx* p = amps.data() + block;
      cx* q = p + bit;
      for (std::size_t low = 0; low < bit; ++low) {
        cx a = p[low], b = q[low];
        p[low] = m00 * a + m01 * b;
        q[low] = m10 * a + m11 * b;
      }
    }
    return;
  }

  const std::size_t gdim = gate.dim();

  // Sub-index placement: position in the full register of each gate basis
  // state, relative to a group base address.
  std::vector<std::size_t> place(gdim, 0);
  for (std::size_t c = 0; c < gdim; ++c)
    for (std::size_t b = 0; b < k; ++b)
      if ((c >> (k - 1 - b)) & 1u) place[c] |= std::size_t{1} << shifts[b];

  // Row-wise nonzero structure. Controlled permutations and diagonal gates
  // have one entry per row, so skipping zeros changes the group cost from
  // 4^k to 2^k.
  std::vector<std::vector<std::pair<std::size_t, cx>>> rows(gdim);
  for (std::size_t r = 0; r < gdim; ++r)
    for (std::size_t c = 0; c < gdim; ++c)
      if (gate.at(r, c) != cx(0, 0)) rows[r].emplace_back(c, gate.at(r, c));

  // Enumerate group bases: every index whose target bits are all zero.
  std::vector<std::size_t> free_shifts;
  std::size_t target_mask = 0;
  for (std::size_t s : shifts) target_mask |= std::size_t{1} << s;
  for (std::size_t b = 0; b < n; ++b)
    if (!(target_mask >> b & 1u)) free_shifts.push_back(b);
  const std::size_t groups = std::size_t{1} << free_shifts.size();

  bool single = true;
  for (const auto& r : rows)
    if (r.size() != 1) {
      single = false;
      break;
    }
  if (single) {
    // One nonzero per row: the gate permutes basis states up to a phase.
    // Identity rows (the untouched block of a controlled gate, fixed points
    // of a modular map) drop out of the move list entirely.
    std::vector<std::size_t> dst, src;
    std::vector<cx> val;
    for (std::size_t r = 0; r < gdim; ++r) {
      const auto& [c, v] = rows[r][0];
      if (c == r && v == cx(1, 0)) continue;
      dst.push_back(place[r]);
      src.push_back(place[c]);
      val.push_back(v);
    }
    std::vector<cx> moved(dst.size());
    for (std::size_t g = 0; g < groups; ++g) {
      std::size_t base = 0;
      for (std::size_t b = 0; b < free_shifts.size(); ++b)
        if ((g >> b) & 1u) base |= std::size_t{1} << free_shifts[b];
      for (std::size_t i = 0; i < dst.size(); ++i)
        moved[i] = val[i] * amps[base | src[i]];
      for (std::size_t i = 0; i < dst.size(); ++i)
        amps[base | dst[i]] = moved[i];
    }
    return;
  }

  std::vector<cx> scratch(gdim);
  for (std::size_t g = 0; g < groups; ++g) {
    std::size_t base = 0;
    for (std::size_t b = 0; b < free_shifts.size(); ++b)
      if ((g >> b) & 1u) base |= std::size_t{1} << free_shifts[b];
    for (std::size_t c = 0; c < gdim; ++c) scratch[c] = amps[base | place[c]];
    for (std::size_t r = 0; r < gdim; ++r) {
      cx acc(0, 0);
      for (const auto& [c, v] : rows[r]) acc += v * scratch[c];
      amps[base | place[r]] = acc;
    }
  }
}

}  // namespace detail

PureState apply(const PureState& state, const GateMatrix& gate,
                const std::vector<std::string>& targets) {
  std::vector<std::size_t> shifts =
      detail::target_shifts(state, targets, gate.arity());
  std::vector<cx> amps = state.amps();
  detail::apply_inplace(amps, state.qubit_count(), gate, shifts);
  return StateBuilder::wrap(state.labels(), std::move(amps));
}

}  // namespace qsim
