#include "qsim/shor.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "qsim/json_writer.hpp"

namespace qsim {

namespace {

std::size_t ceil_log2(u64 n) {
  std::size_t bits = 0;
  while ((u64{1} << bits) < n) ++bits;
  return bits;
}

}  // namespace

std::vector<std::string> system_labels(std::size_t n_sys) {
  std::vector<std::string> labels;
  labels.reserve(n_sys);
  for (std::size_t i = n_sys; i-- > 0;)
    labels.push_back("s" + std::to_string(i));
  return labels;
}

std::vector<std::string> ancilla_labels(std::size_t m) {
  std::vector<std::string> labels;
  labels.reserve(m);
  for (std::size_t i = m; i-- > 0;) labels.push_back("t" + std::to_string(i));
  return labels;
}

ModMulOperator::ModMulOperator(u64 q, u64 N)
    : q_(q), N_(N), n_sys_(ceil_log2(N)) {
  if (N < 2) throw Error("modulus must exceed 1");
  if (q < 1 || q >= N) throw Error("multiplier must satisfy 1 <= q < N");
  if (gcd(q, N) != 1)
    throw Error("multiplier must be coprime to the modulus");
  if (n_sys_ > k_max_qubits) throw Error("register capacity exceeded");
}

u64 ModMulOperator::map_index(u64 x) const {
  return x < N_ ? mod_mul(q_, x, N_) : x;
}

GateMatrix ModMulOperator::matrix() const {
  const std::size_t dim = std::size_t{1} << n_sys_;
  std::vector<cx> m(dim * dim, cx(0, 0));
  for (u64 x = 0; x < dim; ++x) m[map_index(x) * dim + x] = 1;
  return GateMatrix(
      "mul(" + std::to_string(q_) + "," + std::to_string(N_) + ")", n_sys_,
      std::move(m));
}

ModMulOperator mod_mul_operator(u64 q, u64 N) {
  if (q <= 1) throw Error("multiplier must satisfy 1 < q < N");
  return ModMulOperator(q, N);
}

ModMulOperator powered(const ModMulOperator& op, u64 e) {
  if (e == 0 || (e & (e - 1)) != 0)
    throw Error("exponent must be a power of two");
  return ModMulOperator(mod_exp(op.q(), e, op.modulus()), op.modulus());
}

PureState fourier_cycle_state(u64 q, u64 N, u64 m) {
  ModMulOperator op = mod_mul_operator(q, N);
  std::vector<u64> cycle = cycle_of(q, N);
  const u64 k = cycle.size();
  if (m >= k) throw Error("Fourier index must be below the cycle length");

  const std::size_t dim = std::size_t{1} << op.system_qubits();
  std::vector<cx> amps(dim, cx(0, 0));
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  for (u64 l = 0; l < k; ++l) {
    // exp(-i 2 pi l m / k): the walk |x> -> |q x> then advances the phase by
    // +2 pi m / k, making this an eigenvector with eigenvalue omega^m.
    double angle = -2.0 * std::numbers::pi *
                   static_cast<double>(mod_mul(l, m, k)) /
                   static_cast<double>(k);
    amps[cycle[l]] = std::polar(scale, angle);
  }
  return StateBuilder::wrap(system_labels(op.system_qubits()),
                            std::move(amps));
}

namespace {

Instruction instr_add(const std::string& label) {
  Instruction ins;
  ins.kind = InstrKind::AddQubit;
  ins.targets = {label};
  return ins;
}

Instruction instr_gate(const std::string& name,
                       std::vector<std::string> targets,
                       std::vector<std::string> params = {},
                       std::string condition = {}) {
  Instruction ins;
  ins.kind = InstrKind::ApplyGate;
  ins.gate_name = name;
  ins.targets = std::move(targets);
  ins.params = std::move(params);
  ins.condition = std::move(condition);
  return ins;
}

Instruction instr_checkpoint(const std::string& tag) {
  Instruction ins;
  ins.kind = InstrKind::Checkpoint;
  ins.tag = tag;
  return ins;
}

}  // namespace

Network kickback_network(const ModMulOperator& op, std::size_t m_ancilla) {
  if (m_ancilla < 1) throw Error("kickback needs at least one ancilla");
  if (op.system_qubits() + m_ancilla > k_max_qubits)
    throw Error("register capacity exceeded");

  std::vector<std::string> ancillas = ancilla_labels(m_ancilla);
  std::vector<std::string> system = system_labels(op.system_qubits());

  Network net;
  for (const auto& t : ancillas) net.instructions.push_back(instr_add(t));
  for (const auto& t : ancillas)
    net.instructions.push_back(instr_gate("H", {t}));
  // Ancilla carrying bit l of the phase controls op^(2^l); top ancilla first.
  for (std::size_t l = m_ancilla; l-- > 0;) {
    GateMatrix gate = controlled(powered(op, u64{1} << l).matrix());
    std::string key = gate.name();
    Instruction ins;
    ins.kind = InstrKind::ApplyOracle;
    ins.oracle = key;
    ins.targets = {"t" + std::to_string(l)};
    ins.targets.insert(ins.targets.end(), system.begin(), system.end());
    net.instructions.push_back(std::move(ins));
    net.oracles.emplace(std::move(key), std::move(gate));
  }
  return net;
}

Network measured_qft_network(std::size_t m) {
  if (m < 1) throw Error("measured Fourier transform needs at least one qubit");
  Network net;
  net.instructions.push_back(instr_checkpoint("1"));
  for (std::size_t t = 0; t < m; ++t) {
    std::string label = "t" + std::to_string(m - 1 - t);
    if (t > 0) {
      // Earlier outcomes unwind their share of the phase before this qubit's
      // Hadamard: bit a_s contributes S(-pi / 2^(t-s)) when set.
      for (std::size_t s = 0; s < t; ++s)
        net.instructions.push_back(instr_gate(
            "S", {label}, {"-pi/" + std::to_string(u64{1} << (t - s))},
            "a" + std::to_string(s)));
      net.instructions.push_back(instr_checkpoint(std::to_string(2 * t + 1)));
    }
    net.instructions.push_back(instr_gate("H", {label}));
    net.instructions.push_back(instr_checkpoint(std::to_string(2 * t + 2)));
    Instruction meas;
    meas.kind = InstrKind::Measure;
    meas.targets = {label};
    meas.cbit = "a" + std::to_string(t);
    net.instructions.push_back(std::move(meas));
  }
  return net;
}

namespace {

bool is_exact_order(u64 q, u64 s, u64 N) {
  if (s == 0 || mod_exp(q, s, N) != 1) return false;
  for (u64 d = 1; d < s; ++d)
    if (s % d == 0 && mod_exp(q, d, N) == 1) return false;
  return true;
}

}  // namespace

OrderFindResult quantum_order_find_detailed(u64 q, u64 N, Rng& rng,
                                            const OrderFindOptions& opts) {
  ModMulOperator op = mod_mul_operator(q, N);
  const std::size_t m = opts.m ? opts.m : 2 * ceil_log2(N);
  if (op.system_qubits() + m > k_max_qubits)
    throw Error("register capacity exceeded");

  Network net = kickback_network(op, m);
  Network qft = measured_qft_network(m);
  // Checkpoint snapshots are for inspecting the transform in isolation; the
  // order-finding loop only needs the classical bits.
  for (auto& ins : qft.instructions)
    if (ins.kind != InstrKind::Checkpoint)
      net.instructions.push_back(std::move(ins));

  std::vector<std::pair<std::string, int>> one;
  for (const auto& label : system_labels(op.system_qubits()))
    one.emplace_back(label, 0);
  one.back().second = 1;
  const PureState input = logical_state(one);

  OrderFindResult result;
  result.m = m;
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    ExecutionTrace trace = execute(net, rng, input);
    OrderAttempt rec;
    rec.bits.resize(m);
    for (std::size_t t = 0; t < m; ++t) {
      rec.bits[t] = trace.classical_bits.at("a" + std::to_string(t));
      rec.a |= static_cast<u64>(rec.bits[t]) << t;
    }
    rec.fraction = recover_fraction(rec.a, static_cast<unsigned>(m), N);
    if (rec.fraction && is_exact_order(q, rec.fraction->den, N))
      rec.order = rec.fraction->den;
    bool done = rec.order.has_value();
    result.attempts.push_back(std::move(rec));
    if (done) {
      result.order = *result.attempts.back().order;
      break;
    }
  }
  return result;
}

u64 quantum_order_find(u64 q, u64 N, Rng& rng, const OrderFindOptions& opts) {
  OrderFindResult result = quantum_order_find_detailed(q, N, rng, opts);
  if (result.order == 0)
    throw Error("order finding exhausted its attempt budget");
  return result.order;
}

FactorRunRecord factor_find(u64 N, Rng& rng, const FactorConfig& config) {
  if (N < 4) throw Error("factoring needs N >= 4");
  if (is_prime(N)) throw Error("N is prime; it has no proper factor");

  FactorRunRecord rec;
  rec.N = N;
  rec.backend = "none";
  if (N % 2 == 0) {
    rec.factor = 2;
    return rec;
  }
  if (auto root = prime_power_root(N)) {
    rec.factor = *root;
    return rec;
  }

  for (int draws = 1; draws <= config.max_attempts; ++draws) {
    rec = FactorRunRecord{};
    rec.N = N;
    rec.attempts = draws;

    const u64 q = rng.below(N - 3) + 2;  // uniform over 1 < q < N-1
    rec.q = q;
    const u64 shortcut = gcd(q, N);
    if (shortcut > 1) {
      rec.backend = "none";
      rec.factor = shortcut;
      return rec;
    }

    u64 k = 0;
    if (N <= config.quantum_threshold) {
      rec.backend = "quantum";
      OrderFindOptions opts;
      opts.m = config.m;
      opts.max_attempts = config.max_attempts;
      OrderFindResult found = quantum_order_find_detailed(q, N, rng, opts);
      rec.m = found.m;
      if (found.order == 0) continue;
      const OrderAttempt& last = found.attempts.back();
      rec.measured_bits = last.bits;
      rec.a = last.a;
      rec.fraction = last.fraction;
      k = found.order;
    } else {
      rec.backend = "classical";
      k = multiplicative_order(q, N);
    }
    rec.order = k;
    if (k % 2 != 0) continue;

    const u64 r = mod_exp(q, k / 2, N);
    rec.r = r;
    for (u64 candidate : {gcd(r - 1, N), gcd(r + 1, N)}) {
      if (candidate > 1 && candidate < N) {
        rec.factor = candidate;
        return rec;
      }
    }
  }
  throw Error("factoring retry budget exhausted");
}

namespace {

Json optional_u64(const std::optional<u64>& v) {
  return v ? Json::unsigned_integer(*v) : Json::null();
}

}  // namespace

std::string to_json(const FactorRunRecord& rec) {
  Json root = Json::object();
  root.set("N", Json::unsigned_integer(rec.N));
  root.set("q", optional_u64(rec.q));
  root.set("backend", Json::string(rec.backend));
  root.set("m", rec.m ? Json::unsigned_integer(*rec.m) : Json::null());
  Json bits = Json::array();
  for (int b : rec.measured_bits) bits.push(Json::integer(b));
  root.set("measured_bits", std::move(bits));
  root.set("a", optional_u64(rec.a));
  if (rec.fraction) {
    Json frac = Json::object();
    frac.set("num", Json::unsigned_integer(rec.fraction->num));
    frac.set("den", Json::unsigned_integer(rec.fraction->den));
    root.set("fraction", std::move(frac));
  } else {
    root.set("fraction", Json::null());
  }
  root.set("order", optional_u64(rec.order));
  root.set("r", optional_u64(rec.r));
  root.set("factor", Json::unsigned_integer(rec.factor));
  root.set("attempts", Json::integer(rec.attempts));
  return root.dump();
}

}  // namespace qsim
