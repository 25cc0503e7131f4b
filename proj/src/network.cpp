#include "qsim/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include "qsim/json_writer.hpp"

namespace qsim {

bool Instruction::operator==(const Instruction& other) const {
  return kind == other.kind && targets == other.targets &&
         gate_name == other.gate_name && params == other.params &&
         oracle == other.oracle && cbit == other.cbit && tag == other.tag &&
         condition == other.condition;
}

void Network::append(const Network& other) {
  instructions.insert(instructions.end(), other.instructions.begin(),
                      other.instructions.end());
  for (const auto& [name, gate] : other.oracles) oracles.emplace(name, gate);
}

namespace {

double parse_factor(const std::string& factor) {
  if (factor == "pi") return std::numbers::pi;
  if (factor.empty() || !(std::isdigit(static_cast<unsigned char>(factor[0])) ||
                          factor[0] == '.'))
    throw Error("bad angle factor '" + factor + "'");
  double value = 0;
  auto [ptr, ec] =
      std::from_chars(factor.data(), factor.data() + factor.size(), value);
  if (ec != std::errc() || ptr != factor.data() + factor.size())
    throw Error("bad angle factor '" + factor + "'");
  return value;
}

double parse_product(const std::string& text, const std::string& whole) {
  if (text.empty()) throw Error("bad angle '" + whole + "'");
  double value = 1;
  std::size_t start = 0;
  while (true) {
    std::size_t star = text.find('*', start);
    std::string factor = text.substr(
        start, star == std::string::npos ? std::string::npos : star - start);
    value *= parse_factor(factor);
    if (star == std::string::npos) break;
    start = star + 1;
  }
  return value;
}

}  // namespace

double parse_angle(const std::string& token) {
  std::string body = token;
  double sign = 1;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    if (body[0] == '-') sign = -1;
    body.erase(body.begin());
  }
  if (body.empty()) throw Error("empty angle token");
  std::size_t slash = body.find('/');
  if (body.find('/', slash == std::string::npos ? slash : slash + 1) !=
      std::string::npos)
    throw Error("bad angle '" + token + "': more than one '/'");
  double value;
  if (slash == std::string::npos) {
    value = parse_product(body, token);
  } else {
    double num = parse_product(body.substr(0, slash), token);
    double den = parse_product(body.substr(slash + 1), token);
    if (den == 0) throw Error("bad angle '" + token + "': zero denominator");
    value = num / den;
  }
  return sign * value;
}

GateMatrix make_gate(const std::string& name,
                     const std::vector<std::string>& params) {
  auto need = [&](std::size_t count) {
    if (params.size() != count)
      throw Error("gate " + name + " takes " + std::to_string(count) +
                  " parameter(s), got " + std::to_string(params.size()));
  };
  if (name == "X" || name == "Y" || name == "Z") {
    need(0);
    return pauli(static_cast<char>(std::tolower(name[0])));
  }
  if (name == "H") {
    need(0);
    return hadamard();
  }
  if (name == "S") {
    need(1);
    return phase_gate(parse_angle(params[0]));
  }
  if (name == "RX" || name == "RY" || name == "RZ") {
    need(1);
    return rotation(static_cast<char>(std::tolower(name[1])),
                    parse_angle(params[0]));
  }
  if (name == "CNOT") {
    need(0);
    return cnot();
  }
  if (name == "ZZ") {
    need(1);
    return zz_rotation(parse_angle(params[0]));
  }
  if (name == "CCX") {
    need(0);
    return toffoli();
  }
  if (name == "CU") {
    need(2);
    const std::string& axis = params[0];
    if (axis != "x" && axis != "y" && axis != "z")
      throw Error("gate CU axis must be x, y, or z");
    return controlled(rotation(axis[0], parse_angle(params[1])));
  }
  throw Error("unknown gate '" + name + "'");
}

std::vector<Diagnostic> validate(const Network& net,
                                 const std::vector<std::string>& input_labels) {
  std::vector<Diagnostic> out;
  auto flag = [&](std::size_t index, const std::string& message) {
    out.push_back(Diagnostic{index, net.instructions[index].source_line,
                             message});
  };

  std::set<std::string> live(input_labels.begin(), input_labels.end());
  if (live.size() != input_labels.size())
    throw Error("input labels are not distinct");
  std::set<std::string> cbits;
  std::set<std::string> tags;

  for (std::size_t i = 0; i < net.instructions.size(); ++i) {
    const Instruction& ins = net.instructions[i];

    if (!ins.condition.empty()) {
      if (ins.kind == InstrKind::AddQubit || ins.kind == InstrKind::Discard ||
          ins.kind == InstrKind::Measure || ins.kind == InstrKind::Checkpoint)
        flag(i, "only gates, oracles, and resets may be conditioned");
      else if (!cbits.count(ins.condition))
        flag(i, "condition reads classical bit '" + ins.condition +
                    "' before any measurement writes it");
    }

    auto targets_live = [&]() {
      bool ok = true;
      for (std::size_t a = 0; a < ins.targets.size(); ++a) {
        if (!live.count(ins.targets[a])) {
          flag(i, "qubit '" + ins.targets[a] + "' is not in the register");
          ok = false;
        }
        for (std::size_t b = 0; b < a; ++b)
          if (ins.targets[a] == ins.targets[b]) {
            flag(i, "duplicate target '" + ins.targets[a] + "'");
            ok = false;
          }
      }
      return ok;
    };

    switch (ins.kind) {
      case InstrKind::AddQubit:
        if (ins.targets.size() != 1) {
          flag(i, "add takes exactly one label");
          break;
        }
        if (live.count(ins.targets[0]))
          flag(i, "qubit '" + ins.targets[0] + "' is already in the register");
        else if (live.size() >= k_max_qubits)
          flag(i, "register capacity exceeded");
        else
          live.insert(ins.targets[0]);
        break;
      case InstrKind::ApplyGate: {
        bool ok = targets_live();
        try {
          GateMatrix g = make_gate(ins.gate_name, ins.params);
          if (ok && g.arity() != ins.targets.size())
            flag(i, "gate " + ins.gate_name + " acts on " +
                        std::to_string(g.arity()) + " qubit(s), got " +
                        std::to_string(ins.targets.size()) + " target(s)");
        } catch (const Error& e) {
          flag(i, e.what());
        }
        break;
      }
      case InstrKind::ApplyOracle: {
        bool ok = targets_live();
        auto it = net.oracles.find(ins.oracle);
        if (it == net.oracles.end()) {
          flag(i, "oracle '" + ins.oracle + "' is not installed");
        } else {
          if (ok && it->second.arity() != ins.targets.size())
            flag(i, "oracle '" + ins.oracle + "' acts on " +
                        std::to_string(it->second.arity()) +
                        " qubit(s), got " +
                        std::to_string(ins.targets.size()) + " target(s)");
          if (!is_unitary(it->second, k_norm_eps))
            flag(i, "oracle '" + ins.oracle + "' is not unitary");
        }
        break;
      }
      case InstrKind::Measure:
        if (ins.targets.size() != 1)
          flag(i, "measure takes exactly one label");
        else
          targets_live();
        if (ins.cbit.empty())
          flag(i, "measure needs a destination classical bit");
        else
          cbits.insert(ins.cbit);
        break;
      case InstrKind::Reset:
        if (ins.targets.size() != 1)
          flag(i, "reset takes exactly one label");
        else
          targets_live();
        break;
      case InstrKind::Discard:
        if (ins.targets.size() != 1) {
          flag(i, "discard takes exactly one label");
        } else if (targets_live()) {
          live.erase(ins.targets[0]);
        }
        break;
      case InstrKind::Checkpoint:
        if (ins.tag.empty())
          flag(i, "checkpoint needs a tag");
        else if (!tags.insert(ins.tag).second)
          flag(i, "duplicate checkpoint tag '" + ins.tag + "'");
        break;
    }
  }
  return out;
}

namespace {

struct ExecBranch {
  double weight;
  std::vector<cx> amps;
};

std::size_t pos_of(const std::vector<std::string>& labels,
                   const std::string& label) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw Error("unknown qubit label '" + label + "'");
}

class Executor {
 public:
  Executor(const Network& net, Rng& rng, const PureState& input)
      : net_(net), rng_(rng) {
    auto issues = validate(net, input.labels());
    if (!issues.empty()) {
      const Diagnostic& d = issues.front();
      std::string where = d.source_line > 0
                              ? "line " + std::to_string(d.source_line)
                              : "instruction " + std::to_string(d.instruction);
      throw Error("invalid network (" + where + "): " + d.message);
    }
    labels_ = input.labels();
    branches_.push_back(ExecBranch{1.0, input.amps()});
  }

  ExecutionTrace run() {
    // Lower gates once; executing the same instruction across branches (or
    // loops in callers) must not re-parse parameters.
    std::vector<const GateMatrix*> lowered(net_.instructions.size(), nullptr);
    std::vector<GateMatrix> built;
    built.reserve(net_.instructions.size());
    for (std::size_t i = 0; i < net_.instructions.size(); ++i) {
      const Instruction& ins = net_.instructions[i];
      if (ins.kind == InstrKind::ApplyGate) {
        built.push_back(make_gate(ins.gate_name, ins.params));
        lowered[i] = &built.back();
      } else if (ins.kind == InstrKind::ApplyOracle) {
        lowered[i] = &net_.oracles.at(ins.oracle);
      }
    }

    for (std::size_t i = 0; i < net_.instructions.size(); ++i) {
      const Instruction& ins = net_.instructions[i];
      if (!ins.condition.empty() && cbits_.at(ins.condition) == 0) continue;
      switch (ins.kind) {
        case InstrKind::AddQubit:
          add_qubit(ins.targets[0]);
          break;
        case InstrKind::ApplyGate:
        case InstrKind::ApplyOracle:
          apply_gate(*lowered[i], ins.targets);
          break;
        case InstrKind::Measure:
          measure(ins.targets[0], ins.cbit);
          break;
        case InstrKind::Reset:
          reset(ins.targets[0]);
          break;
        case InstrKind::Discard:
          discard(ins.targets[0]);
          break;
        case InstrKind::Checkpoint:
          checkpoint(ins.tag);
          break;
      }
    }

    double total = 0;
    for (const auto& b : branches_) total += b.weight;
    std::vector<Branch> out;
    out.reserve(branches_.size());
    for (auto& b : branches_)
      out.push_back(Branch{b.weight / total,
                           StateBuilder::wrap(labels_, std::move(b.amps))});
    return ExecutionTrace{Mixture(std::move(out)), std::move(cbits_),
                          std::move(checkpoints_)};
  }

 private:
  std::size_t shift_of(const std::string& label) const {
    return labels_.size() - 1 - pos_of(labels_, label);
  }

  void add_qubit(const std::string& label) {
    labels_.push_back(label);
    for (auto& b : branches_) {
      std::vector<cx> next(b.amps.size() * 2, cx(0, 0));
      for (std::size_t i = 0; i < b.amps.size(); ++i) next[2 * i] = b.amps[i];
      b.amps = std::move(next);
    }
  }

  void apply_gate(const GateMatrix& gate,
                  const std::vector<std::string>& targets) {
    std::vector<std::size_t> shifts(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
      shifts[i] = shift_of(targets[i]);
    for (auto& b : branches_)
      detail::apply_inplace(b.amps, labels_.size(), gate, shifts);
  }

  // One sample is drawn for the whole mixture; every branch is then
  // conditioned on that outcome. The bit-set half of each buffer occupies
  // contiguous blocks of length `bit`, so both the probability sweep and the
  // collapse run block-wise.
  void measure(const std::string& label, const std::string& cbit) {
    const std::size_t bit = std::size_t{1} << shift_of(label);
    std::vector<double> p1(branches_.size(), 0.0);
    double total_p1 = 0;
    for (std::size_t k = 0; k < branches_.size(); ++k) {
      const auto& amps = branches_[k].amps;
      double acc = 0;
      for (std::size_t block = 0; block < amps.size(); block += 2 * bit) {
        const cx* p = amps.data() + block + bit;
        for (std::size_t low = 0; low < bit; ++low) acc += std::norm(p[low]);
      }
      p1[k] = acc;
      total_p1 += branches_[k].weight * acc;
    }
    int outcome = rng_.uniform() < total_p1 ? 1 : 0;
    double total = outcome ? total_p1 : 1.0 - total_p1;
    if (total <= 0)
      throw Error("measurement sampled a zero-probability outcome");

    std::vector<ExecBranch> kept;
    for (std::size_t k = 0; k < branches_.size(); ++k) {
      double p = outcome ? p1[k] : 1.0 - p1[k];
      double weight = branches_[k].weight * p / total;
      if (weight < k_branch_floor) continue;
      ExecBranch b{weight, std::move(branches_[k].amps)};
      const double scale = 1.0 / std::sqrt(p);
      for (std::size_t block = 0; block < b.amps.size(); block += 2 * bit) {
        cx* keep_half = b.amps.data() + block + (outcome ? bit : 0);
        cx* zero_half = b.amps.data() + block + (outcome ? 0 : bit);
        for (std::size_t low = 0; low < bit; ++low) keep_half[low] *= scale;
        std::fill(zero_half, zero_half + bit, cx(0, 0));
      }
      kept.push_back(std::move(b));
    }
    branches_ = std::move(kept);
    cbits_[cbit] = outcome;
  }

  void reset(const std::string& label) {
    const std::size_t bit = std::size_t{1} << shift_of(label);
    std::vector<ExecBranch> next;
    for (auto& b : branches_) {
      double p1 = 0;
      for (std::size_t i = 0; i < b.amps.size(); ++i)
        if (i & bit) p1 += std::norm(b.amps[i]);
      for (int outcome : {0, 1}) {
        double p = outcome ? p1 : 1.0 - p1;
        double weight = b.weight * p;
        if (weight < k_branch_floor) continue;
        const double scale = 1.0 / std::sqrt(p);
        std::vector<cx> amps(b.amps.size(), cx(0, 0));
        for (std::size_t i = 0; i < b.amps.size(); ++i)
          if (((i & bit) != 0) == (outcome == 1))
            amps[i & ~bit] = b.amps[i] * scale;
        next.push_back(ExecBranch{weight, std::move(amps)});
      }
    }
    branches_ = std::move(next);
  }

  void discard(const std::string& label) {
    reset(label);
    const std::size_t shift = shift_of(label);
    const std::size_t bit = std::size_t{1} << shift;
    const std::size_t low_mask = bit - 1;
    for (auto& b : branches_) {
      std::vector<cx> amps(b.amps.size() / 2);
      for (std::size_t i = 0; i < b.amps.size(); ++i) {
        if (i & bit) continue;
        amps[((i >> (shift + 1)) << shift) | (i & low_mask)] = b.amps[i];
      }
      b.amps = std::move(amps);
    }
    labels_.erase(labels_.begin() +
                  static_cast<std::ptrdiff_t>(pos_of(labels_, label)));
  }

  void checkpoint(const std::string& tag) {
    if (branches_.size() != 1)
      throw Error("checkpoint '" + tag + "' reached on a proper mixture");
    checkpoints_.emplace(tag,
                         StateBuilder::wrap(labels_, branches_[0].amps));
  }

  const Network& net_;
  Rng& rng_;
  std::vector<std::string> labels_;
  std::vector<ExecBranch> branches_;
  std::map<std::string, int> cbits_;
  std::map<std::string, PureState> checkpoints_;
};

}  // namespace

ExecutionTrace execute(const Network& net, Rng& rng) {
  return Executor(net, rng, PureState()).run();
}

ExecutionTrace execute(const Network& net, Rng& rng, const PureState& input) {
  return Executor(net, rng, input).run();
}

ResourceReport resource_count(const Network& net) {
  ResourceReport report;
  // Greedy leveling: an instruction runs one level after the latest producer
  // of anything it touches (its qubits, plus the bit it is conditioned on).
  std::map<std::string, std::size_t> qubit_level;
  std::map<std::string, std::size_t> cbit_level;
  for (const Instruction& ins : net.instructions) {
    if (ins.kind == InstrKind::Checkpoint) continue;
    switch (ins.kind) {
      case InstrKind::AddQubit:
        ++report.qubit_count;
        ++report.gate_count;
        break;
      case InstrKind::ApplyGate:
        ++report.gate_count;
        break;
      case InstrKind::ApplyOracle:
        ++report.oracle_calls;
        break;
      case InstrKind::Measure:
      case InstrKind::Reset:
      case InstrKind::Discard:
        ++report.gate_count;
        ++report.irreversible_ops;
        break;
      case InstrKind::Checkpoint:
        break;
    }
    std::size_t level = 0;
    for (const auto& t : ins.targets) level = std::max(level, qubit_level[t]);
    if (!ins.condition.empty())
      level = std::max(level, cbit_level[ins.condition]);
    ++level;
    for (const auto& t : ins.targets) qubit_level[t] = level;
    if (ins.kind == InstrKind::Measure) cbit_level[ins.cbit] = level;
    report.parallel_depth = std::max(report.parallel_depth, level);
  }
  return report;
}

GateMatrix parity_black_box(int b_A, int b_B) {
  if ((b_A != 0 && b_A != 1) || (b_B != 0 && b_B != 1))
    throw Error("parity_black_box arguments must be bits");
  std::vector<cx> m(64, cx(0, 0));
  for (std::size_t in = 0; in < 8; ++in) {
    std::size_t a_A = (in >> 2) & 1u, a_B = (in >> 1) & 1u, a_C = in & 1u;
    std::size_t out_C =
        a_C ^ (static_cast<std::size_t>(b_A) & a_A) ^
        (static_cast<std::size_t>(b_B) & a_B);
    std::size_t to = (a_A << 2) | (a_B << 1) | out_C;
    m[to * 8 + in] = 1;
  }
  return GateMatrix(
      "BB(" + std::to_string(b_A) + "," + std::to_string(b_B) + ")", 3,
      std::move(m));
}

namespace {

Instruction add_instr(const std::string& label) {
  Instruction ins;
  ins.kind = InstrKind::AddQubit;
  ins.targets = {label};
  return ins;
}

Instruction gate_instr(const std::string& name,
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

Instruction oracle_instr(const std::string& name,
                         std::vector<std::string> targets) {
  Instruction ins;
  ins.kind = InstrKind::ApplyOracle;
  ins.oracle = name;
  ins.targets = std::move(targets);
  return ins;
}

Instruction measure_instr(const std::string& label, const std::string& cbit) {
  Instruction ins;
  ins.kind = InstrKind::Measure;
  ins.targets = {label};
  ins.cbit = cbit;
  return ins;
}

Instruction checkpoint_instr(const std::string& tag) {
  Instruction ins;
  ins.kind = InstrKind::Checkpoint;
  ins.tag = tag;
  return ins;
}

}  // namespace

Network build_qparity() {
  Network net;
  auto& ops = net.instructions;
  ops.push_back(add_instr("A"));
  ops.push_back(add_instr("B"));
  ops.push_back(add_instr("C"));
  ops.push_back(checkpoint_instr("1"));
  ops.push_back(gate_instr("H", {"A"}));
  ops.push_back(gate_instr("H", {"B"}));
  ops.push_back(gate_instr("X", {"C"}));
  ops.push_back(checkpoint_instr("2"));
  ops.push_back(gate_instr("H", {"C"}));
  ops.push_back(checkpoint_instr("3"));
  ops.push_back(oracle_instr("BB", {"A", "B", "C"}));
  ops.push_back(checkpoint_instr("4"));
  ops.push_back(gate_instr("H", {"A"}));
  ops.push_back(gate_instr("H", {"B"}));
  ops.push_back(checkpoint_instr("5"));
  ops.push_back(measure_instr("A", "c_A"));
  ops.push_back(measure_instr("B", "c_B"));
  return net;
}

ParityRun run_parity(int b_A, int b_B, Rng& rng) {
  Network net = build_qparity();
  net.oracles.emplace("BB", parity_black_box(b_A, b_B));
  ExecutionTrace trace = execute(net, rng);
  return ParityRun{b_A, b_B, std::move(trace), resource_count(net)};
}

ClassicalParityResult classical_parity_queries(int b_A, int b_B) {
  auto box = [&](int a_A, int a_B, int a_C) {
    return a_C ^ (b_A & a_A) ^ (b_B & a_B);
  };
  // Feeding unit vectors reads each bit straight off the output.
  int got_A = box(1, 0, 0);
  int got_B = box(0, 1, 0);
  return ClassicalParityResult{got_A, got_B, 2};
}

namespace {

Json state_json(const PureState& s) {
  Json obj = Json::object();
  Json labels = Json::array();
  for (const auto& l : s.labels()) labels.push(Json::string(l));
  obj.set("labels", std::move(labels));
  Json amps = Json::array();
  for (const cx& a : s.amps()) {
    Json pair = Json::array();
    pair.push(Json::real(a.real()));
    pair.push(Json::real(a.imag()));
    amps.push(std::move(pair));
  }
  obj.set("amps", std::move(amps));
  return obj;
}

}  // namespace

std::string trace_to_json(const ExecutionTrace& trace,
                          bool include_checkpoints, bool include_final) {
  Json root = Json::object();
  Json bits = Json::object();
  for (const auto& [name, value] : trace.classical_bits)
    bits.set(name, Json::integer(value));
  root.set("classical_bits", std::move(bits));
  if (include_checkpoints) {
    Json cps = Json::object();
    for (const auto& [tag, state] : trace.checkpoints)
      cps.set(tag, state_json(state));
    root.set("checkpoints", std::move(cps));
  }
  if (include_final) {
    Json branches = Json::array();
    for (const auto& b : trace.final_state.branches()) {
      Json entry = Json::object();
      entry.set("probability", Json::real(b.probability));
      entry.set("state", state_json(b.state));
      branches.push(std::move(entry));
    }
    Json final_state = Json::object();
    final_state.set("branches", std::move(branches));
    root.set("final_state", std::move(final_state));
  }
  return root.dump();
}

}  // namespace qsim
