#include "qsim/network.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "qsim/circuit_text.hpp"

using namespace qsim;

namespace {

const double pi = std::numbers::pi;
const double r2 = 1.0 / std::sqrt(2.0);

Instruction add_q(const std::string& label) {
  Instruction ins;
  ins.kind = InstrKind::AddQubit;
  ins.targets = {label};
  return ins;
}

Instruction gate(const std::string& name, std::vector<std::string> targets,
                 std::vector<std::string> params = {},
                 const std::string& condition = "") {
  Instruction ins;
  ins.kind = InstrKind::ApplyGate;
  ins.gate_name = name;
  ins.targets = std::move(targets);
  ins.params = std::move(params);
  ins.condition = condition;
  return ins;
}

Instruction meas(const std::string& label, const std::string& cbit) {
  Instruction ins;
  ins.kind = InstrKind::Measure;
  ins.targets = {label};
  ins.cbit = cbit;
  return ins;
}

Network net_of(std::vector<Instruction> instructions) {
  Network net;
  net.instructions = std::move(instructions);
  return net;
}

double state_diff(const PureState& got, const PureState& want) {
  PureState aligned = permute_labels(got, want.labels());
  double worst = 0.0;
  for (std::size_t i = 0; i < want.dim(); ++i)
    worst = std::max(worst, std::abs(aligned.amps()[i] - want.amps()[i]));
  return worst;
}

}  // namespace

TEST_CASE("parse_angle grammar") {
  CHECK(parse_angle("pi") == doctest::Approx(pi));
  CHECK(parse_angle("-pi/4") == doctest::Approx(-pi / 4));
  CHECK(parse_angle("+pi/2") == doctest::Approx(pi / 2));
  CHECK(parse_angle("3*pi/2") == doctest::Approx(3 * pi / 2));
  CHECK(parse_angle("0.5") == doctest::Approx(0.5));
  CHECK(parse_angle("-2") == doctest::Approx(-2.0));
  CHECK(parse_angle("pi*0.25") == doctest::Approx(pi / 4));
  CHECK(parse_angle("1e-3") == doctest::Approx(1e-3));

  CHECK_THROWS_AS(parse_angle(""), Error);
  CHECK_THROWS_AS(parse_angle("tau"), Error);
  CHECK_THROWS_AS(parse_angle("pi/2/2"), Error);
  CHECK_THROWS_AS(parse_angle("2**3"), Error);
  CHECK_THROWS_AS(parse_angle("pi/0"), Error);
  CHECK_THROWS_AS(parse_angle("1.2.3"), Error);
}

TEST_CASE("make_gate builds the whole instruction set") {
  CHECK(make_gate("X", {}).entries() == pauli('x').entries());
  CHECK(make_gate("H", {}).arity() == 1);
  CHECK(make_gate("CNOT", {}).entries() == cnot().entries());
  CHECK(make_gate("CCX", {}).entries() == toffoli().entries());
  CHECK(make_gate("S", {"pi/2"}).at(1, 1) == phase_gate(pi / 2).at(1, 1));
  CHECK(make_gate("RZ", {"-pi/4"}).at(0, 0) == rotation('z', -pi / 4).at(0, 0));
  CHECK(make_gate("ZZ", {"0.3"}).at(0, 0) == zz_rotation(0.3).at(0, 0));
  CHECK(make_gate("CU", {"y", "0.7"}).entries() ==
        controlled(rotation('y', 0.7)).entries());

  CHECK_THROWS_AS(make_gate("Q", {}), Error);
  CHECK_THROWS_AS(make_gate("X", {"0.5"}), Error);
  CHECK_THROWS_AS(make_gate("RZ", {}), Error);
  CHECK_THROWS_AS(make_gate("CU", {"q", "0.7"}), Error);
  CHECK_THROWS_AS(make_gate("CU", {"0.7"}), Error);
  CHECK_THROWS_AS(make_gate("S", {"nope"}), Error);
}

TEST_CASE("instruction equality ignores the source line") {
  Instruction a = gate("H", {"q"});
  Instruction b = gate("H", {"q"});
  b.source_line = 42;
  CHECK(a == b);
  Instruction c = gate("H", {"r"});
  CHECK_FALSE(a == c);
}

TEST_CASE("validate catches each class of mistake") {
  auto first_message = [](const Network& net,
                          const std::vector<std::string>& inputs = {}) {
    auto diags = validate(net, inputs);
    REQUIRE_FALSE(diags.empty());
    return diags[0].message;
  };

  SUBCASE("gate on an unknown label") {
    Network net = net_of({gate("H", {"q"})});
    CHECK(first_message(net).find("q") != std::string::npos);
  }
  SUBCASE("duplicate add") {
    Network net = net_of({add_q("q"), add_q("q")});
    auto diags = validate(net);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].instruction == 1);
  }
  SUBCASE("register capacity") {
    std::vector<Instruction> ins;
    for (int i = 0; i < 25; ++i) ins.push_back(add_q("q" + std::to_string(i)));
    auto diags = validate(net_of(std::move(ins)));
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].instruction == 24);
    CHECK(diags[0].message.find("capacity") != std::string::npos);
  }
  SUBCASE("duplicate targets") {
    Network net = net_of({add_q("a"), add_q("b"), gate("CNOT", {"a", "a"})});
    CHECK_FALSE(validate(net).empty());
  }
  SUBCASE("gate arity vs target count") {
    Network net = net_of({add_q("a"), gate("CNOT", {"a"})});
    CHECK_FALSE(validate(net).empty());
  }
  SUBCASE("bad gate parameters become diagnostics, not exceptions") {
    Network net = net_of({add_q("a"), gate("RZ", {"a"}, {"frog"})});
    CHECK_FALSE(validate(net).empty());
  }
  SUBCASE("oracle must be installed") {
    Instruction ins;
    ins.kind = InstrKind::ApplyOracle;
    ins.oracle = "missing";
    ins.targets = {"a"};
    Network net = net_of({add_q("a"), ins});
    CHECK(first_message(net).find("missing") != std::string::npos);
  }
  SUBCASE("oracle arity and unitarity") {
    Instruction call;
    call.kind = InstrKind::ApplyOracle;
    call.oracle = "box";
    call.targets = {"a", "b"};
    Network net = net_of({add_q("a"), add_q("b"), call});
    net.oracles.emplace("box", parity_black_box(1, 0));  // arity 3
    CHECK_FALSE(validate(net).empty());

    Network net2 = net_of({add_q("a"), call});
    net2.instructions[1].targets = {"a"};
    net2.oracles.emplace("box", GateMatrix("box", 1, {1, 0, 0, 0.5}));
    CHECK(first_message(net2).find("unitary") != std::string::npos);
  }
  SUBCASE("measure needs a destination bit") {
    Instruction ins = meas("a", "");
    Network net = net_of({add_q("a"), ins});
    CHECK_FALSE(validate(net).empty());
  }
  SUBCASE("conditions must name an already-written bit") {
    Network net = net_of({add_q("a"), gate("X", {"a"}, {}, "c")});
    CHECK_FALSE(validate(net).empty());

    Network ok = net_of({add_q("a"), meas("a", "c"), gate("X", {"a"}, {}, "c")});
    CHECK(validate(ok).empty());
  }
  SUBCASE("conditions are only for gates, oracles, and resets") {
    Instruction ins = add_q("a");
    ins.condition = "c";
    Network net = net_of({add_q("b"), meas("b", "c"), ins});
    CHECK_FALSE(validate(net).empty());

    Instruction m = meas("b", "d");
    m.condition = "c";
    Network net2 = net_of({add_q("b"), meas("b", "c"), m});
    CHECK_FALSE(validate(net2).empty());
  }
  SUBCASE("checkpoint tags are unique and nonempty") {
    Instruction cp;
    cp.kind = InstrKind::Checkpoint;
    cp.tag = "x";
    Network net = net_of({cp, cp});
    CHECK_FALSE(validate(net).empty());
    Instruction blank;
    blank.kind = InstrKind::Checkpoint;
    CHECK_FALSE(validate(net_of({blank})).empty());
  }
  SUBCASE("discard kills the label") {
    Instruction d;
    d.kind = InstrKind::Discard;
    d.targets = {"a"};
    Network net = net_of({add_q("a"), d, gate("H", {"a"})});
    auto diags = validate(net);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].instruction == 2);
  }
  SUBCASE("input labels are live from the start") {
    Network net = net_of({gate("H", {"s0"})});
    CHECK(validate(net, {"s0"}).empty());
    Network net2 = net_of({add_q("s0")});
    CHECK_FALSE(validate(net2, {"s0"}).empty());
  }
}

TEST_CASE("executing an invalid network throws with the first diagnostic") {
  Network net = net_of({gate("H", {"ghost"})});
  Rng rng(1);
  CHECK_THROWS_AS(execute(net, rng), Error);
}

TEST_CASE("a Bell pair measures to matching bits") {
  Network net = net_of({add_q("q0"), add_q("q1"), gate("H", {"q0"}),
                        gate("CNOT", {"q0", "q1"}), meas("q0", "c0"),
                        meas("q1", "c1")});
  int ones = 0;
  for (int seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    ExecutionTrace trace = execute(net, rng);
    REQUIRE(trace.classical_bits.count("c0") == 1);
    CHECK(trace.classical_bits.at("c0") == trace.classical_bits.at("c1"));
    ones += trace.classical_bits.at("c0");
  }
  CHECK(ones > 60);
  CHECK(ones < 140);
}

TEST_CASE("conditioned gates read the classical bits") {
  Network net = net_of({add_q("a"), add_q("b"), gate("H", {"a"}),
                        meas("a", "ca"), gate("X", {"b"}, {}, "ca"),
                        meas("b", "cb")});
  for (int seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    ExecutionTrace trace = execute(net, rng);
    CHECK(trace.classical_bits.at("cb") == trace.classical_bits.at("ca"));
  }
}

TEST_CASE("reset produces a mixture and measure then prunes it") {
  Instruction rst;
  rst.kind = InstrKind::Reset;
  rst.targets = {"b"};

  Network net = net_of({add_q("a"), add_q("b"), gate("H", {"a"}),
                        gate("CNOT", {"a", "b"}), rst});
  Rng rng(3);
  ExecutionTrace trace = execute(net, rng);
  REQUIRE(trace.final_state.branches().size() == 2);
  double total = 0.0;
  for (const Branch& br : trace.final_state.branches()) {
    total += br.probability;
    CHECK(measure_probs(br.state, "b").first == doctest::Approx(1.0));
  }
  CHECK(total == doctest::Approx(1.0));

  // Measuring A picks one consistent outcome across the whole mixture,
  // leaving a single surviving branch.
  Network with_meas = net;
  with_meas.instructions.push_back(meas("a", "c"));
  int ones = 0;
  for (int seed = 0; seed < 400; ++seed) {
    Rng r(seed);
    ExecutionTrace t = execute(with_meas, r);
    REQUIRE(t.final_state.branches().size() == 1);
    ones += t.classical_bits.at("c");
  }
  CHECK(ones > 140);
  CHECK(ones < 260);
}

TEST_CASE("discard drops the label from the final state") {
  Instruction d;
  d.kind = InstrKind::Discard;
  d.targets = {"b"};
  Network net = net_of({add_q("a"), add_q("b"), gate("H", {"a"}),
                        gate("CNOT", {"a", "b"}), d});
  Rng rng(11);
  ExecutionTrace trace = execute(net, rng);
  REQUIRE(trace.final_state.branches().size() == 2);
  for (const Branch& br : trace.final_state.branches()) {
    CHECK(br.state.labels() == std::vector<std::string>{"a"});
    CHECK(br.probability == doctest::Approx(0.5));
  }
}

TEST_CASE("checkpoints capture the pure state and reject proper mixtures") {
  Instruction cp;
  cp.kind = InstrKind::Checkpoint;
  cp.tag = "after_h";
  Network net = net_of({add_q("q"), gate("H", {"q"}), cp});
  Rng rng(2);
  ExecutionTrace trace = execute(net, rng);
  REQUIRE(trace.checkpoints.count("after_h") == 1);
  PureState want = PureState::from_amplitudes({"q"}, {r2, r2});
  CHECK(state_diff(trace.checkpoints.at("after_h"), want) < 1e-12);

  Instruction rst;
  rst.kind = InstrKind::Reset;
  rst.targets = {"q"};
  Instruction cp2;
  cp2.kind = InstrKind::Checkpoint;
  cp2.tag = "bad";
  Network mixture_net =
      net_of({add_q("q"), gate("H", {"q"}), rst, cp2});
  Rng rng2(2);
  CHECK_THROWS_AS(execute(mixture_net, rng2), Error);
}

TEST_CASE("execute with an input register") {
  Network net = net_of({gate("X", {"s"}), meas("s", "c")});
  Rng rng(8);
  ExecutionTrace trace = execute(net, rng, logical_state({{"s", 1}}));
  CHECK(trace.classical_bits.at("c") == 0);
}

TEST_CASE("same seed, same trace") {
  Network net = net_of({add_q("a"), add_q("b"), gate("H", {"a"}),
                        gate("H", {"b"}), meas("a", "x"), meas("b", "y")});
  Rng r1(12345), r2_(12345), r3(54321);
  ExecutionTrace t1 = execute(net, r1);
  ExecutionTrace t2 = execute(net, r2_);
  CHECK(trace_to_json(t1, true, true) == trace_to_json(t2, true, true));
  bool saw_difference = false;
  for (int seed = 0; seed < 20 && !saw_difference; ++seed) {
    Rng ra(seed);
    saw_difference = execute(net, ra).classical_bits != t1.classical_bits;
  }
  CHECK(saw_difference);
}

TEST_CASE("parity_black_box is the advertised permutation") {
  for (int bA = 0; bA <= 1; ++bA)
    for (int bB = 0; bB <= 1; ++bB) {
      GateMatrix box = parity_black_box(bA, bB);
      REQUIRE(box.arity() == 3);
      CHECK(is_unitary(box, 1e-12));
      for (std::size_t in = 0; in < 8; ++in) {
        std::size_t aA = (in >> 2) & 1, aB = (in >> 1) & 1, aC = in & 1;
        std::size_t out_c = aC ^ (bA & (int)aA) ^ (bB & (int)aB);
        std::size_t expect = (aA << 2) | (aB << 1) | out_c;
        for (std::size_t row = 0; row < 8; ++row)
          CHECK(box.at(row, in) == (row == expect ? cx(1, 0) : cx(0, 0)));
      }
    }
  CHECK_THROWS_AS(parity_black_box(2, 0), Error);
  CHECK_THROWS_AS(parity_black_box(0, -1), Error);
}

TEST_CASE("the parity network recovers both bits in one call") {
  for (int bA = 0; bA <= 1; ++bA)
    for (int bB = 0; bB <= 1; ++bB)
      for (int seed = 0; seed < 25; ++seed) {
        Rng rng(1000 * bA + 100 * bB + seed);
        ParityRun run = run_parity(bA, bB, rng);
        CHECK(run.b_A == bA);
        CHECK(run.b_B == bB);
        CHECK(run.trace.classical_bits.at("c_A") == bA);
        CHECK(run.trace.classical_bits.at("c_B") == bB);
        CHECK(run.report.gate_count == 11);
        CHECK(run.report.oracle_calls == 1);
        CHECK(run.report.parallel_depth == 6);
      }
}

TEST_CASE("parity checkpoints walk through the expected states") {
  auto q = [](double a0, double a1, const std::string& label) {
    double n = std::sqrt(a0 * a0 + a1 * a1);
    return PureState::from_amplitudes({label}, {a0 / n, a1 / n});
  };
  for (int bA = 0; bA <= 1; ++bA)
    for (int bB = 0; bB <= 1; ++bB) {
      Rng rng(77);
      ParityRun run = run_parity(bA, bB, rng);
      const auto& cps = run.trace.checkpoints;
      REQUIRE(cps.size() == 5);

      PureState plusA = q(1, 1, "A"), plusB = q(1, 1, "B");
      PureState minusC = q(1, -1, "C");
      double sA = bA ? -1.0 : 1.0, sB = bB ? -1.0 : 1.0;

      CHECK(state_diff(cps.at("1"),
                       logical_state({{"A", 0}, {"B", 0}, {"C", 0}})) < 1e-12);
      CHECK(state_diff(cps.at("2"),
                       tensor(tensor(plusA, plusB), q(0, 1, "C"))) < 1e-12);
      CHECK(state_diff(cps.at("3"),
                       tensor(tensor(plusA, plusB), minusC)) < 1e-12);
      CHECK(state_diff(cps.at("4"), tensor(tensor(q(1, sA, "A"), q(1, sB, "B")),
                                           minusC)) < 1e-12);
      CHECK(state_diff(cps.at("5"),
                       tensor(tensor(logical_state({{"A", bA}}),
                                     logical_state({{"B", bB}})),
                              minusC)) < 1e-12);
    }
}

TEST_CASE("build_qparity validates only once the oracle is installed") {
  Network net = build_qparity();
  CHECK_FALSE(validate(net).empty());  // "BB" slot still empty
  net.oracles.emplace("BB", parity_black_box(0, 1));
  CHECK(validate(net).empty());
}

TEST_CASE("resource_count tallies the parity network") {
  Network net = build_qparity();
  net.oracles.emplace("BB", parity_black_box(0, 0));
  ResourceReport rep = resource_count(net);
  CHECK(rep.qubit_count == 3);
  CHECK(rep.gate_count == 11);
  CHECK(rep.oracle_calls == 1);
  CHECK(rep.irreversible_ops == 2);
  CHECK(rep.parallel_depth == 6);
}

TEST_CASE("resource_count levels independent gates together") {
  // Two disjoint single-qubit gates share a level; a chain does not.
  Network par = net_of({add_q("a"), add_q("b"), gate("H", {"a"}),
                        gate("H", {"b"})});
  CHECK(resource_count(par).parallel_depth == 2);
  Network chain = net_of({add_q("a"), gate("H", {"a"}), gate("X", {"a"})});
  CHECK(resource_count(chain).parallel_depth == 3);
  // A condition serializes against the producing measurement.
  Network cond = net_of({add_q("a"), add_q("b"), meas("a", "c"),
                         gate("X", {"b"}, {}, "c")});
  CHECK(resource_count(cond).parallel_depth == 3);
}

TEST_CASE("classical_parity_queries always needs two evaluations") {
  for (int bA = 0; bA <= 1; ++bA)
    for (int bB = 0; bB <= 1; ++bB) {
      ClassicalParityResult res = classical_parity_queries(bA, bB);
      CHECK(res.b_A == bA);
      CHECK(res.b_B == bB);
      CHECK(res.queries == 2);
    }
}

TEST_CASE("trace_to_json layouts") {
  Instruction cp;
  cp.kind = InstrKind::Checkpoint;
  cp.tag = "t";
  Network net = net_of({add_q("q"), gate("X", {"q"}), cp, meas("q", "c")});
  Rng rng(4);
  ExecutionTrace trace = execute(net, rng);

  CHECK(trace_to_json(trace, false, false) == R"({"classical_bits":{"c":1}})");
  CHECK(trace_to_json(trace, true, false) ==
        R"({"classical_bits":{"c":1},"checkpoints":{"t":{"labels":["q"],"amps":[[0,0],[1,0]]}}})");
  CHECK(
      trace_to_json(trace, false, true) ==
      R"({"classical_bits":{"c":1},"final_state":{"branches":[{"probability":1,"state":{"labels":["q"],"amps":[[0,0],[1,0]]}}]}})");
}
