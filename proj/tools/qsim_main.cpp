// Command-line front end. Every command prints a single JSON document on
// stdout; diagnostics go to stderr. Exit codes: 0 success, 1 domain error,
// 2 usage or parse error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qsim/circuit_text.hpp"
#include "qsim/json_writer.hpp"
#include "qsim/measure.hpp"
#include "qsim/network.hpp"
#include "qsim/numtheory.hpp"
#include "qsim/shor.hpp"

namespace {

constexpr int k_exit_ok = 0;
constexpr int k_exit_domain = 1;
constexpr int k_exit_usage = 2;

struct SimulateArgs {
  std::string path;
  std::uint64_t seed = 0;
  bool dump_state = false;
  bool checkpoints = false;
  std::string bloch_label;
};

int run_simulate(const SimulateArgs& args) {
  std::ifstream in(args.path);
  if (!in) {
    std::cerr << "error: cannot open '" << args.path << "'\n";
    return k_exit_domain;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  qsim::Network net = qsim::parse_circuit(buffer.str());
  auto issues = qsim::validate(net);
  if (!issues.empty()) {
    for (const auto& d : issues)
      std::cerr << "line " << d.source_line << ": " << d.message << "\n";
    return k_exit_domain;
  }

  qsim::Rng rng(args.seed);
  qsim::ExecutionTrace trace = qsim::execute(net, rng);
  std::string out =
      qsim::trace_to_json(trace, args.checkpoints, args.dump_state);

  if (!args.bloch_label.empty()) {
    qsim::Mixture mix = trace.final_state;
    const auto all_labels = mix.branches().front().state.labels();
    for (const auto& label : all_labels)
      if (label != args.bloch_label) mix = qsim::discard(mix, label);
    qsim::BlochVector b = qsim::bloch_of(qsim::density_of(mix));
    qsim::Json coords = qsim::Json::object();
    coords.set("x", qsim::Json::real(b.x));
    coords.set("y", qsim::Json::real(b.y));
    coords.set("z", qsim::Json::real(b.z));
    // The trace document is a JSON object; graft the coordinates in before
    // its closing brace.
    out.insert(out.size() - 1, ",\"bloch\":" + coords.dump());
  }
  std::cout << out << "\n";
  return k_exit_ok;
}

int run_parity(int b_A, int b_B, std::uint64_t seed) {
  qsim::Rng rng(seed);
  qsim::ParityRun run = qsim::run_parity(b_A, b_B, rng);
  qsim::Json root = qsim::Json::object();
  root.set("b_A", qsim::Json::integer(run.trace.classical_bits.at("c_A")));
  root.set("b_B", qsim::Json::integer(run.trace.classical_bits.at("c_B")));
  root.set("gates", qsim::Json::unsigned_integer(run.report.gate_count));
  root.set("oracle_calls",
           qsim::Json::unsigned_integer(run.report.oracle_calls));
  root.set("depth", qsim::Json::unsigned_integer(run.report.parallel_depth));
  std::cout << root.dump() << "\n";
  return k_exit_ok;
}

int run_order(qsim::u64 q, qsim::u64 N, const std::string& backend,
              std::uint64_t seed, std::size_t m) {
  qsim::Json root = qsim::Json::object();
  root.set("q", qsim::Json::unsigned_integer(q));
  root.set("N", qsim::Json::unsigned_integer(N));
  root.set("backend", qsim::Json::string(backend));
  if (backend == "quantum") {
    qsim::Rng rng(seed);
    qsim::OrderFindOptions opts;
    opts.m = m;
    qsim::OrderFindResult result =
        qsim::quantum_order_find_detailed(q, N, rng, opts);
    if (result.order == 0)
      throw qsim::Error("order finding exhausted its attempt budget");
    root.set("m", qsim::Json::unsigned_integer(result.m));
    root.set("order", qsim::Json::unsigned_integer(result.order));
    root.set("attempts",
             qsim::Json::unsigned_integer(result.attempts.size()));
  } else {
    root.set("m", qsim::Json::null());
    root.set("order",
             qsim::Json::unsigned_integer(qsim::multiplicative_order(q, N)));
    root.set("attempts", qsim::Json::null());
  }
  std::cout << root.dump() << "\n";
  return k_exit_ok;
}

int run_factor(qsim::u64 N, std::uint64_t seed, qsim::u64 threshold,
               std::size_t m) {
  qsim::Rng rng(seed);
  qsim::FactorConfig config;
  config.quantum_threshold = threshold;
  config.m = m;
  qsim::FactorRunRecord rec = qsim::factor_find(N, rng, config);
  std::cout << qsim::to_json(rec) << "\n";
  return k_exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"labeled-qubit state-vector simulator"};
  app.require_subcommand(1);
  bool json_flag = false;
  app.add_flag("--json", json_flag, "emit JSON (always on; kept for scripts)");

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run a circuit file");
  simulate->add_option("path", sim.path, "circuit file")->required();
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_flag("--dump-state", sim.dump_state, "include the final state");
  simulate->add_flag("--checkpoints", sim.checkpoints,
                     "include checkpoint states");
  simulate->add_option("--bloch", sim.bloch_label,
                       "Bloch coordinates of this qubit after the run");

  int b_A = 0, b_B = 0;
  std::uint64_t parity_seed = 0;
  CLI::App* parity =
      app.add_subcommand("parity", "recover both oracle bits with one call");
  parity->add_option("bA", b_A, "hidden bit b_A")
      ->required()
      ->check(CLI::Range(0, 1));
  parity->add_option("bB", b_B, "hidden bit b_B")
      ->required()
      ->check(CLI::Range(0, 1));
  parity->add_option("--seed", parity_seed, "random seed");

  qsim::u64 order_q = 0, order_N = 0;
  std::string order_backend = "quantum";
  std::uint64_t order_seed = 0;
  std::size_t order_m = 0;
  CLI::App* order =
      app.add_subcommand("order", "multiplicative order of q mod N");
  order->add_option("q", order_q, "base")->required();
  order->add_option("N", order_N, "modulus")->required();
  order->add_option("--backend", order_backend, "quantum or classical")
      ->check(CLI::IsMember({"quantum", "classical"}));
  order->add_option("--seed", order_seed, "random seed");
  order->add_option("--m", order_m, "ancilla count override");

  qsim::u64 factor_N = 0;
  std::uint64_t factor_seed = 0;
  qsim::u64 factor_threshold = 64;
  std::size_t factor_m = 0;
  CLI::App* factor = app.add_subcommand("factor", "find a proper factor");
  factor->add_option("N", factor_N, "composite to factor")->required();
  factor->add_option("--seed", factor_seed, "random seed");
  factor->add_option("--quantum-threshold", factor_threshold,
                     "largest N run on the simulated network");
  factor->add_option("--m", factor_m, "ancilla count override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? k_exit_ok : k_exit_usage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (parity->parsed()) return run_parity(b_A, b_B, parity_seed);
    if (order->parsed())
      return run_order(order_q, order_N, order_backend, order_seed, order_m);
    if (factor->parsed())
      return run_factor(factor_N, factor_seed, factor_threshold, factor_m);
  } catch (const qsim::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return k_exit_usage;
  } catch (const qsim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return k_exit_domain;
  }
  return k_exit_usage;
}
