// Python surface over the simulator core. Mirrors the C++ API thinly; the
// JSON-producing paths return strings so scripts can feed them to json.loads.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsim/circuit_text.hpp"
#include "qsim/gates.hpp"
#include "qsim/measure.hpp"
#include "qsim/network.hpp"
#include "qsim/numtheory.hpp"
#include "qsim/shor.hpp"
#include "qsim/statevec.hpp"

namespace py = pybind11;
using namespace qsim;

namespace {

py::object fraction_or_none(const std::optional<Fraction>& f) {
  if (!f) return py::none();
  return py::make_tuple(f->num, f->den);
}

py::dict record_to_dict(const FactorRunRecord& rec) {
  py::dict d;
  d["N"] = rec.N;
  d["q"] = rec.q ? py::cast(*rec.q) : py::object(py::none());
  d["backend"] = rec.backend;
  d["m"] = rec.m ? py::cast(*rec.m) : py::object(py::none());
  d["measured_bits"] = rec.measured_bits;
  d["a"] = rec.a ? py::cast(*rec.a) : py::object(py::none());
  d["fraction"] = fraction_or_none(rec.fraction);
  d["order"] = rec.order ? py::cast(*rec.order) : py::object(py::none());
  d["r"] = rec.r ? py::cast(*rec.r) : py::object(py::none());
  d["factor"] = rec.factor;
  d["attempts"] = rec.attempts;
  return d;
}

}  // namespace

PYBIND11_MODULE(qsim, mod) {
  mod.doc() = "labeled-qubit state-vector simulator";

  py::register_exception<Error>(mod, "SimulationError");

  py::class_<PureState>(mod, "PureState")
      .def_static("from_amplitudes", &PureState::from_amplitudes)
      .def_property_readonly("labels", &PureState::labels)
      .def_property_readonly("amps", &PureState::amps)
      .def_property_readonly("qubit_count", &PureState::qubit_count)
      .def("__repr__", [](const PureState& s) { return to_json(s); });

  py::class_<GateMatrix>(mod, "GateMatrix")
      .def_property_readonly("name", &GateMatrix::name)
      .def_property_readonly("arity", &GateMatrix::arity)
      .def_property_readonly("entries", &GateMatrix::entries);

  py::class_<Rng>(mod, "Rng")
      .def(py::init<std::uint64_t>())
      .def("uniform", &Rng::uniform)
      .def("below", &Rng::below);

  mod.def("logical_state", &logical_state);
  mod.def("tensor", &tensor);
  mod.def("inner_product", &inner_product);
  mod.def("state_json", [](const PureState& s) { return to_json(s); });

  mod.def("pauli", &pauli);
  mod.def("rotation", &rotation);
  mod.def("hadamard", &hadamard);
  mod.def("phase_gate", &phase_gate);
  mod.def("cnot", &cnot);
  mod.def("toffoli", &toffoli);
  mod.def("zz_rotation", &zz_rotation);
  mod.def("controlled", &controlled);
  mod.def("apply", &apply);

  mod.def("measure_probs", &measure_probs);
  mod.def("measure", &measure);

  mod.def(
      "parity",
      [](int b_A, int b_B, std::uint64_t seed) {
        Rng rng(seed);
        ParityRun run = run_parity(b_A, b_B, rng);
        return py::make_tuple(run.trace.classical_bits.at("c_A"),
                              run.trace.classical_bits.at("c_B"));
      },
      py::arg("b_A"), py::arg("b_B"), py::arg("seed") = 0);

  mod.def("simulate_json",
          [](const std::string& text, std::uint64_t seed, bool checkpoints,
             bool dump_state) {
            Network net = parse_circuit(text);
            Rng rng(seed);
            ExecutionTrace trace = execute(net, rng);
            return trace_to_json(trace, checkpoints, dump_state);
          },
          py::arg("text"), py::arg("seed") = 0,
          py::arg("checkpoints") = false, py::arg("dump_state") = false);

  mod.def("gcd", &gcd);
  mod.def("mod_exp", &mod_exp);
  mod.def("multiplicative_order", &multiplicative_order);
  mod.def("recover_fraction",
          [](u64 a, unsigned m, u64 k_upper) {
            return fraction_or_none(recover_fraction(a, m, k_upper));
          });

  mod.def("fourier_cycle_state", &fourier_cycle_state);

  mod.def("quantum_order_find",
          [](u64 q, u64 N, std::uint64_t seed, std::size_t m) {
            Rng rng(seed);
            OrderFindOptions opts;
            opts.m = m;
            return quantum_order_find(q, N, rng, opts);
          },
          py::arg("q"), py::arg("N"), py::arg("seed") = 0, py::arg("m") = 0);

  mod.def("factor_find",
          [](u64 N, std::uint64_t seed, u64 quantum_threshold, std::size_t m) {
            Rng rng(seed);
            FactorConfig config;
            config.quantum_threshold = quantum_threshold;
            config.m = m;
            return record_to_dict(factor_find(N, rng, config));
          },
          py::arg("N"), py::arg("seed") = 0, py::arg("quantum_threshold") = 64,
          py::arg("m") = 0);
}
