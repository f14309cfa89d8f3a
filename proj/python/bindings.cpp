#include <array>
#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "instructkit/commands.hpp"
#include "instructkit/config.hpp"
#include "instructkit/errors.hpp"
#include "instructkit/feasibility.hpp"
#include "instructkit/motion_attributes.hpp"
#include "instructkit/scenario_io.hpp"

namespace py = pybind11;
using namespace instructkit;

namespace {

constexpr std::size_t kKinds = static_cast<std::size_t>(ErrorKind::kConfig) + 1;

Config config_or_default(const std::optional<std::string>& json) {
  Config cfg = json ? parse_config(*json) : Config{};
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the instructkit C++ core. Inputs and outputs are JSON text.";

  // Error hierarchy: instructkit.Error (a ValueError) with one subclass per kind,
  // plus InputError for malformed JSONL lines.
  static py::exception<Error> base(m, "Error", PyExc_ValueError);
  static std::array<py::object, kKinds> kinds;
  for (std::size_t k = 0; k < kKinds; ++k) {
    const std::string name(error_kind_name(static_cast<ErrorKind>(k)));
    kinds[k] = py::reinterpret_steal<py::object>(
        PyErr_NewException(("instructkit._core." + name).c_str(), base.ptr(), nullptr));
    m.attr(name.c_str()) = kinds[k];
  }
  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(kinds[static_cast<std::size_t>(e.kind())].ptr(), e.what());
    } catch (const InputError& e) {
      PyErr_SetString(input_error.ptr(), e.what());
    }
  });

  py::arg_v no_config("config", std::nullopt);

  m.def("extract", [](const std::string& scenarios, const std::optional<std::string>& config) {
    const auto cfg = config_or_default(config);
    py::gil_scoped_release release;
    return cmd_extract(scenarios, cfg);
  }, py::arg("scenarios"), no_config);

  m.def("feasibility", [](const std::string& scenarios, const std::optional<std::string>& config) {
    const auto cfg = config_or_default(config);
    py::gil_scoped_release release;
    return cmd_feasibility(scenarios, cfg);
  }, py::arg("scenarios"), no_config);

  m.def("gen_instructions",
        [](const std::string& scenarios, const std::string& mode,
           const std::optional<std::string>& guidelines, bool sample,
           std::optional<std::size_t> count, const std::optional<std::string>& config) {
          const auto cfg = config_or_default(config);
          GenOptions opts;
          if (mode == "behavior") {
            opts.mode = GenMode::kBehavior;
          } else if (mode != "direction") {
            throw ConfigError("mode must be 'direction' or 'behavior', got '" + mode + "'");
          }
          if (guidelines) opts.guidelines = load_guidelines(*guidelines);
          opts.sample = sample;
          opts.count = count;
          py::gil_scoped_release release;
          return cmd_gen(scenarios, cfg, opts);
        },
        py::arg("scenarios"), py::arg("mode") = "direction",
        py::arg("guidelines") = std::nullopt, py::arg("sample") = false,
        py::arg("count") = std::nullopt, no_config);

  m.def("evaluate",
        [](const std::string& dataset, const std::string& predictions,
           const std::optional<std::string>& scenarios, const std::optional<std::string>& config) {
          const auto cfg = config_or_default(config);
          EvalInputs in{dataset, predictions, std::nullopt};
          if (scenarios) in.scenarios_jsonl = *scenarios;
          py::gil_scoped_release release;
          return cmd_evaluate(in, cfg);
        },
        py::arg("dataset"), py::arg("predictions"), py::arg("scenarios") = std::nullopt,
        no_config);

  m.def("stats", [](const std::string& dataset, const std::optional<std::string>& config) {
    return cmd_stats(dataset, config_or_default(config));
  }, py::arg("dataset"), no_config);

  m.def("synth",
        [](const std::string& suite, std::size_t count, std::uint64_t seed,
           const std::optional<std::string>& config) {
          const auto cfg = config_or_default(config);
          SynthOutputs out;
          {
            py::gil_scoped_release release;
            out = cmd_synth(suite, count, seed, cfg);
          }
          return py::make_tuple(out.corpus, out.expected, out.predictions);
        },
        py::arg("suite"), py::arg("count"), py::arg("seed") = 0, no_config);

  m.def("resolved_config", [](const std::optional<std::string>& config) {
    return config_to_json(config_or_default(config)).dump();
  }, no_config);

  m.def("speed_category", [](double kmh) { return std::string(to_string(classify_speed(kmh))); },
        py::arg("mean_speed_kmh"));
  m.def("accel_category",
        [](double dv) { return std::string(to_string(classify_acceleration(dv))); },
        py::arg("delta_v_kmh"));
  m.def("reachable_range",
        [](double v, std::optional<double> limit) { return reachable_range(v, limit); },
        py::arg("speed_mps"), py::arg("speed_limit_kmh") = std::nullopt);
  m.def("content_hash", [](const py::bytes& b) { return content_hash(std::string(b)); },
        py::arg("data"));
}
