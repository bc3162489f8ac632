#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ltd/cli.hpp"
#include "ltd/localtime.hpp"
#include "ltd/qcore.hpp"

namespace py = pybind11;
using namespace ltd;

namespace {

localtime::SpectralSystem spectral(const RealVector& levels, const ComplexVector& amplitudes) {
  return localtime::SpectralSystem::make(levels, amplitudes);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian local-time averaging and decoherence scenarios.";

  static py::exception<Error> exc(m, "LtdError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  m.def("scenario_names", &cli::scenario_names);

  m.def(
      "run_scenario_json",
      [](const std::string& scenario, const std::map<std::string, std::string>& overrides,
         const std::string& preset) {
        cli::RunConfig cfg;
        cfg.scenario = scenario;
        cfg.preset = preset;
        cfg.overrides = overrides;
        std::string text;
        {
          py::gil_scoped_release nogil;
          text = cli::serialize(cli::run_scenario(cfg), cli::Format::json);
        }
        return text;
      },
      py::arg("scenario"), py::arg("overrides") = std::map<std::string, std::string>{},
      py::arg("preset") = "paper");

  m.def(
      "sigma_analytic",
      [](const RealVector& levels, const ComplexVector& amplitudes, double t0, double lambda, double dt) {
        return localtime::sigma_analytic(spectral(levels, amplitudes), localtime::GaussianTimeLaw::make(t0, lambda, dt))
            .matrix();
      },
      py::arg("levels"), py::arg("amplitudes"), py::arg("t0"), py::arg("lam"), py::arg("dt"));

  m.def(
      "purity",
      [](const RealVector& levels, const ComplexVector& amplitudes, double lambda) {
        return localtime::purity(spectral(levels, amplitudes), localtime::GaussianTimeLaw::make(0.0, lambda, 1.0));
      },
      py::arg("levels"), py::arg("amplitudes"), py::arg("lam"));

  m.def(
      "tau_min",
      [](const RealVector& levels, const RealVector& weights) { return localtime::time_bound(levels, weights).tau_min; },
      py::arg("levels"), py::arg("weights"));

  m.def("gaussian_factor", &localtime::gaussian_factor, py::arg("gap"), py::arg("lam"));

  m.def(
      "entropy", [](const ComplexMatrix& rho) { return von_neumann_entropy(validate_density(rho)); },
      py::arg("rho"));

  m.def(
      "partial_trace",
      [](const ComplexMatrix& rho, std::vector<Index> dims, std::vector<std::size_t> keep) {
        return partial_trace(validate_density(rho), SubsystemSplit(std::move(dims)), keep).matrix();
      },
      py::arg("rho"), py::arg("dims"), py::arg("keep"));
}
