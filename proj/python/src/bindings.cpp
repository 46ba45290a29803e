#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "npvi/baselines.hpp"
#include "npvi/cli.hpp"
#include "npvi/elbo.hpp"
#include "npvi/error.hpp"
#include "npvi/fit.hpp"
#include "npvi/hmc.hpp"
#include "npvi/mixture.hpp"
#include "npvi/models/gaussian.hpp"
#include "npvi/models/t_mixture.hpp"
#include "npvi/serialization.hpp"

namespace py = pybind11;
using namespace npvi;

namespace {

// Python callables returning (value), gradient and Hessian diagonal.
ModelPtr callable_model(Index dimension, py::function value, py::object gradient,
                        py::object hessian_diag) {
  FunctionModel::VectorFn g, h;
  if (!gradient.is_none())
    g = [f = gradient.cast<py::function>()](const Vector& x) {
      py::gil_scoped_acquire gil;
      return f(x).cast<Vector>();
    };
  if (!hessian_diag.is_none())
    h = [f = hessian_diag.cast<py::function>()](const Vector& x) {
      py::gil_scoped_acquire gil;
      return f(x).cast<Vector>();
    };
  return make_function_model(
      dimension,
      [value](const Vector& x) {
        py::gil_scoped_acquire gil;
        return value(x).cast<double>();
      },
      g, h);
}

}  // namespace

PYBIND11_MODULE(_npvi, m) {
  m.doc() = "Nonparametric variational inference with Gaussian mixtures";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_TypeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<MixtureApproximation>(m, "Mixture")
      .def(py::init<Matrix, Vector>(), py::arg("means"), py::arg("sigmas"))
      .def_property_readonly("means", &MixtureApproximation::means)
      .def_property_readonly("sigmas", &MixtureApproximation::sigmas)
      .def_property_readonly("size", &MixtureApproximation::size)
      .def_property_readonly("dimension", &MixtureApproximation::dimension)
      .def("log_density", [](const MixtureApproximation& q, const Vector& x) {
        return mixture_log_density(q, x);
      })
      .def("entropy_lower_bound", [](const MixtureApproximation& q) {
        return entropy_lower_bound(q);
      })
      .def("sample", [](const MixtureApproximation& q, std::size_t count, std::uint64_t seed) {
        const auto s = sample_mixture(q, count, seed);
        Matrix out(static_cast<Index>(s.size()), q.dimension());
        for (std::size_t i = 0; i < s.size(); ++i) out.row(static_cast<Index>(i)) = s[i];
        return out;
      }, py::arg("count"), py::arg("seed"))
      .def("to_json", [](const MixtureApproximation& q) { return mixture_to_json(q); })
      .def_static("from_json", &mixture_from_json)
      .def("__eq__", &MixtureApproximation::operator==);

  py::class_<LogJointModel, std::shared_ptr<LogJointModel>>(m, "Model")
      .def_property_readonly("dimension", &LogJointModel::dimension)
      .def("log_joint", [](const LogJointModel& model, const Vector& x) { return model.eval(x); })
      .def("gradient", [](const LogJointModel& model, const Vector& x) {
        Vector g;
        model.eval(x, &g);
        return g;
      })
      .def("hessian_diag", [](const LogJointModel& model, const Vector& x) {
        Vector h;
        model.eval(x, nullptr, &h);
        return h;
      });

  m.def("gaussian_model", [](const Vector& mean, const Vector& variances) {
    return std::const_pointer_cast<LogJointModel>(gaussian_target(mean, variances));
  }, py::arg("mean"), py::arg("variances"));
  m.def("t_mixture_model", [] {
    return std::const_pointer_cast<LogJointModel>(t_mixture_target(canonical_t_mixture_spec()));
  });
  m.def("callable_model", [](Index dimension, py::function value, py::object gradient,
                             py::object hessian_diag) {
    return std::const_pointer_cast<LogJointModel>(
        callable_model(dimension, std::move(value), std::move(gradient), std::move(hessian_diag)));
  }, py::arg("dimension"), py::arg("value"), py::arg("gradient") = py::none(),
     py::arg("hessian_diag") = py::none());

  m.def("elbo_l1", [](const MixtureApproximation& q, const LogJointModel& model) {
    return elbo_l1(q, model);
  });
  m.def("elbo_l2", [](const MixtureApproximation& q, const LogJointModel& model) {
    return elbo_l2(q, model);
  });

  m.def("fit", [](const LogJointModel& model, Index num_components, std::uint64_t seed,
                  double tolerance, int max_outer_iterations) {
    NpvConfig cfg;
    cfg.num_components = num_components;
    cfg.seed = seed;
    cfg.tolerance = tolerance;
    cfg.max_outer_iterations = max_outer_iterations;
    FitResult r = [&] {
      py::gil_scoped_release release;
      return fit(model, cfg);
    }();
    py::dict out;
    out["mixture"] = r.mixture;
    out["l2_trace"] = r.l2_trace;
    out["converged"] = r.converged;
    out["outer_iterations"] = r.outer_iterations;
    out["warnings"] = r.warnings;
    return out;
  }, py::arg("model"), py::arg("num_components") = 1, py::arg("seed") = 0,
     py::arg("tolerance") = 1e-4, py::arg("max_outer_iterations") = 50);

  m.def("map_estimate", [](const LogJointModel& model, int restarts, std::uint64_t seed) {
    MapOptions opts;
    opts.restarts = restarts;
    opts.seed = seed;
    const auto r = map_estimate(model, opts);
    return py::make_tuple(r.theta, r.log_joint);
  }, py::arg("model"), py::arg("restarts") = 10, py::arg("seed") = 0);

  m.def("laplace_diagonal", [](const LogJointModel& model, const Vector& theta_map) {
    const auto g = laplace_diagonal(model, theta_map);
    return py::make_tuple(g.mean, g.variances);
  });

  m.def("hmc_sample", [](const LogJointModel& model, double step_size, int leapfrog_steps,
                         int num_samples, int keep_last, std::uint64_t seed) {
    HmcConfig cfg;
    cfg.step_size = step_size;
    cfg.leapfrog_steps = leapfrog_steps;
    cfg.num_samples = num_samples;
    cfg.keep_last = keep_last;
    cfg.seed = seed;
    const auto r = hmc_sample(model, cfg);
    Matrix out(static_cast<Index>(r.samples.size()), model.dimension());
    for (std::size_t i = 0; i < r.samples.size(); ++i) out.row(static_cast<Index>(i)) = r.samples[i];
    return py::make_tuple(out, r.acceptance_rate);
  }, py::arg("model"), py::arg("step_size") = 0.05, py::arg("leapfrog_steps") = 20,
     py::arg("num_samples") = 5000, py::arg("keep_last") = 200, py::arg("seed") = 0);

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "npvi");
    std::ostringstream err;
    const int code = cli::run(args, err);
    return py::make_tuple(code, err.str());
  }, py::arg("args"), "Runs an npvi subcommand; returns (exit code, diagnostics).");
}
