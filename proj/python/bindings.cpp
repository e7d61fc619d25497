#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blowup/analysis.hpp"
#include "blowup/integrator.hpp"
#include "blowup/models.hpp"
#include "blowup/predictor.hpp"
#include "blowup/quadrature.hpp"
#include "blowup/types.hpp"
#include "blowup/version.hpp"

namespace py = pybind11;
using namespace blowup;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Radial collapse simulator and blowup-law toolkit";
    m.attr("__version__") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<SingularEvaluationError>(m, "SingularEvaluationError", PyExc_ArithmeticError);
    py::register_exception<IntegrationDivergedError>(m, "IntegrationDivergedError", PyExc_ArithmeticError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_ValueError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
    py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("CHARGE_ONE_SIGMA", ModelKind::ChargeOneSigma)
        .value("CHARGE_TWO_SIGMA", ModelKind::ChargeTwoSigma)
        .value("YANG_MILLS", ModelKind::YangMills);
    py::enum_<OuterBoundary>(m, "OuterBoundary")
        .value("NEUMANN_FLAT", OuterBoundary::NeumannFlat)
        .value("NEUMANN_PARABOLA", OuterBoundary::NeumannParabola);
    py::enum_<StopReason>(m, "StopReason")
        .value("REACHED_F_STOP", StopReason::ReachedFStop)
        .value("REACHED_T_MAX", StopReason::ReachedTMax)
        .value("SINGULAR_DENOMINATOR", StopReason::SingularDenominator);

    m.def("model_name", &model_name);
    m.def("parse_model", [](const std::string& name) { return parse_model(name); });
    m.def("radial_power", &radial_power);

    py::class_<GridSpec>(m, "GridSpec")
        .def_static("make", &GridSpec::make, py::arg("dr"), py::arg("r_max"))
        .def_readonly("dr", &GridSpec::dr)
        .def_readonly("r_max", &GridSpec::r_max)
        .def_readonly("n_points", &GridSpec::n_points)
        .def("radius", &GridSpec::radius, py::arg("i"));

    py::class_<RadialField>(m, "RadialField")
        .def_static("uniform", &RadialField::uniform, py::arg("grid"), py::arg("value"), py::arg("time") = 0.0)
        .def_readwrite("grid", &RadialField::grid)
        .def_readwrite("values", &RadialField::values)
        .def_readwrite("time", &RadialField::time);

    py::class_<InitialProfile>(m, "InitialProfile")
        .def(py::init<>())
        .def_readwrite("f0", &InitialProfile::f0)
        .def_readwrite("v0", &InitialProfile::v0)
        .def_readwrite("rho0", &InitialProfile::rho0);

    py::class_<SimulationConfig>(m, "SimulationConfig")
        .def(py::init<>())
        .def_readwrite("model", &SimulationConfig::model)
        .def_readwrite("grid", &SimulationConfig::grid)
        .def_readwrite("dt", &SimulationConfig::dt)
        .def_readwrite("initial", &SimulationConfig::initial)
        .def_readwrite("boundary", &SimulationConfig::boundary)
        .def_readwrite("picard_iterations", &SimulationConfig::picard_iterations)
        .def_readwrite("t_max", &SimulationConfig::t_max)
        .def_readwrite("f_stop", &SimulationConfig::f_stop)
        .def_readwrite("stop_on_level", &SimulationConfig::stop_on_level)
        .def_readwrite("sample_stride", &SimulationConfig::sample_stride)
        .def_readwrite("snapshot_times", &SimulationConfig::snapshot_times)
        .def("effective_f_stop", &SimulationConfig::effective_f_stop)
        .def("validate", &SimulationConfig::validate);

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init<>())
        .def_readwrite("times", &TimeSeries::times)
        .def_readwrite("f_origin", &TimeSeries::f_origin);

    py::class_<ProfileSnapshot>(m, "ProfileSnapshot")
        .def(py::init<>())
        .def_readwrite("requested_time", &ProfileSnapshot::requested_time)
        .def_readwrite("field", &ProfileSnapshot::field);

    py::class_<BlowupReport>(m, "BlowupReport")
        .def_readonly("blew_up", &BlowupReport::blew_up)
        .def_readonly("stop_reason", &BlowupReport::stop_reason)
        .def_readonly("terminal_f_origin", &BlowupReport::terminal_f_origin)
        .def_readonly("t_end", &BlowupReport::t_end)
        .def_readonly("steps_taken", &BlowupReport::steps_taken)
        .def_readonly("t_star", &BlowupReport::t_star)
        .def_readonly("t_zero_linear", &BlowupReport::t_zero_linear)
        .def_readonly("t_zero_sqrt", &BlowupReport::t_zero_sqrt)
        .def_readonly("causality_warning", &BlowupReport::causality_warning)
        .def_readonly("warning_detail", &BlowupReport::warning_detail);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("origin_history", &RunResult::origin_history)
        .def_readonly("snapshots", &RunResult::snapshots)
        .def_readonly("final_state", &RunResult::final_state)
        .def_readonly("report", &RunResult::report);

    m.def("conservative_radial_operator", &conservative_radial_operator, py::arg("field"), py::arg("n"), py::arg("i"));
    m.def(
        "model_rhs",
        [](ModelKind model, const RadialField& field, const std::vector<double>& dfdt, int i) {
            return model_rhs(model, field, dfdt, i);
        },
        py::arg("model"), py::arg("field"), py::arg("dfdt"), py::arg("i"));

    m.def("initialize", &initialize, py::arg("config"));
    m.def("step", &step, py::arg("prev"), py::arg("curr"), py::arg("config"));
    m.def("run", &run, py::arg("config"));

    py::class_<CutoffFitParams>(m, "CutoffFitParams")
        .def(py::init<>())
        .def(py::init([](double c, double R) {
                 CutoffFitParams p;
                 p.c = c;
                 p.R = R;
                 return p;
             }),
             py::arg("c"), py::arg("R"))
        .def_readwrite("c", &CutoffFitParams::c)
        .def_readwrite("R", &CutoffFitParams::R);

    py::class_<ParabolaParams>(m, "ParabolaParams")
        .def(py::init<>())
        .def_readwrite("p", &ParabolaParams::p)
        .def_readwrite("t0", &ParabolaParams::t0)
        .def("origin_value", &ParabolaParams::origin_value, py::arg("t"));

    py::class_<GeodesicTrajectory>(m, "GeodesicTrajectory")
        .def(py::init<>())
        .def_readwrite("times", &GeodesicTrajectory::times)
        .def_readwrite("values", &GeodesicTrajectory::values)
        .def("value_at_time", &GeodesicTrajectory::value_at_time, py::arg("t"))
        .def("t_end", &GeodesicTrajectory::t_end);

    m.def("cutoff_bracket", &cutoff_bracket, py::arg("f"), py::arg("R"));
    m.def("cutoff_velocity", &cutoff_velocity, py::arg("f"), py::arg("params"));
    m.def("cutoff_trajectory", &cutoff_trajectory, py::arg("f0"), py::arg("params"), py::arg("f_floor"),
          py::arg("n_samples") = 400);
    m.def("parabola_prediction", &parabola_prediction, py::arg("f0"), py::arg("v0"));
    m.def("predicted_profile_ansatz", &predicted_profile_ansatz, py::arg("model"), py::arg("v0"), py::arg("r"),
          py::arg("t"));
    m.def("adaptive_simpson", [](const std::function<double(double)>& f, double a, double b, double rel_tol,
                                 int max_depth) { return adaptive_simpson(f, a, b, rel_tol, max_depth); },
          py::arg("f"), py::arg("a"), py::arg("b"), py::arg("rel_tol") = 1e-8, py::arg("max_depth") = 60);

    py::class_<FWindow>(m, "FWindow")
        .def(py::init<>())
        .def_readwrite("f_low", &FWindow::f_low)
        .def_readwrite("f_high", &FWindow::f_high);

    py::class_<LinearFit>(m, "LinearFit")
        .def_readonly("slope", &LinearFit::slope)
        .def_readonly("intercept", &LinearFit::intercept)
        .def_readonly("residual_rms", &LinearFit::residual_rms);

    py::class_<VelocitySample>(m, "VelocitySample")
        .def_readonly("t", &VelocitySample::t)
        .def_readonly("dfdt", &VelocitySample::dfdt);

    py::class_<CutoffFitResult>(m, "CutoffFitResult")
        .def_readonly("params", &CutoffFitResult::params)
        .def_readonly("line", &CutoffFitResult::line)
        .def_readonly("scatter", &CutoffFitResult::scatter);

    py::class_<EllipseBumpParams>(m, "EllipseBumpParams")
        .def_readonly("a", &EllipseBumpParams::a)
        .def_readonly("b", &EllipseBumpParams::b)
        .def_readonly("k", &EllipseBumpParams::k);

    py::class_<HyperbolaBumpParams>(m, "HyperbolaBumpParams")
        .def_readonly("a_h", &HyperbolaBumpParams::a_h)
        .def_readonly("b_h", &HyperbolaBumpParams::b_h)
        .def_readonly("k_h", &HyperbolaBumpParams::k_h)
        .def_readonly("residual_rms", &HyperbolaBumpParams::residual_rms)
        .def_readonly("r_transition", &HyperbolaBumpParams::r_transition);

    py::class_<ParabolicProfileParams>(m, "ParabolicProfileParams")
        .def_readonly("rho", &ParabolicProfileParams::rho)
        .def_readonly("h", &ParabolicProfileParams::h);

    py::class_<ConvergencePairDeviation>(m, "ConvergencePairDeviation")
        .def_readonly("dr_coarse", &ConvergencePairDeviation::dr_coarse)
        .def_readonly("dr_fine", &ConvergencePairDeviation::dr_fine)
        .def_readonly("max_deviation", &ConvergencePairDeviation::max_deviation)
        .def_readonly("deviation_at_blowup", &ConvergencePairDeviation::deviation_at_blowup)
        .def_readonly("deviation_at_level", &ConvergencePairDeviation::deviation_at_level);

    py::class_<ConvergenceStudy>(m, "ConvergenceStudy")
        .def_readonly("dr_list", &ConvergenceStudy::dr_list)
        .def_readonly("series", &ConvergenceStudy::series)
        .def_readonly("t_blowup_finest", &ConvergenceStudy::t_blowup_finest)
        .def_readonly("level", &ConvergenceStudy::level)
        .def_readonly("pairs", &ConvergenceStudy::pairs);

    py::class_<DeviationSample>(m, "DeviationSample")
        .def_readonly("t", &DeviationSample::t)
        .def_readonly("simulated", &DeviationSample::simulated)
        .def_readonly("predicted", &DeviationSample::predicted)
        .def_readonly("deviation", &DeviationSample::deviation);

    py::class_<DeviationReport>(m, "DeviationReport")
        .def_readonly("max_abs", &DeviationReport::max_abs)
        .def_readonly("rms", &DeviationReport::rms)
        .def_readonly("samples", &DeviationReport::samples);

    m.def("estimate_origin_velocity", &estimate_origin_velocity, py::arg("series"));
    m.def("fit_cutoff_params", &fit_cutoff_params, py::arg("series"), py::arg("window"));
    m.def("fit_r_vs_inverse_v0", &fit_r_vs_inverse_v0, py::arg("rows"));
    m.def("fit_trajectory_parabola", &fit_trajectory_parabola, py::arg("series"), py::arg("window_fraction") = 0.5);
    m.def("fit_ellipse_bump", &fit_ellipse_bump, py::arg("snapshot"), py::arg("v0"), py::arg("f0"));
    m.def("fit_hyperbola_bump", &fit_hyperbola_bump, py::arg("snapshot"));
    m.def("fit_parabolic_profile", &fit_parabolic_profile, py::arg("snapshot"), py::arg("r_window"));
    m.def("ansatz_residual", &ansatz_residual, py::arg("model"), py::arg("v0"), py::arg("r"), py::arg("t"));
    m.def("convergence_study", &convergence_study, py::arg("base"), py::arg("dr_list"), py::arg("level") = 0.1);
    m.def("compare_to_prediction",
          py::overload_cast<const TimeSeries&, const GeodesicTrajectory&>(&compare_to_prediction), py::arg("series"),
          py::arg("prediction"));
    m.def("compare_to_prediction", py::overload_cast<const TimeSeries&, const ParabolaParams&>(&compare_to_prediction),
          py::arg("series"), py::arg("prediction"));
}
