#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "blowup/analysis.hpp"
#include "blowup/integrator.hpp"
#include "blowup/io.hpp"
#include "blowup/predictor.hpp"
#include "blowup/types.hpp"
#include "blowup/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

// Raw simulate inputs before validation, so a config file and command-line
// flags can be merged field by field (flags win).
struct SimulateInputs {
    std::string model = "charge1";
    double f0 = 1.0;
    double v0 = 0.0;
    std::optional<double> rho0;
    double dr = 0.0;
    double r_max = 0.0;
    double dt = 0.0;
    std::string boundary = "flat";
    double t_max = 0.0;
    std::optional<double> f_stop;
    bool no_stop_on_level = false;
    int stride = 1;
    int picard = 3;
    std::vector<double> snapshots;
    std::string out_dir;
};

double parse_double_value(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw blowup::ConfigError("config key '" + key + "' has a non-numeric value '" + text + "'");
    }
}

int parse_int_value(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw blowup::ConfigError("config key '" + key + "' has a non-integer value '" + text + "'");
    }
}

bool parse_bool_value(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no") return false;
    throw blowup::ConfigError("config key '" + key + "' has a non-boolean value '" + text + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream stream(text);
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) out.push_back(parse_double_value(key, item));
    }
    return out;
}

// Applies config-file pairs to the slots the command line did not set.
void merge_config_file(const fs::path& path, const CLI::App& cmd, SimulateInputs& in) {
    const auto kv = blowup::parse_config_file(path);
    auto flag_given = [&cmd](const std::string& name) {
        const CLI::Option* opt = cmd.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    for (const auto& [key, value] : kv) {
        if (key == "model") {
            if (!flag_given("--model")) in.model = value;
        } else if (key == "f0") {
            if (!flag_given("--f0")) in.f0 = parse_double_value(key, value);
        } else if (key == "v0") {
            if (!flag_given("--v0")) in.v0 = parse_double_value(key, value);
        } else if (key == "rho0") {
            if (!flag_given("--rho0")) in.rho0 = parse_double_value(key, value);
        } else if (key == "dr") {
            if (!flag_given("--dr")) in.dr = parse_double_value(key, value);
        } else if (key == "rmax") {
            if (!flag_given("--rmax")) in.r_max = parse_double_value(key, value);
        } else if (key == "dt") {
            if (!flag_given("--dt")) in.dt = parse_double_value(key, value);
        } else if (key == "boundary") {
            if (!flag_given("--boundary")) in.boundary = value;
        } else if (key == "tmax") {
            if (!flag_given("--tmax")) in.t_max = parse_double_value(key, value);
        } else if (key == "fstop") {
            if (!flag_given("--fstop")) in.f_stop = parse_double_value(key, value);
        } else if (key == "stop_on_level") {
            if (!flag_given("--no-stop-on-level")) in.no_stop_on_level = !parse_bool_value(key, value);
        } else if (key == "stride") {
            if (!flag_given("--stride")) in.stride = parse_int_value(key, value);
        } else if (key == "picard") {
            if (!flag_given("--picard")) in.picard = parse_int_value(key, value);
        } else if (key == "snapshots") {
            if (!flag_given("--snapshots")) in.snapshots = parse_double_list(key, value);
        } else if (key == "out") {
            if (!flag_given("--out")) in.out_dir = value;
        } else {
            throw blowup::ConfigError("unknown config key '" + key + "'");
        }
    }
}

blowup::SimulationConfig build_simulation_config(const SimulateInputs& in) {
    blowup::SimulationConfig cfg;
    const auto model = blowup::parse_model(in.model);
    if (!model) throw blowup::ConfigError("unknown model '" + in.model + "' (expected charge1, charge2, or ym)");
    cfg.model = *model;
    cfg.grid = blowup::GridSpec::make(in.dr, in.r_max);
    cfg.dt = in.dt;
    cfg.initial.f0 = in.f0;
    cfg.initial.v0 = in.v0;
    cfg.initial.rho0 = in.rho0;
    const auto boundary = blowup::parse_boundary(in.boundary);
    if (!boundary) throw blowup::ConfigError("unknown boundary '" + in.boundary + "' (expected flat or parabola)");
    cfg.boundary = *boundary;
    cfg.t_max = in.t_max;
    cfg.f_stop = in.f_stop;
    cfg.stop_on_level = !in.no_stop_on_level;
    cfg.sample_stride = in.stride;
    cfg.picard_iterations = in.picard;
    cfg.snapshot_times = in.snapshots;
    cfg.validate();
    return cfg;
}

json config_to_json(const blowup::SimulationConfig& cfg) {
    json j;
    j["model"] = blowup::model_name(cfg.model);
    j["f0"] = cfg.initial.f0;
    j["v0"] = cfg.initial.v0;
    j["rho0"] = cfg.initial.rho0 ? json(*cfg.initial.rho0) : json(nullptr);
    j["dr"] = cfg.grid.dr;
    j["rmax"] = cfg.grid.r_max;
    j["dt"] = cfg.dt;
    j["boundary"] = blowup::boundary_name(cfg.boundary);
    j["tmax"] = cfg.t_max;
    j["fstop"] = cfg.effective_f_stop();
    j["stop_on_level"] = cfg.stop_on_level;
    j["stride"] = cfg.sample_stride;
    j["picard"] = cfg.picard_iterations;
    j["snapshots"] = cfg.snapshot_times;
    return j;
}

json report_to_json(const blowup::BlowupReport& report) {
    json j;
    j["blew_up"] = report.blew_up;
    j["stop_reason"] = blowup::stop_reason_name(report.stop_reason);
    j["terminal_f_origin"] = report.terminal_f_origin;
    j["t_end"] = report.t_end;
    j["steps_taken"] = report.steps_taken;
    j["t_star"] = report.t_star ? json(*report.t_star) : json(nullptr);
    j["t_zero_linear"] = report.t_zero_linear ? json(*report.t_zero_linear) : json(nullptr);
    j["t_zero_sqrt"] = report.t_zero_sqrt ? json(*report.t_zero_sqrt) : json(nullptr);
    j["causality_warning"] = report.causality_warning;
    j["warning_detail"] = report.warning_detail;
    return j;
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw blowup::Error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << "\n";
}

std::string profile_file_name(double requested_time) {
    return "profile_" + blowup::format_double(requested_time) + ".csv";
}

fs::path prepare_out_dir(const std::string& dir) {
    const fs::path out_dir(dir.empty() ? "." : dir);
    fs::create_directories(out_dir);
    return out_dir;
}

int cmd_simulate(SimulateInputs in, const std::optional<fs::path>& config_path, const CLI::App& cmd) {
    if (config_path) merge_config_file(*config_path, cmd, in);
    if (in.out_dir.empty()) throw blowup::ConfigError("simulate needs --out (or 'out' in the config file)");
    const blowup::SimulationConfig cfg = build_simulation_config(in);
    const fs::path out_dir = prepare_out_dir(in.out_dir);

    const auto wall_start = std::chrono::steady_clock::now();
    const blowup::RunResult result = blowup::run(cfg);
    const double duration = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    std::vector<std::string> files;
    blowup::write_timeseries_csv(out_dir / "timeseries.csv", result.origin_history);
    files.push_back("timeseries.csv");
    for (const auto& snapshot : result.snapshots) {
        const std::string name = profile_file_name(snapshot.requested_time);
        blowup::write_profile_csv(out_dir / name, snapshot.field);
        files.push_back(name);
    }

    json manifest;
    manifest["version"] = blowup::kVersion;
    manifest["config"] = config_to_json(cfg);
    manifest["report"] = report_to_json(result.report);
    manifest["duration_seconds"] = duration;
    json file_list = json::array();
    for (const auto& name : files) {
        file_list.push_back({{"path", name}, {"sha256", blowup::sha256_file(out_dir / name)}});
    }
    manifest["files"] = file_list;
    write_json_file(out_dir / "manifest.json", manifest);

    const auto& report = result.report;
    std::cout << "stopped: " << blowup::stop_reason_name(report.stop_reason) << " at t=" << blowup::format_double(report.t_end)
              << " after " << report.steps_taken << " steps, f(0)=" << blowup::format_double(report.terminal_f_origin)
              << "\n";
    if (report.t_zero_sqrt)
        std::cout << "blowup estimate (sqrt law): t0=" << blowup::format_double(*report.t_zero_sqrt) << "\n";
    else if (report.t_zero_linear)
        std::cout << "blowup estimate (secant): t0=" << blowup::format_double(*report.t_zero_linear) << "\n";
    if (report.causality_warning) std::cout << "warning: " << report.warning_detail << "\n";
    std::cout << "wrote " << files.size() + 1 << " files to " << out_dir.string() << "\n";
    return kExitOk;
}

struct PredictCutoffInputs {
    double f0 = 1.0;
    double c = 0.0;
    double R = 0.0;
    double floor = 0.005;
    int samples = 400;
    std::string out_dir;
};

int cmd_predict_cutoff(const PredictCutoffInputs& in) {
    const fs::path out_dir = prepare_out_dir(in.out_dir);
    const blowup::CutoffFitParams params{in.c, in.R};
    const blowup::GeodesicTrajectory curve = blowup::cutoff_trajectory(in.f0, params, in.floor, in.samples);
    blowup::write_prediction_csv(out_dir / "prediction.csv", curve);
    json j;
    j["law"] = "cutoff";
    j["f0"] = in.f0;
    j["c"] = in.c;
    j["R"] = in.R;
    j["floor"] = in.floor;
    j["samples"] = in.samples;
    j["t_end"] = curve.t_end();
    write_json_file(out_dir / "params.json", j);
    std::cout << "wrote prediction.csv (" << curve.times.size() << " rows), t_end=" << blowup::format_double(curve.t_end())
              << "\n";
    return kExitOk;
}

struct PredictParabolaInputs {
    double f0 = 1.0;
    double v0 = 0.0;
    std::string out_dir;
};

int cmd_predict_parabola(const PredictParabolaInputs& in) {
    const fs::path out_dir = prepare_out_dir(in.out_dir);
    const blowup::ParabolaParams params = blowup::parabola_prediction(in.f0, in.v0);
    blowup::GeodesicTrajectory curve;
    const int n = 400;
    curve.times.reserve(n + 1);
    curve.values.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = params.t0 * static_cast<double>(k) / static_cast<double>(n);
        curve.times.push_back(t);
        curve.values.push_back(params.origin_value(t));
    }
    blowup::write_prediction_csv(out_dir / "prediction.csv", curve);
    json j;
    j["law"] = "parabola";
    j["f0"] = in.f0;
    j["v0"] = in.v0;
    j["p"] = params.p;
    j["t0"] = params.t0;
    write_json_file(out_dir / "params.json", j);
    std::cout << "predicted parabola: p=" << blowup::format_double(params.p) << ", t0=" << blowup::format_double(params.t0)
              << "\n";
    return kExitOk;
}

struct FitInputs {
    std::string in_file;
    std::string out_dir;
    // cutoff
    std::optional<double> f_low;
    std::optional<double> f_high;
    int stride = 1;
    // parabola
    double window_fraction = 0.5;
    // profile fits
    double time = 0.0;
    double v0 = 0.0;
    double f0 = 1.0;
    double r_window = 0.0;
};

blowup::TimeSeries decimate(const blowup::TimeSeries& series, int stride) {
    if (stride <= 1) return series;
    blowup::TimeSeries out;
    for (std::size_t i = 0; i < series.times.size(); i += static_cast<std::size_t>(stride)) {
        out.times.push_back(series.times[i]);
        out.f_origin.push_back(series.f_origin[i]);
    }
    return out;
}

blowup::ProfileSnapshot load_snapshot(const std::string& file, double time) {
    blowup::ProfileSnapshot snapshot;
    snapshot.requested_time = time;
    snapshot.field = blowup::read_profile_csv(file);
    snapshot.field.time = time;
    return snapshot;
}

int cmd_fit(const std::string& kind, const FitInputs& in) {
    const fs::path out_dir = prepare_out_dir(in.out_dir);
    json j;
    j["status"] = "ok";
    j["law"] = kind;
    j["input"] = in.in_file;
    try {
        if (kind == "cutoff") {
            const blowup::TimeSeries series = decimate(blowup::read_timeseries_csv(in.in_file), in.stride);
            if (series.f_origin.empty()) throw blowup::InsufficientDataError("time series is empty");
            const double f0 = series.f_origin.front();
            blowup::FWindow window;
            window.f_low = in.f_low.value_or(0.05 * f0);
            window.f_high = in.f_high.value_or(0.8 * f0);
            const blowup::CutoffFitResult fit = blowup::fit_cutoff_params(series, window);
            j["c"] = fit.params.c;
            j["R"] = fit.params.R;
            j["slope"] = fit.line.slope;
            j["intercept"] = fit.line.intercept;
            j["residual_rms"] = fit.line.residual_rms;
            j["window"] = {{"f_low", window.f_low}, {"f_high", window.f_high}};
            j["n_used"] = fit.scatter.size();
            std::ofstream scatter(out_dir / "cutoff_scatter.csv", std::ios::binary);
            if (!scatter) throw blowup::Error("cannot open cutoff_scatter.csv for writing");
            scatter << "ln_f,inv_dfdt_sq\n";
            for (const auto& [x, y] : fit.scatter)
                scatter << blowup::format_double(x) << "," << blowup::format_double(y) << "\n";
            std::cout << "cutoff fit: c=" << blowup::format_double(fit.params.c)
                      << ", R=" << blowup::format_double(fit.params.R) << "\n";
        } else if (kind == "parabola") {
            const blowup::TimeSeries series = blowup::read_timeseries_csv(in.in_file);
            const blowup::ParabolaParams fit = blowup::fit_trajectory_parabola(series, in.window_fraction);
            j["p"] = fit.p;
            j["t0"] = fit.t0;
            j["window_fraction"] = in.window_fraction;
            std::cout << "parabola fit: p=" << blowup::format_double(fit.p) << ", t0=" << blowup::format_double(fit.t0)
                      << "\n";
        } else if (kind == "ellipse") {
            const blowup::ProfileSnapshot snapshot = load_snapshot(in.in_file, in.time);
            const blowup::EllipseBumpParams fit = blowup::fit_ellipse_bump(snapshot, in.v0, in.f0);
            j["a"] = fit.a;
            j["b"] = fit.b;
            j["k"] = fit.k;
            j["time"] = in.time;
            std::cout << "ellipse fit: a=" << blowup::format_double(fit.a) << ", b=" << blowup::format_double(fit.b)
                      << ", k=" << blowup::format_double(fit.k) << "\n";
        } else if (kind == "hyperbola") {
            const blowup::ProfileSnapshot snapshot = load_snapshot(in.in_file, in.time);
            const blowup::HyperbolaBumpParams fit = blowup::fit_hyperbola_bump(snapshot);
            j["a_h"] = fit.a_h;
            j["b_h"] = fit.b_h;
            j["k_h"] = fit.k_h;
            j["residual_rms"] = fit.residual_rms;
            j["r_transition"] = fit.r_transition ? json(*fit.r_transition) : json(nullptr);
            j["time"] = in.time;
            std::cout << "hyperbola fit: a=" << blowup::format_double(fit.a_h) << ", b=" << blowup::format_double(fit.b_h)
                      << ", k=" << blowup::format_double(fit.k_h) << "\n";
        } else if (kind == "parabolic-profile") {
            const blowup::ProfileSnapshot snapshot = load_snapshot(in.in_file, in.time);
            const blowup::ParabolicProfileParams fit = blowup::fit_parabolic_profile(snapshot, in.r_window);
            j["rho"] = fit.rho;
            j["h"] = fit.h;
            j["r_window"] = in.r_window;
            std::cout << "parabolic profile fit: rho=" << blowup::format_double(fit.rho)
                      << ", h=" << blowup::format_double(fit.h) << "\n";
        } else {
            throw blowup::ConfigError("unknown fit kind '" + kind + "'");
        }
    } catch (const blowup::Error& e) {
        json err;
        err["status"] = "error";
        err["law"] = kind;
        err["input"] = in.in_file;
        err["error_type"] = [&]() -> const char* {
            if (dynamic_cast<const blowup::BumpNotResolvedError*>(&e)) return "bump_not_resolved";
            if (dynamic_cast<const blowup::FitError*>(&e)) return "fit_error";
            if (dynamic_cast<const blowup::InsufficientDataError*>(&e)) return "insufficient_data";
            if (dynamic_cast<const blowup::DomainError*>(&e)) return "domain_error";
            if (dynamic_cast<const blowup::ConfigError*>(&e)) return "config_error";
            return "error";
        }();
        err["message"] = e.what();
        write_json_file(out_dir / "fit.json", err);
        throw;
    }
    write_json_file(out_dir / "fit.json", j);
    return kExitOk;
}

struct ConvergeInputs {
    std::string config_file;
    std::vector<double> dr_list;
    double level = 0.1;
    std::string out_dir;
};

int cmd_converge(const ConvergeInputs& in, const CLI::App& cmd) {
    SimulateInputs base_inputs;
    merge_config_file(in.config_file, cmd, base_inputs);
    if (base_inputs.dr <= 0.0 && !in.dr_list.empty()) base_inputs.dr = in.dr_list.front();
    const blowup::SimulationConfig base = build_simulation_config(base_inputs);
    const fs::path out_dir = prepare_out_dir(in.out_dir);

    // A spacing that cannot run (step-size guard, grid mismatch) is recorded
    // and skipped; the study proceeds on whatever spacings remain.
    json failed_runs = json::array();
    std::vector<double> usable;
    for (double dr : in.dr_list) {
        try {
            blowup::SimulationConfig probe = base;
            probe.grid = blowup::GridSpec::make(dr, base.grid.r_max);
            probe.validate();
            usable.push_back(dr);
        } catch (const std::exception& e) {
            json entry;
            entry["dr"] = dr;
            entry["error"] = e.what();
            failed_runs.push_back(entry);
            std::cerr << "skipping dr " << blowup::format_double(dr) << ": " << e.what() << "\n";
        }
    }

    if (usable.size() < 2) {
        json summary;
        summary["config"] = config_to_json(base);
        summary["dr_list"] = usable;
        summary["level"] = in.level;
        summary["t_blowup_finest"] = nullptr;
        summary["pairs"] = json::array();
        summary["failed_runs"] = failed_runs;
        write_json_file(out_dir / "summary.json", summary);
        std::ofstream csv(out_dir / "convergence.csv", std::ios::binary);
        if (csv) csv << "dr_coarse,dr_fine,t,f_coarse,f_fine,deviation\n";
        std::cerr << "fewer than two usable grid spacings; failures recorded in summary.json\n";
        return kExitNumerical;
    }

    const blowup::ConvergenceStudy study = blowup::convergence_study(base, usable, in.level);

    std::ofstream csv(out_dir / "convergence.csv", std::ios::binary);
    if (!csv) throw blowup::Error("cannot open convergence.csv for writing");
    csv << "dr_coarse,dr_fine,t,f_coarse,f_fine,deviation\n";
    for (std::size_t a = 0; a < study.dr_list.size(); ++a) {
        for (std::size_t b = a + 1; b < study.dr_list.size(); ++b) {
            const bool a_coarse = study.dr_list[a] >= study.dr_list[b];
            const auto& coarse = a_coarse ? study.series[a] : study.series[b];
            const auto& fine = a_coarse ? study.series[b] : study.series[a];
            const double dr_coarse = a_coarse ? study.dr_list[a] : study.dr_list[b];
            const double dr_fine = a_coarse ? study.dr_list[b] : study.dr_list[a];
            const std::size_t common = std::min(coarse.times.size(), fine.times.size());
            for (std::size_t i = 0; i < common; ++i) {
                csv << blowup::format_double(dr_coarse) << "," << blowup::format_double(dr_fine) << ","
                    << blowup::format_double(fine.times[i]) << "," << blowup::format_double(coarse.f_origin[i]) << ","
                    << blowup::format_double(fine.f_origin[i]) << ","
                    << blowup::format_double(std::abs(coarse.f_origin[i] - fine.f_origin[i])) << "\n";
            }
        }
    }
    csv.close();

    json summary;
    summary["config"] = config_to_json(base);
    summary["dr_list"] = study.dr_list;
    summary["level"] = study.level;
    summary["t_blowup_finest"] = study.t_blowup_finest;
    json pairs = json::array();
    for (const auto& pair : study.pairs) {
        json p;
        p["dr_coarse"] = pair.dr_coarse;
        p["dr_fine"] = pair.dr_fine;
        p["max_deviation"] = pair.max_deviation;
        p["deviation_at_blowup"] = pair.deviation_at_blowup;
        p["deviation_at_level"] = pair.deviation_at_level ? json(*pair.deviation_at_level) : json(nullptr);
        pairs.push_back(p);
        std::cout << "dr " << blowup::format_double(pair.dr_coarse) << " vs " << blowup::format_double(pair.dr_fine)
                  << ": max deviation " << blowup::format_double(pair.max_deviation) << ", at blowup "
                  << blowup::format_double(pair.deviation_at_blowup) << "\n";
    }
    summary["pairs"] = pairs;
    summary["failed_runs"] = failed_runs;
    write_json_file(out_dir / "summary.json", summary);
    return kExitOk;
}

struct CompareInputs {
    std::string sim_file;
    std::string pred_file;
    std::string out_dir;
};

int cmd_compare(const CompareInputs& in) {
    const fs::path out_dir = prepare_out_dir(in.out_dir);
    const blowup::TimeSeries series = blowup::read_timeseries_csv(in.sim_file);
    const blowup::GeodesicTrajectory prediction = blowup::read_prediction_csv(in.pred_file);
    const blowup::DeviationReport report = blowup::compare_to_prediction(series, prediction);

    std::ofstream csv(out_dir / "deviation.csv", std::ios::binary);
    if (!csv) throw blowup::Error("cannot open deviation.csv for writing");
    csv << "t,simulated,predicted,deviation\n";
    for (const auto& sample : report.samples) {
        csv << blowup::format_double(sample.t) << "," << blowup::format_double(sample.simulated) << ","
            << blowup::format_double(sample.predicted) << "," << blowup::format_double(sample.deviation) << "\n";
    }
    csv.close();

    json summary;
    summary["simulated"] = in.sim_file;
    summary["predicted"] = in.pred_file;
    summary["max_abs"] = report.max_abs;
    summary["rms"] = report.rms;
    summary["n_samples"] = report.samples.size();
    write_json_file(out_dir / "summary.json", summary);
    std::cout << "deviation: max " << blowup::format_double(report.max_abs) << ", rms "
              << blowup::format_double(report.rms) << " over " << report.samples.size() << " samples\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial collapse simulator and blowup-law toolkit"};
    app.require_subcommand(1);

    SimulateInputs sim;
    std::string sim_config;
    CLI::App* simulate = app.add_subcommand("simulate", "Integrate a model and write time series, profiles, and a manifest");
    simulate->add_option("--model", sim.model, "Model: charge1, charge2, or ym");
    simulate->add_option("--f0", sim.f0, "Initial origin value");
    simulate->add_option("--v0", sim.v0, "Initial uniform velocity");
    simulate->add_option("--rho0", sim.rho0, "Initial parabolic curvature (f = f0 + rho0 r^2)");
    simulate->add_option("--dr", sim.dr, "Grid spacing");
    simulate->add_option("--rmax", sim.r_max, "Grid extent (integer multiple of dr)");
    simulate->add_option("--dt", sim.dt, "Time step (must satisfy dt <= dr/2)");
    simulate->add_option("--boundary", sim.boundary, "Outer boundary: flat or parabola");
    simulate->add_option("--tmax", sim.t_max, "Time horizon");
    simulate->add_option("--fstop", sim.f_stop, "Stop level for f(0,t) (default: one grid spacing)");
    simulate->add_flag("--no-stop-on-level", sim.no_stop_on_level, "Keep integrating after f(0,t) crosses the stop level");
    simulate->add_option("--stride", sim.stride, "Sample f(0,t) every this many steps");
    simulate->add_option("--picard", sim.picard, "Iterated-update sweeps per step");
    simulate->add_option("--snapshots", sim.snapshots, "Comma-separated times at which to save full profiles")
        ->delimiter(',');
    simulate->add_option("--out", sim.out_dir, "Output directory");
    simulate->add_option("--config", sim_config, "key=value file; explicit flags override it");

    CLI::App* predict = app.add_subcommand("predict", "Evaluate a collapse law as a sampled curve");
    predict->require_subcommand(1);
    PredictCutoffInputs pc;
    CLI::App* predict_cutoff = predict->add_subcommand("cutoff", "Energy-conserving collapse with a logarithmic cutoff");
    predict_cutoff->add_option("--f0", pc.f0, "Starting origin value");
    predict_cutoff->add_option("--c", pc.c, "Kinetic constant")->required();
    predict_cutoff->add_option("--R", pc.R, "Cutoff radius")->required();
    predict_cutoff->add_option("--floor", pc.floor, "Smallest f to integrate down to");
    predict_cutoff->add_option("--samples", pc.samples, "Number of levels on the geometric ladder");
    predict_cutoff->add_option("--out", pc.out_dir, "Output directory");
    PredictParabolaInputs pp;
    CLI::App* predict_parabola = predict->add_subcommand("parabola", "Parabola-in-time collapse law from initial data");
    predict_parabola->add_option("--f0", pp.f0, "Starting origin value");
    predict_parabola->add_option("--v0", pp.v0, "Initial velocity (must be negative)")->required();
    predict_parabola->add_option("--out", pp.out_dir, "Output directory");

    CLI::App* fit = app.add_subcommand("fit", "Fit a collapse law or profile shape to saved CSV data");
    fit->require_subcommand(1);
    FitInputs fi;
    CLI::App* fit_cutoff = fit->add_subcommand("cutoff", "Velocity-law fit: 1/(df/dt)^2 against ln f");
    fit_cutoff->add_option("--in", fi.in_file, "timeseries.csv to fit")->required();
    fit_cutoff->add_option("--f-low", fi.f_low, "Lower edge of the f window (default 0.05 f0)");
    fit_cutoff->add_option("--f-high", fi.f_high, "Upper edge of the f window (default 0.8 f0)");
    fit_cutoff->add_option("--stride", fi.stride, "Decimate the series by this factor before fitting");
    fit_cutoff->add_option("--out", fi.out_dir, "Output directory");
    CLI::App* fit_parabola = fit->add_subcommand("parabola", "sqrt(f) against t over the trailing window");
    fit_parabola->add_option("--in", fi.in_file, "timeseries.csv to fit")->required();
    fit_parabola->add_option("--window-fraction", fi.window_fraction, "Trailing fraction of samples to fit");
    fit_parabola->add_option("--out", fi.out_dir, "Output directory");
    CLI::App* fit_ellipse = fit->add_subcommand("ellipse", "Elliptical dome fit to a profile snapshot");
    fit_ellipse->add_option("--in", fi.in_file, "profile CSV to fit")->required();
    fit_ellipse->add_option("--time", fi.time, "Slice time of the profile")->required();
    fit_ellipse->add_option("--v0", fi.v0, "Initial velocity of the run")->required();
    fit_ellipse->add_option("--f0", fi.f0, "Initial origin value of the run");
    fit_ellipse->add_option("--out", fi.out_dir, "Output directory");
    CLI::App* fit_hyperbola = fit->add_subcommand("hyperbola", "Descending hyperbola fit to a profile snapshot");
    fit_hyperbola->add_option("--in", fi.in_file, "profile CSV to fit")->required();
    fit_hyperbola->add_option("--time", fi.time, "Slice time of the profile")->required();
    fit_hyperbola->add_option("--out", fi.out_dir, "Output directory");
    CLI::App* fit_profile = fit->add_subcommand("parabolic-profile", "Least-squares rho r^2 + h over a radial window");
    fit_profile->add_option("--in", fi.in_file, "profile CSV to fit")->required();
    fit_profile->add_option("--time", fi.time, "Slice time of the profile");
    fit_profile->add_option("--r-window", fi.r_window, "Radial window [0, r_window]")->required();
    fit_profile->add_option("--out", fi.out_dir, "Output directory");

    ConvergeInputs ci;
    CLI::App* converge = app.add_subcommand("converge", "Rerun one configuration across grid spacings and compare");
    converge->add_option("--config", ci.config_file, "key=value base configuration")->required();
    converge->add_option("--dr-list", ci.dr_list, "Comma-separated grid spacings")->required()->delimiter(',');
    converge->add_option("--level", ci.level, "Origin level at which pairwise deviation is reported");
    converge->add_option("--out", ci.out_dir, "Output directory");

    CompareInputs cmp;
    CLI::App* compare = app.add_subcommand("compare", "Deviation of a simulated series from a prediction curve");
    compare->add_option("--sim", cmp.sim_file, "timeseries.csv from a run")->required();
    compare->add_option("--pred", cmp.pred_file, "prediction.csv from predict")->required();
    compare->add_option("--out", cmp.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            std::optional<fs::path> config_path;
            if (!sim_config.empty()) config_path = sim_config;
            return cmd_simulate(sim, config_path, *simulate);
        }
        if (predict_cutoff->parsed()) return cmd_predict_cutoff(pc);
        if (predict_parabola->parsed()) return cmd_predict_parabola(pp);
        if (fit_cutoff->parsed()) return cmd_fit("cutoff", fi);
        if (fit_parabola->parsed()) return cmd_fit("parabola", fi);
        if (fit_ellipse->parsed()) return cmd_fit("ellipse", fi);
        if (fit_hyperbola->parsed()) return cmd_fit("hyperbola", fi);
        if (fit_profile->parsed()) return cmd_fit("parabolic-profile", fi);
        if (converge->parsed()) return cmd_converge(ci, *converge);
        if (compare->parsed()) return cmd_compare(cmp);
    } catch (const blowup::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
