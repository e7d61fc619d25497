#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "blowup/analysis.hpp"
#include "blowup/integrator.hpp"
#include "blowup/models.hpp"
#include "blowup/predictor.hpp"
#include "blowup/quadrature.hpp"

using namespace blowup;

namespace {

SimulationConfig make_run(ModelKind model, double f0, double v0, double dr, double r_max,
                          double dt, double t_max) {
    SimulationConfig cfg;
    cfg.model = model;
    cfg.grid = GridSpec::make(dr, r_max);
    cfg.dt = dt;
    cfg.initial.f0 = f0;
    cfg.initial.v0 = v0;
    cfg.t_max = t_max;
    return cfg;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Median |df/dt| over the trailing quarter of the samples, relative to the
// leading quarter.
double quartile_velocity_ratio(const TimeSeries& series) {
    const auto vs = estimate_origin_velocity(series);
    const std::size_t q = vs.size() / 4;
    std::vector<double> head, tail;
    for (std::size_t i = 0; i < q; ++i) head.push_back(std::abs(vs[i].dfdt));
    for (std::size_t i = vs.size() - q; i < vs.size(); ++i) tail.push_back(std::abs(vs[i].dfdt));
    return median(tail) / median(head);
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

// 1. Uniform stationary data stays put for a hundred thousand steps.
bool static_stability(std::ostream& detail) {
    bool ok = true;
    for (ModelKind model :
         {ModelKind::ChargeOneSigma, ModelKind::ChargeTwoSigma, ModelKind::YangMills}) {
        auto cfg = make_run(model, 1.0, 0.0, 0.05, 20.0, 0.005, 500.0);
        const RunResult result = run(cfg);
        double drift = 0.0;
        for (double f : result.origin_history.f_origin) drift = std::max(drift, std::abs(f - 1.0));
        ok = ok && result.report.steps_taken == 100000 && drift <= 1e-8;
        detail << model_name(model) << " drift=" << drift << " over "
               << result.report.steps_taken << " steps; ";
    }
    detail << "limit 1e-8";
    return ok;
}

// 2. Grid refinement: coarsest vs finest stay together through blowup.
bool grid_convergence(std::ostream& detail) {
    auto base = make_run(ModelKind::ChargeOneSigma, 1.0, -0.01, 0.1, 100.0, 0.001, 150.0);
    const auto study = convergence_study(base, {0.1, 0.05, 0.01}, 0.1);
    const ConvergencePairDeviation* widest = nullptr;
    for (const auto& pair : study.pairs)
        if (pair.dr_coarse == 0.1 && pair.dr_fine == 0.01) widest = &pair;
    if (widest == nullptr) {
        detail << "coarsest/finest pair missing from study";
        return false;
    }
    detail << std::setprecision(4) << "t_blowup=" << study.t_blowup_finest
           << ", dev_at_blowup=" << widest->deviation_at_blowup << " (limit 0.01)"
           << ", dev_at_level=";
    if (widest->deviation_at_level)
        detail << *widest->deviation_at_level;
    else
        detail << "n/a";
    detail << " (limit 0.005)";
    return widest->deviation_at_blowup < 0.01 && widest->deviation_at_level &&
           *widest->deviation_at_level < 0.005;
}

// 3. Fast-model collapse parabolas across four start velocities.
bool parabola_table(std::ostream& detail) {
    const double v0s[] = {-0.01, -0.02, -0.03, -0.04};
    const double expected_p[] = {2.50e-5, 9.98e-5, 2.24e-4, 3.98e-4};
    bool ok = true;
    detail << std::setprecision(4);
    for (int i = 0; i < 4; ++i) {
        auto cfg = make_run(ModelKind::ChargeTwoSigma, 1.0, v0s[i], 0.025, 150.0, 0.001, 250.0);
        const RunResult result = run(cfg);
        const auto fit = fit_trajectory_parabola(result.origin_history, 0.5);
        const double t0_expected = 2.0 / std::abs(v0s[i]);
        const bool row_ok = within(fit.t0, t0_expected, 0.01) && within(fit.p, expected_p[i], 0.02);
        ok = ok && row_ok;
        detail << "v0=" << v0s[i] << ": p=" << fit.p << " (want " << expected_p[i]
               << " +-2%), t0=" << fit.t0 << " (want " << t0_expected << " +-1%); ";
    }
    return ok;
}

// 4. The gauge-field twin follows the same parabola and overlays it.
bool yang_mills_twin(std::ostream& detail) {
    auto cfg = make_run(ModelKind::YangMills, 1.0, -0.01, 0.025, 150.0, 0.001, 250.0);
    const RunResult result = run(cfg);
    const auto fit = fit_trajectory_parabola(result.origin_history, 0.5);
    const auto overlay = compare_to_prediction(result.origin_history, fit);
    detail << std::setprecision(4) << "p=" << fit.p << " (want 2.5e-05 +-2%), t0=" << fit.t0
           << " (want 200 +-1%), overlay max=" << overlay.max_abs << " (limit 0.01)";
    return within(fit.p, 2.5e-5, 0.02) && within(fit.t0, 200.0, 0.01) && overlay.max_abs <= 0.01;
}

TimeSeries slow_collapse_series(double v0, double r_max) {
    auto cfg = make_run(ModelKind::ChargeOneSigma, 1.0, v0, 0.01, r_max, 0.001, 300.0);
    cfg.sample_stride = 100;
    return run(cfg).origin_history;
}

// 5. Velocity-law parameters for the slow model, plus the overlay bound.
bool cutoff_fit_bands(std::ostream& detail) {
    detail << std::setprecision(4);
    const TimeSeries fast_start = slow_collapse_series(-0.01, 100.0);
    const auto fit1 = fit_cutoff_params(fast_start, FWindow{0.05, 0.8});
    bool ok = fit1.params.c >= 0.024 && fit1.params.c <= 0.030 && fit1.params.R >= 45.0 &&
              fit1.params.R <= 72.0;
    detail << "v0=-0.01: c=" << fit1.params.c << " (want [0.024,0.030]), R=" << fit1.params.R
           << " (want [45,72]); ";

    const auto curve = cutoff_trajectory(1.0, fit1.params, 0.005, 400);
    const auto overlay = compare_to_prediction(fast_start, curve);
    ok = ok && overlay.max_abs <= 0.02;
    detail << "overlay max=" << overlay.max_abs << " (limit 0.02); ";

    const TimeSeries slow_start = slow_collapse_series(-0.005, 150.0);
    const auto fit2 = fit_cutoff_params(slow_start, FWindow{0.05, 0.8});
    ok = ok && within(fit2.params.c, 0.0145, 0.10) && within(fit2.params.R, 115.0, 0.35);
    detail << "v0=-0.005: c=" << fit2.params.c << " (want 0.0145 +-10%), R=" << fit2.params.R
           << " (want 115 +-35%)";
    return ok;
}

// 6. Fitted cutoff radius grows linearly in the inverse start speed.
bool cutoff_radius_law(std::ostream& detail) {
    const struct {
        double v0;
        double r_max;
    } sweeps[] = {{-0.005, 150.0}, {-0.01, 100.0}, {-0.02, 60.0}, {-0.03, 40.0}, {-0.05, 30.0}};
    std::vector<std::pair<double, double>> rows;
    detail << std::setprecision(4);
    for (const auto& sweep : sweeps) {
        const auto fit = fit_cutoff_params(slow_collapse_series(sweep.v0, sweep.r_max),
                                           FWindow{0.05, 0.8});
        rows.emplace_back(sweep.v0, fit.params.R);
        detail << "v0=" << sweep.v0 << ": R=" << fit.params.R << "; ";
    }
    const auto line = fit_r_vs_inverse_v0(rows);
    detail << "slope=" << line.slope << " (want 0.5407 +-25%)";
    return within(line.slope, 0.5407, 0.25);
}

// 7. Slow versus fast discrimination through the origin speed history,
// measured on the same production-resolution runs the other criteria use.
bool speed_ratio_discrimination(std::ostream& detail) {
    detail << std::setprecision(4);
    const double slow_ratio = quartile_velocity_ratio(slow_collapse_series(-0.01, 100.0));
    bool ok = slow_ratio < 0.8;
    detail << "charge1 ratio=" << slow_ratio << " (want <0.8); ";
    for (ModelKind model : {ModelKind::ChargeTwoSigma, ModelKind::YangMills}) {
        auto cfg = make_run(model, 1.0, -0.01, 0.025, 150.0, 0.001, 250.0);
        cfg.sample_stride = 100;
        const double ratio = quartile_velocity_ratio(run(cfg).origin_history);
        ok = ok && ratio > 1.5;
        detail << model_name(model) << " ratio=" << ratio << " (want >1.5); ";
    }
    detail << "final-quartile to first-quartile median |df/dt|";
    return ok;
}

// 8. Elliptical dome parameters track the slice time.
bool ellipse_bump_law(std::ostream& detail) {
    const double v0 = -0.01;
    auto cfg = make_run(ModelKind::YangMills, 1.0, v0, 0.025, 150.0, 0.001, 80.0);
    cfg.snapshot_times = {25.0, 50.0, 75.0};
    const RunResult result = run(cfg);
    if (result.snapshots.size() != 3) {
        detail << "expected 3 snapshots, got " << result.snapshots.size();
        return false;
    }
    bool ok = true;
    detail << std::setprecision(4);
    for (const auto& snapshot : result.snapshots) {
        const double T = snapshot.requested_time;
        const auto fit = fit_ellipse_bump(snapshot, v0, 1.0);
        const double b_expected = v0 * v0 * T * T / 4.0;
        const double k_expected = 1.0 + v0 * T;
        const bool row_ok = within(fit.a, T, 0.05) && within(fit.b, b_expected, 0.05) &&
                            within(fit.k, k_expected, 0.05);
        ok = ok && row_ok;
        detail << "T=" << T << ": a=" << fit.a << " b=" << fit.b << " (want " << b_expected
               << ") k=" << fit.k << " (want " << k_expected << "); ";
    }
    detail << "all +-5%";
    return ok;
}

// 9. Parabolic initial profiles persist to late times.
bool parabolic_profile_persistence(std::ostream& detail) {
    bool ok = true;
    detail << std::setprecision(4);
    const struct {
        ModelKind model;
        double limit;
    } cases[] = {{ModelKind::YangMills, 0.01}, {ModelKind::ChargeTwoSigma, 0.02}};
    for (const auto& entry : cases) {
        auto cfg = make_run(entry.model, 1.0, -0.01, 0.05, 200.0, 0.02, 161.0);
        cfg.initial.rho0 = -1.25e-5;
        cfg.boundary = OuterBoundary::NeumannParabola;
        cfg.stop_on_level = false;
        cfg.snapshot_times = {10.0, 160.0};
        const RunResult result = run(cfg);
        if (result.snapshots.size() != 2) {
            detail << model_name(entry.model) << ": expected 2 snapshots; ";
            ok = false;
            continue;
        }
        const double rho_early = fit_parabolic_profile(result.snapshots[0], 20.0).rho;
        const double rho_late = fit_parabolic_profile(result.snapshots[1], 20.0).rho;
        const double drift = std::abs(rho_late - rho_early) / std::abs(rho_early);
        ok = ok && drift < entry.limit;
        detail << model_name(entry.model) << ": rho " << rho_early << " -> " << rho_late
               << ", drift=" << drift << " (limit " << entry.limit << "); ";
    }
    return ok;
}

double stencil_error(int n, double delta) {
    const double r0 = 2.0;
    const GridSpec grid = GridSpec::make(delta, 6.0);
    RadialField field = RadialField::uniform(grid, 0.0);
    for (int i = 0; i < grid.n_points; ++i) {
        const double r = grid.radius(i);
        field.values[static_cast<std::size_t>(i)] = std::exp(-r * r);
    }
    const int idx = static_cast<int>(std::llround(r0 / delta));
    const double exact = (4.0 * r0 * r0 - 2.0 - 2.0 * n) * std::exp(-r0 * r0);
    return std::abs(conservative_radial_operator(field, n, idx) - exact);
}

__float128 oracle_residual(bool yang_mills, __float128 r, __float128 t, __float128 v0) {
    const __float128 p = v0 * v0 / 4;
    const __float128 t0 = 2 / -v0;
    const __float128 tau = t - t0;
    const __float128 f = p * tau * tau - p / 2 * r * r;
    const __float128 ft = 2 * p * tau;
    const __float128 fr = -p * r;
    const __float128 frr = -p;
    __float128 den, fric, nl;
    if (yang_mills) {
        den = f + r * r;
        fric = 8 * r;
        nl = 2;
    } else {
        den = f * f + r * r * r * r;
        fric = 8 * r * r * r;
        nl = 2 * f;
    }
    const __float128 rhs = frr + 5 * fr / r - fric * fr / den + nl * (ft * ft - fr * fr) / den;
    return 2 * p - rhs;
}

bool causality_bound(std::ostream& detail) {
    auto cfg = make_run(ModelKind::ChargeOneSigma, 1.0, -0.02, 0.05, 20.0, 0.01, 16.0);
    cfg.snapshot_times = {5.0, 10.0, 15.0};
    const RunResult result = run(cfg);
    if (result.snapshots.size() != 3) {
        detail << "expected 3 snapshots; ";
        return false;
    }
    bool ok = true;
    double worst = 0.0;
    for (const auto& snapshot : result.snapshots) {
        const double T = snapshot.requested_time;
        const double bound = 5.0 * 0.02 * 0.02 * T;
        const double expected = 1.0 - 0.02 * T;
        for (int i = 0; i < snapshot.field.grid.n_points; ++i) {
            if (snapshot.field.grid.radius(i) <= T + 2.0 * snapshot.field.grid.dr) continue;
            const double dev =
                std::abs(snapshot.field.values[static_cast<std::size_t>(i)] - expected);
            worst = std::max(worst, dev / bound);
            ok = ok && dev <= bound;
        }
    }
    detail << "outside-cone deviation <= " << std::setprecision(3) << worst
           << "x the 5 v0^2 t bound; ";
    return ok;
}

bool scale_covariance(std::ostream& detail) {
    detail << std::setprecision(3);
    bool ok = true;

    auto max_scaled_gap = [](const TimeSeries& a, const TimeSeries& b, double scale) {
        const std::size_t n = std::min(a.times.size(), b.times.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(b.f_origin[k] - scale * a.f_origin[k]));
        return worst;
    };

    // Slow model: f -> lambda f(r/lambda, t/lambda) with lambda = 2.
    {
        auto base = make_run(ModelKind::ChargeOneSigma, 1.0, -0.05, 0.05, 20.0, 0.01, 60.0);
        base.f_stop = 0.05;
        auto scaled = make_run(ModelKind::ChargeOneSigma, 2.0, -0.05, 0.1, 40.0, 0.02, 120.0);
        scaled.f_stop = 0.1;
        auto refined = base;
        refined.grid = GridSpec::make(0.025, 20.0);
        const auto series_a = run(base).origin_history;
        const auto series_b = run(scaled).origin_history;
        const auto series_r = run(refined).origin_history;
        const double defect = max_scaled_gap(series_a, series_b, 2.0);
        const double eps = max_scaled_gap(series_a, series_r, 1.0);
        ok = ok && defect <= 2.0 * eps + 1e-12;
        detail << "charge1 defect=" << defect << " vs 2x grid error " << 2.0 * eps << "; ";
    }

    // Fast models: f -> lambda^2 f(r/lambda, t/lambda).
    for (ModelKind model : {ModelKind::ChargeTwoSigma, ModelKind::YangMills}) {
        auto base = make_run(model, 1.0, -0.04, 0.05, 60.0, 0.01, 100.0);
        base.f_stop = 0.05;
        auto scaled = make_run(model, 4.0, -0.08, 0.1, 120.0, 0.02, 200.0);
        scaled.f_stop = 0.2;
        auto refined = base;
        refined.grid = GridSpec::make(0.025, 60.0);
        const auto series_a = run(base).origin_history;
        const auto series_b = run(scaled).origin_history;
        const auto series_r = run(refined).origin_history;
        const double defect = max_scaled_gap(series_a, series_b, 4.0);
        const double eps = max_scaled_gap(series_a, series_r, 1.0);
        ok = ok && defect <= 2.0 * eps + 1e-12;
        detail << model_name(model) << " defect=" << defect << " vs 2x grid error " << 2.0 * eps
               << "; ";
    }
    return ok;
}

// 10. Property suite: discretisation, causality, covariance, round trips,
// quadrature oracle, and the symbolic residual oracle.
bool property_suite(std::ostream& detail) {
    bool ok = true;

    for (int n : {3, 5}) {
        const double e1 = stencil_error(n, 0.1);
        const double e2 = stencil_error(n, 0.05);
        const double e3 = stencil_error(n, 0.025);
        const double order_a = std::log2(e1 / e2);
        const double order_b = std::log2(e2 / e3);
        ok = ok && order_a > 1.9 && order_a < 2.1 && order_b > 1.9 && order_b < 2.1;
        detail << "stencil n=" << n << " orders " << std::setprecision(3) << order_a << "/"
               << order_b << "; ";
    }

    {
        const GridSpec grid = GridSpec::make(0.05, 10.0);
        const RadialField field = RadialField::uniform(grid, 1.3);
        bool exact = true;
        for (int n : {3, 5})
            for (int i : {1, 10, 50})
                exact = exact && conservative_radial_operator(field, n, i) == 0.0;
        ok = ok && exact;
        detail << (exact ? "constants annihilated exactly; " : "constant leakage; ");
    }

    ok = ok && causality_bound(detail);
    ok = ok && scale_covariance(detail);

    {
        const CutoffFitParams truth{0.05, 40.0};
        const auto curve = cutoff_trajectory(1.0, truth, 0.01, 2000);
        const auto fit = fit_cutoff_params(TimeSeries{curve.times, curve.values},
                                           FWindow{0.05, 0.8});
        const bool round = within(fit.params.c, truth.c, 0.01) && within(fit.params.R, truth.R, 0.01);
        ok = ok && round;
        detail << "cutoff round trip c=" << fit.params.c << " R=" << fit.params.R << "; ";

        const auto params = parabola_prediction(1.0, -0.01);
        TimeSeries sampled;
        for (int k = 0; k <= 380; ++k) {
            sampled.times.push_back(0.5 * k);
            sampled.f_origin.push_back(params.origin_value(0.5 * k));
        }
        const auto back = fit_trajectory_parabola(sampled, 0.5);
        ok = ok && within(back.p, params.p, 0.01) && within(back.t0, params.t0, 0.01);
        detail << "parabola round trip p=" << back.p << " t0=" << back.t0 << "; ";
    }

    {
        const auto integrand = [](double s) { return std::sqrt(cutoff_bracket(s, 100.0)); };
        const double adaptive = adaptive_simpson(integrand, 0.01, 1.0, 1e-8, 60);
        const int n = 4096;
        const double h = (1.0 - 0.01) / (2.0 * n);
        double acc = integrand(0.01) + integrand(1.0);
        for (int i = 1; i < 2 * n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(0.01 + h * i);
        const double reference = acc * h / 3.0;
        const bool close = std::abs(adaptive - reference) <= 1e-6 * std::abs(reference);
        ok = ok && close;
        detail << "quadrature vs Simpson gap " << std::setprecision(2)
               << std::abs(adaptive - reference) / std::abs(reference) << "; ";
    }

    {
        std::mt19937 rng(424242u);
        std::uniform_real_distribution<double> pick_v0(-0.05, -0.005);
        std::uniform_real_distribution<double> pick_r(0.1, 20.0);
        std::uniform_real_distribution<double> pick_t(0.0, 150.0);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const double v0 = pick_v0(rng);
            const double r = pick_r(rng);
            const double t = pick_t(rng);
            for (bool yang_mills : {false, true}) {
                const double closed = ansatz_residual(
                    yang_mills ? ModelKind::YangMills : ModelKind::ChargeTwoSigma, v0, r, t);
                const double reference =
                    static_cast<double>(oracle_residual(yang_mills, r, t, v0));
                const double rel = std::abs(closed - reference) /
                                   std::max(std::abs(reference), 1e-30);
                worst = std::max(worst, rel);
            }
        }
        ok = ok && worst <= 1e-12;
        detail << "residual oracle worst rel " << std::setprecision(2) << worst;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance_tests <criterion 1..10>\n";
        return 2;
    }
    const int criterion = std::atoi(argv[1]);
    bool pass = false;
    std::ostringstream detail;
    try {
        switch (criterion) {
            case 1: pass = static_stability(detail); break;
            case 2: pass = grid_convergence(detail); break;
            case 3: pass = parabola_table(detail); break;
            case 4: pass = yang_mills_twin(detail); break;
            case 5: pass = cutoff_fit_bands(detail); break;
            case 6: pass = cutoff_radius_law(detail); break;
            case 7: pass = speed_ratio_discrimination(detail); break;
            case 8: pass = ellipse_bump_law(detail); break;
            case 9: pass = parabolic_profile_persistence(detail); break;
            case 10: pass = property_suite(detail); break;
            default: std::cerr << "unknown criterion " << criterion << "\n"; return 2;
        }
    } catch (const std::exception& e) {
        detail << "exception: " << e.what();
        pass = false;
    }
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " ("
              << detail.str() << ")\n";
    return pass ? 0 : 1;
}
