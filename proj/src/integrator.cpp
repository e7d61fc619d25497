#include "blowup/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "blowup/models.hpp"

namespace blowup {

const char* boundary_name(OuterBoundary b) noexcept {
    return b == OuterBoundary::NeumannFlat ? "flat" : "parabola";
}

std::optional<OuterBoundary> parse_boundary(std::string_view name) noexcept {
    if (name == "flat") return OuterBoundary::NeumannFlat;
    if (name == "parabola") return OuterBoundary::NeumannParabola;
    return std::nullopt;
}

const char* stop_reason_name(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::ReachedFStop: return "reached_f_stop";
        case StopReason::ReachedTMax: return "reached_t_max";
        case StopReason::SingularDenominator: return "singular_denominator";
    }
    return "unknown";
}

void SimulationConfig::validate() const {
    if (grid.n_points < 4) throw ConfigError("grid must have at least 4 points");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
    if (dt > 0.5 * grid.dr * (1.0 + 1e-12))
        throw ConfigError("time step violates the guard dt <= dr/2");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be positive");
    if (picard_iterations < 1) throw ConfigError("at least one corrector sweep is required");
    if (sample_stride < 1) throw ConfigError("sample stride must be >= 1");
    if (!(initial.f0 > 0.0)) throw ConfigError("initial origin value f0 must be positive");
    if (!std::isfinite(initial.v0)) throw ConfigError("initial velocity must be finite");
    if (initial.rho0) {
        const double edge = initial.f0 + *initial.rho0 * grid.r_max * grid.r_max;
        if (!(edge > 0.0))
            throw ConfigError("parabolic initial data must stay positive out to r_max");
    }
    if (f_stop) {
        if (!(*f_stop >= 0.0) || !std::isfinite(*f_stop))
            throw ConfigError("stop level must be non-negative");
        if (*f_stop >= initial.f0) throw ConfigError("stop level must lie below f0");
    }
    for (double ts : snapshot_times)
        if (!(ts >= 0.0) || !std::isfinite(ts))
            throw ConfigError("snapshot times must be non-negative");
}

std::pair<RadialField, RadialField> initialize(const SimulationConfig& cfg) {
    cfg.validate();
    RadialField curr;
    curr.grid = cfg.grid;
    curr.time = 0.0;
    curr.values.resize(static_cast<std::size_t>(cfg.grid.n_points));
    for (int i = 0; i < cfg.grid.n_points; ++i) {
        const double r = cfg.grid.radius(i);
        curr.values[static_cast<std::size_t>(i)] =
            cfg.initial.f0 + (cfg.initial.rho0 ? *cfg.initial.rho0 * r * r : 0.0);
    }
    RadialField prev = curr;
    prev.time = -cfg.dt;
    const double shift = cfg.initial.v0 * cfg.dt;
    for (double& v : prev.values) v -= shift;
    return {std::move(prev), std::move(curr)};
}

namespace {

constexpr double kDenominatorFloor = 1e-30;

double ipow(double x, int n) {
    double y = 1.0;
    for (int k = 0; k < n; ++k) y *= x;
    return y;
}

// Per-grid constants of the fused update kernel:
//   stencil_i = cA_i (f_{i+1}-f_i) - cB_i (f_i-f_{i-1})
// reproduces the conservative radial operator, fric/rsq feed the model
// nonlinearity with a single division per point.
struct Workspace {
    int n = 0;
    double dr = 0.0;
    double outer_ratio = 1.0;
    std::vector<double> cA, cB, fric, rsq;

    Workspace(const GridSpec& grid, ModelKind model) {
        n = grid.n_points;
        dr = grid.dr;
        outer_ratio = grid.r_max / (grid.r_max - grid.dr);
        const int p = radial_power(model);
        cA.resize(static_cast<std::size_t>(n), 0.0);
        cB.resize(static_cast<std::size_t>(n), 0.0);
        fric.resize(static_cast<std::size_t>(n), 0.0);
        rsq.resize(static_cast<std::size_t>(n), 0.0);
        for (int i = 1; i < n - 1; ++i) {
            const double r = grid.radius(i);
            const double scale = 1.0 / (ipow(r, p) * dr * dr);
            cA[static_cast<std::size_t>(i)] = ipow(r + 0.5 * dr, p) * scale;
            cB[static_cast<std::size_t>(i)] = ipow(r - 0.5 * dr, p) * scale;
            switch (model) {
                case ModelKind::ChargeOneSigma:
                    fric[static_cast<std::size_t>(i)] = 4.0 * r;
                    rsq[static_cast<std::size_t>(i)] = r * r;
                    break;
                case ModelKind::ChargeTwoSigma:
                    fric[static_cast<std::size_t>(i)] = 8.0 * r * r * r;
                    rsq[static_cast<std::size_t>(i)] = r * r * r * r;
                    break;
                case ModelKind::YangMills:
                    fric[static_cast<std::size_t>(i)] = 8.0 * r;
                    rsq[static_cast<std::size_t>(i)] = r * r;
                    break;
            }
        }
    }
};

template <ModelKind M>
void advance(const Workspace& ws, const double* fprev, const double* fcur, double* fnext,
             double dt, int picard, OuterBoundary boundary, double fail_time) {
    const int n = ws.n;
    const double inv2dt = 1.0 / (2.0 * dt);
    const double inv2dr = 1.0 / (2.0 * ws.dr);
    const double dt2 = dt * dt;
    for (int i = 0; i < n; ++i) fnext[i] = 2.0 * fcur[i] - fprev[i];
    for (int sweep = 0; sweep < picard; ++sweep) {
        for (int i = 1; i < n - 1; ++i) {
            const double f = fcur[i];
            double den, nl;
            if constexpr (M == ModelKind::YangMills) {
                den = f + ws.rsq[static_cast<std::size_t>(i)];
                nl = 2.0;
            } else {
                den = f * f + ws.rsq[static_cast<std::size_t>(i)];
                nl = 2.0 * f;
            }
            if (!(den > kDenominatorFloor))
                throw SingularEvaluationError(i, i * ws.dr, fail_time);
            const double dft = (fnext[i] - fprev[i]) * inv2dt;
            const double dfr = (fcur[i + 1] - fcur[i - 1]) * inv2dr;
            const double stencil = ws.cA[static_cast<std::size_t>(i)] * (fcur[i + 1] - f) -
                                   ws.cB[static_cast<std::size_t>(i)] * (f - fcur[i - 1]);
            fnext[i] = 2.0 * f - fprev[i] +
                       dt2 * (stencil + (nl * (dft * dft - dfr * dfr) - ws.fric[static_cast<std::size_t>(i)] * dfr) / den);
        }
    }
    fnext[0] = (4.0 * fnext[1] - fnext[2]) / 3.0;
    if (boundary == OuterBoundary::NeumannFlat)
        fnext[n - 1] = fnext[n - 2];
    else
        fnext[n - 1] = fnext[n - 2] + (fnext[n - 2] - fnext[n - 3]) * ws.outer_ratio;
}

void advance_dispatch(ModelKind model, const Workspace& ws, const double* fprev,
                      const double* fcur, double* fnext, double dt, int picard,
                      OuterBoundary boundary, double fail_time) {
    switch (model) {
        case ModelKind::ChargeOneSigma:
            advance<ModelKind::ChargeOneSigma>(ws, fprev, fcur, fnext, dt, picard, boundary, fail_time);
            return;
        case ModelKind::ChargeTwoSigma:
            advance<ModelKind::ChargeTwoSigma>(ws, fprev, fcur, fnext, dt, picard, boundary, fail_time);
            return;
        case ModelKind::YangMills:
            advance<ModelKind::YangMills>(ws, fprev, fcur, fnext, dt, picard, boundary, fail_time);
            return;
    }
    throw DomainError("unknown model");
}

struct LineThroughSamples {
    double slope = 0.0;
    double intercept = 0.0;
    bool ok = false;
};

LineThroughSamples least_squares_line(const std::vector<double>& x, const std::vector<double>& y,
                                      std::size_t first) {
    LineThroughSamples out;
    const std::size_t m = x.size() - first;
    if (m < 2 || y.size() != x.size()) return out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = first; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double nd = static_cast<double>(m);
    const double det = nd * sxx - sx * sx;
    if (!(std::abs(det) > 0.0)) return out;
    out.slope = (nd * sxy - sx * sy) / det;
    out.intercept = (sy * sxx - sx * sxy) / det;
    out.ok = std::isfinite(out.slope) && std::isfinite(out.intercept);
    return out;
}

}  // namespace

RadialField step(const RadialField& prev, const RadialField& curr, const SimulationConfig& cfg) {
    cfg.validate();
    if (prev.grid.n_points != cfg.grid.n_points || curr.grid.n_points != cfg.grid.n_points)
        throw DomainError("field levels do not match the configured grid");
    Workspace ws(cfg.grid, cfg.model);
    RadialField next;
    next.grid = cfg.grid;
    next.time = curr.time + cfg.dt;
    next.values.resize(curr.values.size());
    advance_dispatch(cfg.model, ws, prev.values.data(), curr.values.data(), next.values.data(),
                     cfg.dt, cfg.picard_iterations, cfg.boundary, curr.time);
    return next;
}

RunResult run(const SimulationConfig& cfg) {
    cfg.validate();
    auto [prev, curr] = initialize(cfg);
    Workspace ws(cfg.grid, cfg.model);

    RunResult result;
    result.report.stop_reason = StopReason::ReachedTMax;

    std::vector<double> snap_times = cfg.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    std::size_t snap_idx = 0;
    // The first step time within dt/2 of the request is the nearest step.
    auto capture_snapshots = [&](const RadialField& field) {
        while (snap_idx < snap_times.size() &&
               field.time >= snap_times[snap_idx] - 0.5 * cfg.dt - 1e-12) {
            result.snapshots.push_back(ProfileSnapshot{snap_times[snap_idx], field});
            ++snap_idx;
        }
    };

    const double level = cfg.effective_f_stop();
    const long long max_steps =
        static_cast<long long>(std::ceil(cfg.t_max / cfg.dt - 1e-9));

    result.origin_history.times.push_back(0.0);
    result.origin_history.f_origin.push_back(curr.values[0]);
    capture_snapshots(curr);

    double raw_t_a = 0.0, raw_f_a = curr.values[0];
    bool have_pair = false;
    double raw_t_b = 0.0, raw_f_b = curr.values[0];
    long long k = 0;

    RadialField next;
    next.grid = cfg.grid;
    next.values.resize(curr.values.size());

    while (k < max_steps) {
        const double t_next = static_cast<double>(k + 1) * cfg.dt;
        try {
            advance_dispatch(cfg.model, ws, prev.values.data(), curr.values.data(),
                             next.values.data(), cfg.dt, cfg.picard_iterations, cfg.boundary,
                             curr.time);
        } catch (const SingularEvaluationError&) {
            result.report.stop_reason = StopReason::SingularDenominator;
            result.report.blew_up = true;
            break;
        }
        next.time = t_next;
        ++k;
        std::swap(prev.values, curr.values);
        std::swap(curr.values, next.values);
        prev.time = t_next - cfg.dt;
        curr.time = t_next;

        const double f0 = curr.values[0];
        if (!std::isfinite(f0))
            throw IntegrationDivergedError("non-finite field value at t = " + std::to_string(t_next));

        raw_t_a = raw_t_b;
        raw_f_a = raw_f_b;
        raw_t_b = t_next;
        raw_f_b = f0;
        have_pair = true;

        if (k % cfg.sample_stride == 0) {
            result.origin_history.times.push_back(t_next);
            result.origin_history.f_origin.push_back(f0);
        }
        capture_snapshots(curr);

        if (cfg.stop_on_level && f0 <= level) {
            result.report.stop_reason = StopReason::ReachedFStop;
            result.report.blew_up = true;
            break;
        }
    }

    result.report.t_end = curr.time;
    result.report.steps_taken = k;
    result.report.terminal_f_origin = curr.values[0];
    result.final_state = curr;

    // Secant line through the last two raw levels: interpolated stop-level
    // crossing and its continuation to zero. Only meaningful while f(0,t)
    // is still falling.
    if (have_pair && raw_f_a > raw_f_b) {
        const double slope = (raw_f_b - raw_f_a) / (raw_t_b - raw_t_a);
        result.report.t_zero_linear = raw_t_a - raw_f_a / slope;
        if (result.report.blew_up) result.report.t_star = raw_t_a + (level - raw_f_a) / slope;
    } else if (result.report.blew_up && curr.values[0] <= level) {
        result.report.t_star = curr.time;
    }

    if (result.report.blew_up && cfg.model != ModelKind::ChargeOneSigma) {
        const auto& ts = result.origin_history;
        const std::size_t n_samples = ts.times.size();
        if (n_samples >= 5) {
            std::size_t tail = std::max<std::size_t>(5, n_samples / 10);
            std::size_t first = n_samples - tail;
            std::vector<double> xs, ys;
            xs.reserve(tail);
            ys.reserve(tail);
            for (std::size_t j = first; j < n_samples; ++j) {
                if (ts.f_origin[j] >= 0.0) {
                    xs.push_back(ts.times[j]);
                    ys.push_back(std::sqrt(ts.f_origin[j]));
                }
            }
            const auto line = least_squares_line(xs, ys, 0);
            if (line.ok && line.slope < 0.0) {
                const double t0 = -line.intercept / line.slope;
                if (std::isfinite(t0) && t0 > 0.0) result.report.t_zero_sqrt = t0;
            }
        }
    }

    double estimate = result.report.t_end;
    if (result.report.t_star) estimate = *result.report.t_star;
    if (result.report.t_zero_linear) estimate = *result.report.t_zero_linear;
    if (result.report.t_zero_sqrt) estimate = *result.report.t_zero_sqrt;
    if (2.0 * cfg.grid.r_max < estimate) {
        result.report.causality_warning = true;
        result.report.warning_detail =
            "estimated blowup time " + std::to_string(estimate) +
            " exceeds the causal horizon 2*r_max = " + std::to_string(2.0 * cfg.grid.r_max) +
            "; enlarge the grid to keep the origin untouched by boundary effects";
    }

    return result;
}

}  // namespace blowup
