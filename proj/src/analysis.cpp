#include "blowup/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "blowup/models.hpp"

namespace blowup {

namespace {

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw InsufficientDataError("need at least 2 points for a line");
    double xm = 0, ym = 0;
    for (std::size_t i = 0; i < n; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    if (!(sxx > 0.0)) throw FitError("degenerate abscissae: all x values coincide");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += e * e;
    }
    fit.residual_rms = std::sqrt(sse / static_cast<double>(n));
    return fit;
}

double median(std::vector<double> v) {
    if (v.empty()) throw InsufficientDataError("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Far-field plateau and noise floor of a snapshot: the median of f over
// r in [1.2T, 1.5T] (clipped to the grid) and the larger of the scatter about
// it and the discretisation floor dr^2 * |f(0)|.
struct FarField {
    double plateau = 0.0;
    double noise = 0.0;
};

FarField far_field(const ProfileSnapshot& snapshot) {
    const double T = snapshot.requested_time;
    if (!(T > 0.0)) throw DomainError("snapshot time must be positive");
    const GridSpec& grid = snapshot.field.grid;
    const double lo = std::min(1.2 * T, grid.r_max);
    const double hi = std::min(1.5 * T, grid.r_max);
    std::vector<double> window;
    for (int i = 0; i < grid.n_points; ++i) {
        const double r = grid.radius(i);
        if (r >= lo - 1e-12 && r <= hi + 1e-12)
            window.push_back(snapshot.field.values[static_cast<std::size_t>(i)]);
    }
    if (window.size() < 5)
        throw InsufficientDataError("far-field window [1.2T, 1.5T] holds fewer than 5 grid points");
    FarField out;
    out.plateau = median(window);
    double sse = 0;
    for (double v : window) sse += (v - out.plateau) * (v - out.plateau);
    const double rms = std::sqrt(sse / static_cast<double>(window.size()));
    out.noise = std::max(rms, grid.dr * grid.dr * std::abs(snapshot.field.values[0]));
    return out;
}

}  // namespace

std::vector<VelocitySample> estimate_origin_velocity(const TimeSeries& series) {
    const std::size_t n = series.times.size();
    if (n < 3 || series.f_origin.size() != n)
        throw InsufficientDataError("velocity estimate needs at least 3 samples");
    std::vector<VelocitySample> out;
    out.reserve(n - 2);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        VelocitySample s;
        s.t = series.times[k];
        s.dfdt = (series.f_origin[k + 1] - series.f_origin[k - 1]) /
                 (series.times[k + 1] - series.times[k - 1]);
        out.push_back(s);
    }
    return out;
}

CutoffFitResult fit_cutoff_params(const TimeSeries& series, const FWindow& window) {
    if (!(window.f_low > 0.0) || !(window.f_high > window.f_low))
        throw DomainError("window requires 0 < f_low < f_high");
    const auto velocities = estimate_origin_velocity(series);
    std::vector<double> xs, ys;
    std::size_t first = 0, last = 0;
    bool any = false;
    for (std::size_t j = 0; j < velocities.size(); ++j) {
        const std::size_t idx = j + 1;
        const double f = series.f_origin[idx];
        const double v = velocities[j].dfdt;
        if (f < window.f_low || f > window.f_high || !(v < 0.0)) continue;
        xs.push_back(std::log(f));
        ys.push_back(1.0 / (v * v));
        if (!any) first = idx;
        last = idx;
        any = true;
    }
    if (xs.size() < 10)
        throw InsufficientDataError("cutoff fit needs at least 10 in-window samples with "
                                    "negative velocity");
    CutoffFitResult out;
    out.line = least_squares(xs, ys);
    out.line.first_index = first;
    out.line.last_index = last;
    if (!(out.line.slope < 0.0))
        throw FitError("non-negative slope: data is not in the cutoff regime");
    out.params.c = std::sqrt(-2.0 / out.line.slope);
    out.params.R = std::exp(0.5 * (out.line.intercept * out.params.c * out.params.c + 1.0));
    if (!std::isfinite(out.params.c) || !std::isfinite(out.params.R))
        throw FitError("cutoff parameters did not evaluate to finite values");
    out.scatter.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out.scatter.emplace_back(xs[i], ys[i]);
    return out;
}

LinearFit fit_r_vs_inverse_v0(const std::vector<std::pair<double, double>>& rows) {
    if (rows.size() < 2) throw InsufficientDataError("regression needs at least 2 rows");
    std::vector<double> xs, ys;
    xs.reserve(rows.size());
    ys.reserve(rows.size());
    for (const auto& [v0, R] : rows) {
        if (v0 == 0.0) throw DomainError("v0 = 0 has no inverse");
        xs.push_back(1.0 / std::abs(v0));
        ys.push_back(R);
    }
    LinearFit fit = least_squares(xs, ys);
    fit.first_index = 0;
    fit.last_index = rows.size() - 1;
    return fit;
}

ParabolaParams fit_trajectory_parabola(const TimeSeries& series, double window_fraction) {
    if (!(window_fraction > 0.0) || window_fraction > 1.0)
        throw DomainError("window fraction must lie in (0, 1]");
    const std::size_t n = series.times.size();
    if (n < 3 || series.f_origin.size() != n)
        throw InsufficientDataError("parabola fit needs at least 3 samples");
    std::size_t m = static_cast<std::size_t>(std::llround(window_fraction * static_cast<double>(n)));
    m = std::clamp<std::size_t>(m, 3, n);
    const std::size_t first = n - m;
    std::vector<double> xs, ys;
    xs.reserve(m);
    ys.reserve(m);
    for (std::size_t k = first; k < n; ++k) {
        const double f = series.f_origin[k];
        if (f < 0.0) throw FitError("window contains negative f values");
        if (k > first && !(f < series.f_origin[k - 1] + 1e-14 * std::max(1.0, std::abs(f))))
            throw FitError("window is not decreasing");
        xs.push_back(series.times[k]);
        ys.push_back(std::sqrt(f));
    }
    const LinearFit line = least_squares(xs, ys);
    if (!(line.slope < 0.0)) throw FitError("sqrt(f) is not falling over the window");
    ParabolaParams out;
    out.p = line.slope * line.slope;
    out.t0 = -line.intercept / line.slope;
    return out;
}

EllipseBumpParams fit_ellipse_bump(const ProfileSnapshot& snapshot, double v0, double f0) {
    if (!std::isfinite(v0) || !(f0 > 0.0))
        throw DomainError("ellipse fit expects finite v0 and positive f0");
    const double T = snapshot.requested_time;
    const FarField far = far_field(snapshot);
    EllipseBumpParams out;
    out.k = far.plateau;
    out.b = snapshot.field.values[0] - out.k;
    if (!(out.b > 4.0 * far.noise))
        throw BumpNotResolvedError("bump height is below 4x the grid-noise floor");
    const GridSpec& grid = snapshot.field.grid;
    double acc = 0.0;
    std::size_t count = 0;
    for (int i = 1; i < grid.n_points; ++i) {
        const double w = (snapshot.field.values[static_cast<std::size_t>(i)] - out.k) / out.b;
        if (w < 0.2 || w > 0.95) continue;
        const double r = grid.radius(i);
        acc += r * r / (1.0 - w * w);
        ++count;
    }
    if (count < 5) throw InsufficientDataError("fewer than 5 points on the dome flank");
    out.a = std::sqrt(acc / static_cast<double>(count));
    if (out.a < 0.8 * T || out.a > 1.2 * T) {
        std::ostringstream msg;
        msg << "fitted dome radius a = " << out.a << " lies outside [0.8T, 1.2T] for T = " << T;
        throw FitError(msg.str());
    }
    return out;
}

namespace {

// Linear solve for (k, b) in y = k - b*phi at fixed a; returns SSE.
struct ProfiledHyperbola {
    double k = 0.0, b = 0.0, sse = 0.0;
};

ProfiledHyperbola solve_hyperbola_kb(const std::vector<double>& r, const std::vector<double>& y,
                                     double a) {
    const std::size_t m = r.size();
    double sp = 0, spp = 0, sy = 0, spy = 0;
    std::vector<double> phi(m);
    for (std::size_t i = 0; i < m; ++i) {
        phi[i] = std::sqrt(1.0 + (r[i] * r[i]) / (a * a));
        sp += phi[i];
        spp += phi[i] * phi[i];
        sy += y[i];
        spy += phi[i] * y[i];
    }
    const double md = static_cast<double>(m);
    const double det = md * spp - sp * sp;
    ProfiledHyperbola out;
    if (!(std::abs(det) > 0.0)) {
        out.sse = std::numeric_limits<double>::infinity();
        return out;
    }
    // y = k - b*phi  =>  minimize over (k, b)
    out.k = (spp * sy - sp * spy) / det;
    out.b = (sp * sy - md * spy) / det;
    out.sse = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = out.k - out.b * phi[i] - y[i];
        out.sse += e * e;
    }
    return out;
}

double hyperbola_sse(const std::vector<double>& r, const std::vector<double>& y, double a,
                     double b, double k) {
    double sse = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double e = k - b * std::sqrt(1.0 + (r[i] * r[i]) / (a * a)) - y[i];
        sse += e * e;
    }
    return sse;
}

}  // namespace

HyperbolaBumpParams fit_hyperbola_bump(const ProfileSnapshot& snapshot) {
    const double T = snapshot.requested_time;
    const FarField far = far_field(snapshot);
    const GridSpec& grid = snapshot.field.grid;

    std::vector<double> rs, ys;
    for (int i = 0; i < grid.n_points; ++i) {
        const double r = grid.radius(i);
        if (r > 0.9 * T + 1e-12) break;
        rs.push_back(r);
        ys.push_back(snapshot.field.values[static_cast<std::size_t>(i)]);
    }
    if (rs.size() < 8) throw InsufficientDataError("fewer than 8 points inside r <= 0.9T");

    const double depth = snapshot.field.values[0] - far.plateau;
    if (!(depth > 4.0 * far.noise))
        throw BumpNotResolvedError("origin feature is below 4x the grid-noise floor");

    // Profiled scan over the nonlinear parameter, then local refinement.
    double best_a = T, best_sse = std::numeric_limits<double>::infinity();
    const double a_lo = 0.05 * T, a_hi = 5.0 * T;
    const int n_scan = 60;
    for (int s = 0; s < n_scan; ++s) {
        const double a = a_lo * std::pow(a_hi / a_lo, static_cast<double>(s) / (n_scan - 1));
        const auto sol = solve_hyperbola_kb(rs, ys, a);
        if (sol.b > 0.0 && sol.sse < best_sse) {
            best_sse = sol.sse;
            best_a = a;
        }
    }
    if (!std::isfinite(best_sse))
        throw FitError("profiled scan found no descending-branch fit");
    {
        const double ratio = std::pow(a_hi / a_lo, 1.0 / (n_scan - 1));
        double lo = best_a / ratio, hi = best_a * ratio;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = solve_hyperbola_kb(rs, ys, x1).sse;
        double f2 = solve_hyperbola_kb(rs, ys, x2).sse;
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = solve_hyperbola_kb(rs, ys, x1).sse;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = solve_hyperbola_kb(rs, ys, x2).sse;
            }
        }
        best_a = 0.5 * (lo + hi);
    }
    auto seed = solve_hyperbola_kb(rs, ys, best_a);
    double a = best_a, b = seed.b, k = seed.k, sse = seed.sse;

    // Damped Gauss-Newton polish on (a, b, k).
    const std::size_t m = rs.size();
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        double jta[3] = {0, 0, 0};
        double jtj[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        for (std::size_t i = 0; i < m; ++i) {
            const double phi = std::sqrt(1.0 + (rs[i] * rs[i]) / (a * a));
            const double e = k - b * phi - ys[i];
            const double ja = b * rs[i] * rs[i] / (a * a * a * phi);
            const double jb = -phi;
            const double jk = 1.0;
            const double j[3] = {ja, jb, jk};
            for (int p = 0; p < 3; ++p) {
                jta[p] += j[p] * e;
                for (int q = 0; q < 3; ++q) jtj[p][q] += j[p] * j[q];
            }
        }
        // Solve jtj * delta = -jta by Gaussian elimination with pivoting.
        double Ab[3][4];
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) Ab[p][q] = jtj[p][q];
            Ab[p][3] = -jta[p];
        }
        bool singular = false;
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int row = col + 1; row < 3; ++row)
                if (std::abs(Ab[row][col]) > std::abs(Ab[piv][col])) piv = row;
            if (std::abs(Ab[piv][col]) < 1e-300) {
                singular = true;
                break;
            }
            std::swap(Ab[col], Ab[piv]);
            for (int row = col + 1; row < 3; ++row) {
                const double fct = Ab[row][col] / Ab[col][col];
                for (int q = col; q < 4; ++q) Ab[row][q] -= fct * Ab[col][q];
            }
        }
        if (singular) break;
        double delta[3];
        for (int p = 2; p >= 0; --p) {
            double acc = Ab[p][3];
            for (int q = p + 1; q < 3; ++q) acc -= Ab[p][q] * delta[q];
            delta[p] = acc / Ab[p][p];
        }
        double damp = 1.0;
        double na = a, nb = b, nk = k, nsse = sse;
        bool improved = false;
        for (int h = 0; h < 25; ++h) {
            const double ta = a + damp * delta[0];
            const double tb = b + damp * delta[1];
            const double tk = k + damp * delta[2];
            if (ta > 0.0 && tb > 0.0) {
                const double tsse = hyperbola_sse(rs, ys, ta, tb, tk);
                if (tsse < sse) {
                    na = ta;
                    nb = tb;
                    nk = tk;
                    nsse = tsse;
                    improved = true;
                    break;
                }
            }
            damp *= 0.5;
        }
        if (!improved) {
            converged = true;
            break;
        }
        const double rel_step = std::abs(na - a) / a + std::abs(nb - b) / std::max(1e-300, b) +
                                std::abs(nk - k) / std::max(1.0, std::abs(k));
        a = na;
        b = nb;
        k = nk;
        sse = nsse;
        if (rel_step < 1e-13 || (sse <= 1e-30)) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "refinement did not settle within 200 iterations; best iterate a_h = " << a
            << ", b_h = " << b << ", k_h = " << k << ", rms = "
            << std::sqrt(sse / static_cast<double>(m));
        throw FitError(msg.str());
    }
    HyperbolaBumpParams out;
    out.a_h = a;
    out.b_h = b;
    out.k_h = k;
    out.residual_rms = std::sqrt(sse / static_cast<double>(m));
    const double arg = (k - far.plateau - far.noise) / b;
    if (arg > 1.0) out.r_transition = a * std::sqrt(arg * arg - 1.0);
    return out;
}

ParabolicProfileParams fit_parabolic_profile(const ProfileSnapshot& snapshot, double r_window) {
    const GridSpec& grid = snapshot.field.grid;
    if (!(r_window > 0.0) || r_window > 0.5 * grid.r_max + 1e-12)
        throw DomainError("fit window must lie within half the grid extent");
    std::vector<double> xs, ys;
    for (int i = 0; i < grid.n_points; ++i) {
        const double r = grid.radius(i);
        if (r > r_window + 1e-12) break;
        xs.push_back(r * r);
        ys.push_back(snapshot.field.values[static_cast<std::size_t>(i)]);
    }
    if (xs.size() < 5) throw InsufficientDataError("fewer than 5 points inside the fit window");
    const LinearFit line = least_squares(xs, ys);
    ParabolicProfileParams out;
    out.rho = line.slope;
    out.h = line.intercept;
    return out;
}

double ansatz_residual(ModelKind model, double v0, double r, double t) {
    if (v0 == 0.0) throw DomainError("the ansatz requires a nonzero initial velocity");
    switch (model) {
        case ModelKind::ChargeTwoSigma: return ansatz_residual_charge2(r, t, v0);
        case ModelKind::YangMills: return ansatz_residual_yangmills(r, t, v0);
        case ModelKind::ChargeOneSigma: break;
    }
    throw DomainError("no closed-form profile ansatz for the charge-one model");
}

namespace {

double interpolate_series(const TimeSeries& s, double t) {
    const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    if (it == s.times.begin()) return s.f_origin.front();
    if (it == s.times.end()) return s.f_origin.back();
    const std::size_t j = static_cast<std::size_t>(it - s.times.begin());
    const double w = (t - s.times[j - 1]) / (s.times[j] - s.times[j - 1]);
    return s.f_origin[j - 1] + w * (s.f_origin[j] - s.f_origin[j - 1]);
}

}  // namespace

ConvergenceStudy convergence_study(const SimulationConfig& base, const std::vector<double>& dr_list,
                                   double level) {
    if (dr_list.size() < 2) throw DomainError("a study needs at least two grid spacings");
    const double finest = *std::min_element(dr_list.begin(), dr_list.end());

    ConvergenceStudy study;
    study.dr_list = dr_list;
    study.level = level;

    auto make_config = [&](double dr) {
        SimulationConfig cfg = base;
        cfg.grid = GridSpec::make(dr, base.grid.r_max);
        cfg.snapshot_times.clear();
        return cfg;
    };

    SimulationConfig finest_cfg = make_config(finest);
    const RunResult finest_run = run(finest_cfg);
    study.t_blowup_finest = finest_run.report.t_end;

    std::map<double, TimeSeries> cache;
    cache.emplace(finest, finest_run.origin_history);
    for (double dr : dr_list) {
        if (cache.count(dr)) continue;
        SimulationConfig cfg = make_config(dr);
        cfg.stop_on_level = false;
        cfg.t_max = study.t_blowup_finest + cfg.dt * cfg.sample_stride;
        cache.emplace(dr, run(cfg).origin_history);
    }
    study.series.reserve(dr_list.size());
    for (double dr : dr_list) study.series.push_back(cache.at(dr));

    for (std::size_t i = 0; i < dr_list.size(); ++i) {
        for (std::size_t j = i + 1; j < dr_list.size(); ++j) {
            const bool i_coarser = dr_list[i] >= dr_list[j];
            const TimeSeries& coarse = study.series[i_coarser ? i : j];
            const TimeSeries& fine = study.series[i_coarser ? j : i];
            ConvergencePairDeviation dev;
            dev.dr_coarse = i_coarser ? dr_list[i] : dr_list[j];
            dev.dr_fine = i_coarser ? dr_list[j] : dr_list[i];

            std::size_t n_common = std::min(coarse.times.size(), fine.times.size());
            while (n_common > 0 && coarse.times[n_common - 1] > study.t_blowup_finest + 1e-9)
                --n_common;
            if (n_common == 0) throw InsufficientDataError("runs share no sample times");
            for (std::size_t kk = 0; kk < n_common; ++kk)
                dev.max_deviation =
                    std::max(dev.max_deviation, std::abs(coarse.f_origin[kk] - fine.f_origin[kk]));
            dev.deviation_at_blowup =
                std::abs(coarse.f_origin[n_common - 1] - fine.f_origin[n_common - 1]);

            for (std::size_t kk = 1; kk < coarse.times.size(); ++kk) {
                if (coarse.f_origin[kk] <= level && coarse.f_origin[kk - 1] > level) {
                    const double w = (coarse.f_origin[kk - 1] - level) /
                                     (coarse.f_origin[kk - 1] - coarse.f_origin[kk]);
                    const double t_level =
                        coarse.times[kk - 1] + w * (coarse.times[kk] - coarse.times[kk - 1]);
                    if (t_level <= fine.times.back() + 1e-9)
                        dev.deviation_at_level =
                            std::abs(interpolate_series(coarse, t_level) -
                                     interpolate_series(fine, t_level));
                    break;
                }
            }
            study.pairs.push_back(dev);
        }
    }
    return study;
}

DeviationReport compare_to_prediction(const TimeSeries& series, const GeodesicTrajectory& prediction) {
    if (series.times.empty() || prediction.times.empty())
        throw DomainError("empty series or prediction");
    DeviationReport out;
    const double lo = prediction.times.front() - 1e-12;
    const double hi = prediction.times.back() + 1e-12;
    double sse = 0;
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        const double t = series.times[k];
        if (t < lo || t > hi) continue;
        DeviationSample s;
        s.t = t;
        s.simulated = series.f_origin[k];
        s.predicted = prediction.value_at_time(t);
        s.deviation = s.simulated - s.predicted;
        out.max_abs = std::max(out.max_abs, std::abs(s.deviation));
        sse += s.deviation * s.deviation;
        out.samples.push_back(s);
    }
    if (out.samples.empty()) throw DomainError("series and prediction cover disjoint time ranges");
    out.rms = std::sqrt(sse / static_cast<double>(out.samples.size()));
    return out;
}

DeviationReport compare_to_prediction(const TimeSeries& series, const ParabolaParams& prediction) {
    if (series.times.empty()) throw DomainError("empty series");
    DeviationReport out;
    double sse = 0;
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        DeviationSample s;
        s.t = series.times[k];
        s.simulated = series.f_origin[k];
        s.predicted = prediction.origin_value(s.t);
        s.deviation = s.simulated - s.predicted;
        out.max_abs = std::max(out.max_abs, std::abs(s.deviation));
        sse += s.deviation * s.deviation;
        out.samples.push_back(s);
    }
    out.rms = std::sqrt(sse / static_cast<double>(out.samples.size()));
    return out;
}

}  // namespace blowup
