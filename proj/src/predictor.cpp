#include "blowup/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/quadrature.hpp"

namespace blowup {

double GeodesicTrajectory::value_at_time(double t) const {
    if (times.empty()) throw DomainError("empty trajectory");
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const double t0 = times[j - 1], t1 = times[j];
    const double w = (t - t0) / (t1 - t0);
    return values[j - 1] + w * (values[j] - values[j - 1]);
}

double cutoff_bracket(double f, double R) {
    if (!(f > 0.0) || !(R > 0.0)) throw DomainError("bracket requires f > 0 and R > 0");
    const double ratio = R / f;
    double log_term;
    if (ratio * ratio < 0.5)
        log_term = std::log1p(ratio * ratio);
    else
        log_term = std::log(f * f + R * R) - 2.0 * std::log(f);
    return log_term - (R * R) / (f * f + R * R);
}

double cutoff_velocity(double f, const CutoffFitParams& params) {
    if (!(params.c > 0.0) || !(params.R > 0.0))
        throw DomainError("cutoff parameters must be positive");
    if (!(f > 0.0)) throw DomainError("velocity law requires f > 0");
    return params.c / std::sqrt(cutoff_bracket(f, params.R));
}

GeodesicTrajectory cutoff_trajectory(double f0, const CutoffFitParams& params, double f_floor,
                                     int n_samples) {
    if (!(params.c > 0.0) || !(params.R > 0.0))
        throw DomainError("cutoff parameters must be positive");
    if (!(f_floor > 0.0) || !(f_floor < f0))
        throw DomainError("trajectory requires 0 < f_floor < f0");
    if (n_samples < 2) throw DomainError("trajectory needs at least 2 samples");

    const double R = params.R;
    auto integrand = [R](double s) { return std::sqrt(cutoff_bracket(s, R)); };

    GeodesicTrajectory out;
    out.times.reserve(static_cast<std::size_t>(n_samples));
    out.values.reserve(static_cast<std::size_t>(n_samples));
    out.times.push_back(0.0);
    out.values.push_back(f0);

    const double q = std::pow(f_floor / f0, 1.0 / static_cast<double>(n_samples - 1));
    double t_acc = 0.0;
    double f_prev = f0;
    for (int k = 1; k < n_samples; ++k) {
        const double f_k = (k == n_samples - 1) ? f_floor : f0 * std::pow(q, k);
        t_acc += adaptive_simpson(integrand, f_k, f_prev, 1e-8, 60) / params.c;
        out.times.push_back(t_acc);
        out.values.push_back(f_k);
        f_prev = f_k;
    }
    return out;
}

ParabolaParams parabola_prediction(double f0, double v0) {
    if (!(f0 > 0.0)) throw DomainError("parabola prediction requires f0 > 0");
    if (!(v0 < 0.0))
        throw DomainError("parabola prediction requires v0 < 0: a non-shrinking start "
                          "runs away from the singularity");
    ParabolaParams out;
    out.t0 = 2.0 * f0 / std::abs(v0);
    out.p = v0 * v0 / (4.0 * f0);
    return out;
}

double predicted_profile_ansatz(ModelKind model, double v0, double r, double t) {
    if (model == ModelKind::ChargeOneSigma)
        throw DomainError("no closed-form profile ansatz for the charge-one model");
    if (!(v0 < 0.0)) throw DomainError("profile ansatz requires v0 < 0");
    const double p = 0.25 * v0 * v0;
    const double tau = t - 2.0 / std::abs(v0);
    return -0.5 * p * r * r + p * tau * tau;
}

}  // namespace blowup
