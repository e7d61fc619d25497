#ifndef BLOWUP_PREDICTOR_HPP
#define BLOWUP_PREDICTOR_HPP

#include <vector>

#include "blowup/types.hpp"

namespace blowup {

// Parameters of the collapsed-ring effective model for the slow (charge-one)
// collapse: conserved kinetic constant c (energy c^2/2) and infrared cutoff
// radius R of the logarithmically divergent kinetic integral.
struct CutoffFitParams {
    double c = 0.0;
    double R = 0.0;
};

// Parabola-in-time collapse law f(0,t) = p (t - t0)^2 for the fast models.
struct ParabolaParams {
    double p = 0.0;
    double t0 = 0.0;
    double origin_value(double t) const { return p * (t - t0) * (t - t0); }
};

// Sampled prediction curve: t strictly increasing, f strictly decreasing
// from f0 toward the floor.
struct GeodesicTrajectory {
    std::vector<double> times;
    std::vector<double> values;

    // Monotone linear interpolation in t; clamps outside the sampled range.
    double value_at_time(double t) const;
    double t_end() const { return times.empty() ? 0.0 : times.back(); }
};

// The bracket ln(1 + R^2/f^2) - R^2/(f^2 + R^2) appearing in the velocity
// law. Positive for all f > 0, R > 0. Evaluated in a branch-stable form that
// survives f down to the smallest normal doubles.
double cutoff_bracket(double f, double R);

// Magnitude of df/dt on the energy-conserving trajectory:
//   |df/dt| = c / sqrt(bracket(f, R)).
// Throws DomainError for f <= 0 or invalid parameters.
double cutoff_velocity(double f, const CutoffFitParams& params);

// Integrates dt = sqrt(bracket(s,R))/c ds from f0 down to f_floor on a
// geometric ladder of n_samples levels, each segment by adaptive quadrature
// at relative tolerance 1e-8. Requires 0 < f_floor < f0.
GeodesicTrajectory cutoff_trajectory(double f0, const CutoffFitParams& params, double f_floor,
                                     int n_samples = 400);

// Parabola law from initial data: the unique parabola through f0 with slope
// v0 < 0, i.e. t0 = 2 f0/|v0|, p = v0^2/(4 f0). Throws DomainError for
// v0 >= 0 (no collapse predicted).
ParabolaParams parabola_prediction(double f0, double v0);

// Closed-form profile ansatz for the fast models:
//   f(r,t) = -(v0^2/8) r^2 + (v0^2/4) (t - 2/|v0|)^2.
// Only the charge-two and Yang-Mills equations admit it; charge-one input
// throws DomainError.
double predicted_profile_ansatz(ModelKind model, double v0, double r, double t);

}  // namespace blowup

#endif
