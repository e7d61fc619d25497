#ifndef BLOWUP_ANALYSIS_HPP
#define BLOWUP_ANALYSIS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "blowup/integrator.hpp"
#include "blowup/predictor.hpp"
#include "blowup/types.hpp"

namespace blowup {

// Dome profile y(r) = k + b*sqrt(1 - r^2/a^2) for r <= a: peak k+b at the
// origin, baseline k at r = a.
struct EllipseBumpParams {
    double a = 0.0;
    double b = 0.0;
    double k = 0.0;
};

// Descending-branch profile y(r) = k_h - b_h*sqrt(1 + r^2/a_h^2): peak
// k_h - b_h at the origin, falling toward the far-field plateau.
struct HyperbolaBumpParams {
    double a_h = 0.0;
    double b_h = 0.0;
    double k_h = 0.0;
    double residual_rms = 0.0;
    // Radius where the fitted curve first comes within the grid-noise floor
    // of the far-field plateau; absent when the curve never reaches it.
    std::optional<double> r_transition;
};

// Profile y(r) = rho*r^2 + h on the fitted window.
struct ParabolicProfileParams {
    double rho = 0.0;
    double h = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t first_index = 0;
    std::size_t last_index = 0;
};

struct VelocitySample {
    double t = 0.0;
    double dfdt = 0.0;
};

// Window in f for the velocity-law regression.
struct FWindow {
    double f_low = 0.05;
    double f_high = 0.8;
};

struct CutoffFitResult {
    CutoffFitParams params;
    LinearFit line;
    // (ln f, 1/(df/dt)^2) pairs actually used by the regression.
    std::vector<std::pair<double, double>> scatter;
};

struct ConvergencePairDeviation {
    double dr_coarse = 0.0;
    double dr_fine = 0.0;
    double max_deviation = 0.0;
    double deviation_at_blowup = 0.0;
    std::optional<double> deviation_at_level;
};

struct ConvergenceStudy {
    std::vector<double> dr_list;
    std::vector<TimeSeries> series;
    double t_blowup_finest = 0.0;
    double level = 0.1;
    std::vector<ConvergencePairDeviation> pairs;
};

struct DeviationSample {
    double t = 0.0;
    double simulated = 0.0;
    double predicted = 0.0;
    double deviation = 0.0;
};

struct DeviationReport {
    double max_abs = 0.0;
    double rms = 0.0;
    std::vector<DeviationSample> samples;
};

// Centered differences (f(t_{k+1}) - f(t_{k-1}))/(t_{k+1} - t_{k-1}) at the
// interior samples. Throws InsufficientDataError below 3 samples.
std::vector<VelocitySample> estimate_origin_velocity(const TimeSeries& series);

// Least-squares line of y = 1/(df/dt)^2 against x = ln f over samples whose
// f lies in the window and whose estimated velocity is strictly negative
// (at least 10 such samples). The line determines the effective parameters:
// slope = -2/c^2 and intercept = (2 ln R - 1)/c^2. A non-negative slope means
// the data is not in the cutoff regime and raises FitError.
// The series should be decimated so its spacing is well above the
// integration step (10x or more), keeping roundoff out of 1/(df/dt)^2.
CutoffFitResult fit_cutoff_params(const TimeSeries& series, const FWindow& window);

// Least squares of R against 1/|v0| for rows (v0, R). Accepts 2 or more rows
// with distinct abscissae (a two-point line is exact).
LinearFit fit_r_vs_inverse_v0(const std::vector<std::pair<double, double>>& rows);

// Least squares of sqrt(f) against t over the trailing window_fraction of
// samples; slope -sqrt(p) and intercept sqrt(p)*t0 give the parabola law.
// Requires f positive and decreasing over the window.
ParabolaParams fit_trajectory_parabola(const TimeSeries& series, double window_fraction = 0.5);

// Elliptical dome fit for fast-model snapshots from uniform initial data.
// k is the far-field plateau (median of f over r in [1.2T, 1.5T], clipped to
// the grid; expected near f0 + v0*T); b = f(0,T) - k; a^2 is the least-squares
// solution of r^2/(1 - w^2) = a^2 over points with w = (y-k)/b in [0.2, 0.95].
// Success additionally requires a within [0.8T, 1.2T].
// Throws BumpNotResolvedError when b is below 4x the grid-noise floor.
EllipseBumpParams fit_ellipse_bump(const ProfileSnapshot& snapshot, double v0, double f0);

// Hyperbola dome fit for charge-one snapshots over r in [0, 0.9T]:
// profiled linear solve for (k_h, b_h) over a 1-d search in a_h, then damped
// Gauss-Newton (at most 200 iterations).
HyperbolaBumpParams fit_hyperbola_bump(const ProfileSnapshot& snapshot);

// Least squares of y against (1, r^2) over r in [0, r_window]; requires
// r_window <= r_max/2 and at least 5 points.
ParabolicProfileParams fit_parabolic_profile(const ProfileSnapshot& snapshot, double r_window);

// Continuum residual d^2f/dt^2 - RHS of the profile ansatz, evaluated
// analytically (charge-two and Yang-Mills only).
double ansatz_residual(ModelKind model, double v0, double r, double t);

// Reruns the base configuration at each grid spacing (fixed dt), aligns the
// f(0,t) samples on common times, and reports pairwise deviations: the
// maximum up to the finest run's blowup, the deviation at that blowup time,
// and the deviation at the instant the coarser run crosses f = level.
// The finest run stops at its own stop level and fixes the time horizon; the
// coarser runs are continued past their own crossing to that horizon.
ConvergenceStudy convergence_study(const SimulationConfig& base, const std::vector<double>& dr_list,
                                   double level = 0.1);

// Deviation of a simulated series from a prediction, evaluated at the series'
// sample times (closed form for the parabola, monotone interpolation for the
// quadrature curve). Throws DomainError when the time ranges are disjoint.
DeviationReport compare_to_prediction(const TimeSeries& series, const GeodesicTrajectory& prediction);
DeviationReport compare_to_prediction(const TimeSeries& series, const ParabolaParams& prediction);

}  // namespace blowup

#endif
