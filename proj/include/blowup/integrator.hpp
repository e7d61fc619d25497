#ifndef BLOWUP_INTEGRATOR_HPP
#define BLOWUP_INTEGRATOR_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blowup/types.hpp"

namespace blowup {

// Condition applied to the outermost grid point after each step.
// NeumannFlat copies the neighbour (zero slope); NeumannParabola scales the
// last slope by r_max/(r_max - dr), appropriate for fields growing like r^2.
enum class OuterBoundary { NeumannFlat, NeumannParabola };

const char* boundary_name(OuterBoundary b) noexcept;
std::optional<OuterBoundary> parse_boundary(std::string_view name) noexcept;

enum class StopReason { ReachedFStop, ReachedTMax, SingularDenominator };

const char* stop_reason_name(StopReason reason) noexcept;

struct SimulationConfig {
    ModelKind model = ModelKind::ChargeOneSigma;
    GridSpec grid;
    double dt = 0.0;
    InitialProfile initial;
    OuterBoundary boundary = OuterBoundary::NeumannFlat;
    int picard_iterations = 3;
    double t_max = 0.0;
    // Stop once f(0,t) drops to this level. Defaults to one grid spacing,
    // below which the discretisation cannot resolve the collapsing scale.
    std::optional<double> f_stop;
    bool stop_on_level = true;
    int sample_stride = 1;
    std::vector<double> snapshot_times;

    double effective_f_stop() const { return f_stop.value_or(grid.dr); }

    // Throws ConfigError on an unusable configuration. Enforces the
    // step-size guard dt <= dr/2.
    void validate() const;
};

// f(0,t) sampled every sample_stride steps; uniform spacing sample_stride*dt.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> f_origin;
};

// Deep copy of the field at the step nearest the requested slice time
// (|field.time - requested_time| <= dt/2).
struct ProfileSnapshot {
    double requested_time = 0.0;
    RadialField field;
};

struct BlowupReport {
    bool blew_up = false;
    StopReason stop_reason = StopReason::ReachedTMax;
    double terminal_f_origin = 0.0;
    double t_end = 0.0;
    long long steps_taken = 0;
    // Linear interpolation of the last raw step pair to the stop level.
    std::optional<double> t_star;
    // Same secant line continued to f = 0.
    std::optional<double> t_zero_linear;
    // Zero of a least-squares line through sqrt(f) vs t over the trailing
    // tenth of the samples; meaningful for the models whose collapse follows
    // a parabola in time (charge-two and Yang-Mills).
    std::optional<double> t_zero_sqrt;
    // Set when the preferred blowup estimate exceeds the round-trip light
    // time 2*r_max, i.e. the outer boundary can influence the result.
    bool causality_warning = false;
    std::string warning_detail;
};

struct RunResult {
    TimeSeries origin_history;
    std::vector<ProfileSnapshot> snapshots;
    RadialField final_state;
    BlowupReport report;
};

// Builds the two field levels the scheme starts from: f(r,0) and a synthetic
// previous level f(r,0) - v0*dt, which makes the first step identical in form
// to every later one.
std::pair<RadialField, RadialField> initialize(const SimulationConfig& cfg);

// One step of the iterated leapfrog scheme: from levels (prev, curr) produce
// the level at curr.time + dt. Each of the picard_iterations sweeps refreshes
// the time derivative (f_next - f_prev)/(2 dt) and re-evaluates
//   f_next = 2 f_curr - f_prev + dt^2 * RHS(f_curr, df/dt).
// Boundary conditions are applied once, after the sweeps: the origin value is
// the even-symmetry extrapolation (4 f_1 - f_2)/3, then the outer condition.
RadialField step(const RadialField& prev, const RadialField& curr, const SimulationConfig& cfg);

// Integrates until the stop level is reached, t_max is hit, or a model
// denominator underflows (reported gracefully as a blowup, not an error).
RunResult run(const SimulationConfig& cfg);

}  // namespace blowup

#endif
