#ifndef BLOWUP_TYPES_HPP
#define BLOWUP_TYPES_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blowup {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid run configuration (grid, CFL guard, profile positivity, ...).
// The CLI maps this to a usage error, everything else to a numerical failure.
struct ConfigError : Error {
    using Error::Error;
};

// A precondition on arguments was violated (bad index, wrong model, ...).
struct DomainError : Error {
    using Error::Error;
};

// A model denominator dropped below the representable floor; treated as
// "blowup reached this radius" by the integrator.
struct SingularEvaluationError : Error {
    int index;
    double radius;
    double time;
    SingularEvaluationError(int index_, double radius_, double time_)
        : Error("singular denominator at r = " + std::to_string(radius_) +
                " (index " + std::to_string(index_) + ", t = " + std::to_string(time_) + ")"),
          index(index_), radius(radius_), time(time_) {}
};

// A non-finite field value appeared. Should never fire under the step-size
// guard; firing indicates a bug, not physics.
struct IntegrationDivergedError : Error {
    using Error::Error;
};

// Not enough samples to perform the requested estimate or fit.
struct InsufficientDataError : Error {
    using Error::Error;
};

// A fit could not be carried out or landed outside its validity range.
struct FitError : Error {
    using Error::Error;
};

// The feature to be fitted is below the resolvable noise floor.
struct BumpNotResolvedError : FitError {
    using FitError::FitError;
};

// Adaptive quadrature failed to converge on some subinterval.
struct QuadratureError : Error {
    double a, b;
    QuadratureError(double a_, double b_)
        : Error("quadrature did not converge on subinterval [" + std::to_string(a_) + ", " +
                std::to_string(b_) + "]"),
          a(a_), b(b_) {}
};

// The three radial wave equations the toolkit integrates. The charge-one and
// charge-two equations come from the equivariant sigma-model reductions; the
// third from the rotationally symmetric 4+1 Yang-Mills reduction.
enum class ModelKind { ChargeOneSigma, ChargeTwoSigma, YangMills };

// Power n in the conservative radial operator r^-n d/dr (r^n d/dr).
constexpr int radial_power(ModelKind model) noexcept {
    return model == ModelKind::ChargeOneSigma ? 3 : 5;
}

const char* model_name(ModelKind model) noexcept;
std::optional<ModelKind> parse_model(std::string_view name) noexcept;

// Uniform radial grid on [0, r_max] with spacing dr; r_i = i*dr.
struct GridSpec {
    double dr = 0.0;
    double r_max = 0.0;
    int n_points = 0;

    // Validates dr > 0 and that r_max is an integer multiple of dr
    // (within 1e-9 relative); requires at least 4 points.
    static GridSpec make(double dr, double r_max);

    double radius(int i) const noexcept { return i * dr; }
};

// A field sampled on a radial grid at a single time.
struct RadialField {
    GridSpec grid;
    std::vector<double> values;
    double time = 0.0;

    static RadialField uniform(const GridSpec& grid, double value, double time = 0.0);
};

// Initial data f(r,0) = f0 + rho0*r^2 (rho0 optional) with uniform initial
// velocity v0. When rho0 is present, f(r,0) must stay positive on the grid.
struct InitialProfile {
    double f0 = 1.0;
    double v0 = 0.0;
    std::optional<double> rho0;
};

}  // namespace blowup

#endif
