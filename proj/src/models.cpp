#include "blowup/models.hpp"

#include <cmath>
#include <cstdlib>

namespace blowup {

const char* model_name(ModelKind model) noexcept {
    switch (model) {
        case ModelKind::ChargeOneSigma: return "charge1";
        case ModelKind::ChargeTwoSigma: return "charge2";
        case ModelKind::YangMills: return "ym";
    }
    return "unknown";
}

std::optional<ModelKind> parse_model(std::string_view name) noexcept {
    if (name == "charge1") return ModelKind::ChargeOneSigma;
    if (name == "charge2") return ModelKind::ChargeTwoSigma;
    if (name == "ym") return ModelKind::YangMills;
    return std::nullopt;
}

GridSpec GridSpec::make(double dr, double r_max) {
    if (!(dr > 0.0) || !std::isfinite(dr)) throw ConfigError("grid spacing must be positive");
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("grid extent must be positive");
    const double steps = r_max / dr;
    const long long n = std::llround(steps);
    if (n < 3 || std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps))
        throw ConfigError("grid extent must be an integer multiple (>= 3) of the spacing");
    GridSpec g;
    g.dr = dr;
    g.r_max = r_max;
    g.n_points = static_cast<int>(n) + 1;
    return g;
}

RadialField RadialField::uniform(const GridSpec& grid, double value, double time) {
    RadialField f;
    f.grid = grid;
    f.values.assign(static_cast<std::size_t>(grid.n_points), value);
    f.time = time;
    return f;
}

namespace {

// Shared interior-index guard for the pointwise operators.
void check_interior(const RadialField& field, int i) {
    if (i < 1 || i > field.grid.n_points - 2)
        throw DomainError("pointwise operator requires an interior grid index");
    if (static_cast<int>(field.values.size()) != field.grid.n_points)
        throw DomainError("field size does not match its grid");
}

constexpr double kDenominatorFloor = 1e-30;

double ipow(double x, int n) {
    double y = 1.0;
    for (int k = 0; k < n; ++k) y *= x;
    return y;
}

}  // namespace

double conservative_radial_operator(const RadialField& field, int n, int i) {
    check_interior(field, i);
    if (n < 1) throw DomainError("radial operator power must be >= 1");
    const double dr = field.grid.dr;
    const double r = field.grid.radius(i);
    const double wplus = ipow(r + 0.5 * dr, n);
    const double wminus = ipow(r - 0.5 * dr, n);
    const double jump_plus = field.values[static_cast<std::size_t>(i) + 1] - field.values[static_cast<std::size_t>(i)];
    const double jump_minus = field.values[static_cast<std::size_t>(i)] - field.values[static_cast<std::size_t>(i) - 1];
    return (wplus * jump_plus - wminus * jump_minus) / (ipow(r, n) * dr * dr);
}

namespace {

// Common body: conservative stencil plus the model nonlinearity
//   rhs = L_n f + (nl*(df/dt^2 - df/dr^2) - fric*df/dr) / den.
double rhs_common(const RadialField& field, std::span<const double> dfdt, int i, int n,
                  double den, double fric, double nl) {
    if (dfdt.size() != field.values.size())
        throw DomainError("time-derivative span does not match the field grid");
    if (!(den > kDenominatorFloor))
        throw SingularEvaluationError(i, field.grid.radius(i), field.time);
    const double dfr = (field.values[static_cast<std::size_t>(i) + 1] -
                        field.values[static_cast<std::size_t>(i) - 1]) /
                       (2.0 * field.grid.dr);
    const double dft = dfdt[static_cast<std::size_t>(i)];
    return conservative_radial_operator(field, n, i) +
           (nl * (dft * dft - dfr * dfr) - fric * dfr) / den;
}

}  // namespace

double rhs_charge1(const RadialField& field, std::span<const double> dfdt, int i) {
    check_interior(field, i);
    const double r = field.grid.radius(i);
    const double f = field.values[static_cast<std::size_t>(i)];
    return rhs_common(field, dfdt, i, 3, f * f + r * r, 4.0 * r, 2.0 * f);
}

double rhs_charge2(const RadialField& field, std::span<const double> dfdt, int i) {
    check_interior(field, i);
    const double r = field.grid.radius(i);
    const double f = field.values[static_cast<std::size_t>(i)];
    const double r2 = r * r;
    return rhs_common(field, dfdt, i, 5, f * f + r2 * r2, 8.0 * r2 * r, 2.0 * f);
}

double rhs_yangmills(const RadialField& field, std::span<const double> dfdt, int i) {
    check_interior(field, i);
    const double r = field.grid.radius(i);
    const double f = field.values[static_cast<std::size_t>(i)];
    return rhs_common(field, dfdt, i, 5, f + r * r, 8.0 * r, 2.0);
}

double model_rhs(ModelKind model, const RadialField& field, std::span<const double> dfdt, int i) {
    switch (model) {
        case ModelKind::ChargeOneSigma: return rhs_charge1(field, dfdt, i);
        case ModelKind::ChargeTwoSigma: return rhs_charge2(field, dfdt, i);
        case ModelKind::YangMills: return rhs_yangmills(field, dfdt, i);
    }
    throw DomainError("unknown model");
}

namespace {

// Ansatz value f(r,t) = p (t-t0)^2 - (p/2) r^2 with p = v0^2/4, t0 = 2/|v0|.
double ansatz_value(double r, double t, double v0, double& p_out) {
    const double p = 0.25 * v0 * v0;
    p_out = p;
    const double tau = t - 2.0 / std::abs(v0);
    return p * tau * tau - 0.5 * p * r * r;
}

}  // namespace

double ansatz_residual_charge2_cleared(double r, double t, double v0) {
    if (r == 0.0) return 0.0;
    double p;
    const double f = ansatz_value(r, t, v0, p);
    return -2.0 * p * p * r * r * f;
}

double ansatz_residual_charge2(double r, double t, double v0) {
    if (r == 0.0) return 0.0;
    double p;
    const double f = ansatz_value(r, t, v0, p);
    const double r2 = r * r;
    return -2.0 * p * p * r2 * f / (f * f + r2 * r2);
}

double ansatz_residual_yangmills_cleared(double r, double t, double v0) {
    if (r == 0.0) return 0.0;
    double p;
    (void)ansatz_value(r, t, v0, p);
    return -2.0 * p * p * r * r;
}

double ansatz_residual_yangmills(double r, double t, double v0) {
    if (r == 0.0) return 0.0;
    double p;
    const double f = ansatz_value(r, t, v0, p);
    return -2.0 * p * p * r * r / (f + r * r);
}

}  // namespace blowup
