#ifndef BLOWUP_MODELS_HPP
#define BLOWUP_MODELS_HPP

#include <span>

#include "blowup/types.hpp"

namespace blowup {

// Conservative second-order discretisation of r^-n d/dr (r^n d/dr) applied to
// the field at interior index i:
//   r^-n [ (r+dr/2)^n (f_{i+1}-f_i) - (r-dr/2)^n (f_i-f_{i-1}) ] / dr^2.
// Annihilates constants exactly. Requires 1 <= i <= n_points-2.
double conservative_radial_operator(const RadialField& field, int n, int i);

// Right-hand side of d^2f/dt^2 = ... for each model, evaluated pointwise at
// interior index i. dfdt holds the current time derivative on the same grid.
// Throws SingularEvaluationError when the model denominator underflows.
double rhs_charge1(const RadialField& field, std::span<const double> dfdt, int i);
double rhs_charge2(const RadialField& field, std::span<const double> dfdt, int i);
double rhs_yangmills(const RadialField& field, std::span<const double> dfdt, int i);

double model_rhs(ModelKind model, const RadialField& field, std::span<const double> dfdt, int i);

// Residual d^2f/dt^2 - RHS of the parabola-in-time ansatz
//   f(r,t) = -(v0^2/8) r^2 + (v0^2/4) (t - t0)^2,  t0 = 2/|v0|,
// for the charge-two and Yang-Mills equations, evaluated with closed-form
// expressions that avoid catastrophic cancellation. Multiplying by the model
// denominator (f^2+r^4, resp. f+r^2) clears it to a polynomial:
//   charge-two: v0^6 r^4/64 - (v0^6/32) r^2 (t-t0)^2
//   Yang-Mills: -(v0^4/8) r^2
double ansatz_residual_charge2(double r, double t, double v0);
double ansatz_residual_yangmills(double r, double t, double v0);

// Same residuals multiplied through by the model denominator.
double ansatz_residual_charge2_cleared(double r, double t, double v0);
double ansatz_residual_yangmills_cleared(double r, double t, double v0);

}  // namespace blowup

#endif
