#include "blowup/quadrature.hpp"

#include <cmath>

namespace blowup {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * abs_tol) return left + right + delta / 15.0;
    if (depth <= 0) throw QuadratureError(a, b);
    return recurse(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1) +
           recurse(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol,
                        int max_depth) {
    if (!(rel_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    if (max_depth < 1) throw DomainError("quadrature depth must be positive");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson(fa, fm, fb, b - a);
    const double scale = std::max({std::abs(whole), std::abs(b - a) * std::abs(fm), 1e-300});
    return recurse(f, a, b, fa, fm, fb, whole, rel_tol * scale, max_depth);
}

}  // namespace blowup
