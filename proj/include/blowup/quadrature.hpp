#ifndef BLOWUP_QUADRATURE_HPP
#define BLOWUP_QUADRATURE_HPP

#include <functional>

#include "blowup/types.hpp"

namespace blowup {

// Adaptive Simpson integration of f over [a, b] with recursive interval
// halving and Richardson acceptance (15x the local tolerance rule).
// Throws QuadratureError if the recursion depth is exhausted before the
// requested relative tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-8, int max_depth = 60);

}  // namespace blowup

#endif
