#ifndef BALDUCCI_QUADRATURE_HPP
#define BALDUCCI_QUADRATURE_HPP

#include <functional>

namespace balducci {

// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b] to the given
// absolute tolerance. Deterministic: intervals are refined worst-first.
// Throws std::runtime_error when the tolerance is not met within
// max_subdivisions interval splits.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_subdivisions = 60);

}  // namespace balducci

#endif
