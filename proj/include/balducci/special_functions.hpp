#ifndef BALDUCCI_SPECIAL_FUNCTIONS_HPP
#define BALDUCCI_SPECIAL_FUNCTIONS_HPP

namespace balducci::sf {

// Euler-Mascheroni constant, 20 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

// E1(z) = -gamma - log z - sum (-1)^k z^k / (k k!), z > 0.
// Series for z <= 1, continued fraction above. Underflows to 0 for very
// large z. Throws std::domain_error for z <= 0 or non-finite z.
double exp_integral_e1(double z);

// Principal-value exponential integral Ei(y), y != 0.
// Ei(-z) = -E1(z) for z > 0 (same code path, bit-identical).
double exp_integral_ei(double y);

// e^{-y} Ei(y). Well-defined for any finite y != 0, including |y| far
// beyond the overflow range of Ei itself.
double exp_integral_ei_scaled(double y);

// Ei_k(delta) = Ei(-delta p/q) - Ei(-delta/q), the whole-year difference
// term. Requires p, q > 0, p + q = 1, delta != 0.
double ei_difference(double p, double q, double delta);

// Ei_k(delta, d, j) = Ei(-delta(p/q + (d+1)/j)) - Ei(-delta(p/q + d/j)),
// the sub-year difference. (d, j) = (0, 1) equals -ei_difference.
double ei_difference_subyear(double p, double q, double delta, int d, int j);

// e^{delta/q} * Ei_k(delta). Finite for arbitrarily small q, where the
// factors overflow/underflow separately.
double ei_difference_scaled(double p, double q, double delta);

// e^{delta/q} * Ei_k(delta, d, j).
double ei_difference_subyear_scaled(double p, double q, double delta, int d,
                                    int j);

}  // namespace balducci::sf

#endif
