#ifndef BALDUCCI_FRACTIONAL_AGE_HPP
#define BALDUCCI_FRACTIONAL_AGE_HPP

#include "balducci/mortality.hpp"

namespace balducci {

enum class FractionalAssumption {
  kUdd,            // s linear within each year
  kBalducci,       // 1/s linear within each year
  kConstantForce,  // s geometric within each year
};

const char* to_string(FractionalAssumption assumption);

// Fractional age x + k + t with x, k integers and t in [0, 1].
struct FractionalAge {
  int x = 0;
  int k = 0;
  double t = 0.0;
};

// Conditional survival to the fractional age, {k+t}p_x, under the chosen
// interpolation. All assumptions agree at t = 0 and t = 1.
double survival_fraction(const MortalityModel& model, FractionalAssumption assumption,
                         const FractionalAge& fa);

// Conditional density f_x(k+t) of the future lifetime (per year).
// Constant in t under UDD.
double conditional_density(const MortalityModel& model, FractionalAssumption assumption,
                           const FractionalAge& fa);

// Force of mortality at the fractional age; defined on 0 < t < 1 only.
double force_of_mortality(const MortalityModel& model, FractionalAssumption assumption,
                          const FractionalAge& fa);

// {a+d/j}p_x - {a+(d+1)/j}p_x under Balducci, via the closed form
//   {a+1}p_x q_{x+a} / (j (p + d/j q)(p + (d+1)/j q)).
// The degenerate cell (p = 0, d = 0) falls back to direct differencing.
double subyear_death_probability(const MortalityModel& model, int a, int d, int j, int x);

// Inverse-CDF lifetime sample: returns T with P(T >= s) = survival_fraction
// at s, deterministic in u. The within-year fraction is inverted in closed
// form for each assumption.
double sample_lifetime(const MortalityModel& model, FractionalAssumption assumption,
                       int x, double u);

}  // namespace balducci

#endif
