#ifndef BALDUCCI_PREMIUMS_HPP
#define BALDUCCI_PREMIUMS_HPP

#include <optional>

#include "balducci/mortality.hpp"

namespace balducci {

// Annual effective rate i > -1 with the derived force of interest and
// discount factor.
struct InterestEnvironment {
  double i = 0.0;
  double delta = 0.0;  // log(1 + i)
  double nu = 1.0;     // 1 / (1 + i)

  explicit InterestEnvironment(double rate);
};

// Contract window and payoff parameters. T falls in the deferment window
// starting l years (plus n1 periods of length 1/j) after issue and running
// n years; n = nullopt means "until the terminal or truncation age".
struct ContractSpec {
  int x = 0;                  // issue age
  int l = 0;                  // deferment, whole years
  std::optional<int> n;       // term in years; nullopt = to omega
  int m = 1;                  // moment order
  int j = 1;                  // periods per year
  int n1 = 0;                 // sub-year deferment periods, 0 <= n1 < j
};

struct MomentResult {
  double value = 0.0;
  int truncation_age = 0;        // effective term in years
  int limit_branches_used = 0;   // summands evaluated via a limit/quadrature route
};

// E[nu^{mT} 1{l <= T < l+n}]: the m-th moment of the discounted level
// payoff paid at the moment of death, Balducci interpolation.
// Requires j = 1, n1 = 0.
MomentResult term_insurance_moment(const MortalityModel& model,
                                   const InterestEnvironment& env,
                                   const ContractSpec& spec);

// term_insurance_moment with the term extended to the terminal age (or the
// truncation age for laws without one); spec.n must be empty.
MomentResult whole_life_moment(const MortalityModel& model,
                               const InterestEnvironment& env,
                               const ContractSpec& spec);

// E[T^m 1{l <= T < l+n}], undiscounted. m = 0 gives the window death
// probability; m = 1 and 2 use closed forms, m >= 3 per-year quadrature.
MomentResult lifetime_moment(const MortalityModel& model, const ContractSpec& spec);

// E[(T nu^T)^m 1{window}]: uniformly increasing payoff. Closed forms for
// m in {1, 2}; per-year quadrature for m >= 3 and for years whose q is
// small enough that the closed-form assembly loses precision.
MomentResult increasing_continuous_moment(const MortalityModel& model,
                                          const InterestEnvironment& env,
                                          const ContractSpec& spec);

// E[([T+1] nu^T)^m 1{window}]: payoff growing by one each whole year.
MomentResult annually_increasing_moment(const MortalityModel& model,
                                        const InterestEnvironment& env,
                                        const ContractSpec& spec);

// E[(nu^{([Tj]+1)/j})^m] over the j-thly window: payment at the end of the
// 1/j-th period of death. Built from sub-year death masses, no Ei terms.
// The window excludes the first n1 sub-periods of every covered year and
// adds the first n1 sub-periods of year l+n.
MomentResult mthly_insurance_moment(const MortalityModel& model,
                                    const InterestEnvironment& env,
                                    const ContractSpec& spec);

// E[([jT+1] nu^T)^m] over the same j-thly window: payoff growing by one
// each 1/j-th period, paid at the moment of death.
MomentResult mthly_increasing_moment(const MortalityModel& model,
                                     const InterestEnvironment& env,
                                     const ContractSpec& spec);

// E[(([Tj]+1)/j)^m] over the window: undiscounted moment of the payment
// time rounded up to the next 1/j-th period. Requires n1 = 0.
MomentResult mthly_mean_payment_time(const MortalityModel& model,
                                     const ContractSpec& spec);

}  // namespace balducci

#endif
