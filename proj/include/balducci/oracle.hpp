#ifndef BALDUCCI_ORACLE_HPP
#define BALDUCCI_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "balducci/fractional_age.hpp"
#include "balducci/mortality.hpp"
#include "balducci/premiums.hpp"

namespace balducci {

enum class Monotonicity { kNonIncreasing, kNonDecreasing, kUnknown };

// Payoff g(t) of the future lifetime; the hint powers ordering_check.
struct Payoff {
  std::function<double(double)> g;
  Monotonicity monotonicity = Monotonicity::kUnknown;
};

// Issue age plus the covered whole years [l, l+n). Sub-year windows are
// expressed by zeroing g outside the covered periods (set splits_per_year
// to the period count so the integrator splits at the steps).
struct ExpectationWindow {
  int x = 0;
  int l = 0;
  int n = 1;
};

struct QuadratureConfig {
  double abs_tol = 1e-12;   // per year
  int max_subdivisions = 60;
  int splits_per_year = 1;  // initial split count inside each year
};

// E[g(T) 1{l <= T < l+n}] by year-by-year adaptive integration of g against
// the conditional density, splitting at integer ages (the density jumps
// there). Years with q = 1 place their whole mass at the year start under
// Balducci and constant force; that atom is added explicitly.
double quadrature_expectation(const MortalityModel& model,
                              FractionalAssumption assumption,
                              const Payoff& payoff, const ExpectationWindow& window,
                              const QuadratureConfig& config = {});

struct MonteCarloResult {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Inverse-CDF Monte Carlo estimate of the same expectation. Each sample
// index owns a counter-based random stream, and partial sums are combined
// in fixed chunk order, so the result is bit-identical for any thread
// count. threads = 0 picks the hardware concurrency.
MonteCarloResult monte_carlo_expectation(const MortalityModel& model,
                                         FractionalAssumption assumption,
                                         const Payoff& payoff,
                                         const ExpectationWindow& window,
                                         std::int64_t samples, std::uint64_t seed,
                                         int threads = 0);

struct OrderingResult {
  double balducci = 0.0;
  double udd = 0.0;
  bool ordering_holds = false;
};

// Compares E g(T) under the two interpolations by quadrature. For
// non-increasing g the Balducci value is never smaller than the UDD value;
// for non-decreasing g never larger. 1e-10 slack.
OrderingResult ordering_check(const MortalityModel& model, const Payoff& payoff,
                              const ExpectationWindow& window,
                              const QuadratureConfig& config = {});

struct ContractPayoff {
  Payoff payoff;
  ExpectationWindow window;
  QuadratureConfig config;
};

// Builds the payoff g(T), window and integrator settings matching a
// closed-form contract, for independent cross-checks. Kinds: level,
// lifetime, increasing-continuous, increasing-annual, mthly,
// mthly-increasing, payment-time. spec.n must be resolved. The j-thly
// kinds cover the sub-periods d >= n1 of every year plus the first n1
// sub-periods of year l+n, matching the closed forms.
ContractPayoff contract_payoff(const std::string& kind, double nu,
                               const ContractSpec& spec);

}  // namespace balducci

#endif
