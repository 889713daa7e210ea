#include "balducci/fractional_age.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace balducci {
namespace {

void check_range(const FractionalAge& fa) {
  if (fa.x < 0 || fa.k < 0) {
    throw std::out_of_range("fractional age: x and k must be nonnegative");
  }
  if (!(fa.t >= 0.0) || !(fa.t <= 1.0)) {
    throw std::out_of_range("fractional age: t must lie in [0, 1]");
  }
}

}  // namespace

const char* to_string(FractionalAssumption assumption) {
  switch (assumption) {
    case FractionalAssumption::kUdd: return "udd";
    case FractionalAssumption::kBalducci: return "balducci";
    case FractionalAssumption::kConstantForce: return "constant-force";
  }
  return "?";
}

double survival_fraction(const MortalityModel& model, FractionalAssumption assumption,
                         const FractionalAge& fa) {
  check_range(fa);
  const Probabilities pr = probabilities(model, fa.x, fa.k);
  if (fa.t == 0.0) return pr.kpx;
  if (pr.terminal) return 0.0;
  if (fa.t == 1.0) return pr.k1px;
  switch (assumption) {
    case FractionalAssumption::kUdd:
      return (1.0 - fa.t) * pr.kpx + fa.t * pr.k1px;
    case FractionalAssumption::kBalducci:
      return pr.k1px / (pr.p + fa.t * pr.q);
    case FractionalAssumption::kConstantForce:
      return pr.kpx * std::pow(pr.p, fa.t);
  }
  throw std::logic_error("unreachable assumption");
}

double conditional_density(const MortalityModel& model, FractionalAssumption assumption,
                           const FractionalAge& fa) {
  check_range(fa);
  const Probabilities pr = probabilities(model, fa.x, fa.k);
  if (pr.terminal) return 0.0;
  switch (assumption) {
    case FractionalAssumption::kUdd:
      return pr.kpx - pr.k1px;
    case FractionalAssumption::kBalducci: {
      const double denom = 1.0 - (1.0 - fa.t) * pr.q;
      if (denom <= 0.0) {
        throw std::domain_error("balducci density undefined: q = 1 and t < 1");
      }
      return pr.k1px * pr.q / (denom * denom);
    }
    case FractionalAssumption::kConstantForce: {
      if (pr.p <= 0.0) {
        throw std::domain_error("constant-force density undefined at q = 1");
      }
      return -pr.kpx * std::pow(pr.p, fa.t) * std::log(pr.p);
    }
  }
  throw std::logic_error("unreachable assumption");
}

double force_of_mortality(const MortalityModel& model, FractionalAssumption assumption,
                          const FractionalAge& fa) {
  check_range(fa);
  if (fa.t <= 0.0 || fa.t >= 1.0) {
    throw std::out_of_range("force of mortality is defined on 0 < t < 1 only");
  }
  const Probabilities pr = probabilities(model, fa.x, fa.k);
  if (pr.terminal) {
    throw std::domain_error("force of mortality undefined past the terminal age");
  }
  switch (assumption) {
    case FractionalAssumption::kUdd:
      return pr.q / (1.0 - fa.t * pr.q);
    case FractionalAssumption::kBalducci:
      return pr.q / (1.0 - (1.0 - fa.t) * pr.q);
    case FractionalAssumption::kConstantForce:
      if (pr.p <= 0.0) {
        throw std::domain_error("constant force undefined at q = 1");
      }
      return -std::log(pr.p);
  }
  throw std::logic_error("unreachable assumption");
}

double subyear_death_probability(const MortalityModel& model, int a, int d, int j, int x) {
  if (j < 1 || d < 0 || d > j - 1) {
    throw std::out_of_range("sub-year cell requires 1 <= j and 0 <= d <= j-1");
  }
  const Probabilities pr = probabilities(model, x, a);
  if (pr.terminal) return 0.0;
  const double lo = pr.p + (static_cast<double>(d) / j) * pr.q;
  if (lo <= 0.0) {
    // p = 0, d = 0 (so q = 1): difference the interpolated survival directly.
    const double s_lo = survival_fraction(model, FractionalAssumption::kBalducci,
                                          {x, a, static_cast<double>(d) / j});
    const double s_hi = survival_fraction(model, FractionalAssumption::kBalducci,
                                          {x, a, (d + 1.0) / j});
    return s_lo - s_hi;
  }
  const double hi = pr.p + ((d + 1.0) / j) * pr.q;
  return pr.k1px * pr.q / (j * lo * hi);
}

double sample_lifetime(const MortalityModel& model, FractionalAssumption assumption,
                       int x, double u) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("sample_lifetime requires u in (0, 1)");
  }
  int last_age = model.omega();
  if (!model.has_terminal_age() && model.max_queryable_age() < last_age) {
    last_age = model.max_queryable_age();
  }
  const int horizon = last_age - x;
  if (horizon <= 0) {
    throw std::domain_error("sample_lifetime: age at or beyond omega");
  }
  // Locate the death year: smallest k with {k+1}p_x < u.
  int lo = 0;
  int hi = horizon;  // kpx(x, hi) is 0 or below truncation mass
  const double tail = model.has_terminal_age() ? 0.0 : model.kpx(x, horizon);
  if (u <= tail) {
    throw std::domain_error("sample_lifetime: u below the survival mass beyond truncation");
  }
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (model.kpx(x, mid + 1) < u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const int k = lo;
  const Probabilities pr = probabilities(model, x, k);
  if (u >= pr.kpx) return static_cast<double>(k);
  if (pr.q <= 0.0) {
    // No mass inside the year; u must equal an endpoint, handled above.
    return static_cast<double>(k);
  }
  double t = 0.0;
  switch (assumption) {
    case FractionalAssumption::kUdd:
      t = (pr.kpx - u) / (pr.kpx - pr.k1px);
      break;
    case FractionalAssumption::kBalducci:
      t = (pr.k1px / u - pr.p) / pr.q;
      break;
    case FractionalAssumption::kConstantForce:
      t = std::log(u / pr.kpx) / std::log(pr.p);
      break;
  }
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return k + t;
}

}  // namespace balducci
