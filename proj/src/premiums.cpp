#include "balducci/premiums.hpp"

#include <cmath>
#include <stdexcept>

#include "balducci/fractional_age.hpp"
#include "balducci/quadrature.hpp"
#include "balducci/special_functions.hpp"

namespace balducci {
namespace {

// One-year death probabilities below this route to the q -> 0 limit of the
// Ei summand; the limit error is O(q), far under the switch tolerance.
constexpr double kQSwitch = 1e-8;
// Below this the closed-form assemblies of the increasing payoff and of the
// second lifetime moment lose ~2 digits per decade of 1/q; switch to the
// exact per-year alternatives (quadrature / power series).
constexpr double kSmallQ = 1e-2;

struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void validate_spec(const MortalityModel& model, const ContractSpec& spec,
                   bool unit_period, int min_m = 1) {
  if (spec.x < model.min_age()) {
    throw std::invalid_argument("contract: issue age below the model's first age");
  }
  if (spec.l < 0) throw std::invalid_argument("contract: negative deferment");
  if (spec.m < min_m) throw std::invalid_argument("contract: moment order too small");
  if (spec.j < 1) throw std::invalid_argument("contract: j must be >= 1");
  if (spec.n1 < 0 || spec.n1 >= spec.j) {
    throw std::invalid_argument("contract: n1 must satisfy 0 <= n1 < j");
  }
  if (spec.n && *spec.n < 1) throw std::invalid_argument("contract: term must be >= 1");
  if (unit_period && (spec.j != 1 || spec.n1 != 0)) {
    throw std::invalid_argument("contract: this payoff requires j = 1, n1 = 0");
  }
}

// Effective term: the stated n, or the years remaining to the terminal /
// truncation age (capped at the last queryable age for open-ended tables).
int resolve_term(const MortalityModel& model, const ContractSpec& spec) {
  if (spec.n) return *spec.n;
  int last = model.omega();
  if (!model.has_terminal_age() && model.max_queryable_age() < last) {
    last = model.max_queryable_age();
  }
  const int n = last - spec.x - spec.l;
  if (n < 1) {
    throw std::invalid_argument("contract: deferment reaches the terminal age");
  }
  return n;
}

// Integral over year k of (k+t)^m nu^{m(k+t)} against the Balducci density,
// i.e. the year's exact contribution to E (T nu^T)^m. delta may be 0.
double year_power_integral(const Probabilities& pr, int k, int m, double delta,
                           double q_tol = 1e-13) {
  if (pr.q == 0.0 || pr.k1px == 0.0) return 0.0;
  const auto f = [&](double t) {
    const double u = k + t;
    const double denom = 1.0 - (1.0 - t) * pr.q;
    return std::pow(u, m) * std::exp(-m * delta * u) * pr.k1px * pr.q / (denom * denom);
  };
  return integrate(f, 0.0, 1.0, q_tol);
}

}  // namespace

InterestEnvironment::InterestEnvironment(double rate) : i(rate) {
  if (!(rate > -1.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("interest rate must be finite and > -1");
  }
  delta = std::log1p(rate);
  nu = 1.0 / (1.0 + rate);
}

MomentResult term_insurance_moment(const MortalityModel& model,
                                   const InterestEnvironment& env,
                                   const ContractSpec& spec) {
  validate_spec(model, spec, /*unit_period=*/true);
  const int n = resolve_term(model, spec);
  const int l = spec.l, m = spec.m;
  MomentResult out;
  out.truncation_age = n;

  const double lp = model.kpx(spec.x, l);
  const double lnp = model.kpx(spec.x, l + n);
  if (env.delta == 0.0) {
    out.value = lp - lnp;
    return out;
  }
  CompensatedSum acc;
  acc.add(std::pow(env.nu, m * l) * lp);
  acc.add(-std::pow(env.nu, static_cast<double>(m) * (l + n)) * lnp);
  for (int k = l; k < l + n; ++k) {
    const Probabilities pr = probabilities(model, spec.x, k);
    if (pr.terminal || pr.p == 0.0) continue;  // zero summand at p = 0
    if (pr.q < kQSwitch) {
      acc.add(std::pow(env.nu, m * k) * (std::pow(env.nu, m) - 1.0) * pr.kpx);
      ++out.limit_branches_used;
      continue;
    }
    acc.add(m * env.delta * std::pow(env.nu, static_cast<double>(m) * (1 + k)) *
            pr.k1px / pr.q * sf::ei_difference_scaled(pr.p, pr.q, m * env.delta));
  }
  out.value = acc.sum;
  return out;
}

MomentResult whole_life_moment(const MortalityModel& model,
                               const InterestEnvironment& env,
                               const ContractSpec& spec) {
  if (spec.n) {
    throw std::invalid_argument("whole-life contract must not carry a term");
  }
  ContractSpec resolved = spec;
  resolved.n = resolve_term(model, spec);
  return term_insurance_moment(model, env, resolved);
}

MomentResult lifetime_moment(const MortalityModel& model, const ContractSpec& spec) {
  validate_spec(model, spec, /*unit_period=*/true, /*min_m=*/0);
  const int n = resolve_term(model, spec);
  const int l = spec.l, m = spec.m;
  MomentResult out;
  out.truncation_age = n;

  const double lp = model.kpx(spec.x, l);
  const double lnp = model.kpx(spec.x, l + n);
  if (m == 0) {
    out.value = lp - lnp;  // window death probability, interpolation-free
    return out;
  }

  CompensatedSum acc;
  if (m <= 2) {
    acc.add(std::pow(static_cast<double>(l), m) * lp);
    acc.add(-std::pow(static_cast<double>(l + n), m) * lnp);
  }
  for (int k = l; k < l + n; ++k) {
    const Probabilities pr = probabilities(model, spec.x, k);
    if (pr.terminal) continue;
    if (pr.p == 0.0) {
      // q = 1: under Balducci the whole year's mass sits at t = 0, and the
      // printed summand vanishes; the boundary terms already carry k^m kpx.
      if (m >= 3) acc.add(std::pow(static_cast<double>(k), m) * pr.kpx);
      continue;
    }
    if (m == 1) {
      // -log p / q = -log1p(-q)/q -> 1 as q -> 0
      const double ratio = pr.q == 0.0 ? 1.0 : -std::log1p(-pr.q) / pr.q;
      acc.add(pr.k1px * ratio);
    } else if (m == 2) {
      double bracket;  // (q + (p - k q) log p) / q^2
      if (pr.q < kSmallQ) {
        // exact power series: sum_{r>=2} q^{r-2} ((1+k)/(r-1) - 1/r)
        CompensatedSum b;
        double qpow = 1.0;
        for (int r = 2; r <= 500; ++r) {
          const double term = qpow * ((1.0 + k) / (r - 1.0) - 1.0 / r);
          b.add(term);
          if (std::abs(term) < 1e-18 * std::abs(b.sum)) break;
          qpow *= pr.q;
        }
        bracket = b.sum;
        if (pr.q != 0.0) ++out.limit_branches_used;
      } else {
        bracket = (pr.q + (pr.p - k * pr.q) * std::log1p(-pr.q)) / (pr.q * pr.q);
      }
      acc.add(2.0 * pr.k1px * bracket);
    } else {
      acc.add(year_power_integral(pr, k, m, 0.0));
    }
  }
  out.value = acc.sum;
  return out;
}

MomentResult increasing_continuous_moment(const MortalityModel& model,
                                          const InterestEnvironment& env,
                                          const ContractSpec& spec) {
  validate_spec(model, spec, /*unit_period=*/true);
  if (env.delta == 0.0) {
    return lifetime_moment(model, spec);  // payoff reduces to T^m
  }
  const int n = resolve_term(model, spec);
  const int l = spec.l, m = spec.m;
  const double nu = env.nu, delta = env.delta;
  MomentResult out;
  out.truncation_age = n;

  // Assembled year by year: the closed-form path carries its share of the
  // telescoping boundary terms, so years may be routed independently.
  CompensatedSum acc;
  for (int k = l; k < l + n; ++k) {
    const Probabilities pr = probabilities(model, spec.x, k);
    if (pr.terminal) continue;
    if (pr.p == 0.0) {
      acc.add(std::pow(static_cast<double>(k), m) * std::pow(nu, m * k) * pr.kpx);
      ++out.limit_branches_used;
      continue;
    }
    if (m >= 3 || pr.q < kSmallQ) {
      // The m <= 2 assemblies amplify rounding by ~1/q^2; the year's exact
      // integral is uniformly accurate and continuous through q = 0.
      acc.add(year_power_integral(pr, k, m, delta));
      if (m <= 2) ++out.limit_branches_used;
      continue;
    }
    // year's share of the telescoped boundary terms
    double year = std::pow(static_cast<double>(k), m) * std::pow(nu, m * k) * pr.kpx -
                  std::pow(k + 1.0, m) * std::pow(nu, static_cast<double>(m) * (k + 1)) * pr.k1px;
    const double q = pr.q;
    if (m == 1) {
      const double eds = sf::ei_difference_scaled(pr.p, q, delta);
      year += -env.i * pr.k1px / q * std::pow(nu, k + 1.0) -
              (1.0 - delta * (1.0 + k) + delta / q) * pr.k1px / q * std::pow(nu, k + 1.0) * eds;
    } else {
      const double eirs = -sf::ei_difference_scaled(pr.p, q, 2.0 * delta);
      const double nu2 = nu * nu;
      const double w = 1.0 + k - 1.0 / q;
      const double nu2k = std::pow(nu, 2.0 * k);
      const double i1 = nu2k / q * ((1.0 - nu2) / delta + 2.0 * w * nu2 * eirs);
      const double i2 =
          nu2k / q *
          ((1.0 - nu2) / q +
           (-1.0 + nu2 + delta * (-2.0 + 4.0 * nu2 + 4.0 * k * (-1.0 + nu2))) / (2.0 * delta) -
           2.0 * delta * w * w * nu2 * eirs);
      year += pr.k1px * (i1 + i2);
    }
    acc.add(year);
  }
  out.value = acc.sum;
  return out;
}

MomentResult annually_increasing_moment(const MortalityModel& model,
                                        const InterestEnvironment& env,
                                        const ContractSpec& spec) {
  validate_spec(model, spec, /*unit_period=*/true);
  const int n = resolve_term(model, spec);
  const int l = spec.l, m = spec.m;
  MomentResult out;
  out.truncation_age = n;

  CompensatedSum acc;
  for (int k = l; k < l + n; ++k) {
    const Probabilities pr = probabilities(model, spec.x, k);
    if (pr.terminal) continue;
    const double lead = std::pow(k + 1.0, m) * std::pow(env.nu, m * k);
    acc.add(pr.kpx * lead * (1.0 - pr.p * std::pow(env.nu, m)));
    if (env.delta == 0.0 || pr.p == 0.0) continue;
    if (pr.q < kQSwitch) {
      // q -> 0 limit of the Ei summand; continuous against the first term
      acc.add(lead * (std::pow(env.nu, m) - 1.0) * pr.k1px);
      ++out.limit_branches_used;
      continue;
    }
    acc.add(env.delta * m * pr.k1px * lead * std::pow(env.nu, static_cast<double>(m)) /
            pr.q * sf::ei_difference_scaled(pr.p, pr.q, m * env.delta));
  }
  out.value = acc.sum;
  return out;
}

MomentResult mthly_insurance_moment(const MortalityModel& model,
                                    const InterestEnvironment& env,
                                    const ContractSpec& spec) {
  validate_spec(model, spec, /*unit_period=*/false);
  const int n = resolve_term(model, spec);
  const int l = spec.l, m = spec.m, j = spec.j, n1 = spec.n1;
  MomentResult out;
  out.truncation_age = n;

  CompensatedSum acc;
  for (int k = l; k < l + n; ++k) {
    for (int d = n1; d < j; ++d) {
      const double mass = subyear_death_probability(model, k, d, j, spec.x);
      if (mass != 0.0) {
        acc.add(std::pow(env.nu, (k + (d + 1.0) / j) * m) * mass);
      }
    }
  }
  if (n1 > 0) {
    const int K = l + n;
    for (int d = 0; d < n1; ++d) {
      const double mass = subyear_death_probability(model, K, d, j, spec.x);
      if (mass != 0.0) {
        acc.add(std::pow(env.nu, (K + (d + 1.0) / j) * m) * mass);
      }
    }
  }
  out.value = acc.sum;
  return out;
}

MomentResult mthly_increasing_moment(const MortalityModel& model,
                                     const InterestEnvironment& env,
                                     const ContractSpec& spec) {
  validate_spec(model, spec, /*unit_period=*/false);
  const int n = resolve_term(model, spec);
  const int l = spec.l, m = spec.m, j = spec.j, n1 = spec.n1;
  const double nu = env.nu, delta = env.delta;
  const double numj = std::pow(nu, static_cast<double>(m) / j);
  MomentResult out;
  out.truncation_age = n;

  CompensatedSum acc;
  auto add_cell = [&](int k, int d, const Probabilities& pr) {
    const double units = std::pow(d + static_cast<double>(j) * k + 1.0, m);
    const double q = pr.q;
    acc.add(units * pr.k1px * std::pow(nu, m * (k + static_cast<double>(d) / j)) *
            (1.0 / (1.0 - (1.0 - static_cast<double>(d) / j) * q) -
             numj / (1.0 - (1.0 - (d + 1.0) / j) * q)));
    if (delta == 0.0) return;
    if (q < kQSwitch) {
      acc.add(-units * pr.k1px * std::pow(nu, m * (k + static_cast<double>(d) / j)) *
              (1.0 - numj));
      ++out.limit_branches_used;
      return;
    }
    acc.add(-delta * m * units * pr.k1px *
            std::pow(nu, static_cast<double>(m) * (1 + k)) / q *
            sf::ei_difference_subyear_scaled(pr.p, q, m * delta, d, j));
  };

  for (int k = l; k < l + n; ++k) {
    const Probabilities pr = probabilities(model, spec.x, k);
    if (pr.terminal) continue;
    if (pr.p == 0.0) {
      // the year's mass sits at t = k: in the window only when n1 = 0
      if (n1 == 0) {
        acc.add(std::pow(static_cast<double>(j) * k + 1.0, m) * std::pow(nu, m * k) * pr.kpx);
        ++out.limit_branches_used;
      }
      continue;
    }
    for (int d = n1; d < j; ++d) add_cell(k, d, pr);
  }
  if (n1 > 0) {
    const int K = l + n;
    const Probabilities pr = probabilities(model, spec.x, K);
    if (!pr.terminal) {
      if (pr.p == 0.0) {
        acc.add(std::pow(static_cast<double>(j) * K + 1.0, m) * std::pow(nu, m * K) * pr.kpx);
        ++out.limit_branches_used;
      } else {
        for (int d = 0; d < n1; ++d) add_cell(K, d, pr);
      }
    }
  }
  out.value = acc.sum;
  return out;
}

MomentResult mthly_mean_payment_time(const MortalityModel& model,
                                     const ContractSpec& spec) {
  validate_spec(model, spec, /*unit_period=*/false);
  if (spec.n1 != 0) {
    throw std::invalid_argument("payment-time moment requires n1 = 0");
  }
  const int n = resolve_term(model, spec);
  const int l = spec.l, m = spec.m, j = spec.j;
  MomentResult out;
  out.truncation_age = n;

  CompensatedSum acc;
  for (int k = l; k < l + n; ++k) {
    for (int d = 0; d < j; ++d) {
      const double mass = subyear_death_probability(model, k, d, j, spec.x);
      if (mass != 0.0) {
        acc.add(std::pow(k + (d + 1.0) / j, m) * mass);
      }
    }
  }
  out.value = acc.sum;
  return out;
}

}  // namespace balducci
