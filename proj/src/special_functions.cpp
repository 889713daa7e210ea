#include "balducci/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace balducci::sf {
namespace {

constexpr int kMaxSeriesTerms = 500;
constexpr int kMaxLentzIterations = 2000;
// Series switch: E1's alternating series cancels catastrophically for
// large z, so it is only used up to 1; the positive-argument Ei series
// has no cancellation and runs up to 40, above which the asymptotic
// expansion is already at machine precision.
constexpr double kE1SeriesCutoff = 1.0;
constexpr double kEiSeriesCutoff = 40.0;

void require_positive_finite(double z, const char* name) {
  if (!std::isfinite(z) || z <= 0.0) {
    throw std::domain_error(std::string(name) + " requires a positive finite argument");
  }
}

// Kahan-compensated accumulator.
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

// sum_{k>=1} x^k / (k k!) for x = -z (E1) or x = y (Ei), compensated.
double power_over_k_factorial_series(double x) {
  CompensatedSum acc;
  double pow_term = 1.0;  // x^k / k!
  for (int k = 1; k <= kMaxSeriesTerms; ++k) {
    pow_term *= x / k;
    const double term = pow_term / k;
    acc.add(term);
    if (std::abs(term) < 1e-18 * std::abs(acc.sum)) {
      return acc.sum;
    }
  }
  throw std::runtime_error("exponential integral series failed to converge in 500 terms");
}

// e^z E1(z) via the standard continued fraction
//   E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))),
// evaluated with the modified Lentz algorithm. Valid for z >~ 1.
double e1_scaled_cf(double z) {
  const double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxLentzIterations; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (d == 0.0) d = tiny;
    c = b + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= 1e-16) {
      return h;
    }
  }
  throw std::runtime_error("E1 continued fraction failed to converge");
}

double e1_series(double z) {
  // E1(z) = -gamma - log z - sum (-1)^k z^k / (k k!)
  return -kEulerGamma - std::log(z) - power_over_k_factorial_series(-z);
}

double ei_positive_series(double y) {
  // Ei(y) = gamma + log y + sum y^k / (k k!)
  return kEulerGamma + std::log(y) + power_over_k_factorial_series(y);
}

// e^{-y} Ei(y) for y > kEiSeriesCutoff: asymptotic sum_{k>=0} k!/y^{k+1},
// truncated at the smallest term.
double ei_scaled_asymptotic(double y) {
  double sum = 0.0;
  double term = 1.0 / y;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    sum += term;
    const double next = term * (k + 1.0) / y;
    if (next >= term || next < 1e-18 * std::abs(sum)) {
      return sum + (next < term ? next : 0.0);
    }
    term = next;
  }
  throw std::runtime_error("Ei asymptotic expansion failed to converge");
}

// e^z E1(z), z > 0, any magnitude.
double e1_scaled(double z) {
  if (z <= kE1SeriesCutoff) {
    return std::exp(z) * e1_series(z);
  }
  return e1_scaled_cf(z);
}

}  // namespace

double exp_integral_e1(double z) {
  require_positive_finite(z, "exp_integral_e1");
  if (z <= kE1SeriesCutoff) {
    return e1_series(z);
  }
  // exp(-z) underflows to 0 for z > ~745; E1(z) < DBL_MIN well before that.
  return std::exp(-z) * e1_scaled_cf(z);
}

double exp_integral_ei(double y) {
  if (!std::isfinite(y) || y == 0.0) {
    throw std::domain_error("exp_integral_ei requires a finite nonzero argument");
  }
  if (y < 0.0) {
    return -exp_integral_e1(-y);
  }
  if (y <= kEiSeriesCutoff) {
    return ei_positive_series(y);
  }
  return std::exp(y) * ei_scaled_asymptotic(y);
}

double exp_integral_ei_scaled(double y) {
  if (!std::isfinite(y) || y == 0.0) {
    throw std::domain_error("exp_integral_ei_scaled requires a finite nonzero argument");
  }
  if (y < 0.0) {
    return -e1_scaled(-y);
  }
  if (y <= kEiSeriesCutoff) {
    return std::exp(-y) * ei_positive_series(y);
  }
  return ei_scaled_asymptotic(y);
}

namespace {

void require_pq(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) {
    throw std::domain_error("ei_difference requires p > 0 and q > 0");
  }
  if (std::abs(p + q - 1.0) > 1e-12) {
    throw std::domain_error("ei_difference requires p + q = 1");
  }
}

void require_dj(int d, int j) {
  if (j < 1 || d < 0 || d > j - 1) {
    throw std::domain_error("sub-year indices require 1 <= j and 0 <= d <= j-1");
  }
}

}  // namespace

double ei_difference(double p, double q, double delta) {
  require_pq(p, q);
  if (delta == 0.0) {
    throw std::domain_error("ei_difference requires delta != 0");
  }
  return exp_integral_ei(-delta * p / q) - exp_integral_ei(-delta / q);
}

double ei_difference_subyear(double p, double q, double delta, int d, int j) {
  require_pq(p, q);
  require_dj(d, j);
  if (delta == 0.0) {
    throw std::domain_error("ei_difference_subyear requires delta != 0");
  }
  const double base = p / q;
  return exp_integral_ei(-delta * (base + (d + 1.0) / j)) -
         exp_integral_ei(-delta * (base + static_cast<double>(d) / j));
}

double ei_difference_scaled(double p, double q, double delta) {
  require_pq(p, q);
  if (delta == 0.0) {
    throw std::domain_error("ei_difference_scaled requires delta != 0");
  }
  // e^{delta/q} Ei(-delta p/q) = e^{delta} * [e^{delta p/q} Ei(-delta p/q)]
  return std::exp(delta) * exp_integral_ei_scaled(-delta * p / q) -
         exp_integral_ei_scaled(-delta / q);
}

double ei_difference_subyear_scaled(double p, double q, double delta, int d,
                                    int j) {
  require_pq(p, q);
  require_dj(d, j);
  if (delta == 0.0) {
    throw std::domain_error("ei_difference_subyear_scaled requires delta != 0");
  }
  // e^{delta/q} Ei(-delta(p/q + c)) = e^{delta(1-c)} * scaledEi(-delta(p/q + c))
  const double base = p / q;
  const double c_hi = (d + 1.0) / j;
  const double c_lo = static_cast<double>(d) / j;
  return std::exp(delta * (1.0 - c_hi)) * exp_integral_ei_scaled(-delta * (base + c_hi)) -
         std::exp(delta * (1.0 - c_lo)) * exp_integral_ei_scaled(-delta * (base + c_lo));
}

}  // namespace balducci::sf
