#include "balducci/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "balducci/quadrature.hpp"

namespace balducci {
namespace {

void validate_window(const MortalityModel& model, const ExpectationWindow& w) {
  if (w.x < model.min_age()) {
    throw std::invalid_argument("expectation window: age below the model's first age");
  }
  if (w.l < 0 || w.n < 1) {
    throw std::invalid_argument("expectation window: need l >= 0 and n >= 1");
  }
}

double year_expectation(const MortalityModel& model, FractionalAssumption assumption,
                        const Payoff& payoff, int x, int k,
                        const QuadratureConfig& config) {
  const Probabilities pr = probabilities(model, x, k);
  if (pr.terminal) return 0.0;
  if (pr.p == 0.0 && assumption != FractionalAssumption::kUdd) {
    // whole mass at the year start (reciprocal/geometric interpolation)
    return payoff.g(static_cast<double>(k)) * pr.kpx;
  }
  const auto integrand = [&](double t) {
    double density;
    switch (assumption) {
      case FractionalAssumption::kUdd:
        density = pr.kpx - pr.k1px;
        break;
      case FractionalAssumption::kBalducci: {
        const double denom = 1.0 - (1.0 - t) * pr.q;
        density = pr.k1px * pr.q / (denom * denom);
        break;
      }
      case FractionalAssumption::kConstantForce:
        density = -pr.kpx * std::pow(pr.p, t) * std::log(pr.p);
        break;
      default:
        density = 0.0;
    }
    return payoff.g(k + t) * density;
  };
  const int splits = config.splits_per_year < 1 ? 1 : config.splits_per_year;
  double total = 0.0;
  for (int s = 0; s < splits; ++s) {
    total += integrate(integrand, static_cast<double>(s) / splits,
                       (s + 1.0) / splits, config.abs_tol / splits,
                       config.max_subdivisions);
  }
  return total;
}

// Counter-based uniform stream: every sample index maps to its own draw,
// independent of evaluation order (splitmix64 finalizer).
double uniform_from_counter(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + index * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  // strictly inside (0, 1)
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double quadrature_expectation(const MortalityModel& model,
                              FractionalAssumption assumption,
                              const Payoff& payoff, const ExpectationWindow& window,
                              const QuadratureConfig& config) {
  validate_window(model, window);
  double total = 0.0;
  for (int k = window.l; k < window.l + window.n; ++k) {
    total += year_expectation(model, assumption, payoff, window.x, k, config);
  }
  return total;
}

MonteCarloResult monte_carlo_expectation(const MortalityModel& model,
                                         FractionalAssumption assumption,
                                         const Payoff& payoff,
                                         const ExpectationWindow& window,
                                         std::int64_t samples, std::uint64_t seed,
                                         int threads) {
  validate_window(model, window);
  if (samples < 1) {
    throw std::invalid_argument("monte carlo: need at least one sample");
  }
  int horizon_age = model.omega();
  if (!model.has_terminal_age() && model.max_queryable_age() < horizon_age) {
    horizon_age = model.max_queryable_age();
  }
  const int horizon = horizon_age - window.x;
  if (window.l + window.n > horizon) {
    throw std::out_of_range("monte carlo: window extends past the model horizon");
  }
  // Draws landing in the survival mass beyond the horizon are lifetimes
  // past the window end; they contribute 0 without needing the exact T.
  const double tail_mass =
      model.has_terminal_age() ? 0.0 : model.kpx(window.x, horizon);

  const double lo = window.l;
  const double hi = static_cast<double>(window.l) + window.n;
  const auto sample_value = [&](std::uint64_t index) {
    const double u = uniform_from_counter(seed, index);
    if (u <= tail_mass) return 0.0;
    const double t = sample_lifetime(model, assumption, window.x, u);
    if (t < lo || t >= hi) return 0.0;
    return payoff.g(t);
  };

  // Fixed-size chunks combined in index order: the reduction is identical
  // whichever worker produced each chunk.
  constexpr std::int64_t kChunk = 8192;
  const std::int64_t chunk_count = (samples + kChunk - 1) / kChunk;
  std::vector<double> chunk_sum(chunk_count, 0.0);
  std::vector<double> chunk_sq(chunk_count, 0.0);

  const auto run_chunk = [&](std::int64_t c) {
    const std::int64_t begin = c * kChunk;
    const std::int64_t end = begin + kChunk < samples ? begin + kChunk : samples;
    double s = 0.0, s2 = 0.0;
    for (std::int64_t idx = begin; idx < end; ++idx) {
      const double v = sample_value(static_cast<std::uint64_t>(idx));
      s += v;
      s2 += v * v;
    }
    chunk_sum[c] = s;
    chunk_sq[c] = s2;
  };

  int worker_count = threads > 0 ? threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  if (worker_count < 1) worker_count = 1;
  if (worker_count == 1 || chunk_count == 1) {
    for (std::int64_t c = 0; c < chunk_count; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w) {
      workers.emplace_back([&, w] {
        for (std::int64_t c = w; c < chunk_count; c += worker_count) run_chunk(c);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t c = 0; c < chunk_count; ++c) {
    sum += chunk_sum[c];
    sum_sq += chunk_sq[c];
  }
  MonteCarloResult out;
  out.estimate = sum / static_cast<double>(samples);
  const double var =
      (sum_sq / static_cast<double>(samples) - out.estimate * out.estimate);
  out.std_error = samples > 1 ? std::sqrt(var > 0.0 ? var / (samples - 1.0) : 0.0) : 0.0;
  return out;
}

OrderingResult ordering_check(const MortalityModel& model, const Payoff& payoff,
                              const ExpectationWindow& window,
                              const QuadratureConfig& config) {
  if (payoff.monotonicity == Monotonicity::kUnknown) {
    throw std::invalid_argument("ordering_check needs a monotonicity hint");
  }
  OrderingResult out;
  out.balducci = quadrature_expectation(model, FractionalAssumption::kBalducci,
                                        payoff, window, config);
  out.udd = quadrature_expectation(model, FractionalAssumption::kUdd, payoff,
                                   window, config);
  constexpr double kSlack = 1e-10;
  out.ordering_holds = payoff.monotonicity == Monotonicity::kNonIncreasing
                           ? out.balducci >= out.udd - kSlack
                           : out.balducci <= out.udd + kSlack;
  return out;
}

ContractPayoff contract_payoff(const std::string& kind, double nu,
                               const ContractSpec& spec) {
  if (!spec.n) {
    throw std::invalid_argument("contract_payoff needs a resolved term");
  }
  const int l = spec.l, n = *spec.n, m = spec.m, j = spec.j, n1 = spec.n1;
  ContractPayoff out;
  out.window = {spec.x, l, n};

  if (kind == "level") {
    out.payoff.g = [nu, m](double t) { return std::pow(nu, m * t); };
    return out;
  }
  if (kind == "lifetime") {
    out.payoff.g = [m](double t) { return std::pow(t, m); };
    return out;
  }
  if (kind == "increasing-continuous") {
    out.payoff.g = [nu, m](double t) { return std::pow(t * std::pow(nu, t), m); };
    return out;
  }
  if (kind == "increasing-annual") {
    out.payoff.g = [nu, m](double t) {
      return std::pow((std::floor(t) + 1.0) * std::pow(nu, t), m);
    };
    return out;
  }

  // The j-thly kinds: step payoffs in the period index, zero on the first
  // n1 periods of each year; year l+n contributes its first n1 periods.
  const auto period = [j](double t) {
    const double year = std::floor(t);
    int d = static_cast<int>(std::floor((t - year) * j));
    if (d > j - 1) d = j - 1;
    return d;
  };
  const auto in_window = [l, n, j, n1, period](double t) {
    const int year = static_cast<int>(std::floor(t));
    if (year < l || year > l + n) return false;
    const int d = period(t);
    return year == l + n ? d < n1 : d >= n1;
  };
  out.window.n = n1 > 0 ? n + 1 : n;
  out.config.splits_per_year = j;

  if (kind == "mthly") {
    out.payoff.g = [nu, m, j, in_window, period](double t) {
      if (!in_window(t)) return 0.0;
      const double pay_time = std::floor(t) + (period(t) + 1.0) / j;
      return std::pow(nu, m * pay_time);
    };
    return out;
  }
  if (kind == "mthly-increasing") {
    out.payoff.g = [nu, m, j, in_window, period](double t) {
      if (!in_window(t)) return 0.0;
      const double units = std::floor(t) * j + period(t) + 1.0;
      return std::pow(units * std::pow(nu, t), m);
    };
    return out;
  }
  if (kind == "payment-time") {
    out.payoff.g = [m, j, in_window, period](double t) {
      if (!in_window(t)) return 0.0;
      return std::pow(std::floor(t) + (period(t) + 1.0) / j, m);
    };
    return out;
  }
  throw std::invalid_argument("unknown contract kind: " + kind);
}

}  // namespace balducci
