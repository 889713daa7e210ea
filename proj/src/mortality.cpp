#include "balducci/mortality.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace balducci {

Probabilities probabilities(const MortalityModel& model, int x, int k) {
  if (k < 0) {
    throw std::out_of_range("probabilities: k must be nonnegative");
  }
  Probabilities out;
  out.kpx = model.kpx(x, k);
  if (out.kpx <= 0.0) {
    // s(x+k) = 0: the year contributes nothing.
    out.terminal = true;
    out.p = 0.0;
    out.q = 1.0;
    out.k1px = 0.0;
    return out;
  }
  out.k1px = model.kpx(x, k + 1);
  out.p = out.k1px / out.kpx;
  out.q = 1.0 - out.p;
  out.terminal = false;
  return out;
}

// ---------------------------------------------------------------------------
// MortalityTable

MortalityTable load_table(const std::vector<std::pair<int, double>>& rows) {
  if (rows.empty()) {
    throw std::invalid_argument("mortality table: no rows");
  }
  MortalityTable table;
  table.base_age_ = rows.front().first;
  if (table.base_age_ < 0) {
    throw std::invalid_argument("mortality table: negative base age");
  }
  table.survivors_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [age, l] = rows[i];
    if (age != table.base_age_ + static_cast<int>(i)) {
      throw std::invalid_argument("mortality table: ages must be contiguous ascending, row " +
                                  std::to_string(i + 1));
    }
    if (!std::isfinite(l) || l < 0.0) {
      throw std::invalid_argument("mortality table: survivor count must be finite and >= 0, row " +
                                  std::to_string(i + 1));
    }
    if (i > 0 && l > table.survivors_.back()) {
      throw std::invalid_argument("mortality table: increasing survivor count at age " +
                                  std::to_string(age));
    }
    if (table.first_zero_offset_ >= 0 && l > 0.0) {
      throw std::invalid_argument("mortality table: survivors after a zero entry at age " +
                                  std::to_string(age));
    }
    if (l == 0.0 && table.first_zero_offset_ < 0) {
      table.first_zero_offset_ = static_cast<int>(i);
    }
    table.survivors_.push_back(l);
  }
  if (table.survivors_.front() <= 0.0) {
    throw std::invalid_argument("mortality table: l at the base age must be positive");
  }
  return table;
}

double MortalityTable::survivor_count(int age) const {
  const int offset = age - base_age_;
  if (offset < 0) {
    throw std::out_of_range("mortality table: age " + std::to_string(age) +
                            " below base age " + std::to_string(base_age_));
  }
  if (offset < static_cast<int>(survivors_.size())) {
    return survivors_[offset];
  }
  if (first_zero_offset_ >= 0) {
    return 0.0;  // survival stays zero past a terminal entry
  }
  throw std::out_of_range("mortality table: age " + std::to_string(age) +
                          " beyond the last stored age");
}

double MortalityTable::kpx(int x, int k) const {
  const double sx = survivor_count(x);
  if (sx <= 0.0) {
    throw std::domain_error("mortality table: conditioning age " + std::to_string(x) +
                            " has zero survivors");
  }
  return survivor_count(x + k) / sx;
}

int MortalityTable::omega() const {
  if (first_zero_offset_ >= 0) {
    return base_age_ + first_zero_offset_;
  }
  return base_age_ + static_cast<int>(survivors_.size());
}

bool MortalityTable::has_terminal_age() const { return first_zero_offset_ >= 0; }

int MortalityTable::max_queryable_age() const {
  if (first_zero_offset_ >= 0) {
    return std::numeric_limits<int>::max();
  }
  return base_age_ + static_cast<int>(survivors_.size()) - 1;
}

std::vector<std::pair<int, double>> MortalityTable::rows() const {
  std::vector<std::pair<int, double>> out;
  out.reserve(survivors_.size());
  for (std::size_t i = 0; i < survivors_.size(); ++i) {
    out.emplace_back(base_age_ + static_cast<int>(i), survivors_[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// WeibullLaw

WeibullLaw::WeibullLaw(double alpha, double beta, int omega_hint)
    : alpha_(alpha), beta_(beta), omega_(omega_hint) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("weibull law: alpha and beta must be positive");
  }
  if (omega_ <= 0) {
    int k = 1;
    while (kpx(0, k) >= 1e-16) {
      ++k;
      if (k > 1000000) {
        throw std::invalid_argument("weibull law: survival never drops below 1e-16");
      }
    }
    omega_ = k;
  }
}

double WeibullLaw::kpx(int x, int k) const {
  if (x < 0 || k < 0) {
    throw std::out_of_range("weibull law: negative age or horizon");
  }
  const double from = std::pow(x / alpha_, beta_);
  const double to = std::pow((x + k) / alpha_, beta_);
  return std::exp(from - to);
}

int WeibullLaw::max_queryable_age() const {
  return std::numeric_limits<int>::max();
}

}  // namespace balducci
