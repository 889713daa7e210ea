#ifndef BALDUCCI_MORTALITY_HPP
#define BALDUCCI_MORTALITY_HPP

#include <string>
#include <utility>
#include <vector>

namespace balducci {

// One-year and cumulative survival probabilities at integer age x + k.
struct Probabilities {
  double p = 0.0;     // p_{x+k}
  double q = 0.0;     // q_{x+k} = 1 - p
  double kpx = 0.0;   // k-year survival from x
  double k1px = 0.0;  // (k+1)-year survival from x
  bool terminal = false;  // s(x+k) = 0: p reported as 0, q as 1
};

// Common probability-query surface for tables and parametric laws.
// Models are immutable after construction; concurrent reads are safe.
class MortalityModel {
 public:
  virtual ~MortalityModel() = default;

  // k-year survival probability from integer age x, s(x+k)/s(x).
  // Requires s(x) > 0 and x, x+k within the queryable range.
  virtual double kpx(int x, int k) const = 0;

  // Terminal age (first age with zero survival) or the truncation age
  // for laws without one.
  virtual int omega() const = 0;

  // True when omega() is a genuine zero of the survival function rather
  // than a truncation hint.
  virtual bool has_terminal_age() const = 0;

  // Smallest age the model is defined at.
  virtual int min_age() const = 0;

  // Largest age a for which s(a) can be evaluated.
  virtual int max_queryable_age() const = 0;
};

Probabilities probabilities(const MortalityModel& model, int x, int k);

// Integer-age survivor counts l_x. Validated on construction: ages
// contiguous, l non-increasing, nonnegative, no resurrection after 0.
class MortalityTable final : public MortalityModel {
 public:
  double kpx(int x, int k) const override;
  int omega() const override;
  bool has_terminal_age() const override;
  int min_age() const override { return base_age_; }
  int max_queryable_age() const override;

  int base_age() const { return base_age_; }
  const std::vector<double>& survivors() const { return survivors_; }

  // Survival count at an absolute age (0 beyond a terminal zero).
  double survivor_count(int age) const;

  // Rows in the same (age, l) form load_table accepts; round-trips losslessly.
  std::vector<std::pair<int, double>> rows() const;

 private:
  friend MortalityTable load_table(const std::vector<std::pair<int, double>>& rows);
  MortalityTable() = default;

  int base_age_ = 0;
  std::vector<double> survivors_;
  int first_zero_offset_ = -1;  // -1 when no stored entry is zero
};

MortalityTable load_table(const std::vector<std::pair<int, double>>& rows);

// Discrete Weibull survival law: kpx = exp{(x/alpha)^beta - ((k+x)/alpha)^beta}.
class WeibullLaw final : public MortalityModel {
 public:
  // omega_hint <= 0 selects the default truncation: the smallest age where
  // survival from 0 drops below 1e-16.
  WeibullLaw(double alpha, double beta, int omega_hint = 0);

  double kpx(int x, int k) const override;
  int omega() const override { return omega_; }
  bool has_terminal_age() const override { return false; }
  int min_age() const override { return 0; }
  int max_queryable_age() const override;

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

 private:
  double alpha_;
  double beta_;
  int omega_;
};

}  // namespace balducci

#endif
