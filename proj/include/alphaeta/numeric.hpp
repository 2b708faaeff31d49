#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace alphaeta {

inline constexpr double kPi = std::numbers::pi;

/// Raised for violated preconditions on user-supplied inputs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exact enumeration would exceed its configured state cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

/// Upper tail of the standard normal.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Wraps an angle into [0, 2pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t >= 2.0 * kPi) t = 0.0;
  return t;
}

/// Signed circular difference a - b wrapped into [-pi, pi).
inline double angle_diff(double a, double b) {
  double d = wrap_angle(a - b);
  return d >= kPi ? d - 2.0 * kPi : d;
}

inline bool is_power_of_two(unsigned long long v) { return v != 0 && (v & (v - 1)) == 0; }

inline unsigned log2_exact(unsigned long long v) {
  require(is_power_of_two(v), "log2_exact: " + std::to_string(v) + " is not a power of two");
  unsigned r = 0;
  while ((1ULL << r) < v) ++r;
  return r;
}

/// -p log2 p with the 0 log 0 = 0 convention.
inline double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

/// Binomial standard error of a proportion estimate.
inline double binomial_sigma(double p, double trials) {
  return std::sqrt(p * (1.0 - p) / trials);
}

}  // namespace alphaeta
