#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

// Probabilities and counts are carried as natural logs throughout; log(0) is
// -inf and never NaN.

namespace guesswork {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// log(e^a + e^b)
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(e^a - e^b); requires a >= b, returns -inf when equal
inline double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  if (b >= a) return kNegInf;
  return a + std::log(-std::expm1(b - a));
}

inline double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Signed quantity carried as sign * e^log_mag; an exact zero has sign 0.
struct SignedLog {
  int sign = 0;
  double log_mag = kNegInf;

  static SignedLog positive(double lm) { return lm == kNegInf ? SignedLog{} : SignedLog{1, lm}; }
  static SignedLog negative(double lm) { return lm == kNegInf ? SignedLog{} : SignedLog{-1, lm}; }

  SignedLog& accumulate(SignedLog o) {
    if (o.sign == 0) return *this;
    if (sign == 0) { *this = o; return *this; }
    if (sign == o.sign) {
      log_mag = log_add(log_mag, o.log_mag);
    } else if (log_mag > o.log_mag) {
      log_mag = log_sub(log_mag, o.log_mag);
    } else if (o.log_mag > log_mag) {
      log_mag = log_sub(o.log_mag, log_mag);
      sign = o.sign;
    } else {
      sign = 0;
      log_mag = kNegInf;
    }
    if (log_mag == kNegInf) sign = 0;
    return *this;
  }
};

}  // namespace guesswork
