#pragma once

#include <span>
#include <vector>

#include "guesswork/scgf.hpp"

namespace guesswork {

enum class Segment { linear, convex, infinite, boundary };

const char* segment_name(Segment s);

struct RateValue {
  double value;  // +inf on the infinite segment
  Segment segment;
};

// Convex conjugate of the moment-growth curve: the exponential decay rate of
// P(G = n) along n = e^{kx}. Linear (-x - gamma) up to the turn point, then
// numerically conjugated, +inf beyond the support rate.
class RateFunction {
 public:
  explicit RateFunction(ScgfCurve curve, double alpha_max = 200.0);

  // x in [0, log m]
  RateValue rate_at(double x) const;

  // sup over alpha of x*alpha - lambda(alpha), with no piecewise shortcut;
  // agrees with the closed form on the linear segment
  double numeric_conjugate(double x) const;

  // log of (1/n) e^{-k rate(x)} at x = log(n)/k; -inf where the rate is +inf
  double approx_log_pmf(int k, double log_n) const;

  // log-probability estimate for the n-th most likely word, n = e^{kx}
  double nth_word_log_prob_estimate(int k, double x) const;

  // max over the given alphas of |sup_x {alpha x - rate(x)} - lambda(alpha)|,
  // the sup taken over a 2000-point grid refined inside the bracketing cell
  double biconjugate_max_error(std::span<const double> alphas) const;

  struct CurvePoint {
    double x;
    double value;
    Segment segment;
  };
  // Tabulated rate curve; slope monotonicity is validated before returning.
  std::vector<CurvePoint> rate_curve(double x_min, double x_max, int count) const;

  double gamma() const { return curve_.gamma(); }
  double turn_x() const { return turn_x_; }
  double support_rate() const { return curve_.support_rate(); }
  double alpha_max() const { return alpha_max_; }
  double log_alphabet() const { return log_m_; }
  const ScgfCurve& curve() const { return curve_; }

 private:
  struct SearchResult {
    double value;
    bool hit_boundary;
  };
  SearchResult conjugate_search(double x) const;

  ScgfCurve curve_;
  double alpha_max_;
  double turn_x_;  // turn clamped into [0, support_rate]
  double log_m_;
};

}  // namespace guesswork
