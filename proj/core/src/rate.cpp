#include "guesswork/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "guesswork/errors.hpp"
#include "guesswork/logspace.hpp"

namespace guesswork {
namespace {

// conjugation runs over alpha > -1; below the floor the curve is flat at gamma
constexpr double kAlphaFloor = -1.0 + 1e-12;
constexpr double kAlphaCap = 1e6;
constexpr double kInvPhi = 0.6180339887498949;

// Maximizes f on [a, b]. Returns {argmax, max} over every sampled point;
// endpoints are sampled explicitly because suprema can sit on them.
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, double width_tol,
                                     int max_iters) {
  double best_x = a;
  double best_f = f(a);
  double fb = f(b);
  if (fb > best_f) {
    best_x = b;
    best_f = fb;
  }
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iters && (b - a) > width_tol; ++it) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    }
  }
  if (fc > best_f) {
    best_x = c;
    best_f = fc;
  }
  if (fd > best_f) {
    best_x = d;
    best_f = fd;
  }
  return {best_x, best_f};
}

}  // namespace

const char* segment_name(Segment s) {
  switch (s) {
    case Segment::linear:
      return "linear";
    case Segment::convex:
      return "convex";
    case Segment::infinite:
      return "infinite";
    case Segment::boundary:
      return "boundary";
  }
  return "unknown";
}

RateFunction::RateFunction(ScgfCurve curve, double alpha_max)
    : curve_(std::move(curve)), alpha_max_(alpha_max) {
  if (!(alpha_max > 0.0)) throw SpecError("alpha_max must be positive");
  turn_x_ = std::clamp(curve_.turn().value, 0.0, curve_.support_rate());
  log_m_ = std::log(static_cast<double>(curve_.alphabet_size()));
}

RateFunction::SearchResult RateFunction::conjugate_search(double x) const {
  auto g = [&](double alpha) { return x * alpha - curve_.lambda(alpha); };
  double hi = alpha_max_;
  for (;;) {
    double width_tol = 1e-8 * std::max(1.0, hi);
    auto [arg, val] = golden_max(g, kAlphaFloor, hi, width_tol, 200);
    // alpha = 0 yields 0 exactly, so the sup is never negative
    val = std::max(val, 0.0);
    double margin = 1e-6 * std::max(1.0, hi);
    if (arg < hi - margin) return {val, false};
    if (hi >= kAlphaCap) return {val, true};
    hi = std::min(hi * 10.0, kAlphaCap);
  }
}

RateValue RateFunction::rate_at(double x) const {
  if (!std::isfinite(x) || x < -1e-12 || x > log_m_ + 1e-9) {
    throw SpecError("rate argument must lie in [0, log m]");
  }
  x = std::clamp(x, 0.0, log_m_);
  // the turn itself carries ~1e-9 extrapolation noise; inside that band the
  // closed form is the better answer
  if (x <= turn_x_ + 1e-8) return {-x - curve_.gamma(), Segment::linear};
  double sr = curve_.support_rate();
  if (x > sr + 1e-9) {
    return {std::numeric_limits<double>::infinity(), Segment::infinite};
  }
  SearchResult res = conjugate_search(std::min(x, sr));
  return {res.value, res.hit_boundary ? Segment::boundary : Segment::convex};
}

double RateFunction::numeric_conjugate(double x) const {
  if (!std::isfinite(x)) throw SpecError("conjugate argument must be finite");
  return conjugate_search(x).value;
}

double RateFunction::approx_log_pmf(int k, double log_n) const {
  if (k < 1) throw SpecError("word length must be at least 1");
  if (!(log_n >= -1e-12)) throw SpecError("log rank must be nonnegative");
  RateValue r = rate_at(std::max(0.0, log_n) / k);
  if (std::isinf(r.value)) return kNegInf;
  return -log_n - k * r.value;
}

double RateFunction::nth_word_log_prob_estimate(int k, double x) const {
  if (k < 1) throw SpecError("word length must be at least 1");
  RateValue r = rate_at(x);
  if (std::isinf(r.value)) return kNegInf;
  return -static_cast<double>(k) * (x + r.value);
}

double RateFunction::biconjugate_max_error(std::span<const double> alphas) const {
  constexpr int kGrid = 2000;
  const double sr = curve_.support_rate();
  std::vector<double> xs(kGrid);
  std::vector<double> rv(kGrid);
  for (int j = 0; j < kGrid; ++j) {
    xs[j] = log_m_ * j / (kGrid - 1);
    rv[j] = rate_at(xs[j]).value;
  }
  double worst = 0.0;
  for (double alpha : alphas) {
    if (!std::isfinite(alpha)) throw SpecError("alpha grid must be finite");
    int best = 0;
    double best_v = kNegInf;
    for (int j = 0; j < kGrid; ++j) {
      if (std::isinf(rv[j])) continue;
      double v = alpha * xs[j] - rv[j];
      if (v > best_v) {
        best_v = v;
        best = j;
      }
    }
    double lo = xs[std::max(best - 1, 0)];
    double hi = std::min(xs[std::min(best + 1, kGrid - 1)], sr);
    auto h = [&](double x) {
      RateValue r = rate_at(std::min(x, sr));
      return std::isinf(r.value) ? kNegInf : alpha * x - r.value;
    };
    double refined = best_v;
    if (hi > lo) refined = std::max(refined, golden_max(h, lo, hi, 1e-12, 120).second);
    worst = std::max(worst, std::abs(refined - curve_.lambda(alpha)));
  }
  return worst;
}

std::vector<RateFunction::CurvePoint> RateFunction::rate_curve(double x_min,
                                                               double x_max,
                                                               int count) const {
  if (count < 2) throw SpecError("curve needs at least two points");
  if (!(x_min < x_max)) throw SpecError("x_min must be below x_max");
  if (x_min < -1e-12 || x_max > log_m_ + 1e-9) {
    throw SpecError("curve range must lie in [0, log m]");
  }
  std::vector<CurvePoint> pts(count);
  double step = (x_max - x_min) / (count - 1);
  for (int j = 0; j < count; ++j) {
    double x = (j == count - 1) ? x_max : x_min + step * j;
    RateValue r = rate_at(x);
    pts[j] = {x, r.value, r.segment};
  }
  auto exact = [](Segment s) { return s == Segment::linear || s == Segment::convex; };
  for (int j = 1; j + 1 < count; ++j) {
    if (!exact(pts[j - 1].segment) || !exact(pts[j].segment) ||
        !exact(pts[j + 1].segment)) {
      continue;
    }
    double bend = pts[j - 1].value + pts[j + 1].value - 2.0 * pts[j].value;
    if (bend < -2e-9) {
      throw NumericalError("rate curve lost convexity near x = " +
                           std::to_string(pts[j].x));
    }
  }
  return pts;
}

}  // namespace guesswork
