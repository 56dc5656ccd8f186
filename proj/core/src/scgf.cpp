#include "guesswork/scgf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "guesswork/errors.hpp"

namespace guesswork {

namespace detail {

double log_spectral_radius(const std::vector<double>& log_entries, int m, double rel_tol,
                           int max_iters) {
  // Scale so the largest entry is e^0, add the identity to kill periodicity
  // (rho shifts by exactly 1), iterate in log domain so nothing underflows.
  double lmax = kNegInf;
  for (double l : log_entries) lmax = std::max(lmax, l);
  if (lmax == kNegInf) throw SpecError("matrix has empty support");
  std::vector<double> sh(log_entries.size());
  for (std::size_t i = 0; i < log_entries.size(); ++i) sh[i] = log_entries[i] - lmax;
  for (int i = 0; i < m; ++i)
    sh[static_cast<std::size_t>(i) * m + i] = log_add(sh[static_cast<std::size_t>(i) * m + i], 0.0);

  std::vector<double> x(m, 0.0), y(m);
  for (int it = 1; it <= max_iters; ++it) {
    for (int i = 0; i < m; ++i) {
      double acc = kNegInf;
      for (int j = 0; j < m; ++j) acc = log_add(acc, sh[static_cast<std::size_t>(i) * m + j] + x[j]);
      y[i] = acc;
    }
    double rmin = kPosInf, rmax = kNegInf;
    for (int i = 0; i < m; ++i) {
      rmin = std::min(rmin, y[i] - x[i]);
      rmax = std::max(rmax, y[i] - x[i]);
    }
    double mid = 0.5 * (rmin + rmax);
    if (rmax - rmin <= rel_tol * std::max(1.0, std::abs(mid))) {
      // mid = log rho(shifted); undo the +I shift, then the scaling
      return lmax + std::log(std::expm1(mid));
    }
    double ymax = kNegInf;
    for (int i = 0; i < m; ++i) ymax = std::max(ymax, y[i]);
    for (int i = 0; i < m; ++i) x[i] = y[i] - ymax;
  }
  throw NumericalError("power iteration did not converge in " + std::to_string(max_iters) +
                       " iterations");
}

double max_cycle_mean(const std::vector<double>& log_entries, int m) {
  auto w = [&](int i, int j) { return log_entries[static_cast<std::size_t>(i) * m + j]; };
  // D[k][v]: max weight of a k-edge walk from state 0 to v
  std::vector<std::vector<double>> D(m + 1, std::vector<double>(m, kNegInf));
  D[0][0] = 0.0;
  for (int k = 1; k <= m; ++k)
    for (int v = 0; v < m; ++v)
      for (int u = 0; u < m; ++u)
        if (D[k - 1][u] != kNegInf && w(u, v) != kNegInf)
          D[k][v] = std::max(D[k][v], D[k - 1][u] + w(u, v));
  double best = kNegInf;
  for (int v = 0; v < m; ++v) {
    if (D[m][v] == kNegInf) continue;
    double worst = kPosInf;
    for (int k = 0; k < m; ++k)
      if (D[k][v] != kNegInf) worst = std::min(worst, (D[m][v] - D[k][v]) / (m - k));
    if (worst != kPosInf) best = std::max(best, worst);
  }
  if (best == kNegInf) throw SpecError("support digraph has no cycle");
  return best;
}

}  // namespace detail

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double iid_lambda(const std::vector<double>& logs, double alpha) {
  double beta = 1.0 / (1.0 + alpha);
  double m = kNegInf;
  for (double l : logs)
    if (l != kNegInf) m = std::max(m, beta * l);
  double s = 0.0;
  for (double l : logs)
    if (l != kNegInf) s += std::exp(beta * l - m);
  return (1.0 + alpha) * (m + std::log(s));
}

double iid_lambda_prime(const std::vector<double>& logs, double alpha) {
  // d/dalpha of (1+alpha) S(beta) is S(beta) - beta <log p> under the tilt
  double beta = 1.0 / (1.0 + alpha);
  double m = kNegInf;
  for (double l : logs)
    if (l != kNegInf) m = std::max(m, beta * l);
  double z = 0.0, mean = 0.0;
  for (double l : logs) {
    if (l == kNegInf) continue;
    double w = std::exp(beta * l - m);
    z += w;
    mean += l * w;
  }
  mean /= z;
  return m + std::log(z) - beta * mean;
}

// log Perron root of the 2x2 matrix with entries p_ij^beta, from the
// quadratic closed form, scaled so every exponent stays tame.
double two_state_log_rho(double l11, double l12, double l21, double l22, double beta) {
  double A = beta * l11, B = beta * l22, C = beta * (l12 + l21);
  double T = std::max({A, B, C / 2.0});
  double ea = std::exp(A - T), eb = std::exp(B - T), ec = std::exp(C - 2.0 * T);
  double d = ea - eb;
  double bracket = 0.5 * (ea + eb) + 0.5 * std::sqrt(d * d + 4.0 * ec);
  return T + std::log(bracket);
}

double markov_lambda(const MarkovSource& mk, double alpha) {
  double beta = 1.0 / (1.0 + alpha);
  int m = mk.alphabet_size();
  if (m == 2) {
    const auto& t = mk.transition_log_probs();
    return (1.0 + alpha) * two_state_log_rho(t[0], t[1], t[2], t[3], beta);
  }
  std::vector<double> tilted(mk.transition_log_probs());
  for (double& l : tilted) l = l == kNegInf ? kNegInf : beta * l;
  return (1.0 + alpha) * detail::log_spectral_radius(tilted, m);
}

double raw_lambda(const Source& s, double gamma_value, double alpha) {
  if (alpha <= -1.0) return gamma_value;
  if (alpha == 0.0) return 0.0;  // E[G^0] = 1 identically
  if (const auto* iid = std::get_if<IidSource>(&s)) return iid_lambda(iid->letter_log_probs(), alpha);
  return markov_lambda(std::get<MarkovSource>(s), alpha);
}

double raw_gamma(const Source& s) {
  if (const auto* iid = std::get_if<IidSource>(&s)) {
    double m = kNegInf;
    for (double l : iid->letter_log_probs()) m = std::max(m, l);
    return m;
  }
  const auto& mk = std::get<MarkovSource>(s);
  const auto& t = mk.transition_log_probs();
  if (mk.alphabet_size() == 2) return std::max({t[0], t[3], 0.5 * (t[1] + t[2])});
  return detail::max_cycle_mean(t, mk.alphabet_size());
}

double raw_support_rate(const Source& s) {
  if (const auto* iid = std::get_if<IidSource>(&s)) {
    int c = 0;
    for (double l : iid->letter_log_probs())
      if (l != kNegInf) ++c;
    return std::log(static_cast<double>(c));
  }
  const auto& mk = std::get<MarkovSource>(s);
  std::vector<double> support(mk.transition_log_probs());
  for (double& l : support) l = l == kNegInf ? kNegInf : 0.0;
  return detail::log_spectral_radius(support, mk.alphabet_size());
}

bool closed_form_lambda(const Source& s) {
  return std::holds_alternative<IidSource>(s) || alphabet_size(s) == 2;
}

double raw_lambda_prime(const Source& s, double gamma_value, double alpha) {
  if (!(alpha > -1.0))
    throw SpecError("the slope is defined only for alpha > -1; the curve is flat at gamma below");
  if (const auto* iid = std::get_if<IidSource>(&s))
    return iid_lambda_prime(iid->letter_log_probs(), alpha);
  // central difference, step clamped inside the domain, Richardson-verified
  double h = std::min(std::max(1e-6, 1e-6 * std::abs(1.0 + alpha)), 0.5 * std::abs(1.0 + alpha));
  auto diff = [&](double step) {
    return (raw_lambda(s, gamma_value, alpha + step) - raw_lambda(s, gamma_value, alpha - step)) /
           (2.0 * step);
  };
  double d1 = diff(h), d2 = diff(h / 2.0);
  double rich = (4.0 * d2 - d1) / 3.0;
  double tol = 1e-7 * std::max(1.0, std::abs(rich));
  // power-iteration-backed evaluations carry ~1e-12 noise that the quotient
  // amplifies by 1/h; closed forms keep the strict bound
  if (!closed_form_lambda(s)) tol = std::max(tol, 1e-11 / h);
  if (std::abs(rich - d2) > tol)
    throw NumericalError("slope estimate failed Richardson verification at alpha = " +
                         std::to_string(alpha));
  return rich;
}

// Closed forms tolerate any tilt; the power iteration needs the tilted entries
// inside exp's range, or weak arcs underflow and the matrix turns reducible.
double turn_eps_floor(const Source& s) {
  if (closed_form_lambda(s)) return 1e-7;
  const auto& t = std::get<MarkovSource>(s).transition_log_probs();
  double lo = 0.0;
  for (double l : t)
    if (l != kNegInf) lo = std::min(lo, l);
  return std::max(1e-7, -lo / 500.0);
}

TurnResult compute_turn(const Source& s, double gamma_value) {
  const double floor = turn_eps_floor(s);
  std::vector<double> eps_seq;
  for (double e = 1e-2; e >= floor * (1.0 - 1e-9); e /= 10.0) eps_seq.push_back(e);
  if (eps_seq.empty()) eps_seq.push_back(10.0 * floor);
  if (eps_seq.size() == 1) eps_seq.push_back(floor);
  double prev = kNaN, value = kNaN;
  bool converged = false;
  for (double eps : eps_seq) {
    value = raw_lambda_prime(s, gamma_value, -1.0 + eps);
    converged = !std::isnan(prev) && std::abs(value - prev) < 1e-5;
    prev = value;
  }
  TurnResult r{value, converged, TurnClass::unclassified, kNaN};

  if (const auto* iid = std::get_if<IidSource>(&s)) {
    // the limit counts the maximal-probability letters
    double lmax = kNegInf;
    for (double l : iid->letter_log_probs()) lmax = std::max(lmax, l);
    int ties = 0;
    for (double l : iid->letter_log_probs())
      if (lmax - l <= 1e-12) ++ties;
    double analytic = std::log(static_cast<double>(ties));
    if (std::abs(r.value - analytic) > 1e-4)
      throw NumericalError("turn extrapolation " + std::to_string(r.value) +
                           " disagrees with the tie-count value " + std::to_string(analytic));
  } else if (alphabet_size(s) == 2) {
    const double phi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    const double l2 = std::log(2.0);
    if (std::abs(r.value) <= 1e-3) {
      r.classified = TurnClass::zero;
      r.classified_value = 0.0;
    } else if (std::abs(r.value - phi) <= 1e-3) {
      r.classified = TurnClass::log_phi;
      r.classified_value = phi;
    } else if (std::abs(r.value - l2) <= 1e-3) {
      r.classified = TurnClass::log_two;
      r.classified_value = l2;
    }
  }
  return r;
}

const Source& reject_explicit(const Source& s) {
  if (std::holds_alternative<ExplicitSource>(s))
    throw SpecError("asymptotic analysis needs a per-letter source, not a fixed-length table");
  return s;
}

}  // namespace

const char* turn_class_name(TurnClass c) {
  switch (c) {
    case TurnClass::zero: return "zero";
    case TurnClass::log_phi: return "log_phi";
    case TurnClass::log_two: return "log2";
    default: return "unclassified";
  }
}

ScgfCurve::ScgfCurve(Source s) : source_(std::move(s)) {}

ScgfCurve ScgfCurve::analyze(Source s) {
  reject_explicit(s);
  require_valid(s);
  ScgfCurve c(std::move(s));
  c.gamma_ = raw_gamma(c.source_);
  c.support_rate_ = raw_support_rate(c.source_);
  c.turn_ = compute_turn(c.source_, c.gamma_);
  c.shannon_slope_ = raw_lambda_prime(c.source_, c.gamma_, 0.0);
  return c;
}

double ScgfCurve::lambda(double alpha) const { return raw_lambda(source_, gamma_, alpha); }

double ScgfCurve::lambda_prime(double alpha) const {
  return raw_lambda_prime(source_, gamma_, alpha);
}

int ScgfCurve::alphabet_size() const { return guesswork::alphabet_size(source_); }

double lambda(const Source& s, double alpha) {
  reject_explicit(s);
  require_valid(s);
  return raw_lambda(s, raw_gamma(s), alpha);
}

double lambda_prime(const Source& s, double alpha) {
  reject_explicit(s);
  require_valid(s);
  return raw_lambda_prime(s, raw_gamma(s), alpha);
}

double gamma(const Source& s) {
  reject_explicit(s);
  require_valid(s);
  return raw_gamma(s);
}

TurnResult turn(const Source& s) {
  reject_explicit(s);
  require_valid(s);
  return compute_turn(s, raw_gamma(s));
}

double support_rate(const Source& s) {
  reject_explicit(s);
  require_valid(s);
  return raw_support_rate(s);
}

double renyi_specific(const Source& s, double beta) {
  reject_explicit(s);
  require_valid(s);
  if (!(beta > 0.0)) throw SpecError("Renyi order must be > 0");
  double g = raw_gamma(s);
  if (std::abs(beta - 1.0) < 1e-12) return raw_lambda_prime(s, g, 0.0);
  double alpha = (1.0 - beta) / beta;
  return raw_lambda(s, g, alpha) / alpha;
}

}  // namespace guesswork
