#pragma once

#include <vector>

#include "guesswork/sources.hpp"

namespace guesswork {

// Two-state chains settle onto one of three limiting slopes at alpha -> -1+.
enum class TurnClass { unclassified, zero, log_phi, log_two };

struct TurnResult {
  double value;             // extrapolated limit of lambda'(-1 + eps)
  bool converged;           // successive eps steps agreed within 1e-5
  TurnClass classified;     // two-state chains only
  double classified_value;  // NaN when unclassified
};

const char* turn_class_name(TurnClass c);

// Scaled growth curve of guesswork moments: lambda(alpha) is the limit of
// k^-1 log E[G^alpha], constant at gamma for alpha <= -1, convex and 0 at 0.
// Explicit fixed-k sources have no such limit and are rejected.
class ScgfCurve {
 public:
  static ScgfCurve analyze(Source s);

  double lambda(double alpha) const;
  double lambda_prime(double alpha) const;  // alpha > -1 only
  double gamma() const { return gamma_; }
  const TurnResult& turn() const { return turn_; }
  double support_rate() const { return support_rate_; }
  double shannon_slope() const { return shannon_slope_; }  // lambda'(0)
  const Source& source() const { return source_; }
  int alphabet_size() const;

 private:
  explicit ScgfCurve(Source s);
  Source source_;
  double gamma_ = 0.0;
  double support_rate_ = 0.0;
  double shannon_slope_ = 0.0;
  TurnResult turn_{};
};

double lambda(const Source& s, double alpha);
double lambda_prime(const Source& s, double alpha);
double gamma(const Source& s);  // lim k^-1 log P(G = 1)
TurnResult turn(const Source& s);
double support_rate(const Source& s);  // growth rate of the support size

// Specific Renyi entropy of order beta (> 0) per letter; beta = 1 falls back
// to the Shannon slope.
double renyi_specific(const Source& s, double beta);

namespace detail {

// log of the Perron root of the matrix with entries exp(log_entries[i*m+j]),
// computed by shifted power iteration carried in log domain. Collatz-Wielandt
// brackets certify convergence.
double log_spectral_radius(const std::vector<double>& log_entries, int m,
                           double rel_tol = 1e-13, int max_iters = 100000);

// Maximum cycle mean of the digraph with arc weights log_entries (absent arcs
// -inf); Karp's recurrence. Requires a strongly connected support.
double max_cycle_mean(const std::vector<double>& log_entries, int m);

}  // namespace detail

}  // namespace guesswork
