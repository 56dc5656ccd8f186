#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "guesswork/errors.hpp"
#include "guesswork/logspace.hpp"
#include "guesswork/scgf.hpp"
#include "guesswork/sources.hpp"

using namespace guesswork;

namespace {

IidSource iid442() { return IidSource::from_probs({0.4, 0.4, 0.2}); }

MarkovSource golden_chain() {
  return MarkovSource::from_probs({0.6, 0.4, 0.9, 0.1}, {0.5, 0.5});
}

MarkovSource lazy_switch() {
  return MarkovSource::from_probs({0.85, 0.15, 0.15, 0.85}, {0.5, 0.5});
}

// Perron root straight from the 2x2 characteristic polynomial, linear domain.
double rho2(double a, double b, double c, double d) {
  return 0.5 * ((a + d) + std::sqrt((a - d) * (a - d) + 4.0 * b * c));
}

double markov2_lambda_oracle(const std::vector<double>& p, double alpha) {
  double s = 1.0 / (1.0 + alpha);
  return (1.0 + alpha) * std::log(rho2(std::pow(p[0], s), std::pow(p[1], s),
                                       std::pow(p[2], s), std::pow(p[3], s)));
}

// Plain linear-domain power iteration, usable when entries do not under/overflow.
double linear_rho(const std::vector<double>& a, int m) {
  std::vector<double> v(m, 1.0);
  double lam = 1.0;
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> w(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) w[i] += a[i * m + j] * v[j];
    lam = 0.0;
    for (double x : w) lam = std::max(lam, x);
    for (double& x : w) x /= lam;
    v = w;
  }
  return lam;
}

const double kLogPhi = 0.48121182505960347;

}  // namespace

TEST_CASE("iid closed forms") {
  ScgfCurve c = ScgfCurve::analyze(Source{iid442()});
  CHECK(c.lambda(1.0) == doctest::Approx(1.0754701804729516).epsilon(1e-13));
  CHECK(c.lambda(-0.5) == doctest::Approx(0.5 * std::log(0.36)).epsilon(1e-13));
  CHECK(c.lambda(0.0) == 0.0);
  CHECK(c.gamma() == std::log(0.4));
  CHECK(c.lambda(-1.0) == c.gamma());
  CHECK(c.lambda(-2.0) == c.gamma());
  CHECK(c.lambda(-10.0) == c.gamma());
  CHECK(c.lambda_prime(0.0) == doctest::Approx(1.0549201679861442).epsilon(1e-12));
  CHECK(c.shannon_slope() == doctest::Approx(1.0549201679861442).epsilon(1e-12));
  CHECK(c.support_rate() == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(std::abs(c.turn().value - std::log(2.0)) < 1e-4);  // two maximal letters
  CHECK(c.turn().converged);

  // convexity: the slope never decreases
  double prev = c.lambda_prime(-0.9);
  for (double a = -0.8; a <= 5.0; a += 0.1) {
    double cur = c.lambda_prime(a);
    CHECK(cur >= prev - 1e-9);
    prev = cur;
  }
}

TEST_CASE("iid uniform is linear in alpha") {
  ScgfCurve c = ScgfCurve::analyze(Source{IidSource::from_probs({0.25, 0.25, 0.25, 0.25})});
  for (double a : {-0.9, 0.7, 2.5})
    CHECK(c.lambda(a) == doctest::Approx(a * std::log(4.0)).epsilon(1e-12));
  CHECK(std::abs(c.turn().value - std::log(4.0)) < 1e-4);
  CHECK(c.support_rate() == doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("iid support with a zero letter") {
  ScgfCurve c = ScgfCurve::analyze(Source{IidSource::from_probs({0.5, 0.5, 0.0})});
  CHECK(c.support_rate() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(c.gamma() == std::log(0.5));
  CHECK(std::abs(c.turn().value - std::log(2.0)) < 1e-4);
}

TEST_CASE("two-state chains against the characteristic polynomial") {
  std::vector<double> gp = {0.6, 0.4, 0.9, 0.1};
  ScgfCurve g = ScgfCurve::analyze(Source{golden_chain()});
  for (double a : {-0.5, 0.5, 1.0, 3.0})
    CHECK(g.lambda(a) == doctest::Approx(markov2_lambda_oracle(gp, a)).epsilon(1e-12));
  CHECK(g.gamma() == doctest::Approx(std::log(0.6)).epsilon(1e-14));
  CHECK(g.lambda(-3.0) == g.gamma());
  CHECK(std::abs(g.turn().value - kLogPhi) < 1e-3);
  CHECK(g.turn().classified == TurnClass::log_phi);
  CHECK(g.support_rate() == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  std::vector<double> lp = {0.85, 0.15, 0.15, 0.85};
  ScgfCurve l = ScgfCurve::analyze(Source{lazy_switch()});
  for (double a : {-0.5, 0.5, 1.0, 3.0})
    CHECK(l.lambda(a) == doctest::Approx(markov2_lambda_oracle(lp, a)).epsilon(1e-12));
  CHECK(l.gamma() == doctest::Approx(std::log(0.85)).epsilon(1e-14));
  CHECK(std::abs(l.turn().value) < 1e-3);
  CHECK(l.turn().classified == TurnClass::zero);
  CHECK(l.shannon_slope() == doctest::Approx(0.42270908780599087).epsilon(1e-7));

  ScgfCurve u = ScgfCurve::analyze(Source{MarkovSource::from_probs({0.5, 0.5, 0.5, 0.5},
                                                                   {0.5, 0.5})});
  for (double a : {-0.5, 1.0, 4.0})
    CHECK(u.lambda(a) == doctest::Approx(a * std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(u.turn().value - std::log(2.0)) < 1e-3);
  CHECK(u.turn().classified == TurnClass::log_two);
}

TEST_CASE("deterministic alternation chain") {
  MarkovSource alt = MarkovSource::from_probs({0.0, 1.0, 1.0, 0.0}, {0.5, 0.5});
  ScgfCurve c = ScgfCurve::analyze(Source{alt});
  CHECK(c.gamma() == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(c.lambda(2.3) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.support_rate() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(c.turn().value) < 1e-3);
  CHECK(c.turn().classified == TurnClass::zero);
}

TEST_CASE("three-state chain against linear-domain power iteration") {
  std::vector<double> p = {0.5, 0.3, 0.2, 0.6, 0.4, 0.0, 0.1, 0.0, 0.9};
  MarkovSource src = MarkovSource::from_probs(p, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  ScgfCurve c = ScgfCurve::analyze(Source{src});
  for (double alpha : {-0.3, 0.5, 2.0}) {
    double s = 1.0 / (1.0 + alpha);
    std::vector<double> tilted(9);
    for (int i = 0; i < 9; ++i) tilted[i] = std::pow(p[i], s);
    double expect = (1.0 + alpha) * std::log(linear_rho(tilted, 3));
    CHECK(c.lambda(alpha) == doctest::Approx(expect).epsilon(1e-10));
  }
  // max mean cycle: the 3->3 self-loop dominates every other cycle
  CHECK(c.gamma() == doctest::Approx(std::log(0.9)).epsilon(1e-12));
  CHECK(c.lambda(-5.0) == c.gamma());
  // lambda'(0) equals the stationary entropy rate: pi solves pi P = pi
  // for rows H(p_i.) = {1.0297, 0.6730, 0.3251}
  CHECK(c.shannon_slope() > 0.0);
  CHECK(c.lambda_prime(0.5) >= c.shannon_slope() - 1e-9);
}

TEST_CASE("spectral radius details") {
  // permutation support: plain power iteration would cycle, the shift breaks it
  std::vector<double> perm = {kNegInf, 0.0, 0.0, kNegInf};
  CHECK(detail::log_spectral_radius(perm, 2) == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> sym = {std::log(2.0), 0.0, 0.0, std::log(2.0)};
  CHECK(detail::log_spectral_radius(sym, 2) == doctest::Approx(std::log(3.0)).epsilon(1e-13));

  std::vector<double> w = {std::log(0.5), std::log(0.3), std::log(0.2),
                           std::log(0.6), std::log(0.4), kNegInf,
                           std::log(0.1), kNegInf,       std::log(0.9)};
  CHECK(detail::max_cycle_mean(w, 3) == doctest::Approx(std::log(0.9)).epsilon(1e-13));
}

TEST_CASE("renyi entropies") {
  Source s{iid442()};
  double h_half = 2.0 * std::log(std::sqrt(0.4) + std::sqrt(0.4) + std::sqrt(0.2));
  CHECK(renyi_specific(s, 0.5) == doctest::Approx(h_half).epsilon(1e-13));
  ScgfCurve c = ScgfCurve::analyze(s);
  CHECK(renyi_specific(s, 0.5) == doctest::Approx(c.lambda(1.0)).epsilon(1e-13));
  CHECK(renyi_specific(s, 1.0) == doctest::Approx(1.0549201679861442).epsilon(1e-12));
  CHECK(renyi_specific(s, 2.0) == doctest::Approx(1.0216512475319814).epsilon(1e-13));
  CHECK_THROWS_AS(renyi_specific(s, 0.0), SpecError);
  CHECK_THROWS_AS(renyi_specific(s, -1.0), SpecError);
}

TEST_CASE("rejections and errors") {
  CHECK_THROWS_AS(ScgfCurve::analyze(Source{make_counterexample_source(2, 3, 0.1)}), SpecError);
  ScgfCurve c = ScgfCurve::analyze(Source{iid442()});
  CHECK_THROWS_AS(c.lambda_prime(-1.5), SpecError);
  CHECK_THROWS_AS(ScgfCurve::analyze(Source{IidSource::from_probs({0.7, 0.7})}), SpecError);
}
