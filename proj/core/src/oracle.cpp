#include "guesswork/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "guesswork/errors.hpp"

namespace guesswork {

namespace {

constexpr double kLevelTol = 1e-12;    // tie grouping, absolute in log domain
constexpr double kLookupSlack = 1e-12; // log-rank level lookup slack

struct RawLevel {
  double log_prob;
  double log_count;
  std::uint64_t exact;  // 0 marks "no exact count"
};

// Kahan sum; validate() tolerances are tighter than naive summation error
// over 1e7 terms.
struct Accumulator {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

double checked_pow_words(int m, int k, std::uint64_t cap, bool iid_hint) {
  double words = static_cast<double>(k) * std::log(static_cast<double>(m));
  if (words > std::log(static_cast<double>(cap)) + 1e-9) {
    std::string msg = "enumeration of m^k = " + std::to_string(m) + "^" + std::to_string(k) +
                      " words exceeds the cap of " + std::to_string(cap);
    if (iid_hint)
      msg += "; the type-class path handles iid sources of this size (build_table picks it)";
    else
      msg += "; raise the cap if the workload is intentional";
    throw CapExceeded(msg);
  }
  return std::round(std::exp(words));
}

GuessworkTable finalize(int k, std::vector<RawLevel>& raw, double zero_words) {
  std::sort(raw.begin(), raw.end(),
            [](const RawLevel& a, const RawLevel& b) { return a.log_prob > b.log_prob; });
  std::vector<Level> levels;
  std::vector<std::uint64_t> exact;
  bool all_exact = true;
  for (const auto& r : raw) {
    if (!levels.empty() && levels.back().log_prob - r.log_prob <= kLevelTol) {
      levels.back().log_count = log_add(levels.back().log_count, r.log_count);
      if (all_exact) {
        std::uint64_t s;
        if (r.exact == 0 || __builtin_add_overflow(exact.back(), r.exact, &s))
          all_exact = false;
        else
          exact.back() = s;
      }
    } else {
      levels.push_back({r.log_prob, r.log_count});
      exact.push_back(r.exact);
      if (r.exact == 0) all_exact = false;
    }
  }
  if (!all_exact) exact.clear();
  return GuessworkTable(k, std::move(levels), zero_words, std::move(exact));
}

// Exact multinomial k! / prod(c_i!) for the k <= 30 cross-check.
boost::multiprecision::cpp_int exact_multinomial(const std::vector<int>& counts) {
  boost::multiprecision::cpp_int r = 1;
  int upto = 0;
  // product of binomials C(upto + c, c) telescopes to the multinomial
  for (int c : counts) {
    for (int j = 1; j <= c; ++j) {
      r *= upto + j;
      r /= j;
    }
    upto += c;
  }
  return r;
}

}  // namespace

GuessworkTable::GuessworkTable(int k, std::vector<Level> levels, double zero_words,
                               std::vector<std::uint64_t> exact_counts)
    : k_(k),
      levels_(std::move(levels)),
      zero_words_(zero_words),
      ranks_exact_(!exact_counts.empty()),
      exact_counts_(std::move(exact_counts)) {
  if (levels_.empty()) throw SpecError("a guesswork table needs at least one level");
  for (std::size_t j = 1; j < levels_.size(); ++j)
    if (!(levels_[j].log_prob < levels_[j - 1].log_prob))
      throw NumericalError("table levels are not strictly decreasing at level " +
                           std::to_string(j));
  cum_log_counts_.resize(levels_.size());
  double cum = kNegInf;
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    cum = log_add(cum, levels_[j].log_count);
    cum_log_counts_[j] = cum;
  }
  if (ranks_exact_) {
    if (exact_counts_.size() != levels_.size())
      throw NumericalError("exact counts misaligned with levels");
    cum_exact_.resize(levels_.size());
    std::uint64_t c = 0;
    for (std::size_t j = 0; j < levels_.size(); ++j) {
      if (__builtin_add_overflow(c, exact_counts_[j], &c)) {
        ranks_exact_ = false;
        exact_counts_.clear();
        cum_exact_.clear();
        break;
      }
      cum_exact_[j] = c;
    }
  }
}

std::uint64_t GuessworkTable::rank_start(std::size_t level) const {
  return level == 0 ? 1 : cum_exact_[level - 1] + 1;
}

std::uint64_t GuessworkTable::rank_end(std::size_t level) const { return cum_exact_[level]; }

std::uint64_t GuessworkTable::total_words() const {
  if (!ranks_exact_) throw SpecError("rank bookkeeping for this table exceeds 64-bit range");
  return cum_exact_.back();
}

std::size_t GuessworkTable::level_of_rank(std::uint64_t n) const {
  if (n < 1 || !ranks_exact_ || n > total_words())
    throw SpecError("guess rank " + std::to_string(n) + " outside 1.." +
                    (ranks_exact_ ? std::to_string(total_words()) : std::string("table range")));
  auto it = std::lower_bound(cum_exact_.begin(), cum_exact_.end(), n);
  return static_cast<std::size_t>(it - cum_exact_.begin());
}

std::size_t GuessworkTable::level_of_log_rank(double log_n) const {
  if (!(log_n >= -kLookupSlack) || log_n > log_total_words() + kLookupSlack)
    throw SpecError("log guess rank outside table range");
  double needle = log_n - kLookupSlack;
  auto it = std::lower_bound(cum_log_counts_.begin(), cum_log_counts_.end(), needle);
  if (it == cum_log_counts_.end()) --it;
  return static_cast<std::size_t>(it - cum_log_counts_.begin());
}

GuessworkTable enumerate_table(const Source& s, int k, std::uint64_t cap) {
  if (k < 1) throw SpecError("word length must be >= 1");
  require_valid(s);
  int m = alphabet_size(s);
  bool iid = std::holds_alternative<IidSource>(s);
  checked_pow_words(m, k, cap, iid);

  std::vector<double> logps;
  double zero_words = 0.0;

  if (const auto* ex = std::get_if<ExplicitSource>(&s)) {
    if (ex->k() != k)
      throw SpecError("explicit table is for words of length " + std::to_string(ex->k()) +
                      ", not " + std::to_string(k));
    for (double lp : ex->word_log_probs()) {
      if (lp == kNegInf)
        zero_words += 1.0;
      else
        logps.push_back(lp);
    }
    if (logps.empty()) throw SpecError("every word has probability 0");
  } else {
    const auto* iid_src = std::get_if<IidSource>(&s);
    const auto* mk = std::get_if<MarkovSource>(&s);
    logps.reserve(static_cast<std::size_t>(std::round(std::pow(double(m), k))));
    // iterative DFS over words, sharing prefix log-probabilities
    struct Frame {
      int depth;
      int prev;   // previous letter, 0-based; -1 at the root
      double lp;
    };
    std::vector<Frame> stack{{0, -1, 0.0}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (f.depth == k) {
        logps.push_back(f.lp);
        continue;
      }
      for (int c = 0; c < m; ++c) {
        double step = iid_src ? iid_src->letter_log_probs()[c]
                              : (f.depth == 0 ? mk->initial_log(c) : mk->transition_log(f.prev, c));
        if (step == kNegInf) {
          zero_words += std::pow(static_cast<double>(m), k - f.depth - 1);
          continue;
        }
        stack.push_back({f.depth + 1, c, f.lp + step});
      }
    }
    if (logps.empty()) throw SpecError("every word has probability 0");
  }

  std::sort(logps.begin(), logps.end(), std::greater<>());
  std::vector<RawLevel> raw;
  std::size_t i = 0;
  while (i < logps.size()) {
    double head = logps[i];
    std::size_t j = i;
    while (j < logps.size() && head - logps[j] <= kLevelTol) ++j;
    raw.push_back({head, std::log(static_cast<double>(j - i)), j - i});
    i = j;
  }
  return finalize(k, raw, zero_words);
}

GuessworkTable typeclass_table(const IidSource& s, int k, std::uint64_t cap) {
  if (k < 1) throw SpecError("word length must be >= 1");
  require_valid(Source{s});
  const auto& logs = s.letter_log_probs();
  std::vector<double> sup;
  for (double l : logs)
    if (l != kNegInf) sup.push_back(l);
  int ns = static_cast<int>(sup.size());
  int m = s.alphabet_size();

  double n_comp = std::exp(std::lgamma(double(k) + ns) - std::lgamma(double(k) + 1) -
                           std::lgamma(double(ns)));
  if (n_comp > static_cast<double>(cap) * (1.0 + 1e-12))
    throw CapExceeded("type-class table needs " + std::to_string(n_comp) +
                      " letter-count vectors, above the cap of " + std::to_string(cap) +
                      "; raise the cap if the workload is intentional");

  bool exact_path = k <= 30;
  std::vector<RawLevel> raw;
  raw.reserve(static_cast<std::size_t>(n_comp));
  std::vector<int> counts(ns, 0);
  double lgk = std::lgamma(double(k) + 1);

  // compositions of k into ns parts; lp and the log-multiplicity accumulate
  // along the recursion
  auto rec = [&](auto&& self, int idx, int rem, double lp, double lgc_partial) -> void {
    if (idx == ns - 1) {
      counts[idx] = rem;
      double lprob = lp + rem * sup[idx];
      double lgc = lgc_partial - std::lgamma(double(rem) + 1);
      std::uint64_t exact = 0;
      if (exact_path) {
        auto mult = exact_multinomial(counts);
        double lg_exact = std::log(mult.convert_to<double>());
        if (std::abs(lg_exact - lgc) > 1e-9 * std::max(1.0, std::abs(lgc)))
          throw NumericalError("log-gamma multiplicity disagrees with the exact value at k=" +
                               std::to_string(k));
        if (mult <= std::numeric_limits<std::uint64_t>::max())
          exact = mult.convert_to<std::uint64_t>();
      }
      raw.push_back({lprob, lgc, exact});
      return;
    }
    for (int c = 0; c <= rem; ++c) {
      counts[idx] = c;
      self(self, idx + 1, rem - c, lp + c * sup[idx], lgc_partial - std::lgamma(double(c) + 1));
    }
  };
  rec(rec, 0, k, 0.0, lgk);

  double zero_words = 0.0;
  if (ns < m) {
    double lm = k * std::log(double(m));
    zero_words = std::exp(lm) * -std::expm1(k * (std::log(double(ns)) - std::log(double(m))));
  }
  return finalize(k, raw, zero_words);
}

GuessworkTable build_table(const Source& s, int k, std::uint64_t cap) {
  if (const auto* iid = std::get_if<IidSource>(&s)) return typeclass_table(*iid, k, cap);
  return enumerate_table(s, k, cap);
}

double guesswork_pmf(const GuessworkTable& t, std::uint64_t n) {
  if (n < 1) throw SpecError("guess ranks start at 1");
  if (t.ranks_exact()) return t.levels()[t.level_of_rank(n)].log_prob;
  return t.levels()[t.level_of_log_rank(std::log(static_cast<double>(n)))].log_prob;
}

double guesswork_pmf_log_rank(const GuessworkTable& t, double log_n) {
  return t.levels()[t.level_of_log_rank(log_n)].log_prob;
}

namespace detail {

namespace {

constexpr double kHeadExactLogA = 33.0;  // below e^33 a rank round-trips through exp exactly
constexpr std::uint64_t kDirectCount = 4096;

// SignedLog of (b^q - a^q)/q from log a, log b; positive for any q != 0
// because numerator and denominator flip sign together when q < 0
SignedLog pow_diff(double q, double la, double lb) {
  if (q == 0.0 || la == lb) return {};
  if (q > 0.0) return SignedLog::positive(log_sub(q * lb, q * la) - std::log(q));
  return SignedLog::positive(log_sub(q * la, q * lb) - std::log(-q));
}
// NB pow_diff folds in no coefficient; callers scale it.

SignedLog scaled(SignedLog x, double coef) {
  if (coef == 0.0 || x.sign == 0) return {};
  SignedLog r;
  r.sign = coef > 0 ? x.sign : -x.sign;
  r.log_mag = x.log_mag + std::log(std::abs(coef));
  return r;
}

// Euler-Maclaurin for sum_{n=a}^{b} n^alpha, endpoints included, a >= 65 or
// astronomically large; B2/B4/B6 corrections keep the relative error below
// 1e-9 (exact for integer alpha <= 6).
double em_power_sum(double la, double lb, double alpha) {
  SignedLog total;
  double p = alpha + 1.0;
  if (p == 0.0) {
    if (lb > la) total.accumulate(SignedLog::positive(std::log(lb - la)));
  } else if (p > 0.0) {
    total.accumulate(SignedLog::positive(log_sub(p * lb, p * la) - std::log(p)));
  } else {
    total.accumulate(SignedLog::positive(log_sub(p * la, p * lb) - std::log(-p)));
  }
  total.accumulate(SignedLog::positive(log_add(alpha * la, alpha * lb) - std::log(2.0)));
  total.accumulate(scaled(pow_diff(alpha - 1.0, la, lb), alpha * (alpha - 1.0) / 12.0));
  total.accumulate(scaled(pow_diff(alpha - 3.0, la, lb),
                          -alpha * (alpha - 1.0) * (alpha - 2.0) * (alpha - 3.0) / 720.0));
  total.accumulate(scaled(pow_diff(alpha - 5.0, la, lb),
                          alpha * (alpha - 1.0) * (alpha - 2.0) * (alpha - 3.0) *
                              (alpha - 4.0) * (alpha - 5.0) / 30240.0));
  if (total.sign <= 0) throw NumericalError("rank power sum lost all significance");
  return total.log_mag;
}
// The B-terms above absorb d/dx x^alpha = alpha x^(alpha-1) etc.; writing the
// derivative products times B_{2j}/(2j)! directly keeps integer alpha exact.

double em_log_sum(double la, double lb) {
  SignedLog total;
  total.accumulate(SignedLog::positive(lb + std::log(lb - 1.0)));
  total.accumulate(SignedLog::negative(la + std::log(la - 1.0)));
  total.accumulate(SignedLog::positive(std::log((la + lb) / 2.0)));
  total.accumulate(SignedLog::negative(log_sub(-la, -lb) - std::log(12.0)));
  total.accumulate(SignedLog::positive(log_sub(-3.0 * la, -3.0 * lb) - std::log(360.0)));
  if (total.sign <= 0) throw NumericalError("rank log sum lost all significance");
  return total.log_mag;
}

}  // namespace

double log_rank_power_sum(double log_a, double log_b, double log_count, double alpha) {
  if (alpha == 0.0) return log_count;
  if (alpha == 1.0) return log_count + log_add(log_a, log_b) - std::log(2.0);
  if (alpha == 2.0) {
    // N a^2 + a N(N-1) + N(N-1)(2N-1)/6, all terms positive
    double l_nm1 = log_sub(log_count, 0.0);
    double t1 = log_count + 2.0 * log_a;
    double t2 = log_a + log_count + l_nm1;
    double t3 = log_count + l_nm1 + log_sub(std::log(2.0) + log_count, 0.0) - std::log(6.0);
    double xs[] = {t1, t2, t3};
    return log_sum_exp(xs);
  }
  if (log_a <= kHeadExactLogA) {
    std::uint64_t a = static_cast<std::uint64_t>(std::llround(std::exp(log_a)));
    double cnt_d = std::exp(log_count);
    if (cnt_d <= static_cast<double>(kDirectCount) + 0.5) {
      std::uint64_t cnt = static_cast<std::uint64_t>(std::llround(cnt_d));
      std::vector<double> terms(cnt);
      for (std::uint64_t i = 0; i < cnt; ++i)
        terms[i] = alpha * std::log(static_cast<double>(a + i));
      return log_sum_exp(terms);
    }
    std::vector<double> head(64);
    for (int i = 0; i < 64; ++i) head[i] = alpha * std::log(static_cast<double>(a + i));
    double tail = em_power_sum(std::log(static_cast<double>(a + 64)), log_b, alpha);
    return log_add(log_sum_exp(head), tail);
  }
  return em_power_sum(log_a, log_b, alpha);
}

double log_rank_log_sum(double log_a, double log_b, double log_count) {
  if (log_a <= kHeadExactLogA) {
    std::uint64_t a = static_cast<std::uint64_t>(std::llround(std::exp(log_a)));
    double cnt_d = std::exp(log_count);
    if (cnt_d <= static_cast<double>(kDirectCount) + 0.5) {
      std::uint64_t cnt = static_cast<std::uint64_t>(std::llround(cnt_d));
      double s = 0.0;
      for (std::uint64_t i = 0; i < cnt; ++i) s += std::log(static_cast<double>(a + i));
      return s == 0.0 ? kNegInf : std::log(s);
    }
    double s = 0.0;
    for (int i = 0; i < 64; ++i) s += std::log(static_cast<double>(a + i));
    double tail = em_log_sum(std::log(static_cast<double>(a + 64)), log_b);
    return log_add(std::log(s), tail);
  }
  return em_log_sum(log_a, log_b);
}

}  // namespace detail

namespace {

// log rank bounds of a level; exact 64-bit ranks preferred when available
void level_log_bounds(const GuessworkTable& t, std::size_t j, double& la, double& lb) {
  if (t.ranks_exact()) {
    la = std::log(static_cast<double>(t.rank_start(j)));
    lb = std::log(static_cast<double>(t.rank_end(j)));
  } else {
    la = j == 0 ? 0.0 : log_add(t.cum_log_count(j - 1), 0.0);
    lb = t.cum_log_count(j);
  }
}

}  // namespace

MomentReport scaled_log_moment(const GuessworkTable& t, double alpha) {
  if (alpha == 0.0) return {t.k(), 0.0, 0.0};
  std::vector<double> terms;
  terms.reserve(t.levels().size());
  for (std::size_t j = 0; j < t.levels().size(); ++j) {
    double la, lb;
    level_log_bounds(t, j, la, lb);
    terms.push_back(t.levels()[j].log_prob +
                    detail::log_rank_power_sum(la, lb, t.levels()[j].log_count, alpha));
  }
  return {t.k(), alpha, log_sum_exp(terms) / t.k()};
}

double expected_log_guesswork(const GuessworkTable& t) {
  Accumulator acc;
  for (std::size_t j = 0; j < t.levels().size(); ++j) {
    double la, lb;
    level_log_bounds(t, j, la, lb);
    double ls = detail::log_rank_log_sum(la, lb, t.levels()[j].log_count);
    if (ls != kNegInf) acc.add(std::exp(t.levels()[j].log_prob + ls));
  }
  return acc.sum / t.k();
}

double shannon_entropy_exact(const GuessworkTable& t) {
  Accumulator acc;
  for (const auto& lv : t.levels()) {
    if (lv.log_prob == 0.0) continue;  // a certain word contributes nothing
    acc.add(std::exp(lv.log_prob + lv.log_count) * -lv.log_prob);
  }
  return acc.sum / t.k();
}

double empirical_turn_log_count(const GuessworkTable& t, double log_slack) {
  double top = t.levels().front().log_prob;
  double lc = kNegInf;
  for (const auto& lv : t.levels()) {
    if (top - lv.log_prob > log_slack) break;
    lc = log_add(lc, lv.log_count);
  }
  return lc;
}

std::uint64_t empirical_turn_count(const GuessworkTable& t, double log_slack) {
  if (!t.ranks_exact())
    throw SpecError("rank bookkeeping for this table exceeds 64-bit range; "
                    "use empirical_turn_log_count");
  double top = t.levels().front().log_prob;
  std::uint64_t c = 0;
  for (std::size_t j = 0; j < t.levels().size(); ++j) {
    if (top - t.levels()[j].log_prob > log_slack) break;
    c += t.exact_count(j);
  }
  return c;
}

}  // namespace guesswork
