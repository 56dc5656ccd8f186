#pragma once

#include <cstdint>
#include <vector>

#include "guesswork/sources.hpp"

namespace guesswork {

inline constexpr std::uint64_t kDefaultCap = 10'000'000;

struct Level {
  double log_prob;   // shared by every word in the level; strictly decreasing
  double log_count;
};

// Word probabilities grouped into equal-probability levels (ties merged at
// 1e-12 absolute in log domain). Level j covers the contiguous guess ranks
// (1 + sum of counts before j) .. (sum of counts through j). Counts can be
// astronomically large, so they are always carried as log-counts; exact
// 64-bit rank bookkeeping is kept whenever it fits.
class GuessworkTable {
 public:
  GuessworkTable(int k, std::vector<Level> levels, double zero_words,
                 std::vector<std::uint64_t> exact_counts);

  int k() const { return k_; }
  const std::vector<Level>& levels() const { return levels_; }
  double zero_word_count() const { return zero_words_; }

  bool ranks_exact() const { return ranks_exact_; }
  std::uint64_t exact_count(std::size_t level) const { return exact_counts_[level]; }
  std::uint64_t rank_start(std::size_t level) const;  // requires ranks_exact()
  std::uint64_t rank_end(std::size_t level) const;    // requires ranks_exact()
  std::uint64_t total_words() const;                  // requires ranks_exact()

  double log_total_words() const { return cum_log_counts_.back(); }
  double cum_log_count(std::size_t level) const { return cum_log_counts_[level]; }

  std::size_t level_of_rank(std::uint64_t n) const;   // requires ranks_exact()
  std::size_t level_of_log_rank(double log_n) const;  // always available

 private:
  int k_;
  std::vector<Level> levels_;
  double zero_words_;
  std::vector<double> cum_log_counts_;
  bool ranks_exact_;
  std::vector<std::uint64_t> exact_counts_;
  std::vector<std::uint64_t> cum_exact_;
};

// Brute-force table over all m^k words; cap bounds the enumeration size and
// the error message points at the type-class path for iid sources.
GuessworkTable enumerate_table(const Source& s, int k, std::uint64_t cap = kDefaultCap);

// Composition-based table for iid sources: one entry per letter-count vector
// over the support, with multinomial multiplicities. Identical to
// enumerate_table after merging. cap bounds the number of compositions.
GuessworkTable typeclass_table(const IidSource& s, int k, std::uint64_t cap = kDefaultCap);

// Type-class path for iid sources, enumeration otherwise.
GuessworkTable build_table(const Source& s, int k, std::uint64_t cap = kDefaultCap);

// log P(G = n): probability that the word is found at guess n when words are
// tried in decreasing-probability order.
double guesswork_pmf(const GuessworkTable& t, std::uint64_t n);
double guesswork_pmf_log_rank(const GuessworkTable& t, double log_n);

struct MomentReport {
  int k;
  double alpha;
  double scaled_log_moment;  // k^-1 log E[G^alpha]; exactly 0 at alpha = 0
};
MomentReport scaled_log_moment(const GuessworkTable& t, double alpha);

// k^-1 E[log G]
double expected_log_guesswork(const GuessworkTable& t);

// k^-1 H(W_k), positive sign
double shannon_entropy_exact(const GuessworkTable& t);

// Number of words whose log-probability is within log_slack of the maximum.
// The default counts exact ties only; a slack of order 1 counts the
// bounded-gap near-maximal cluster.
double empirical_turn_log_count(const GuessworkTable& t, double log_slack = 1e-9);
std::uint64_t empirical_turn_count(const GuessworkTable& t, double log_slack = 1e-9);

namespace detail {

// log of sum_{n=a}^{b} n^alpha for the rank range carried as (log a, log b,
// log count). Exact closed forms for alpha in {0,1,2}; otherwise exact head
// summation plus an Euler-Maclaurin tail on the closed-form antiderivative.
double log_rank_power_sum(double log_a, double log_b, double log_count, double alpha);

// log of sum_{n=a}^{b} log n
double log_rank_log_sum(double log_a, double log_b, double log_count);

}  // namespace detail

}  // namespace guesswork
