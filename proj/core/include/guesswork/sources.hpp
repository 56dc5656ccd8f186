#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "guesswork/logspace.hpp"

namespace guesswork {

// Letters are 1-based: a word over an alphabet of size m has letters in 1..m.
using Word = std::vector<int>;

struct Violation {
  std::string invariant;  // short name, e.g. "letter-sum"
  std::string detail;     // offending index / value
};

// Memoryless source; letter i+1 is drawn with probability exp(log_probs[i]).
class IidSource {
 public:
  explicit IidSource(std::vector<double> letter_log_probs);
  static IidSource from_probs(const std::vector<double>& probs);

  int alphabet_size() const { return static_cast<int>(log_probs_.size()); }
  const std::vector<double>& letter_log_probs() const { return log_probs_; }
  double word_log_prob(const Word& w) const;

 private:
  std::vector<double> log_probs_;
};

// Time-homogeneous chain; the support digraph must be irreducible for the
// asymptotic operations, checked at construction and reported by validate().
class MarkovSource {
 public:
  MarkovSource(std::vector<double> transition_log_probs,
               std::vector<double> initial_log_probs);
  static MarkovSource from_probs(const std::vector<double>& transition_row_major,
                                 const std::vector<double>& initial);

  int alphabet_size() const { return m_; }
  double transition_log(int i, int j) const { return trans_[static_cast<std::size_t>(i) * m_ + j]; }
  double initial_log(int i) const { return init_[i]; }
  const std::vector<double>& transition_log_probs() const { return trans_; }
  const std::vector<double>& initial_log_probs() const { return init_; }
  bool support_irreducible() const { return irreducible_; }
  double word_log_prob(const Word& w) const;

 private:
  int m_;
  std::vector<double> trans_;  // row-major m*m
  std::vector<double> init_;
  bool irreducible_;
};

// Fixed-length table: word_log_probs[encode(w)] with lexicographic encoding,
// first letter most significant. Only fixed-k operations apply.
class ExplicitSource {
 public:
  ExplicitSource(int alphabet_size, int k, std::vector<double> word_log_probs);

  int alphabet_size() const { return m_; }
  int k() const { return k_; }
  double word_log_prob(const Word& w) const;
  const std::vector<double>& word_log_probs() const { return logp_; }

 private:
  int m_;
  int k_;
  std::vector<double> logp_;
};

using Source = std::variant<IidSource, MarkovSource, ExplicitSource>;

int alphabet_size(const Source& s);
double word_log_prob(const Source& s, const Word& w);

// Word (1,...,1) gets probability m^-k (1+eps); every other word gets
// m^-k (1 - eps/(m^k - 1)). Exactly one most likely word for any eps > 0.
ExplicitSource make_counterexample_source(int m, int k, double eps);

std::vector<Violation> validate(const Source& s);

// Throws SpecError naming every violated invariant; used by the analysis
// entry points so invalid sources fail loudly and uniformly.
void require_valid(const Source& s);

}  // namespace guesswork
