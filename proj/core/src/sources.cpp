#include "guesswork/sources.hpp"

#include <cmath>
#include <sstream>

#include "guesswork/errors.hpp"

namespace guesswork {

namespace {

constexpr double kSumTolIid = 1e-12;
constexpr double kSumTolMarkov = 1e-12;
constexpr double kSumTolExplicit = 1e-10;

std::vector<double> to_logs(const std::vector<double>& probs) {
  std::vector<double> logs(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (std::isnan(probs[i]) || probs[i] < 0.0)
      throw SpecError("probability must be >= 0 at index " + std::to_string(i));
    logs[i] = probs[i] == 0.0 ? kNegInf : std::log(probs[i]);
  }
  return logs;
}

double exp_sum(const std::vector<double>& logs, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += std::exp(logs[i]);
  return s;
}

// Strong connectivity of the positive-probability digraph: every state
// reaches state 0 and is reached from it.
bool strongly_connected(int m, const std::vector<double>& trans) {
  auto reach = [&](bool forward) {
    std::vector<char> seen(m, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < m; ++v) {
        double w = forward ? trans[static_cast<std::size_t>(u) * m + v]
                           : trans[static_cast<std::size_t>(v) * m + u];
        if (w != kNegInf && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    for (char c : seen)
      if (!c) return false;
    return true;
  };
  return reach(true) && reach(false);
}

void check_entries(const std::vector<double>& logs, std::vector<Violation>& out,
                   const char* what) {
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (std::isnan(logs[i]) || logs[i] == kPosInf)
      out.push_back({"finite-entry", std::string(what) + " log-probability at index " +
                                         std::to_string(i) + " is not a valid log"});
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

IidSource::IidSource(std::vector<double> letter_log_probs)
    : log_probs_(std::move(letter_log_probs)) {
  if (log_probs_.empty()) throw SpecError("alphabet must have at least one letter");
}

IidSource IidSource::from_probs(const std::vector<double>& probs) {
  return IidSource(to_logs(probs));
}

double IidSource::word_log_prob(const Word& w) const {
  double lp = 0.0;
  for (int c : w) {
    if (c < 1 || c > alphabet_size())
      throw SpecError("letter " + std::to_string(c) + " outside alphabet 1.." +
                      std::to_string(alphabet_size()));
    lp += log_probs_[c - 1];
  }
  return lp;
}

MarkovSource::MarkovSource(std::vector<double> transition_log_probs,
                           std::vector<double> initial_log_probs)
    : trans_(std::move(transition_log_probs)), init_(std::move(initial_log_probs)) {
  if (init_.empty()) throw SpecError("alphabet must have at least one letter");
  m_ = static_cast<int>(init_.size());
  if (trans_.size() != static_cast<std::size_t>(m_) * m_)
    throw SpecError("transition matrix must be " + std::to_string(m_) + "x" +
                    std::to_string(m_) + ", got " + std::to_string(trans_.size()) +
                    " entries");
  irreducible_ = strongly_connected(m_, trans_);
}

MarkovSource MarkovSource::from_probs(const std::vector<double>& transition_row_major,
                                      const std::vector<double>& initial) {
  return MarkovSource(to_logs(transition_row_major), to_logs(initial));
}

double MarkovSource::word_log_prob(const Word& w) const {
  if (w.empty()) throw SpecError("word must have at least one letter");
  for (int c : w)
    if (c < 1 || c > m_)
      throw SpecError("letter " + std::to_string(c) + " outside alphabet 1.." +
                      std::to_string(m_));
  double lp = init_[w[0] - 1];
  for (std::size_t i = 1; i < w.size(); ++i) lp += transition_log(w[i - 1] - 1, w[i] - 1);
  return lp;
}

ExplicitSource::ExplicitSource(int alphabet_size, int k, std::vector<double> word_log_probs)
    : m_(alphabet_size), k_(k), logp_(std::move(word_log_probs)) {
  if (m_ < 1) throw SpecError("alphabet must have at least one letter");
  if (k_ < 1) throw SpecError("word length must be >= 1");
  double words = std::pow(static_cast<double>(m_), k_);
  if (words > 1e7)
    throw CapExceeded("explicit table would hold " + fmt(words) +
                      " words; the cap for materialized tables is 1e7");
  if (logp_.size() != static_cast<std::size_t>(words))
    throw SpecError("explicit table needs m^k = " + fmt(words) + " entries, got " +
                    std::to_string(logp_.size()));
}

double ExplicitSource::word_log_prob(const Word& w) const {
  if (static_cast<int>(w.size()) != k_)
    throw SpecError("word length " + std::to_string(w.size()) + " does not match table length " +
                    std::to_string(k_));
  std::size_t idx = 0;
  for (int c : w) {
    if (c < 1 || c > m_)
      throw SpecError("letter " + std::to_string(c) + " outside alphabet 1.." +
                      std::to_string(m_));
    idx = idx * m_ + static_cast<std::size_t>(c - 1);
  }
  return logp_[idx];
}

int alphabet_size(const Source& s) {
  return std::visit([](const auto& src) { return src.alphabet_size(); }, s);
}

double word_log_prob(const Source& s, const Word& w) {
  return std::visit([&](const auto& src) { return src.word_log_prob(w); }, s);
}

ExplicitSource make_counterexample_source(int m, int k, double eps) {
  if (m < 2) throw SpecError("counterexample needs an alphabet of at least 2 letters");
  if (k < 1) throw SpecError("word length must be >= 1");
  if (!(eps > 0.0)) throw SpecError("eps must be > 0");
  double words = std::pow(static_cast<double>(m), k);
  if (words > 1e7)
    throw CapExceeded("counterexample table would hold " + fmt(words) +
                      " words; the cap for materialized tables is 1e7");
  std::size_t n = static_cast<std::size_t>(words);
  double base = std::pow(static_cast<double>(m), -k);
  double top = base * (1.0 + eps);
  double rest = base * (1.0 - eps / (words - 1.0));
  if (!(rest > 0.0))
    throw SpecError("eps = " + fmt(eps) + " drives the non-top word probability to " +
                    fmt(rest) + "; it must stay positive");
  std::vector<double> logs(n, std::log(rest));
  logs[0] = std::log(top);
  return ExplicitSource(m, k, std::move(logs));
}

std::vector<Violation> validate(const Source& s) {
  std::vector<Violation> v;
  if (const auto* iid = std::get_if<IidSource>(&s)) {
    const auto& l = iid->letter_log_probs();
    check_entries(l, v, "letter");
    bool any_finite = false;
    for (double x : l) any_finite = any_finite || x != kNegInf;
    if (!any_finite) v.push_back({"support-nonempty", "every letter has probability 0"});
    double sum = exp_sum(l, 0, l.size());
    if (std::abs(sum - 1.0) > kSumTolIid)
      v.push_back({"letter-sum", "letter probabilities sum to " + fmt(sum)});
  } else if (const auto* mk = std::get_if<MarkovSource>(&s)) {
    int m = mk->alphabet_size();
    const auto& t = mk->transition_log_probs();
    check_entries(t, v, "transition");
    check_entries(mk->initial_log_probs(), v, "initial");
    for (int i = 0; i < m; ++i) {
      double sum = exp_sum(t, static_cast<std::size_t>(i) * m, static_cast<std::size_t>(i + 1) * m);
      if (std::abs(sum - 1.0) > kSumTolMarkov)
        v.push_back({"row-sum", "row " + std::to_string(i + 1) + " sums to " + fmt(sum)});
    }
    double isum = exp_sum(mk->initial_log_probs(), 0, static_cast<std::size_t>(m));
    if (std::abs(isum - 1.0) > kSumTolMarkov)
      v.push_back({"initial-sum", "initial probabilities sum to " + fmt(isum)});
    if (!mk->support_irreducible())
      v.push_back({"irreducible", "the positive-probability digraph is not strongly connected"});
  } else {
    const auto& ex = std::get<ExplicitSource>(s);
    const auto& l = ex.word_log_probs();
    check_entries(l, v, "word");
    double sum = exp_sum(l, 0, l.size());
    if (std::abs(sum - 1.0) > kSumTolExplicit)
      v.push_back({"word-sum", "word probabilities sum to " + fmt(sum)});
  }
  return v;
}

void require_valid(const Source& s) {
  auto v = validate(s);
  if (v.empty()) return;
  std::string msg = "invalid source:";
  for (const auto& viol : v) msg += " [" + viol.invariant + "] " + viol.detail + ";";
  throw SpecError(msg);
}

}  // namespace guesswork
