#include "cli_app.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "guesswork/errors.hpp"
#include "guesswork/logspace.hpp"
#include "guesswork/oracle.hpp"
#include "guesswork/rate.hpp"
#include "guesswork/scgf.hpp"
#include "guesswork/source_spec.hpp"
#include "guesswork/sources.hpp"

namespace guesswork::cli {
namespace {

constexpr double kLn2 = 0.6931471805599453;

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // normalizes -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt(std::uint64_t v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    std::size_t cut = s.find(sep);
    out.push_back(s.substr(0, cut));
    if (cut == std::string_view::npos) break;
    s = s.substr(cut + 1);
  }
  return out;
}

double parse_double(std::string_view tok, const std::string& flag) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw SpecError(flag + ": '" + std::string(tok) + "' is not a number");
  return v;
}

long long parse_int(std::string_view tok, const std::string& flag) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw SpecError(flag + ": '" + std::string(tok) + "' is not an integer");
  return v;
}

struct Grid {
  double lo;
  double hi;
  int count;
};

Grid parse_grid(const std::string& s, const std::string& flag) {
  auto parts = split(s, ':');
  if (parts.size() != 3) throw SpecError(flag + " must look like MIN:MAX:COUNT");
  Grid g{parse_double(parts[0], flag), parse_double(parts[1], flag),
         static_cast<int>(parse_int(parts[2], flag))};
  if (g.count < 2) throw SpecError(flag + " needs count >= 2");
  if (!(g.lo < g.hi)) throw SpecError(flag + " needs min < max");
  return g;
}

std::vector<double> grid_points(const Grid& g) {
  std::vector<double> xs(g.count);
  for (int j = 0; j < g.count; ++j)
    xs[j] = (j == g.count - 1) ? g.hi : g.lo + (g.hi - g.lo) * j / (g.count - 1);
  return xs;
}

std::vector<int> parse_k_list(const std::string& s) {
  std::vector<int> ks;
  for (auto tok : split(s, ',')) {
    long long k = parse_int(tok, "--k");
    if (k < 1 || k > 1'000'000) throw SpecError("--k values must be in 1..1e6");
    ks.push_back(static_cast<int>(k));
  }
  return ks;
}

struct RankSpec {
  int log_uniform_count = 0;      // 0 means an explicit list
  std::vector<double> ranks;      // explicit ranks, each >= 1
};

RankSpec parse_ranks(const std::string& s) {
  RankSpec spec;
  constexpr std::string_view prefix = "log-uniform:";
  if (std::string_view(s).substr(0, prefix.size()) == prefix) {
    long long c = parse_int(std::string_view(s).substr(prefix.size()), "--ranks");
    if (c < 2 || c > 1'000'000) throw SpecError("--ranks log-uniform count must be in 2..1e6");
    spec.log_uniform_count = static_cast<int>(c);
    return spec;
  }
  for (auto tok : split(s, ',')) {
    double n = parse_double(tok, "--ranks");
    if (!(n >= 1.0)) throw SpecError("--ranks entries must be >= 1");
    spec.ranks.push_back(n);
  }
  return spec;
}

struct Options {
  std::string source_path;
  std::string out_path;
  std::string unit = "nats";
  std::uint64_t cap = kDefaultCap;
  std::string alpha;   // MIN:MAX:COUNT
  std::string x;       // MIN:MAX:COUNT
  std::string k;       // comma list
  std::string ranks = "log-uniform:200";

  bool bits() const { return unit == "bits"; }
  // log-domain values convert to bits at the output boundary and nowhere else
  double u(double v) const { return bits() ? v / kLn2 : v; }
};

void emit_turn_header(std::string& out, const Options& opt, const ScgfCurve& curve) {
  const TurnResult& t = curve.turn();
  out += "# gamma = " + fmt(opt.u(curve.gamma())) + "\n";
  out += "# turn = " + fmt(opt.u(t.value)) + "\n";
  out += "# turn_converged = " + std::string(t.converged ? "true" : "false") + "\n";
  out += "# turn_classified = " + std::string(turn_class_name(t.classified)) + "\n";
  out += "# support_rate = " + fmt(opt.u(curve.support_rate())) + "\n";
  out += "# shannon_slope = " + fmt(opt.u(curve.shannon_slope())) + "\n";
}

std::string run_scgf(const Options& opt, const Source& src) {
  require_valid(src);
  ScgfCurve curve = ScgfCurve::analyze(src);
  Grid g = parse_grid(opt.alpha.empty() ? "-0.9:5:60" : opt.alpha, "--alpha");
  if (g.lo <= -1.0)
    throw SpecError("--alpha grid must stay above -1 (lambda is constant below)");
  std::string out;
  out += "# command = scgf\n";
  out += "# unit = " + opt.unit + "\n";
  emit_turn_header(out, opt, curve);
  out += "alpha,lambda,lambda_prime\n";
  for (double a : grid_points(g)) {
    out += fmt(a) + "," + fmt(opt.u(curve.lambda(a))) + "," +
           fmt(opt.u(curve.lambda_prime(a))) + "\n";
  }
  return out;
}

std::string run_exact(const Options& opt, const Source& src) {
  require_valid(src);
  auto ks = parse_k_list(opt.k);
  if (ks.size() != 1) throw SpecError("exact takes a single --k");
  GuessworkTable table = build_table(src, ks[0], opt.cap);
  Grid g = parse_grid(opt.alpha.empty() ? "1:2:2" : opt.alpha, "--alpha");

  std::string out;
  out += "# command = exact\n";
  out += "# unit = " + opt.unit + "\n";
  out += "# k = " + fmt(static_cast<std::uint64_t>(ks[0])) + "\n";
  out += "# alphabet = " + fmt(static_cast<std::uint64_t>(alphabet_size(src))) + "\n";
  out += "# levels = " + fmt(static_cast<std::uint64_t>(table.levels().size())) + "\n";
  out += "# ranks_exact = " + std::string(table.ranks_exact() ? "true" : "false") + "\n";
  out += "# zero_words = " + fmt(table.zero_word_count()) + "\n";
  out += "# log_nonzero_words = " + fmt(opt.u(table.log_total_words())) + "\n";
  out += "# scaled_expected_log_guesswork = " + fmt(opt.u(expected_log_guesswork(table))) + "\n";
  out += "# scaled_shannon_entropy = " + fmt(opt.u(shannon_entropy_exact(table))) + "\n";
  out += "# empirical_turn_log_count = " + fmt(opt.u(empirical_turn_log_count(table))) + "\n";
  out += "# empirical_turn_count = " +
         (table.ranks_exact() ? fmt(empirical_turn_count(table)) : std::string("none")) + "\n";
  for (double a : grid_points(g)) {
    MomentReport mr = scaled_log_moment(table, a);
    out += "# scaled_log_moment[" + fmt(a) + "] = " + fmt(opt.u(mr.scaled_log_moment)) + "\n";
  }
  out += "level,log_prob,log_count,count,rank_start,rank_end\n";
  for (std::size_t j = 0; j < table.levels().size(); ++j) {
    const Level& lv = table.levels()[j];
    out += fmt(static_cast<std::uint64_t>(j)) + "," + fmt(opt.u(lv.log_prob)) + "," +
           fmt(opt.u(lv.log_count));
    if (table.ranks_exact()) {
      out += "," + fmt(table.exact_count(j)) + "," + fmt(table.rank_start(j)) + "," +
             fmt(table.rank_end(j));
    } else {
      out += ",,,";
    }
    out += "\n";
  }
  return out;
}

std::string run_rate(const Options& opt, const Source& src) {
  require_valid(src);
  ScgfCurve curve = ScgfCurve::analyze(src);
  RateFunction rf(std::move(curve));
  Grid g = opt.x.empty() ? Grid{0.0, rf.log_alphabet(), 100} : parse_grid(opt.x, "--x");
  std::string out;
  out += "# command = rate\n";
  out += "# unit = " + opt.unit + "\n";
  emit_turn_header(out, opt, rf.curve());
  out += "# turn_x = " + fmt(opt.u(rf.turn_x())) + "\n";
  out += "x,rate,segment\n";
  for (const auto& pt : rf.rate_curve(g.lo, g.hi, g.count)) {
    out += fmt(opt.u(pt.x)) + "," + fmt(opt.u(pt.value)) + "," + segment_name(pt.segment) + "\n";
  }
  return out;
}

std::string run_compare(const Options& opt, const Source& src) {
  require_valid(src);
  ScgfCurve curve = ScgfCurve::analyze(src);
  RateFunction rf(curve);
  RankSpec ranks = parse_ranks(opt.ranks);
  auto ks = parse_k_list(opt.k.empty() ? "10,20,100" : opt.k);
  const double log_m = rf.log_alphabet();

  std::string out;
  out += "# command = compare\n";
  out += "# unit = " + opt.unit + "\n";
  emit_turn_header(out, opt, curve);
  out += "k,n,x,log_pmf_exact,log_pmf_approx,log_prob_estimate,scaled_log_pmf_exact,scaled_gap\n";
  for (int k : ks) {
    GuessworkTable table = build_table(src, k, opt.cap);
    std::vector<double> log_ns;
    if (ranks.log_uniform_count > 0) {
      // zero-probability words occupy the trailing ranks; sample the rest
      double hi = std::min(k * log_m, table.log_total_words());
      int c = ranks.log_uniform_count;
      for (int j = 0; j < c; ++j) log_ns.push_back(hi * j / (c - 1));
    } else {
      for (double n : ranks.ranks) {
        double ln = std::log(n);
        if (ln > k * log_m + 1e-9)
          throw SpecError("--ranks entry " + fmt(n) + " exceeds m^k for k = " +
                          fmt(static_cast<std::uint64_t>(k)));
        log_ns.push_back(ln);
      }
    }
    for (double ln : log_ns) {
      std::string shown;
      if (ln < 36.0) {
        // snap to an integer rank whenever one is representable
        auto n = static_cast<std::uint64_t>(std::llround(std::exp(ln)));
        if (n < 1) n = 1;
        ln = std::log(static_cast<double>(n));
        shown = fmt(n);
      } else {
        shown = fmt(std::exp(ln));
      }
      double x = ln / k;
      double exact = ln > table.log_total_words() + 1e-12
                         ? kNegInf
                         : guesswork_pmf_log_rank(table, ln);
      double approx = rf.approx_log_pmf(k, ln);
      double est = rf.nth_word_log_prob_estimate(k, x);
      double gap = (exact == approx) ? 0.0 : std::abs(approx - exact) / k;
      out += fmt(static_cast<std::uint64_t>(k)) + "," + shown + "," + fmt(opt.u(x)) + "," +
             fmt(opt.u(exact)) + "," + fmt(opt.u(approx)) + "," + fmt(opt.u(est)) + "," +
             fmt(opt.u(exact / k)) + "," + fmt(opt.u(gap)) + "\n";
    }
  }
  return out;
}

std::string run_validate(const Options& opt, const Source& src, int& exit_code) {
  std::vector<Violation> vs = validate(src);
  std::string out;
  out += "# command = validate\n";
  out += "# source = " + opt.source_path + "\n";
  out += "# violations = " + fmt(static_cast<std::uint64_t>(vs.size())) + "\n";
  out += "invariant,detail\n";
  for (const auto& v : vs) out += v.invariant + "," + v.detail + "\n";
  exit_code = vs.empty() ? 0 : 2;
  return out;
}

int write_output(const Options& opt, const std::string& payload) {
  if (opt.out_path.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return 0;
  }
  std::ofstream f(opt.out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open output file: " << opt.out_path << "\n";
    return 2;
  }
  f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  return f ? 0 : 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"guesswork: exact and asymptotic guessing-difficulty analysis"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--source", opt.source_path, "source spec file")->required();
    sub->add_option("--out", opt.out_path, "output file (default stdout)");
    sub->add_option("--unit", opt.unit, "nats|bits (default nats)")
        ->check(CLI::IsMember({"nats", "bits"}));
    sub->add_option("--cap", opt.cap, "enumeration cap (default 1e7)");
    return sub;
  };

  CLI::App* scgf = add_common(app.add_subcommand(
      "scgf", "scaled moment-growth curve with its constants"));
  scgf->add_option("--alpha", opt.alpha, "alpha grid MIN:MAX:COUNT (default -0.9:5:60)");

  CLI::App* exact = add_common(app.add_subcommand(
      "exact", "exact guesswork table, entropies and moments at one k"));
  exact->add_option("--k", opt.k, "word length")->required();
  exact->add_option("--alpha", opt.alpha, "moment grid MIN:MAX:COUNT (default 1:2:2)");

  CLI::App* compare = add_common(app.add_subcommand(
      "compare", "exact pmf against its asymptotic approximations"));
  compare->add_option("--k", opt.k, "comma list of word lengths (default 10,20,100)");
  compare->add_option("--ranks", opt.ranks,
                      "comma list of ranks or log-uniform:COUNT (default log-uniform:200)");

  CLI::App* rate = add_common(app.add_subcommand(
      "rate", "decay-rate curve of the guesswork distribution"));
  rate->add_option("--x", opt.x, "x grid MIN:MAX:COUNT (default 0:log(m):100)");

  CLI::App* validate_cmd = add_common(app.add_subcommand(
      "validate", "report source invariant violations"));

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Source src = load_source_file(opt.source_path);
    std::string payload;
    int exit_code = 0;
    if (scgf->parsed()) payload = run_scgf(opt, src);
    else if (exact->parsed()) payload = run_exact(opt, src);
    else if (compare->parsed()) payload = run_compare(opt, src);
    else if (rate->parsed()) payload = run_rate(opt, src);
    else payload = run_validate(opt, src, exit_code);
    (void)validate_cmd;
    int io = write_output(opt, payload);
    return io != 0 ? io : exit_code;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> owned;
  owned.reserve(args.size() + 1);
  owned.push_back("guesswork");
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(owned.size());
  for (const auto& a : owned) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace guesswork::cli
