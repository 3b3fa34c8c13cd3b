// Batch front end. Exit status: 0 success, 1 failed verification or
// certification, 2 usage or configuration error, 3 computation error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pisotmw/acceptance.hpp"
#include "pisotmw/spectral.hpp"

using namespace pisotmw;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kCompute = 3 };

struct Config {
  std::string basis = "fibonacci";
  std::string basis_file;
  std::string alphabet = "-1..1";
  std::string format = "text";
  std::string out;
  int k = 12;
  std::int64_t n_max = 1000;
  int depth = 12;
  int bins = 64;
  double t_max = 4;
  int steps = 40;
  std::uint64_t seed = 1;
  int precision = 12;
  int k_cert = 12;
  int delta_cap = 0;
};

PisotBasis load_basis(const Config& c) {
  return c.basis_file.empty() ? PisotBasis::builtin(c.basis) : PisotBasis::from_file(c.basis_file);
}

ConstructionOptions options_of(const Config& c) {
  ConstructionOptions o;
  o.k_cert = c.k_cert;
  o.delta_cap = c.delta_cap;
  return o;
}

std::string render(const DigitWord& w) { return w.size() == 0 ? "0" : w.compact(); }

// Output goes to --out when given, else to stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::ParseError, "cannot open " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path);
  f << text;
}

int cmd_expand(const Config& c, std::int64_t n) {
  PisotBasis basis = load_basis(c);
  Alphabet alphabet = Alphabet::parse(c.alphabet);
  MinWeightAutomata m(basis, alphabet, options_of(c));
  DigitWord greedy = basis.greedy_expansion(n < 0 ? -n : n);
  if (n < 0) {
    for (int& d : greedy.digits) d = -d;
  }
  auto res = m.oracle().analyze(n);
  std::vector<std::string> minimal;
  for (const auto& w : res.expansions_stripped) minimal.push_back(render(w));
  std::string representative;
  try {
    representative = render(m.greedy_word(n).stripped());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unrepresentable) throw;
    representative = "none";
  }
  Sink sink(c.out);
  auto& out = sink.stream();
  if (c.format == "json") {
    out << nlohmann::json{{"n", n},
                          {"greedy", render(greedy)},
                          {"weight", res.weight},
                          {"minimal", minimal},
                          {"count", res.f.str()},
                          {"greedy_minimal", representative}}
               .dump(2)
        << '\n';
  } else if (c.format == "csv") {
    out << "n,greedy,weight,count,greedy_minimal,minimal\n";
    out << n << ',' << render(greedy) << ',' << res.weight << ',' << res.f << ',' << representative << ',';
    for (std::size_t i = 0; i < minimal.size(); ++i) out << (i ? " " : "") << minimal[i];
    out << '\n';
  } else {
    out << "greedy " << render(greedy) << '\n' << "weight " << res.weight << '\n' << "minimal";
    for (const auto& s : minimal) out << ' ' << s;
    out << '\n' << "greedy-minimal " << representative << '\n';
  }
  return kOk;
}

int cmd_build(const Config& c, const std::string& which) {
  PisotBasis basis = load_basis(c);
  Alphabet alphabet = Alphabet::parse(c.alphabet);
  Automaton a;
  std::optional<CertificationReport> report;
  if (which == "zero") {
    a = build_zero_automaton(basis, alphabet);
  } else {
    MinWeightAutomata m(basis, alphabet, options_of(c));
    if (which == "lbeta") {
      a = m.lbeta();
      report = m.lbeta_report();
    } else if (which == "lu") {
      a = m.lu();
      report = m.lu_report();
    } else if (which == "gu") {
      a = m.greedy();
      report = m.greedy_report();
    } else {
      a = m.normalizer();
      report = m.normalizer_report();
    }
  }
  const std::string prefix = c.out.empty() ? basis.name() + "-" + which : c.out;
  nlohmann::json j = a.to_json();
  if (report) j["certification"] = report->to_json();
  write_file(prefix + ".json", j.dump(2) + "\n");
  write_file(prefix + ".dot", a.to_dot(which));
  std::cout << which << ": " << a.num_states() << " states, " << a.num_edges() << " transitions";
  if (report) std::cout << ", certification " << (report->passed ? "passed" : "FAILED");
  std::cout << "\nwrote " << prefix << ".json and " << prefix << ".dot\n";
  if (report && !report->passed) {
    std::cout << report->to_json().dump(2) << '\n';
    return kFailed;
  }
  return kOk;
}

int cmd_analyze(const Config& c, const std::string& which) {
  PisotBasis basis = load_basis(c);
  Alphabet alphabet = Alphabet::parse(c.alphabet);
  MinWeightAutomata m(basis, alphabet, options_of(c));
  Sink sink(c.out);
  auto& out = sink.stream();
  out.precision(c.precision);
  if (which == "spectral" || which == "exponents") {
    auto r = spectral_report(m);
    nlohmann::json j = r.to_json();
    if (which == "exponents") {
      j = {{"eta", r.exps.eta}, {"theta", r.exps.theta}, {"zeta", r.exps.zeta}, {"lambda", r.exps.lambda},
           {"epsilon", r.epsilon}};
    }
    if (c.format == "json") {
      out << j.dump(2) << '\n';
    } else if (c.format == "csv" && which == "spectral") {
      out << "k,M_k\n";
      auto masses = total_masses(m, c.k);
      for (int k = 0; k <= c.k; ++k) out << k << ',' << masses[k] << '\n';
    } else {
      for (const auto& [key, value] : j.items()) out << key << ' ' << value.get<double>() << '\n';
    }
  } else if (which == "jsr") {
    auto profile = jsr_profile(output_matrices(m), c.depth);
    if (c.format == "json") {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& b : profile) rows.push_back({{"depth", b.depth}, {"lower", b.lower}, {"upper", b.upper}});
      out << rows.dump(2) << '\n';
    } else if (c.format == "csv") {
      out << "depth,lower,upper\n";
      for (const auto& b : profile) out << b.depth << ',' << b.lower << ',' << b.upper << '\n';
    } else {
      out << "lower " << profile.back().lower << "\nupper " << profile.back().upper << '\n';
    }
  } else if (which == "summatory") {
    const double alpha = dominant_eigs(m.lu().adjacency()).alpha;
    const double exponent = std::log(alpha) / std::log(basis.beta_double());
    auto table = summatory_table(m, c.n_max);
    auto ratio = [&](std::int64_t n) { return static_cast<double>(table[n]) / std::pow(static_cast<double>(n), exponent); };
    if (c.format == "csv") {
      out << "N,S,ratio\n";
      for (std::int64_t n = 1; n <= c.n_max; ++n) out << n << ',' << table[n] << ',' << ratio(n) << '\n';
    } else if (c.format == "json") {
      out << nlohmann::json{{"N", c.n_max}, {"S", table[c.n_max].str()}, {"ratio", ratio(c.n_max)}}.dump(2) << '\n';
    } else {
      out << "S " << table[c.n_max] << "\nratio " << ratio(c.n_max) << '\n';
    }
  } else if (which == "measure") {
    auto h = empirical_measure(m, c.k, c.bins);
    if (c.format == "json") {
      out << nlohmann::json{{"k", h.k}, {"bin_edges", h.bin_edges}, {"masses", h.masses}}.dump(2) << '\n';
    } else {
      out << h.to_csv();
    }
  } else if (which == "charfun") {
    if (c.format == "json") {
      nlohmann::json rows = nlohmann::json::array();
      for (int i = 0; i <= c.steps; ++i) {
        const double t = c.t_max * i / std::max(1, c.steps);
        auto v = characteristic_function(m, c.k, t);
        rows.push_back({{"t", t}, {"re", static_cast<double>(v.real())}, {"im", static_cast<double>(v.imag())}});
      }
      out << rows.dump(2) << '\n';
    } else {
      out << "t,re,im\n";
      for (int i = 0; i <= c.steps; ++i) {
        const double t = c.t_max * i / std::max(1, c.steps);
        auto v = characteristic_function(m, c.k, t);
        out << t << ',' << static_cast<double>(v.real()) << ',' << static_cast<double>(v.imag()) << '\n';
      }
    }
  } else {
    auto r = max_fk(m, c.k);
    if (c.format == "json") {
      out << nlohmann::json{{"k", c.k}, {"value", r.value.str()}, {"witness", r.witness}, {"word", render(r.word.stripped())}}
                 .dump(2)
          << '\n';
    } else if (c.format == "csv") {
      out << "k,value,witness\n";
      for (int k = 1; k <= c.k; ++k) {
        auto x = max_fk(m, k);
        out << k << ',' << x.value << ',' << x.witness << '\n';
      }
    } else {
      out << r.value << '\n' << "witness " << r.witness << " (" << render(r.word.stripped()) << ")\n";
    }
  }
  return kOk;
}

int cmd_verify(const Config& c, const std::string& suite) {
  AcceptanceRunner runner(load_basis(c), Alphabet::parse(c.alphabet), options_of(c));
  std::vector<CheckResult> results;
  bool all = true;
  for (int id : suite_criteria(parse_suite(suite))) {
    results.push_back(runner.run(id));
    all = all && results.back().passed;
    if (c.format == "text") std::cout << results.back().line() << std::endl;
  }
  nlohmann::json report = acceptance_report(results);
  report["basis"] = load_basis(c).name();
  report["alphabet"] = c.alphabet;
  report["seed"] = c.seed;
  if (c.format == "json") std::cout << report.dump(2) << '\n';
  if (!c.out.empty()) write_file(c.out, report.dump(2) + "\n");
  return all ? kOk : kFailed;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPisot:
    case ErrorCode::NotIncreasing:
    case ErrorCode::BadFirstTerm:
    case ErrorCode::InsufficientTerms:
    case ErrorCode::BasisMismatch:
    case ErrorCode::AlphabetMismatch:
    case ErrorCode::ParseError:
      return kUsage;
    case ErrorCode::CertificationFailed:
      return kFailed;
    default:
      return kCompute;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-weight expansions in Pisot numeration systems"};
  app.require_subcommand(1);
  // Global flags may follow the subcommand.
  app.fallthrough();
  Config c;
  app.add_option("--basis", c.basis, "Built-in basis: fibonacci, tribonacci, smallest-pisot")->capture_default_str();
  app.add_option("--basis-file", c.basis_file, "Basis description file (key = value)");
  app.add_option("--alphabet", c.alphabet, "Digit range lo..hi")->capture_default_str();
  app.add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json", "dot"}))
      ->capture_default_str();
  app.add_option("--out", c.out, "Output file (prefix for build)");
  app.add_option("--seed", c.seed, "Seed recorded in reports")->capture_default_str();
  app.add_option("--precision", c.precision, "Significant digits of printed reals")->capture_default_str();
  app.add_option("--k-cert", c.k_cert, "Certification word length")->capture_default_str();
  app.add_option("--delta-cap", c.delta_cap, "Weight-difference cap (0: automatic)")->capture_default_str();

  std::int64_t n = 0;
  auto* expand = app.add_subcommand("expand", "Greedy and minimal-weight expansions of n");
  expand->add_option("n", n, "Integer")->required()->allow_extra_args(false);

  std::string which;
  auto* build = app.add_subcommand("build", "Construct an automaton and write JSON and DOT");
  build->add_option("which", which, "zero, lbeta, lu, gu or normalizer")
      ->required()
      ->check(CLI::IsMember({"zero", "lbeta", "lu", "gu", "normalizer"}));

  auto* analyze = app.add_subcommand("analyze", "Spectral quantities and counts");
  analyze->add_option("which", which, "spectral, exponents, jsr, summatory, measure, charfun or maxfk")
      ->required()
      ->check(CLI::IsMember({"spectral", "exponents", "jsr", "summatory", "measure", "charfun", "maxfk"}));
  analyze->add_option("--k", c.k, "Word length")->capture_default_str();
  analyze->add_option("--N", c.n_max, "Summation bound")->capture_default_str();
  analyze->add_option("--depth", c.depth, "Product length for the JSR bounds")->capture_default_str();
  analyze->add_option("--bins", c.bins, "Histogram bins")->capture_default_str();
  analyze->add_option("--t-max", c.t_max, "Largest t for charfun")->capture_default_str();
  analyze->add_option("--steps", c.steps, "Number of t steps for charfun")->capture_default_str();

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_option("suite", suite, "all, automata, counts or spectral")
      ->check(CLI::IsMember({"all", "automata", "counts", "spectral"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!c.basis_file.empty() && app.count("--basis")) throw Error(ErrorCode::ParseError, "--basis and --basis-file both given");
    if (*expand) return cmd_expand(c, n);
    if (*build) return cmd_build(c, which);
    if (*analyze) return cmd_analyze(c, which);
    return cmd_verify(c, suite);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCompute;
  }
}
