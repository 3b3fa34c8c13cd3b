#include "pisotmw/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "pisotmw/spectral.hpp"

namespace pisotmw {

namespace {

// Pinned limits and tolerances.
constexpr double kFindBSeconds = 1;
constexpr double kMaxFkSeconds = 120;
constexpr double kEquivalenceSeconds = 60;
constexpr double kNormalizerSeconds = 120;
constexpr double kJsrSeconds = 120;
constexpr double kSummatorySeconds = 300;
constexpr int kOracleMaxK = 12;
constexpr int kMatrixMaxK = 30;
constexpr int kWordLength = 12;
constexpr std::int64_t kValueRange = 5000;
constexpr int kZeroLength = 8;
constexpr int kMassMaxK = 12;
constexpr int kGrowthK = 40;
constexpr double kGrowthTolerance = 1e-3;
constexpr int kJsrDepth = 12;
constexpr int kJsrDepthGeneric = 8;
constexpr double kJsrGap = 0.02;
constexpr std::int64_t kSummatoryN = 100000;
constexpr double kBandFactor = 2;
constexpr double kProfileX = 1.3;
constexpr int kProfileFrom = 10, kProfileTo = 16;
constexpr double kProfileSpread = 0.10;
constexpr int kCharK0 = 10, kCharK1 = 18, kCharStep = 4;
constexpr double kCharUndershoot = 0.8;
constexpr int kMeasureK = 18;
constexpr int kMeasureBins = 64;
constexpr double kMassTolerance = 1e-12;
constexpr double kSelfSimilarity = 0.05;
constexpr std::int64_t kRoundTrip = 1000000;

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

// Visits every word of the given length with its value.
void sweep(const PisotBasis& basis, const Alphabet& a, int len,
           const std::function<void(const std::vector<int>&, std::int64_t)>& visit) {
  std::vector<int> digits;
  std::function<void(std::int64_t)> rec = [&](std::int64_t v) {
    if (static_cast<int>(digits.size()) == len) {
      visit(digits, v);
      return;
    }
    const auto pos = static_cast<std::size_t>(len - 1 - static_cast<int>(digits.size()));
    for (int d = a.lo; d <= a.hi; ++d) {
      digits.push_back(d);
      rec(v + d * basis.term64(pos));
      digits.pop_back();
    }
  };
  rec(0);
}

int weight_of(const std::vector<int>& digits) {
  int w = 0;
  for (int d : digits) w += std::abs(d);
  return w;
}

bool has_factor(const std::vector<int>& d, const std::vector<int>& f) {
  return std::search(d.begin(), d.end(), f.begin(), f.end()) != d.end();
}

bool avoids_greedy_factors(const std::vector<int>& word) {
  const std::vector<std::vector<int>> factors{{1, 1}, {1, -1}, {1, 0, 1}, {1, 0, -1}, {1, 0, 0, 1}};
  for (auto f : factors) {
    if (has_factor(word, f)) return false;
    for (int& x : f) x = -x;
    if (has_factor(word, f)) return false;
  }
  return true;
}

BigInt power_law(int k) { return BigInt(1) << ((k - 1) / 3); }

}  // namespace

Suite parse_suite(std::string_view name) {
  if (name == "all") return Suite::All;
  if (name == "automata") return Suite::Automata;
  if (name == "counts") return Suite::Counts;
  if (name == "spectral") return Suite::Spectral;
  throw Error(ErrorCode::ParseError, "unknown suite '" + std::string(name) + "'");
}

std::vector<int> suite_criteria(Suite suite) {
  switch (suite) {
    case Suite::Automata:
      return {3, 5, 6};
    case Suite::Counts:
      return {1, 2, 4, 7, 12};
    case Suite::Spectral:
      return {8, 9, 10, 11};
    case Suite::All:
      break;
  }
  return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
}

std::string CheckResult::line() const {
  std::ostringstream out;
  out << (passed ? "PASS" : "FAIL") << ' ' << (id < 10 ? " " : "") << id << "  " << name << "  ("
      << fmt(seconds) << " s";
  if (time_limit > 0) out << " / " << fmt(time_limit) << " s";
  out << ")";
  if (!detail.empty()) out << "  " << detail;
  return out.str();
}

nlohmann::json CheckResult::to_json() const {
  return {{"id", id},           {"name", name},     {"passed", passed}, {"seconds", seconds},
          {"time_limit", time_limit}, {"detail", detail}, {"values", values}};
}

nlohmann::json acceptance_report(const std::vector<CheckResult>& results) {
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    checks.push_back(r.to_json());
    all = all && r.passed;
  }
  return {{"passed", all}, {"checks", checks}};
}

AcceptanceRunner::AcceptanceRunner(PisotBasis basis, Alphabet alphabet, ConstructionOptions options)
    : basis_(std::move(basis)),
      alphabet_(alphabet),
      options_(options),
      pinned_(basis_.name() == "fibonacci" && alphabet_ == Alphabet(-1, 1)) {}

MinWeightAutomata& AcceptanceRunner::automata() {
  if (!automata_) automata_ = std::make_unique<MinWeightAutomata>(basis_, alphabet_, options_);
  return *automata_;
}

std::vector<CheckResult> AcceptanceRunner::run(const std::vector<int>& ids) {
  std::vector<CheckResult> out;
  for (int id : ids) out.push_back(run(id));
  return out;
}

CheckResult AcceptanceRunner::run(int id) {
  static const char* names[] = {"",
                                "B constants",
                                "maximum of f_k",
                                "L_U against the oracle",
                                "normalizer path counts",
                                "greedy words",
                                "zero automaton",
                                "transfer-matrix counts",
                                "joint spectral radius",
                                "summatory scaling",
                                "characteristic function",
                                "measure invariants",
                                "validation gate"};
  if (id < 1 || id > 12) throw Error(ErrorCode::DomainError, "no criterion " + std::to_string(id));
  const auto start = Clock::now();
  CheckResult r;
  try {
    switch (id) {
      case 1: r = b_constants(); break;
      case 2: r = max_fk_law(); break;
      case 3: r = lu_equivalence(); break;
      case 4: r = normalizer_counts(); break;
      case 5: r = greedy_uniqueness(); break;
      case 6: r = zero_automaton(); break;
      case 7: r = transfer_counts(); break;
      case 8: r = jsr_bracket(); break;
      case 9: r = summatory_scaling(); break;
      case 10: r = charfun_convergence(); break;
      case 11: r = measure_invariants(); break;
      default: r = validation_gate(); break;
    }
  } catch (const Error& e) {
    r.passed = false;
    r.detail = e.what();
  }
  r.id = id;
  r.name = names[id];
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (r.time_limit > 0 && r.seconds > r.time_limit) {
    r.passed = false;
    r.detail += " [over time limit]";
  }
  return r;
}

CheckResult AcceptanceRunner::b_constants() {
  CheckResult r;
  auto b = find_b(basis_);
  r.values = {{"b_weak", b.b_weak}, {"b_strict", b.b_strict}, {"horizon", b.horizon}};
  r.detail = "B_weak=" + std::to_string(b.b_weak) + " B_strict=" + std::to_string(b.b_strict);
  if (basis_.name() == "fibonacci") {
    r.time_limit = kFindBSeconds;
    r.passed = b.b_weak == 2 && b.b_strict == 3;
  } else {
    r.passed = b.b_weak >= 1 && b.b_strict >= b.b_weak;
  }
  return r;
}

CheckResult AcceptanceRunner::max_fk_law() {
  CheckResult r;
  r.time_limit = kMaxFkSeconds;
  auto& m = automata();
  int bad_oracle = 0, bad_matrix = 0, disagree = 0;
  const int oracle_k = kOracleMaxK;
  const int matrix_k = pinned_ ? kMatrixMaxK : kOracleMaxK;
  std::vector<BigInt> by_oracle(oracle_k + 1), by_matrix(matrix_k + 1);
  for (int k = 1; k <= oracle_k; ++k) by_oracle[k] = max_fk_oracle(m, k).value;
  for (int k = 1; k <= matrix_k; ++k) by_matrix[k] = max_fk(m, k).value;
  for (int k = 1; k <= std::min(oracle_k, matrix_k); ++k) disagree += by_oracle[k] != by_matrix[k];
  if (pinned_) {
    for (int k = 1; k <= oracle_k; ++k) bad_oracle += by_oracle[k] != power_law(k);
    for (int k = 1; k <= matrix_k; ++k) bad_matrix += by_matrix[k] != power_law(k);
  }
  r.values = {{"max_f30", pinned_ ? by_matrix[matrix_k].str() : ""}, {"max_f12", by_oracle[oracle_k].str()}};
  r.passed = bad_oracle == 0 && bad_matrix == 0 && disagree == 0;
  r.detail = "oracle k<=" + std::to_string(oracle_k) + " off " + std::to_string(bad_oracle) + ", matrices k<=" +
             std::to_string(matrix_k) + " off " + std::to_string(bad_matrix) + ", disagreements " +
             std::to_string(disagree);
  return r;
}

CheckResult AcceptanceRunner::lu_equivalence() {
  CheckResult r;
  r.time_limit = kEquivalenceSeconds;
  auto& m = automata();
  const Automaton& lu = m.lu();
  ExpansionOracle& oracle = m.oracle();
  // Length 12 over three digits; fewer digits for wider alphabets.
  int length = 0;
  for (double words = alphabet_.size(); words <= std::pow(3.0, kWordLength) + 0.5; words *= alphabet_.size()) ++length;
  std::size_t words = 0, mismatches = 0;
  for (int len = 0; len <= length; ++len) {
    sweep(basis_, alphabet_, len, [&](const std::vector<int>& z, std::int64_t v) {
      ++words;
      mismatches += lu.accepts(DigitWord(z)) != (weight_of(z) == oracle.min_weight(v));
    });
  }
  r.values = {{"words", words}, {"mismatches", mismatches}, {"max_length", length}};
  r.detail = std::to_string(words) + " words up to length " + std::to_string(length) + ", " +
             std::to_string(mismatches) + " mismatches";
  r.passed = mismatches == 0;
  return r;
}

CheckResult AcceptanceRunner::normalizer_counts() {
  CheckResult r;
  r.time_limit = kNormalizerSeconds;
  auto& m = automata();
  std::size_t mismatches = 0;
  for (std::int64_t n = -kValueRange; n <= kValueRange; ++n) mismatches += m.count_f(n) != m.oracle().count_f(n);
  r.values = {{"range", kValueRange}, {"mismatches", mismatches}};
  r.detail = "|n|<=" + std::to_string(kValueRange) + ", " + std::to_string(mismatches) + " mismatches";
  r.passed = mismatches == 0;
  return r;
}

CheckResult AcceptanceRunner::greedy_uniqueness() {
  CheckResult r;
  auto& m = automata();
  const Automaton& g = m.greedy();
  const int k = static_cast<int>(basis_.greedy_expansion(kValueRange).size()) + m.length_slack() + 1;
  auto counts = word_value_counts(g, basis_, k, kValueRange);
  std::size_t wrong = 0;
  for (std::int64_t n = -kValueRange; n <= kValueRange; ++n) {
    const std::uint64_t expected = pinned_ || m.oracle().count_f(n) > 0 ? 1 : 0;
    wrong += counts.at(n) != expected;
  }
  std::size_t factor_mismatches = 0, outside = 0;
  if (pinned_) {
    for (int len = 0; len <= kWordLength; ++len) {
      sweep(basis_, alphabet_, len, [&](const std::vector<int>& z, std::int64_t) {
        factor_mismatches += g.accepts(DigitWord(z)) != avoids_greedy_factors(z);
      });
    }
  }
  Automaton extra = difference(g, m.lu());
  for (int len = 0; len <= kWordLength; ++len) outside += extra.count_accepted(len) != 0;
  r.values = {{"length", k}, {"non_unique", wrong}, {"factor_mismatches", factor_mismatches}, {"outside_lu", outside}};
  r.detail = std::to_string(wrong) + " values without exactly one word";
  if (pinned_) r.detail += ", " + std::to_string(factor_mismatches) + " factor-language mismatches";
  r.passed = wrong == 0 && factor_mismatches == 0 && outside == 0;
  return r;
}

CheckResult AcceptanceRunner::zero_automaton() {
  CheckResult r;
  const Alphabet wide(-2, 2);
  std::vector<PisotBasis> bases;
  for (const auto& name : PisotBasis::builtin_names()) bases.push_back(PisotBasis::builtin(name));
  bool builtin = false;
  for (const auto& name : PisotBasis::builtin_names()) builtin = builtin || name == basis_.name();
  if (!builtin) bases.push_back(basis_);
  std::size_t mismatches = 0, words = 0;
  for (const auto& b : bases) {
    Automaton z = build_zero_automaton(b, wide);
    for (int len = 0; len <= kZeroLength; ++len) {
      sweep(b, wide, len, [&](const std::vector<int>& x, std::int64_t v) {
        ++words;
        mismatches += z.accepts(DigitWord(x)) != (v == 0);
      });
    }
  }
  r.values = {{"bases", bases.size()}, {"words", words}, {"mismatches", mismatches}};
  r.detail = std::to_string(bases.size()) + " bases, " + std::to_string(mismatches) + " mismatches";
  r.passed = mismatches == 0;
  return r;
}

CheckResult AcceptanceRunner::transfer_counts() {
  CheckResult r;
  auto& m = automata();
  auto masses = total_masses(m, kGrowthK + 1);
  std::size_t mismatches = 0;
  for (int k = 0; k <= kMassMaxK; ++k) {
    std::uint64_t count = 0;
    sweep(basis_, alphabet_, k,
          [&](const std::vector<int>& z, std::int64_t v) { count += weight_of(z) == m.oracle().min_weight(v); });
    mismatches += masses[k] != count;
  }
  const double alpha = dominant_eigs(m.lu().adjacency()).alpha;
  const double growth = std::log(static_cast<double>(masses[kGrowthK + 1]) / static_cast<double>(masses[kGrowthK]));
  const double error = std::abs(growth - std::log(alpha));
  r.values = {{"alpha", alpha}, {"growth_error", error}, {"mismatches", mismatches}};
  r.detail = std::to_string(mismatches) + " count mismatches for k<=" + std::to_string(kMassMaxK) +
             ", |log(M41/M40) - log alpha| = " + fmt(error);
  r.passed = mismatches == 0 && error <= kGrowthTolerance;
  return r;
}

CheckResult AcceptanceRunner::jsr_bracket() {
  CheckResult r;
  r.time_limit = kJsrSeconds;
  auto& m = automata();
  const int depth = pinned_ ? kJsrDepth : kJsrDepthGeneric;
  auto profile = jsr_profile(output_matrices(m), depth);
  bool monotone = true;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    monotone = monotone && profile[i].lower <= profile[i].upper;
    if (i > 0) monotone = monotone && profile[i].lower >= profile[i - 1].lower && profile[i].upper <= profile[i - 1].upper;
  }
  const auto& last = profile.back();
  r.values = {{"depth", depth}, {"lower", last.lower}, {"upper", last.upper}};
  r.detail = "depth " + std::to_string(depth) + ": [" + fmt(last.lower) + ", " + fmt(last.upper) + "]";
  r.passed = monotone;
  if (pinned_) {
    const double target = std::cbrt(2.0);
    r.passed = r.passed && last.lower <= target + 1e-12 && last.upper >= target - 1e-12 &&
               last.upper - last.lower <= kJsrGap;
    r.detail += ", gap " + fmt(last.upper - last.lower);
  }
  return r;
}

CheckResult AcceptanceRunner::summatory_scaling() {
  CheckResult r;
  r.time_limit = kSummatorySeconds;
  auto& m = automata();
  const double alpha = dominant_eigs(m.lu().adjacency()).alpha;
  const double beta = basis_.beta_double();
  const double exponent = std::log(alpha) / std::log(beta);
  auto table = summatory_table(m, kSummatoryN);
  auto ratio = [&](std::int64_t n) { return static_cast<double>(table[n]) / std::pow(static_cast<double>(n), exponent); };
  // The band is centred on the ratio at the largest N.
  const double ref = ratio(kSummatoryN);
  double lo = ref, hi = ref;
  for (std::int64_t n = 2; n <= kSummatoryN; ++n) {
    lo = std::min(lo, ratio(n));
    hi = std::max(hi, ratio(n));
  }
  double plo = 1e300, phi = 0;
  nlohmann::json samples = nlohmann::json::array();
  for (int j = kProfileFrom; j <= kProfileTo; ++j) {
    const auto n = static_cast<std::int64_t>(std::floor(std::pow(beta, j) * kProfileX));
    const double x = static_cast<double>(summatory(m, n).sum) / std::pow(static_cast<double>(n), exponent);
    samples.push_back({{"N", n}, {"ratio", x}});
    plo = std::min(plo, x);
    phi = std::max(phi, x);
  }
  const double spread = (phi - plo) / plo;
  r.values = {{"band", {lo, hi}}, {"reference", ref}, {"profile", samples}, {"profile_spread", spread}};
  r.detail = "ratios in [" + fmt(lo) + ", " + fmt(hi) + "] for N<=" + std::to_string(kSummatoryN) +
             ", sampled spread " + fmt(spread);
  r.passed = lo > 0 && lo >= ref / kBandFactor && hi <= ref * kBandFactor && spread <= kProfileSpread;
  return r;
}

CheckResult AcceptanceRunner::charfun_convergence() {
  CheckResult r;
  auto& m = automata();
  auto eig = dominant_eigs(m.lu().adjacency());
  const double beta = basis_.beta_double();
  const double eta = eta_exponent(eig.alpha, eig.alpha2_modulus, beta, default_epsilon(eig.alpha, eig.alpha2_modulus));
  const double needed = kCharUndershoot * std::pow(beta, 2 * eta);
  r.passed = true;
  nlohmann::json factors = nlohmann::json::object();
  std::ostringstream detail;
  detail << "need factor >= " << fmt(needed) << ":";
  for (double t : {0.3, 1.0, 2.7}) {
    auto diff = [&](int k) {
      return static_cast<double>(abs(characteristic_function(m, k, t) - characteristic_function(m, k + kCharStep, t)));
    };
    const double factor = diff(kCharK0) / diff(kCharK1);
    factors[fmt(t)] = factor;
    detail << " t=" << t << " " << fmt(factor);
    r.passed = r.passed && factor >= needed;
  }
  r.values = {{"eta", eta}, {"required", needed}, {"factors", factors}};
  r.detail = detail.str();
  return r;
}

CheckResult AcceptanceRunner::measure_invariants() {
  CheckResult r;
  auto& m = automata();
  auto h = empirical_measure(m, kMeasureK, kMeasureBins);
  double total = 0;
  for (double x : h.masses) total += x;
  bool symmetric = true;
  if (alphabet_.lo == -alphabet_.hi) {
    for (std::size_t i = 0; i < h.masses.size(); ++i) symmetric = symmetric && h.masses[i] == h.masses[h.masses.size() - 1 - i];
  }
  auto s = self_similarity_check(m, kMeasureK, -0.1, 0.1);
  r.values = {{"total_mass_error", std::abs(total - 1)}, {"symmetric", symmetric}, {"self_similarity", s.relative_deviation}};
  r.detail = "mass error " + fmt(std::abs(total - 1)) + (symmetric ? ", symmetric" : ", asymmetric") +
             ", self-similarity deviation " + fmt(s.relative_deviation);
  r.passed = std::abs(total - 1) <= kMassTolerance && symmetric && s.relative_deviation <= kSelfSimilarity;
  return r;
}

CheckResult AcceptanceRunner::validation_gate() {
  CheckResult r;
  int rejected = 0;
  for (std::vector<std::int64_t> poly : {std::vector<std::int64_t>{-3, 0, 1}, std::vector<std::int64_t>{-2, 0, 1}}) {
    try {
      PisotBasis::make(poly, {1, 2});
    } catch (const Error& e) {
      rejected += e.code() == ErrorCode::NotPisot;
    }
  }
  std::size_t failures = 0;
  for (std::int64_t n = 0; n <= kRoundTrip; ++n) {
    DigitWord g = basis_.greedy_expansion(n);
    failures += basis_.value_u64(g) != n || !basis_.is_greedy(g);
  }
  r.values = {{"rejected", rejected}, {"round_trip_failures", failures}};
  r.detail = std::to_string(rejected) + "/2 rejected as NotPisot, " + std::to_string(failures) +
             " round-trip failures for n<=" + std::to_string(kRoundTrip);
  r.passed = rejected == 2 && failures == 0;
  return r;
}

}  // namespace pisotmw
