#include <doctest.h>

#include <functional>
#include <map>
#include <set>

#include "pisotmw/constructions.hpp"

using namespace pisotmw;

namespace {

DigitWord w(const char* s) { return DigitWord::parse(s); }

const Alphabet kSigma(-1, 1);

// Shared Fibonacci chain; building it once keeps the suite fast.
MinWeightAutomata& fib() {
  static const PisotBasis basis = PisotBasis::fibonacci();
  static MinWeightAutomata m(basis, kSigma);
  return m;
}

// Calls visit(word, value) for every word of length exactly len.
void sweep(const PisotBasis& basis, const Alphabet& a, int len,
           const std::function<void(const DigitWord&, std::int64_t)>& visit) {
  std::vector<int> digits;
  std::function<void(std::int64_t)> rec = [&](std::int64_t v) {
    if (static_cast<int>(digits.size()) == len) {
      visit(DigitWord(digits), v);
      return;
    }
    const int pos = len - 1 - static_cast<int>(digits.size());
    for (int d = a.lo; d <= a.hi; ++d) {
      digits.push_back(d);
      rec(v + d * basis.term64(pos));
      digits.pop_back();
    }
  };
  rec(0);
}

bool has_factor(const DigitWord& word, const std::vector<int>& f) {
  const auto& d = word.digits;
  return std::search(d.begin(), d.end(), f.begin(), f.end()) != d.end();
}

// The Fibonacci greedy words avoid these factors and their negations.
bool avoids_greedy_factors(const DigitWord& word) {
  const std::vector<std::vector<int>> factors{{1, 1}, {1, -1}, {1, 0, 1}, {1, 0, -1}, {1, 0, 0, 1}};
  for (auto f : factors) {
    if (has_factor(word, f)) return false;
    for (int& x : f) x = -x;
    if (has_factor(word, f)) return false;
  }
  return true;
}

// Largest minus smallest stripped length among the minimal expansions of n.
int length_excess(ExpansionOracle& oracle, const PisotBasis& basis, std::int64_t n) {
  const int len = static_cast<int>(basis.greedy_expansion(n < 0 ? -n : n).size()) + 4;
  std::size_t lo = 1000, hi = 0;
  for (const auto& x : oracle.enumerate_minimal(n, len)) {
    std::size_t s = x.stripped().size();
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi >= lo ? static_cast<int>(hi - lo) : 0;
}

}  // namespace

TEST_CASE("zero automaton examples") {
  auto basis = PisotBasis::fibonacci();
  Automaton z = build_zero_automaton(basis, kSigma);
  CHECK(z.is_deterministic());
  CHECK(z.accepts(w("1-1-1")));
  CHECK(z.accepts(w("00")));
  CHECK(z.accepts(DigitWord()));
  CHECK_FALSE(z.accepts(w("10")));
}

TEST_CASE("zero automaton agrees with the U-value on all short words") {
  const Alphabet wide(-2, 2);
  for (const auto& name : PisotBasis::builtin_names()) {
    CAPTURE(name);
    auto basis = PisotBasis::builtin(name);
    Automaton z = build_zero_automaton(basis, wide);
    CHECK(z.trim().num_states() == z.num_states());
    std::size_t mismatches = 0, zeros = 0;
    for (int len = 0; len <= 8; ++len) {
      sweep(basis, wide, len, [&](const DigitWord& x, std::int64_t v) {
        zeros += v == 0;
        mismatches += z.accepts(x) != (v == 0);
      });
    }
    CHECK(mismatches == 0);
    CHECK(zeros > 9);
  }
}

TEST_CASE("L_beta for the golden ratio") {
  auto& m = fib();
  const Automaton& lb = m.lbeta();
  CHECK_FALSE(lb.accepts(w("11")));
  CHECK(lb.accepts(w("1")));
  CHECK(lb.accepts(w("101")));
  CHECK(m.lbeta_report().passed);
  // z is beta-minimal exactly when z 0^k is U-minimal for large k.
  auto basis = PisotBasis::fibonacci();
  ExpansionOracle oracle(basis, kSigma);
  const int k = 8;
  std::size_t mismatches = 0;
  for (int len = 0; len <= 8; ++len) {
    sweep(basis, kSigma, len, [&](const DigitWord& z, std::int64_t) {
      DigitWord shifted = z;
      shifted.digits.resize(z.size() + k, 0);
      bool minimal = shifted.weight() == oracle.min_weight(basis.value_u64(shifted));
      mismatches += lb.accepts(z) != minimal;
    });
  }
  CHECK(mismatches == 0);
}

TEST_CASE("L_U for Fibonacci") {
  auto& m = fib();
  const Automaton& lu = m.lu();
  CHECK(lu.accepts(w("100-1")));
  CHECK(lu.accepts(w("0101")));
  CHECK_FALSE(lu.accepts(w("11")));
  CHECK_FALSE(lu.accepts(w("1-1")));
  for (int j = 0; j < 20; ++j) CHECK(lu.accepts(DigitWord(std::vector<int>(j, 0))));
  CHECK(lu.enumerate_words(2).size() == 5);
  CHECK(lu.count_accepted(1) == 3);
  CHECK(m.lu_report().passed);
  CHECK(m.lu_report().k_cert == 12);
}

TEST_CASE("L_U agrees with the oracle on all 3^12 words") {
  auto basis = PisotBasis::fibonacci();
  ExpansionOracle oracle(basis, kSigma);
  const Automaton& lu = fib().lu();
  std::size_t mismatches = 0, minimal = 0;
  sweep(basis, kSigma, 12, [&](const DigitWord& z, std::int64_t v) {
    bool is_min = z.weight() == oracle.min_weight(v);
    minimal += is_min;
    mismatches += lu.accepts(z) != is_min;
  });
  CHECK(mismatches == 0);
  CHECK(lu.count_accepted(12) == minimal);
}

TEST_CASE("L_U is contained in L_beta") {
  auto& m = fib();
  Automaton extra = difference(m.lu(), m.lbeta());
  for (int k = 0; k <= 10; ++k) CHECK(extra.count_accepted(k) == 0);
}

TEST_CASE("greedy language G_F") {
  auto& m = fib();
  const Automaton& g = m.greedy();
  CHECK(g.accepts(w("100-1")));
  CHECK(g.accepts(w("10")));
  CHECK_FALSE(g.accepts(w("101")));
  CHECK(m.greedy_word(4) == w("100-1"));
  CHECK(m.greedy_word(0) == DigitWord());

  Automaton outside = difference(g, m.lu());
  for (int k = 0; k <= 10; ++k) CHECK(outside.count_accepted(k) == 0);

  for (int len = 0; len <= 12; ++len) {
    CAPTURE(len);
    std::size_t mismatches = 0;
    sweep(PisotBasis::fibonacci(), kSigma, len,
          [&](const DigitWord& z, std::int64_t) { mismatches += g.accepts(z) != avoids_greedy_factors(z); });
    CHECK(mismatches == 0);
  }
}

TEST_CASE("one greedy word per value") {
  auto basis = PisotBasis::fibonacci();
  const Automaton& g = fib().greedy();
  // Length 21 covers every |n| <= 5000 with room for the slack.
  std::map<std::int64_t, int> hits;
  for (const auto& z : g.enumerate_words(21)) ++hits[basis.value_u64(z)];
  for (std::int64_t n = -5000; n <= 5000; ++n) {
    auto it = hits.find(n);
    REQUIRE(it != hits.end());
    REQUIRE(it->second == 1);
  }
  ExpansionOracle oracle(basis, kSigma);
  for (std::int64_t n = -100; n <= 100; ++n) {
    DigitWord y = fib().greedy_word(n);
    CHECK(basis.value_u64(y) == n);
    CHECK(y.weight() == oracle.min_weight(n));
  }
}

TEST_CASE("normalizer") {
  auto& m = fib();
  const Automaton& n = m.normalizer();
  CHECK(n.arity() == 2);
  CHECK(n.accepts(w("0101"), w("100-1")));
  CHECK(n.accepts(w("100-1"), w("100-1")));
  CHECK_FALSE(n.accepts(w("0101"), w("0101")));
  for (const auto& path : n.enumerate(6)) {
    DigitWord in, out;
    for (const auto& l : path) {
      in.digits.push_back(l[0]);
      out.digits.push_back(l[1]);
    }
    CHECK_FALSE(has_factor(in, {1, 1}));
  }
  CHECK(m.count_f(4) == 2);
  CHECK(m.count_f(0) == 1);
  CHECK(m.normalizer_report().passed);
}

TEST_CASE("normalizer totality up to the length slack") {
  auto& m = fib();
  const int slack = m.length_slack();
  Automaton inputs = project(m.normalizer(), Side::Input).minimize();
  for (int len = 0; len <= 10; ++len) {
    for (const auto& z : m.lu().enumerate_words(len)) {
      bool found = false;
      for (int j = 0; j <= slack && !found; ++j) found = inputs.accepts(z.padded(z.size() + j));
      REQUIRE(found);
    }
  }
}

TEST_CASE("normalizer path counts match the oracle") {
  auto& m = fib();
  for (std::int64_t n = -300; n <= 300; ++n) REQUIRE(m.count_f(n) == m.oracle().count_f(n));
}

TEST_CASE("length slack") {
  auto& m = fib();
  CHECK(m.length_slack() == 1);
  auto basis = PisotBasis::fibonacci();
  ExpansionOracle oracle(basis, kSigma);
  int empirical = 0;
  for (std::int64_t n = -10000; n <= 10000; ++n) empirical = std::max(empirical, length_excess(oracle, basis, n));
  CHECK(empirical == m.length_slack());
  // Single-digit values have no competitor of weight 1 and another length.
  for (int k = 0; k < 15; ++k) {
    auto words = oracle.enumerate_minimal(basis.term64(k), k + 3);
    std::set<std::size_t> lengths;
    for (const auto& x : words) lengths.insert(x.stripped().size());
    CHECK(lengths.size() == 1);
  }
}

TEST_CASE("tribonacci slack is stable under a wider sweep") {
  auto basis = PisotBasis::tribonacci();
  MinWeightAutomata m(basis, kSigma);
  ExpansionOracle oracle(basis, kSigma);
  int narrow = 0, wide = 0;
  for (std::int64_t n = -2000; n <= 2000; ++n) narrow = std::max(narrow, length_excess(oracle, basis, n));
  wide = narrow;
  for (std::int64_t n = 2001; n <= 4000; ++n) {
    wide = std::max(wide, length_excess(oracle, basis, n));
    wide = std::max(wide, length_excess(oracle, basis, -n));
  }
  CHECK(narrow == wide);
  CHECK(m.length_slack() == wide);
}

TEST_CASE("structural diagnostics") {
  for (const auto& name : PisotBasis::builtin_names()) {
    CAPTURE(name);
    auto basis = PisotBasis::builtin(name);
    MinWeightAutomata m(basis, kSigma);
    auto d = m.diagnostics();
    CHECK(d.primitive);
    CHECK(d.scc_count == 1);
    CHECK(d.scc_matches_beta);
    CHECK(d.scc_covers_beta);
    CHECK(d.synchronizing_zeros >= 0);
    const int n = m.lbeta().num_states();
    CHECK(d.primitivity_exponent <= (n - 1) * (n - 1) + 1);
  }
  Automaton loops = Automaton::universal(1, Automaton::over(kSigma).labels());
  CHECK(primitivity_exponent(loops) == 1);
  CHECK(nontrivial_sccs(loops).size() == 1);
  CHECK(synchronizing_zeros(loops, 5) == 0);
}

TEST_CASE("certification reports") {
  auto j = fib().lu_report().to_json();
  CHECK(j["construction"] == "lu");
  CHECK(j["status"] == "certified");
  CHECK(j["k_cert"] == 12);
  CHECK_FALSE(j.contains("counterexample"));
}

TEST_CASE("narrow alphabet") {
  auto basis = PisotBasis::fibonacci();
  MinWeightAutomata m(basis, Alphabet(0, 1));
  CHECK(m.reference() == Alphabet(-1, 1));
  CHECK(m.lu().accepts(w("101")));
  CHECK_FALSE(m.lu().accepts(w("10101")));  // 12 = 10000-1 is lighter
  CHECK(m.count_f(12) == 0);
  CHECK(m.count_f(7) == 1);
}
