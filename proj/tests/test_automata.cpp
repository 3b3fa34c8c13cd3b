#include <doctest.h>

#include <functional>
#include <random>

#include "pisotmw/automata.hpp"

using namespace pisotmw;

namespace {

const Alphabet kDigits(-1, 1);

std::vector<DigitWord> all_words(const Alphabet& a, int max_len) {
  std::vector<DigitWord> out{DigitWord()};
  std::vector<DigitWord> layer{DigitWord()};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<DigitWord> next;
    for (const auto& w : layer) {
      for (int d : a.digits()) {
        DigitWord x = w;
        x.digits.push_back(d);
        next.push_back(x);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer.swap(next);
  }
  return out;
}

// A random NFA over {-1,0,1}, possibly with several initial states.
Automaton random_nfa(std::mt19937& rng, int states) {
  Automaton a = Automaton::over(kDigits);
  std::uniform_int_distribution<int> pick(0, states - 1), coin(0, 3);
  for (int q = 0; q < states; ++q) a.add_state(coin(rng) == 0);
  for (int q = 0; q < states; ++q) {
    for (int l = 0; l < 3; ++l) {
      int fan = coin(rng) % 3;
      for (int i = 0; i < fan; ++i) a.add_edge(q, l, pick(rng));
    }
  }
  a.add_initial(0);
  if (coin(rng) == 0) a.add_initial(pick(rng));
  return a;
}

// Recognizer built from a predicate, as a reference for language checks.
bool mod3_sum_zero(const DigitWord& w) {
  int s = 0;
  for (int d : w.digits) s += d;
  return ((s % 3) + 3) % 3 == 0;
}

Automaton mod3_automaton() {
  Automaton a = Automaton::over(kDigits);
  for (int q = 0; q < 3; ++q) a.add_state(q == 0);
  for (int q = 0; q < 3; ++q) {
    for (int d = -1; d <= 1; ++d) a.add_edge(q, a.label_index(digit_label(d)), ((q + d) % 3 + 3) % 3);
  }
  a.add_initial(0);
  return a;
}

}  // namespace

TEST_CASE("determinize_minimize collapses duplicated paths") {
  // 0*1 with the 0-loop duplicated across two states.
  Automaton a = Automaton::over(Alphabet(0, 1));
  int p = a.add_state(), q = a.add_state(), t = a.add_state(true);
  a.add_initial(p);
  a.add_initial(q);
  a.add_edge(p, 0, p);
  a.add_edge(p, 0, q);
  a.add_edge(q, 0, q);
  a.add_edge(p, 1, t);
  a.add_edge(q, 1, t);
  Automaton m = a.minimize();
  CHECK(m.num_states() == 2);
  CHECK(m.is_deterministic());
  CHECK(m.accepts(DigitWord::parse("0001")));
  CHECK_FALSE(m.accepts(DigitWord::parse("010")));
  CHECK(m.minimize() == m);
}

TEST_CASE("minimization preserves languages and is idempotent") {
  std::mt19937 rng(1);
  auto words = all_words(kDigits, 6);
  for (int trial = 0; trial < 40; ++trial) {
    Automaton a = random_nfa(rng, 5);
    Automaton m = a.minimize();
    CHECK(m.is_deterministic());
    CHECK(m.minimize() == m);
    CHECK(m.trim().num_states() == m.num_states());
    for (const auto& w : words) REQUIRE(m.accepts(w) == a.accepts(w));
    // Isomorphic copies yield identical canonical forms.
    CHECK(a.determinize().minimize() == m);
    CHECK(equivalent(a, m));
  }
}

TEST_CASE("Boolean operations") {
  std::mt19937 rng(2);
  auto words = all_words(kDigits, 6);
  for (int trial = 0; trial < 25; ++trial) {
    Automaton a = random_nfa(rng, 4), b = random_nfa(rng, 4);
    Automaton na = complement(a), nb = complement(b);
    Automaton both = intersect(a, b), either = unite(a, b), diff = difference(a, b);
    Automaton morgan1 = complement(unite(a, b)), morgan2 = intersect(na, nb);
    Automaton morgan3 = complement(intersect(a, b)), morgan4 = unite(na, nb);
    CHECK(morgan1 == morgan2);
    CHECK(morgan3 == morgan4);
    CHECK(complement(na) == a.minimize());
    CHECK(intersect(a, na).num_states() == 0);
    for (const auto& w : words) {
      bool x = a.accepts(w), y = b.accepts(w);
      REQUIRE(na.accepts(w) == !x);
      REQUIRE(both.accepts(w) == (x && y));
      REQUIRE(either.accepts(w) == (x || y));
      REQUIRE(diff.accepts(w) == (x && !y));
    }
  }
  CHECK_THROWS_AS(intersect(Automaton::over(kDigits), Automaton::over(Alphabet(0, 1))), Error);
}

TEST_CASE("predicate-defined languages") {
  Automaton m = mod3_automaton();
  Automaton nm = complement(m);
  for (const auto& w : all_words(kDigits, 7)) {
    REQUIRE(m.accepts(w) == mod3_sum_zero(w));
    REQUIRE(nm.accepts(w) == !mod3_sum_zero(w));
  }
  Automaton cat = concatenate(m, nm).minimize();
  for (const auto& w : all_words(kDigits, 6)) {
    bool split = false;
    for (std::size_t i = 0; i <= w.size(); ++i) {
      DigitWord u(std::vector<int>(w.digits.begin(), w.digits.begin() + i));
      DigitWord v(std::vector<int>(w.digits.begin() + i, w.digits.end()));
      split = split || (mod3_sum_zero(u) && !mod3_sum_zero(v));
    }
    REQUIRE(cat.accepts(w) == split);
  }
}

TEST_CASE("accepts and the empty word") {
  Automaton a = Automaton::over(kDigits);
  int q = a.add_state(false);
  a.add_initial(q);
  CHECK_FALSE(a.accepts(DigitWord()));
  a.set_terminal(q);
  CHECK(a.accepts(DigitWord()));
  CHECK(a.count_accepted(0) == 1);
  CHECK_FALSE(a.accepts(DigitWord::parse("2")));
}

TEST_CASE("enumeration and counting") {
  Automaton m = mod3_automaton();
  for (int k = 0; k <= 9; ++k) {
    auto listed = m.enumerate_words(k);
    CHECK(m.count_accepted(k) == listed.size());
    CHECK(std::is_sorted(listed.begin(), listed.end()));
    for (const auto& w : listed) CHECK(mod3_sum_zero(w));
  }
  CHECK(m.count_accepted(0) == 1);
  // 3^k / 3 words have digit sum divisible by 3.
  CHECK(m.count_accepted(9) == 6561);

  std::mt19937 rng(4);
  Automaton nfa = random_nfa(rng, 5);
  while (nfa.is_deterministic()) nfa = random_nfa(rng, 5);
  CHECK_THROWS_AS(nfa.count_accepted(3), Error);
  CHECK(nfa.count_paths(4) >= nfa.minimize().count_accepted(4));
  CHECK(nfa.minimize().count_accepted(5) == nfa.enumerate(5).size());

  CountMatrix adj = m.adjacency();
  CountMatrix sum(adj.size());
  for (int l = 0; l < 3; ++l) sum = sum + m.adjacency(l);
  CHECK(adj == sum);
  CHECK(adj.pow(4)(0, 0) == 27);
}

TEST_CASE("projection of transducers") {
  // Identity transducer on the digits.
  Automaton id = Automaton::over_pairs(kDigits, kDigits);
  int q = id.add_state(true);
  id.add_initial(q);
  for (int d = -1; d <= 1; ++d) id.add_edge(q, id.label_index({d, d}), q);
  Automaton in = project(id, Side::Input);
  CHECK(in.minimize() == Automaton::universal(1, in.labels()));

  // Only the pair (0101, 100-1).
  Automaton one = Automaton::over_pairs(kDigits, kDigits);
  DigitWord z = DigitWord::parse("0101"), y = DigitWord::parse("100-1");
  int prev = one.add_state();
  one.add_initial(prev);
  for (std::size_t i = 0; i < z.size(); ++i) {
    int next = one.add_state(i + 1 == z.size());
    one.add_edge(prev, one.label_index({z.digits[i], y.digits[i]}), next);
    prev = next;
  }
  CHECK(one.accepts(z, y));
  CHECK_FALSE(one.accepts(z, z));
  Automaton pin = project(one, Side::Input).minimize();
  Automaton pout = project(one, Side::Output).minimize();
  CHECK(pin.enumerate_words(4) == std::vector<DigitWord>{z});
  CHECK(pout.enumerate_words(4) == std::vector<DigitWord>{y});
  CHECK(pin.count_accepted(3) == 0);
}

TEST_CASE("JSON and DOT export") {
  std::mt19937 rng(5);
  Automaton a = random_nfa(rng, 6);
  Automaton back = Automaton::from_json(nlohmann::json::parse(a.to_json().dump()));
  CHECK(back == a);
  auto j = mod3_automaton().to_json();
  CHECK(j["states"] == 3);
  CHECK(j["labels"] == nlohmann::json::array({-1, 0, 1}));
  CHECK(j["transitions"].size() == 9);

  Automaton pair = Automaton::over_pairs(kDigits, kDigits);
  int q = pair.add_state(true);
  pair.add_initial(q);
  pair.add_edge(q, pair.label_index({1, -1}), q);
  CHECK(pair.to_dot().find("1|-1") != std::string::npos);
  CHECK(Automaton::from_json(pair.to_json()) == pair);
  CHECK_THROWS_AS(Automaton::from_json(nlohmann::json::parse(R"({"labels":[0],"states":1,"initial":[3],"terminal":[],"transitions":[]})")),
                  Error);
}
