#pragma once

// The automata specific to minimal-weight expansions: the zero automaton,
// the recognizers of L_beta and L_U, the greedy language G_U, the
// normalizing transducer and the structural diagnostics.

#include <memory>
#include <optional>
#include <string>

#include "pisotmw/automata.hpp"
#include "pisotmw/numeration.hpp"
#include "pisotmw/oracle.hpp"

namespace pisotmw {

struct ConstructionOptions {
  int delta_cap = 0;             // 0: doubling from B up to 2B * (states of the difference zero automaton)
  int pad = -1;                  // -1: h + 4
  int k_cert = 12;
  int max_rounds = 4;
  std::size_t state_cap = 4'000'000;
  std::size_t pair_budget = 40'000'000;      // total (key, delta) pairs held by one reducer
  std::size_t cert_word_budget = 2'000'000;  // lowers k_cert for large alphabets
};

struct CertificationReport {
  std::string construction;
  int k_cert = 0;
  int delta_cap = 0;
  int pad = 0;
  int rounds = 0;
  bool passed = false;
  bool cap_stable = false;  // the next larger cap gave the same automaton
  std::optional<DigitWord> counterexample;

  nlohmann::json to_json() const;
};

/// Deterministic trim automaton of the words of U-value 0.
Automaton build_zero_automaton(const PisotBasis& basis, const Alphabet& alphabet,
                               std::size_t state_cap = 4'000'000);

/// The same for beta-values: transitions s -> beta s + a, accepting s = 0.
Automaton build_beta_zero_automaton(const PisotBasis& basis, const Alphabet& alphabet,
                                    std::size_t state_cap = 4'000'000);

struct DiagnosticsReport {
  bool primitive = false;
  int primitivity_exponent = 0;   // least e with A_beta^e > 0
  int scc_count = 0;              // nontrivial SCCs of M_U
  bool scc_matches_beta = false;  // that SCC equals M_beta up to terminal states
  bool scc_covers_beta = false;   // that SCC maps onto M_beta along common words
  int synchronizing_zeros = -1;   // least k with 0^k sending every M_beta state to the initial one
  nlohmann::json to_json() const;
};

/// Builds and caches the whole chain L_beta -> L_U -> G_U -> N for one basis
/// and digit alphabet. Every accessor certifies its result or throws
/// CertificationFailed.
class MinWeightAutomata {
 public:
  MinWeightAutomata(const PisotBasis& basis, Alphabet alphabet, ConstructionOptions options = {});
  ~MinWeightAutomata();
  MinWeightAutomata(const MinWeightAutomata&) = delete;
  MinWeightAutomata& operator=(const MinWeightAutomata&) = delete;

  const PisotBasis& basis() const { return basis_; }
  const Alphabet& alphabet() const { return alphabet_; }
  /// Digits allowed in the competing expansions (stands in for Z).
  const Alphabet& reference() const { return reference_; }
  const BConstants& b_constants() const { return b_; }

  const Automaton& zero_difference();  // zero automaton over alphabet - alphabet
  const Automaton& lbeta();
  const Automaton& lu();
  const Automaton& greedy();
  const Automaton& normalizer();
  const CertificationReport& lbeta_report();
  const CertificationReport& lu_report();
  const CertificationReport& greedy_report();
  const CertificationReport& normalizer_report();

  /// Longest excess length of a stripped L_U word over an equivalent one.
  int length_slack();
  DiagnosticsReport diagnostics();

  /// The G_U word of n without leading zeros (empty for 0).
  DigitWord greedy_word(std::int64_t n);
  /// f(n) as the number of normalizer paths with output 0^m y, y in G_U.
  BigInt count_f(std::int64_t n);

  ExpansionOracle& oracle() { return *oracle_; }

 private:
  struct Impl;
  void build_lbeta_lu();
  void build_greedy();
  void build_normalizer();

  const PisotBasis& basis_;
  Alphabet alphabet_;
  Alphabet reference_;
  ConstructionOptions options_;
  BConstants b_;
  std::unique_ptr<ExpansionOracle> oracle_;
  std::unique_ptr<Impl> impl_;
};

// Free-standing forms of the individual constructions.
Automaton build_min_weight_beta(const PisotBasis& basis, const Alphabet& alphabet, int delta_cap, int pad);
Automaton build_min_weight_u(const PisotBasis& basis, const Alphabet& alphabet);
Automaton build_greedy_automaton(const PisotBasis& basis, const Alphabet& alphabet);
Automaton build_normalizer(const PisotBasis& basis, const Alphabet& alphabet);
int length_slack(const PisotBasis& basis, const Alphabet& alphabet);
DiagnosticsReport diagnostics(const PisotBasis& basis, const Alphabet& alphabet);

/// Nontrivial strongly connected components (at least one edge inside).
std::vector<std::vector<int>> nontrivial_sccs(const Automaton& a);
/// Least e <= (n-1)^2 + 1 with A^e entrywise positive, or 0 if none.
int primitivity_exponent(const Automaton& a);
/// Least k such that reading 0^k from every state ends in the initial state, or -1.
int synchronizing_zeros(const Automaton& a, int limit);

}  // namespace pisotmw
