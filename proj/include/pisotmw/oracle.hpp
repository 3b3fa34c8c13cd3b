#pragma once

// Brute-force ground truth for minimal-weight U-expansions. Every automaton
// built elsewhere is certified against this module, so it deliberately uses
// nothing but the base sequence and a memoized most-significant-first search.

#include <cstdint>
#include <limits>
#include <set>
#include <unordered_map>
#include <vector>

#include "pisotmw/numeration.hpp"

namespace pisotmw {

struct OracleResult {
  std::int64_t n = 0;
  int weight = 0;
  std::set<DigitWord> expansions_stripped;
  BigInt f = 0;
};

struct BConstants {
  int b_strict = 0;
  int b_weak = 0;
  int witness_strict = 0;  // k with the largest min_weight(B_strict U_k)
  int witness_weak = 0;
  int horizon = 0;         // k_max actually checked
};

class ExpansionOracle {
 public:
  static constexpr int kDefaultSlack = 8;

  /// Expansions are counted over `alphabet`. Minimality is judged over
  /// `reference`, which must contain `alphabet`; it stands in for Z* and
  /// defaults to `alphabet` itself.
  ExpansionOracle(const PisotBasis& basis, Alphabet alphabet);
  ExpansionOracle(const PisotBasis& basis, Alphabet alphabet, Alphabet reference);

  const Alphabet& alphabet() const { return alphabet_; }
  const Alphabet& reference() const { return reference_; }

  /// Minimal weight of a U-expansion of n over the reference alphabet.
  int min_weight(std::int64_t n);
  /// All length-k words over the alphabet of value n and minimal weight,
  /// in lexicographic order.
  std::vector<DigitWord> enumerate_minimal(std::int64_t n, int k);
  /// Number of minimal-weight expansions of n without leading zeros.
  BigInt count_f(std::int64_t n);
  /// Number of minimal-weight words of length exactly k.
  BigInt count_fk(std::int64_t n, int k);
  /// Weight, stripped expansions and their count.
  OracleResult analyze(std::int64_t n);
  /// True iff the word has the minimal weight of its value.
  bool is_minimal(const DigitWord& word);

  /// Length of the greedy expansion of |n| plus the search slack in use.
  int search_length(std::int64_t n) const;

 private:
  static constexpr int kInf = std::numeric_limits<int>::max() / 4;

  struct Table {
    Alphabet alphabet;
    std::vector<std::unordered_map<std::int64_t, int>> weight;       // per top position
    std::vector<std::unordered_map<std::int64_t, std::uint64_t>> count;
  };

  int table_weight(Table& t, int pos, std::int64_t r);
  std::uint64_t table_count(Table& t, int pos, std::int64_t r);
  void collect(Table& t, int pos, std::int64_t r, std::vector<int>& prefix, std::vector<DigitWord>& out);
  Table& counting_table() { return shares_table_ ? reference_table_ : alphabet_table_; }
  int greedy_length(std::int64_t n) const;
  int next_length(int top) const;

  const PisotBasis& basis_;
  Alphabet alphabet_;
  Alphabet reference_;
  bool shares_table_;
  std::vector<std::int64_t> terms_;
  std::vector<std::int64_t> prefix_bound_;  // sum_{j <= pos} U_j
  Table reference_table_;
  Table alphabet_table_;
  std::unordered_map<std::int64_t, int> min_weight_cache_;
};

/// The least B with min_weight(B U_k) < B (strict) respectively <= B (weak)
/// for all k <= k_max, searching expansions over {1-B, ..., B-1}.
BConstants find_b(const PisotBasis& basis, int k_max = 50, int cap = 32);

/// The alphabet over which minimal weights are exact for `alphabet`: the hull
/// of it and {1-B_weak, ..., B_weak-1}.
Alphabet reference_alphabet(const PisotBasis& basis, const Alphabet& alphabet);

}  // namespace pisotmw
