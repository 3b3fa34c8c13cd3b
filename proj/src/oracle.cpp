#include "pisotmw/oracle.hpp"

#include <algorithm>

namespace pisotmw {

ExpansionOracle::ExpansionOracle(const PisotBasis& basis, Alphabet alphabet)
    : ExpansionOracle(basis, alphabet, alphabet) {}

ExpansionOracle::ExpansionOracle(const PisotBasis& basis, Alphabet alphabet, Alphabet reference)
    : basis_(basis), alphabet_(alphabet), reference_(reference), shares_table_(alphabet == reference) {
  if (reference.lo > alphabet.lo || reference.hi < alphabet.hi) {
    throw Error(ErrorCode::AlphabetMismatch, "reference alphabet must contain the alphabet");
  }
  std::int64_t sum = 0;
  for (std::size_t k = 0;; ++k) {
    std::int64_t u;
    try {
      u = basis.term64(k);
    } catch (const Error&) {
      break;
    }
    if (u > std::numeric_limits<std::int64_t>::max() / 64) break;
    terms_.push_back(u);
    sum += u;
    prefix_bound_.push_back(sum);
  }
  reference_table_.alphabet = reference;
  alphabet_table_.alphabet = alphabet;
}

int ExpansionOracle::greedy_length(std::int64_t n) const {
  n = std::abs(n);
  int len = 0;
  while (len < static_cast<int>(terms_.size()) && terms_[len] <= n) ++len;
  return len;
}

int ExpansionOracle::search_length(std::int64_t n) const {
  return std::min<int>(greedy_length(n) + kDefaultSlack, terms_.size());
}

// Slack is raised in steps of kDefaultSlack up to the last 63-bit term.
int ExpansionOracle::next_length(int top) const {
  if (top >= static_cast<int>(terms_.size())) {
    throw Error(ErrorCode::Overflow, "search length exceeds the 63-bit terms");
  }
  return std::min<int>(top + kDefaultSlack, terms_.size());
}

int ExpansionOracle::table_weight(Table& t, int pos, std::int64_t r) {
  if (pos < 0) return r == 0 ? 0 : kInf;
  if (pos >= static_cast<int>(terms_.size())) {
    throw Error(ErrorCode::Overflow, "search position beyond 63-bit terms");
  }
  const std::int64_t bound = static_cast<std::int64_t>(t.alphabet.max_abs()) * prefix_bound_[pos];
  if (r > bound || r < -bound) return kInf;
  if (static_cast<int>(t.weight.size()) <= pos) t.weight.resize(pos + 1);
  auto it = t.weight[pos].find(r);
  if (it != t.weight[pos].end()) return it->second;
  int best = kInf;
  const std::int64_t u = terms_[pos];
  for (int a = t.alphabet.lo; a <= t.alphabet.hi; ++a) {
    int rest = table_weight(t, pos - 1, r - a * u);
    if (rest < kInf) best = std::min(best, rest + std::abs(a));
  }
  t.weight[pos].emplace(r, best);
  return best;
}

std::uint64_t ExpansionOracle::table_count(Table& t, int pos, std::int64_t r) {
  if (pos < 0) return r == 0 ? 1 : 0;
  const int target = table_weight(t, pos, r);
  if (target >= kInf) return 0;
  if (static_cast<int>(t.count.size()) <= pos) t.count.resize(pos + 1);
  auto it = t.count[pos].find(r);
  if (it != t.count[pos].end()) return it->second;
  std::uint64_t total = 0;
  const std::int64_t u = terms_[pos];
  for (int a = t.alphabet.lo; a <= t.alphabet.hi; ++a) {
    int rest = table_weight(t, pos - 1, r - a * u);
    if (rest < kInf && rest + std::abs(a) == target) {
      if (__builtin_add_overflow(total, table_count(t, pos - 1, r - a * u), &total)) {
        throw Error(ErrorCode::Overflow, "expansion count exceeds 64 bits");
      }
    }
  }
  t.count[pos].emplace(r, total);
  return total;
}

int ExpansionOracle::min_weight(std::int64_t n) {
  if (n == 0) return 0;
  auto cached = min_weight_cache_.find(n);
  if (cached != min_weight_cache_.end()) return cached->second;
  int top = search_length(n);
  int w = table_weight(reference_table_, top - 1, n);
  while (true) {
    const int longer = next_length(top);
    int next = table_weight(reference_table_, longer - 1, n);
    if (next == w) break;
    w = next;
    top = longer;
  }
  if (w >= kInf) throw Error(ErrorCode::Unrepresentable, std::to_string(n) + " has no expansion over " +
                                                             reference_.to_string());
  min_weight_cache_.emplace(n, w);
  return w;
}

BigInt ExpansionOracle::count_fk(std::int64_t n, int k) {
  const int target = min_weight(n);
  Table& t = counting_table();
  if (table_weight(t, k - 1, n) != target) return 0;
  return BigInt(table_count(t, k - 1, n));
}

BigInt ExpansionOracle::count_f(std::int64_t n) {
  int top = search_length(n);
  BigInt c = count_fk(n, top);
  while (true) {
    const int longer = next_length(top);
    BigInt next = count_fk(n, longer);
    if (next == c) return c;
    c = next;
    top = longer;
  }
}

void ExpansionOracle::collect(Table& t, int pos, std::int64_t r, std::vector<int>& prefix,
                              std::vector<DigitWord>& out) {
  if (pos < 0) {
    out.emplace_back(prefix);
    return;
  }
  const int target = table_weight(t, pos, r);
  const std::int64_t u = terms_[pos];
  for (int a = t.alphabet.lo; a <= t.alphabet.hi; ++a) {
    int rest = table_weight(t, pos - 1, r - a * u);
    if (rest < kInf && rest + std::abs(a) == target) {
      prefix.push_back(a);
      collect(t, pos - 1, r - a * u, prefix, out);
      prefix.pop_back();
    }
  }
}

std::vector<DigitWord> ExpansionOracle::enumerate_minimal(std::int64_t n, int k) {
  std::vector<DigitWord> out;
  const int target = min_weight(n);
  Table& t = counting_table();
  if (table_weight(t, k - 1, n) != target) return out;
  std::vector<int> prefix;
  collect(t, k - 1, n, prefix, out);
  return out;
}

OracleResult ExpansionOracle::analyze(std::int64_t n) {
  OracleResult res;
  res.n = n;
  res.weight = min_weight(n);
  res.f = count_f(n);
  int top = search_length(n);
  while (count_fk(n, top) != res.f) top = next_length(top);
  for (auto& word : enumerate_minimal(n, top)) res.expansions_stripped.insert(word.stripped());
  return res;
}

bool ExpansionOracle::is_minimal(const DigitWord& word) {
  return word.weight() == min_weight(basis_.value_u64(word));
}

BConstants find_b(const PisotBasis& basis, int k_max, int cap) {
  BConstants out;
  out.horizon = k_max;
  for (int b = 1; b <= cap && (out.b_strict == 0 || out.b_weak == 0); ++b) {
    ExpansionOracle oracle(basis, Alphabet(1 - b, b - 1));
    bool strict = true, weak = true;
    int worst = -1, worst_k = 0;
    for (int k = 0; k <= k_max && weak; ++k) {
      int w;
      try {
        w = oracle.min_weight(static_cast<std::int64_t>(b) * basis.term64(k));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Unrepresentable) throw;
        strict = weak = false;
        break;
      }
      if (w > worst) {
        worst = w;
        worst_k = k;
      }
      strict = strict && w < b;
      weak = weak && w <= b;
    }
    if (weak && out.b_weak == 0) {
      out.b_weak = b;
      out.witness_weak = worst_k;
    }
    if (strict && out.b_strict == 0) {
      out.b_strict = b;
      out.witness_strict = worst_k;
    }
  }
  if (out.b_strict == 0 || out.b_weak == 0) {
    throw Error(ErrorCode::SearchExhausted, "no B <= " + std::to_string(cap) + " satisfies the bound");
  }
  return out;
}

Alphabet reference_alphabet(const PisotBasis& basis, const Alphabet& alphabet) {
  auto b = find_b(basis);
  return hull(alphabet, Alphabet(1 - b.b_weak, b.b_weak - 1));
}

}  // namespace pisotmw
