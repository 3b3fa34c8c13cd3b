#include "pisotmw/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <tuple>
#include <queue>
#include <set>
#include <unordered_map>

namespace pisotmw {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

struct VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL + (h >> 29);
    return h;
  }
};

struct PairVecHash {
  std::size_t operator()(const std::vector<std::pair<int, int>>& v) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto [a, b] : v) h = (h ^ (static_cast<std::size_t>(a) * 1315423911u + static_cast<std::size_t>(b))) * 0x100000001b3ULL;
    return h;
  }
};

// States (s, last h digits) of the automaton reading a digit word and
// tracking its U-value (or, without buffer, its beta-value). Keys that can
// no longer reach value 0 are pruned by the embedding bounds.
class KeySpace {
 public:
  static constexpr int kZero = 0;

  KeySpace(const PisotBasis& basis, int max_digit, bool with_buffer, std::size_t cap)
      : basis_(basis), d_(basis.degree()), h_(with_buffer ? basis.onset() : 0), c_(max_digit), cap_(cap) {
    const auto& roots = basis.roots();
    const double beta = basis.beta_double();
    conj_bound_.push_back(0);
    for (int i = 1; i < d_; ++i) {
      double mod = std::abs(std::complex<double>(static_cast<double>(roots[i].real()),
                                                 static_cast<double>(roots[i].imag())));
      conj_bound_.push_back(c_ / (1 - mod) * (1 + 1e-9) + 1e-9);
    }
    if (with_buffer) {
      const auto& c = basis.recurrence_constants();
      double rest = 0;
      for (int i = 1; i < d_; ++i) rest += std::abs(c[i]) * c_ / (1 - std::abs(std::complex<double>(
                                                                        static_cast<double>(roots[i].real()),
                                                                        static_cast<double>(roots[i].imag()))));
      for (int j = 0; j < h_; ++j) rest += static_cast<double>(c_) * static_cast<double>(basis.term64(j));
      bound_ = rest / std::abs(c[0]) + c_ / (beta - 1);
      for (int j = 0; j < d_; ++j) u_high_.push_back(basis.term64(h_ + j));
      for (int j = 0; j < h_; ++j) u_low_.push_back(basis.term64(j));
    } else {
      bound_ = c_ / (beta - 1);
    }
    bound_ = bound_ * (1 + 1e-9) + 1e-9;
    intern(std::vector<std::int64_t>(d_ + h_, 0));
  }

  int size() const { return static_cast<int>(keys_.size()); }
  int max_digit() const { return c_; }
  bool value_zero(int key) const { return value_zero_[key]; }
  const std::vector<std::int64_t>& key(int id) const { return keys_[id]; }

  // Explores the whole key graph and then drops the keys from which no
  // value-zero key is reachable, so that step() never returns them.
  void restrict_to_live() {
    for (int k = 0; k < size(); ++k) {
      for (int e = -c_; e <= c_; ++e) step(k, e);
    }
    const int n = size();
    std::vector<std::vector<int>> back(n);
    for (int k = 0; k < n; ++k) {
      for (int t : next_[k]) {
        if (t >= 0) back[t].push_back(k);
      }
    }
    std::vector<char> live(n);
    std::vector<int> stack;
    for (int k = 0; k < n; ++k) {
      if (value_zero_[k]) {
        live[k] = 1;
        stack.push_back(k);
      }
    }
    while (!stack.empty()) {
      int k = stack.back();
      stack.pop_back();
      for (int p : back[k]) {
        if (!live[p]) {
          live[p] = 1;
          stack.push_back(p);
        }
      }
    }
    for (auto& row : next_) {
      for (int& t : row) {
        if (t >= 0 && !live[t]) t = -1;
      }
    }
  }

  int step(int key, int e) {
    int& slot = next_[key][e + c_];
    if (slot != -2) return slot;
    std::vector<std::int64_t> s(keys_[key].begin(), keys_[key].begin() + d_);
    basis_.ring()->mul_by_beta(s);
    const std::int64_t incoming = h_ > 0 ? keys_[key][d_] : e;
    s[0] = checked_add(s[0], incoming);
    if (std::abs(basis_.embed_double(s, 1)) > bound_) return slot = -1;
    for (int i = 1; i < d_; ++i) {
      if (std::abs(basis_.embed_double(s, i + 1)) > conj_bound_[i]) return slot = -1;
    }
    if (h_ > 0) {
      for (int j = 1; j < h_; ++j) s.push_back(keys_[key][d_ + j]);
      s.push_back(e);
    }
    int id = intern(std::move(s));
    // next_ may have been reallocated.
    return next_[key][e + c_] = id;
  }

 private:
  int intern(std::vector<std::int64_t> k) {
    auto it = index_.find(k);
    if (it != index_.end()) return it->second;
    if (keys_.size() >= cap_) throw Error(ErrorCode::StateExplosion, "zero-automaton key space exceeds the cap");
    int id = static_cast<int>(keys_.size());
    bool zero;
    if (h_ > 0 || !u_high_.empty()) {
      std::int64_t v = 0;
      for (int j = 0; j < d_; ++j) v = checked_add(v, checked_mul(k[j], u_high_[j]));
      for (int j = 0; j < h_; ++j) v = checked_add(v, checked_mul(k[d_ + j], u_low_[h_ - 1 - j]));
      zero = v == 0;
    } else {
      zero = std::all_of(k.begin(), k.end(), [](std::int64_t x) { return x == 0; });
    }
    value_zero_.push_back(zero);
    next_.emplace_back(2 * c_ + 1, -2);
    index_.emplace(k, id);
    keys_.push_back(std::move(k));
    return id;
  }

  const PisotBasis& basis_;
  int d_, h_, c_;
  std::size_t cap_;
  double bound_ = 0;
  std::vector<double> conj_bound_;
  std::vector<std::int64_t> u_high_, u_low_;
  std::vector<std::vector<std::int64_t>> keys_;
  std::unordered_map<std::vector<std::int64_t>, int, VecHash> index_;
  std::vector<std::vector<int>> next_;
  std::vector<char> value_zero_;
};

Automaton zero_automaton_from(KeySpace& keys, const Alphabet& alphabet) {
  Automaton a = Automaton::over(alphabet);
  std::vector<int> state_of;
  std::vector<int> key_of;
  auto state = [&](int key) {
    if (key >= static_cast<int>(state_of.size())) state_of.resize(key + 1, -1);
    if (state_of[key] < 0) {
      state_of[key] = a.add_state(keys.value_zero(key));
      key_of.push_back(key);
    }
    return state_of[key];
  };
  a.add_initial(state(KeySpace::kZero));
  const auto digits = alphabet.digits();
  for (std::size_t cur = 0; cur < key_of.size(); ++cur) {
    for (std::size_t l = 0; l < digits.size(); ++l) {
      int next = keys.step(key_of[cur], digits[l]);
      if (next >= 0) a.add_edge(static_cast<int>(cur), static_cast<int>(l), state(next));
    }
  }
  return a.trim();
}

// Determinized two-tape reducer: reads z over `input`, guesses y over
// `output`, and accepts when y is lighter and equivalent. States map each
// key to the least weight difference seen (smaller is better), so subsumed
// pairs are dropped. delta above the cap is cut, below -cap saturated; both
// only lose reductions.
class Reducer {
 public:
  enum class Mode { Beta, U };

  Reducer(KeySpace& keys, Alphabet input, Alphabet output, int cap, int pad, Mode mode, std::size_t state_cap,
          std::size_t pair_budget)
      : keys_(keys),
        input_(input),
        output_(output),
        cap_(cap),
        pad_(pad),
        mode_(mode),
        state_cap_(state_cap),
        pair_budget_(pair_budget) {}

  // U mode only: also run the DFA of words outside L_beta, and send a word
  // to the accepting sink once its part before the last `tail` digits has
  // left L_beta. This accepts (not L_beta) Sigma^tail together with the
  // reducible words, and keeps the exploration away from inputs that are
  // already decided.
  void track_beta(const Automaton& not_beta, int tail) {
    beta_ = &not_beta;
    beta_table_ = not_beta.transition_table();
    tail_ = tail;
  }

  Automaton build() {
    start_ = zero_input_closure(cap_);
    Automaton a = Automaton::over(input_);
    std::unordered_map<std::vector<std::pair<int, int>>, int, PairVecHash> index;
    std::vector<std::vector<std::pair<int, int>>> states;
    int reduced = -1;
    auto intern = [&](std::vector<std::pair<int, int>> s, bool is_reduced) {
      if (is_reduced) {
        if (reduced < 0) {
          reduced = a.add_state(true);
          states.emplace_back();
        }
        return reduced;
      }
      auto it = index.find(s);
      if (it != index.end()) return it->second;
      pairs_ += s.size();
      if (states.size() >= state_cap_ || pairs_ > pair_budget_) {
        throw Error(ErrorCode::StateExplosion, "reducer exceeds the state cap");
      }
      int id = a.add_state(terminal(s));
      index.emplace(s, id);
      states.push_back(std::move(s));
      return id;
    };
    auto start = start_;
    bool start_reduced = mode_ == Mode::Beta && tail_reduces(start_);
    if (beta_) {
      // Trailing marker (-2 - state of the beta DFA, digits read since it accepted).
      int q = beta_->initial().empty() ? -1 : beta_->initial().front();
      int since = q >= 0 && beta_->is_terminal(q) ? 0 : -1;
      start_reduced = since >= tail_;
      start.emplace_back(-2 - q, since);
    }
    a.add_initial(intern(start, start_reduced));
    const auto digits = input_.digits();
    const std::size_t nl = beta_ ? beta_->labels().size() : 0;
    for (std::size_t cur = 0; cur < states.size(); ++cur) {
      if (static_cast<int>(cur) == reduced) {
        for (std::size_t l = 0; l < digits.size(); ++l) a.add_edge(reduced, static_cast<int>(l), reduced);
        continue;
      }
      std::pair<int, int> marker{0, 0};
      if (beta_) {
        marker = states[cur].back();
        states[cur].pop_back();
      }
      for (std::size_t l = 0; l < digits.size(); ++l) {
        bool is_reduced = false;
        auto next = advance(states[cur], digits[l], is_reduced);
        if (beta_ && !is_reduced) {
          int q = -2 - marker.first;
          int since = marker.second;
          int nq = q < 0 ? -1 : beta_table_[q * nl + beta_->label_index(digit_label(digits[l]))];
          if (since >= 0) {
            ++since;
          } else if (nq >= 0 && beta_->is_terminal(nq)) {
            since = 0;
          }
          if (since >= tail_) {
            is_reduced = true;
          } else {
            next.emplace_back(-2 - nq, since);
          }
        }
        if (!is_reduced && next.empty()) continue;
        int to = intern(std::move(next), is_reduced);
        a.add_edge(static_cast<int>(cur), static_cast<int>(l), to);
      }
      if (beta_) states[cur].push_back(marker);
    }
    return a;
  }

 private:
  // Least |y| for each key reachable from the zero key reading input zeros.
  std::vector<std::pair<int, int>> zero_input_closure(int cap) {
    std::vector<int> best;
    auto get = [&](int k) -> int& {
      if (k >= static_cast<int>(best.size())) best.resize(k + 1, kInf);
      return best[k];
    };
    using Item = std::pair<int, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    get(KeySpace::kZero) = 0;
    queue.emplace(0, KeySpace::kZero);
    while (!queue.empty()) {
      auto [w, k] = queue.top();
      queue.pop();
      if (w != get(k)) continue;
      for (int b = output_.lo; b <= output_.hi; ++b) {
        int next = keys_.step(k, b);
        if (next < 0) continue;
        int nw = w + std::abs(b);
        if (nw > cap) continue;
        if (next == KeySpace::kZero) continue;
        int& slot = get(next);
        if (nw < slot) {
          slot = nw;
          queue.emplace(nw, next);
        }
      }
    }
    std::vector<std::pair<int, int>> out;
    for (int k = 0; k < static_cast<int>(best.size()); ++k) {
      if (best[k] < kInf) out.emplace_back(k, best[k]);
    }
    return out;
  }

  std::vector<std::pair<int, int>> advance(const std::vector<std::pair<int, int>>& from, int a, bool& reduced) {
    scratch_.clear();
    auto offer = [&](int k, int delta) {
      if (k >= static_cast<int>(slot_.size())) slot_.resize(k + 1, kInf);
      if (slot_[k] == kInf) scratch_.push_back(k);
      slot_[k] = std::min(slot_[k], delta);
    };
    for (auto [k, delta] : from) {
      for (int b = output_.lo; b <= output_.hi; ++b) {
        int next = keys_.step(k, b - a);
        if (next < 0) continue;
        int nd = delta + std::abs(b) - std::abs(a);
        if (nd > cap_) continue;
        nd = std::max(nd, -cap_);
        if (next == KeySpace::kZero) {
          if (nd < 0) reduced = true;
          nd = 0;
        }
        offer(next, nd);
      }
    }
    if (mode_ == Mode::Beta) {
      for (auto [k, delta] : start_) offer(k, delta);
    }
    std::sort(scratch_.begin(), scratch_.end());
    std::vector<std::pair<int, int>> out;
    out.reserve(scratch_.size());
    for (int k : scratch_) {
      out.emplace_back(k, slot_[k]);
      slot_[k] = kInf;
    }
    if (reduced) return {};
    if (mode_ == Mode::Beta && tail_reduces(out)) {
      reduced = true;
      return {};
    }
    return out;
  }

  // Some pair reaches the zero key by at most pad zero-input steps while
  // staying lighter.
  bool tail_reduces(const std::vector<std::pair<int, int>>& set) {
    for (auto [k, delta] : set) {
      if (delta + tail_cost(k, pad_) < 0) return true;
    }
    return false;
  }

  int tail_cost(int k, int steps) {
    if (k == KeySpace::kZero) return 0;
    if (steps == 0) return kInf;
    std::int64_t memo_key = static_cast<std::int64_t>(k) * (pad_ + 1) + steps;
    auto it = tail_memo_.find(memo_key);
    if (it != tail_memo_.end()) return it->second;
    int best = kInf;
    for (int b = output_.lo; b <= output_.hi; ++b) {
      int next = keys_.step(k, b);
      if (next < 0) continue;
      int rest = tail_cost(next, steps - 1);
      if (rest < kInf) best = std::min(best, rest + std::abs(b));
    }
    tail_memo_.emplace(memo_key, best);
    return best;
  }

  bool terminal(const std::vector<std::pair<int, int>>& set) const {
    if (mode_ == Mode::Beta) return false;
    for (auto [k, delta] : set) {
      if (k >= 0 && delta < 0 && keys_.value_zero(k)) return true;
    }
    return false;
  }

  KeySpace& keys_;
  Alphabet input_, output_;
  int cap_, pad_;
  Mode mode_;
  std::size_t state_cap_, pair_budget_;
  std::size_t pairs_ = 0;
  std::vector<std::pair<int, int>> start_;
  const Automaton* beta_ = nullptr;
  std::vector<int> beta_table_;
  int tail_ = 0;
  std::vector<int> slot_;
  std::vector<int> scratch_;
  std::unordered_map<std::int64_t, int> tail_memo_;
};

int words_budget_length(int alphabet_size, int k_cert, std::size_t budget) {
  int k = 0;
  double total = 1, layer = 1;
  while (k < k_cert) {
    layer *= alphabet_size;
    if (total + layer > static_cast<double>(budget)) break;
    total += layer;
    ++k;
  }
  return k;
}

// Visits every word over the alphabet of length 0..k in shortlex order,
// carrying a user state; stops at the first visitor returning false.
template <class State, class Step, class Leaf>
bool for_each_word(const Alphabet& alphabet, int k, const State& root, Step step, Leaf leaf) {
  std::vector<int> word;
  for (int len = 0; len <= k; ++len) {
    std::function<bool(const State&)> rec = [&](const State& s) -> bool {
      if (static_cast<int>(word.size()) == len) return leaf(DigitWord(word), s);
      for (int a = alphabet.lo; a <= alphabet.hi; ++a) {
        word.push_back(a);
        bool ok = rec(step(s, a, len - static_cast<int>(word.size())));
        word.pop_back();
        if (!ok) return false;
      }
      return true;
    };
    if (!rec(root)) return false;
  }
  return true;
}

// Exhaustive bounded search for lighter beta-equivalent words: unlimited
// leading extension, at most `pad` trailing digits, and a reduction may
// start at any position. Weight differences are exact (no cap).
class BetaMinimalityOracle {
 public:
  BetaMinimalityOracle(KeySpace& keys, Alphabet output, int pad) : keys_(keys), output_(output), pad_(pad) {
    // Leading closure: Bellman-Ford style relaxation over input zeros.
    std::map<int, int> best{{KeySpace::kZero, 0}};
    bool changed = true;
    while (changed) {
      changed = false;
      auto snapshot = best;
      for (auto [k, w] : snapshot) {
        for (int b = output_.lo; b <= output_.hi; ++b) {
          int next = keys_.step(k, b);
          if (next < 0) continue;
          int nw = w + std::abs(b);
          auto it = best.find(next);
          if (it == best.end() || nw < it->second) {
            best[next] = nw;
            changed = true;
          }
        }
      }
    }
    start_.assign(best.begin(), best.end());
  }

  using Frontier = std::vector<std::pair<int, int>>;  // key -> least delta; empty with flag for reduced

  struct Node {
    Frontier frontier;
    bool reduced = false;
  };

  Node root() const { return {start_, false}; }

  Node step(const Node& node, int a) {
    if (node.reduced) return node;
    std::map<int, int> next;
    for (auto [k, delta] : node.frontier) {
      for (int b = output_.lo; b <= output_.hi; ++b) {
        int to = keys_.step(k, b - a);
        if (to < 0) continue;
        int nd = delta + std::abs(b) - std::abs(a);
        if (to == KeySpace::kZero && nd < 0) return {{}, true};
        auto it = next.find(to);
        if (it == next.end() || nd < it->second) next[to] = nd;
      }
    }
    for (auto [k, w] : start_) {
      auto it = next.find(k);
      if (it == next.end() || w < it->second) next[k] = w;
    }
    Node out{{next.begin(), next.end()}, false};
    for (auto [k, delta] : out.frontier) {
      if (delta + tail(k, pad_) < 0) return {{}, true};
    }
    return out;
  }

 private:
  int tail(int k, int steps) {
    if (k == KeySpace::kZero) return 0;
    if (steps == 0) return kInf;
    auto key = std::make_pair(k, steps);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int best = kInf;
    for (int b = output_.lo; b <= output_.hi; ++b) {
      int next = keys_.step(k, b);
      if (next < 0) continue;
      int rest = tail(next, steps - 1);
      if (rest < kInf) best = std::min(best, rest + std::abs(b));
    }
    memo_[key] = best;
    return best;
  }

  KeySpace& keys_;
  Alphabet output_;
  int pad_;
  Frontier start_;
  std::map<std::pair<int, int>, int> memo_;
};

struct ProductState {
  int p, q, r, cmp;
};

enum Cmp { kEq = 0, kLess = 1, kGreater = 2 };

// Pair automaton over alphabet x alphabet of (A on the input, B on the
// output, Z on the digit difference input - output), optionally tracking the
// lexicographic comparison of absolute digits. `accept` decides terminality.
Automaton pair_product(const Automaton& a, const Automaton& b, const Automaton& zero, const Alphabet& alphabet,
                       bool compare, const std::function<bool(int, int, int, int)>& accept) {
  Automaton out = Automaton::over_pairs(alphabet, alphabet);
  if (a.initial().empty() || b.initial().empty() || zero.initial().empty()) return out;
  const auto ta = a.transition_table(), tb = b.transition_table(), tz = zero.transition_table();
  const std::size_t la = a.labels().size(), lb = b.labels().size(), lz = zero.labels().size();
  const int zlo = zero.labels().front()[0];
  std::unordered_map<std::int64_t, int> index;
  std::vector<ProductState> states;
  auto intern = [&](ProductState s) {
    std::int64_t key = ((static_cast<std::int64_t>(s.p) * b.num_states() + s.q) * zero.num_states() + s.r) * 3 + s.cmp;
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = out.add_state(accept(s.p, s.q, s.r, s.cmp));
    index.emplace(key, id);
    states.push_back(s);
    return id;
  };
  out.add_initial(intern({a.initial().front(), b.initial().front(), zero.initial().front(), kEq}));
  const auto digits = alphabet.digits();
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    const auto s = states[cur];
    for (std::size_t i = 0; i < digits.size(); ++i) {
      int p = ta[s.p * la + a.label_index(digit_label(digits[i]))];
      if (p < 0) continue;
      for (std::size_t j = 0; j < digits.size(); ++j) {
        int q = tb[s.q * lb + b.label_index(digit_label(digits[j]))];
        if (q < 0) continue;
        int e = digits[i] - digits[j];
        int zi = e - zlo;
        if (zi < 0 || zi >= static_cast<int>(lz)) continue;
        int r = tz[s.r * lz + zi];
        if (r < 0) continue;
        int cmp = s.cmp;
        if (compare && cmp == kEq) {
          int x = std::abs(digits[i]), y = std::abs(digits[j]);
          cmp = x < y ? kLess : x > y ? kGreater : kEq;
        }
        int to = intern({p, q, r, compare ? cmp : kEq});
        out.add_edge(static_cast<int>(cur), out.label_index({digits[i], digits[j]}), to);
      }
    }
  }
  return out;
}

// Adds as initial states everything reachable from an initial state by
// edges labelled 0.
Automaton close_initial_under_zero(Automaton a) {
  const int zero = a.label_index(digit_label(0));
  std::vector<int> stack = a.initial();
  std::vector<char> seen(a.num_states());
  for (int q : stack) seen[q] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (const auto& e : a.edges(q)) {
      if (e.label == zero && !seen[e.to]) {
        seen[e.to] = 1;
        a.add_initial(e.to);
        stack.push_back(e.to);
      }
    }
  }
  return a;
}

}  // namespace

// ---- reports --------------------------------------------------------------

nlohmann::json CertificationReport::to_json() const {
  nlohmann::json j{{"construction", construction}, {"k_cert", k_cert}, {"delta_cap", delta_cap},
                   {"pad", pad},                   {"rounds", rounds},  {"status", passed ? "certified" : "failed"},
                   {"cap_stable", cap_stable}};
  if (counterexample) j["counterexample"] = counterexample->compact();
  return j;
}

nlohmann::json DiagnosticsReport::to_json() const {
  return {{"primitive", primitive},
          {"primitivity_exponent", primitivity_exponent},
          {"scc_count", scc_count},
          {"scc_matches_beta", scc_matches_beta},
          {"scc_covers_beta", scc_covers_beta},
          {"synchronizing_zeros", synchronizing_zeros}};
}

Automaton build_zero_automaton(const PisotBasis& basis, const Alphabet& alphabet, std::size_t state_cap) {
  KeySpace keys(basis, alphabet.max_abs(), true, state_cap);
  return zero_automaton_from(keys, alphabet);
}

Automaton build_beta_zero_automaton(const PisotBasis& basis, const Alphabet& alphabet, std::size_t state_cap) {
  KeySpace keys(basis, alphabet.max_abs(), false, state_cap);
  return zero_automaton_from(keys, alphabet);
}

// ---- graph diagnostics ----------------------------------------------------

std::vector<std::vector<int>> nontrivial_sccs(const Automaton& a) {
  const int n = a.num_states();
  std::vector<int> index(n, -1), low(n), stack;
  std::vector<char> on_stack(n);
  std::vector<std::vector<int>> out;
  int counter = 0;
  // Iterative Tarjan.
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < a.edges(v).size()) {
        int w = a.edges(v)[i++].to;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        bool cyclic = comp.size() > 1;
        for (const auto& e : a.edges(v)) cyclic = cyclic || e.to == v;
        std::sort(comp.begin(), comp.end());
        if (cyclic) out.push_back(std::move(comp));
      }
      int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int primitivity_exponent(const Automaton& a) {
  const int n = a.num_states();
  if (n == 0) return 0;
  const int words = (n + 63) / 64;
  using Row = std::vector<std::uint64_t>;
  std::vector<Row> adj(n, Row(words)), cur(n, Row(words));
  for (int q = 0; q < n; ++q) {
    for (const auto& e : a.edges(q)) adj[q][e.to / 64] |= 1ULL << (e.to % 64);
  }
  cur = adj;
  auto full = [&](const std::vector<Row>& m) {
    for (const auto& row : m) {
      for (int i = 0; i < n; ++i) {
        if (!(row[i / 64] >> (i % 64) & 1)) return false;
      }
    }
    return true;
  };
  const int limit = (n - 1) * (n - 1) + 1;
  for (int e = 1; e <= limit; ++e) {
    if (full(cur)) return e;
    std::vector<Row> next(n, Row(words));
    for (int q = 0; q < n; ++q) {
      for (int j = 0; j < n; ++j) {
        if (cur[q][j / 64] >> (j % 64) & 1) {
          for (int w = 0; w < words; ++w) next[q][w] |= adj[j][w];
        }
      }
    }
    cur.swap(next);
  }
  return 0;
}

int synchronizing_zeros(const Automaton& a, int limit) {
  const int zero = a.label_index(digit_label(0));
  if (zero < 0 || a.initial().empty()) return -1;
  const int init = a.initial().front();
  std::vector<int> pos(a.num_states());
  for (int q = 0; q < a.num_states(); ++q) pos[q] = q;
  for (int k = 0; k <= limit; ++k) {
    if (std::all_of(pos.begin(), pos.end(), [&](int q) { return q == init; })) return k;
    for (auto& q : pos) {
      q = a.step(q, zero);
      if (q < 0) return -1;
    }
  }
  return -1;
}

namespace {

// The component of `big` read as an automaton of its own: entered at the
// initial state of `big`, every state terminal, then minimized. Comparing
// with `small` ignores which component states were terminal in `big`.
bool component_equals(const Automaton& big, const std::vector<int>& states, const Automaton& small) {
  if (big.initial().empty()) return false;
  std::vector<int> local(big.num_states(), -1);
  Automaton sub(big.arity(), big.labels());
  for (int q : states) local[q] = sub.add_state(true);
  const int init = big.initial().front();
  if (local[init] < 0) return false;
  sub.add_initial(local[init]);
  for (int q : states) {
    for (const auto& e : big.edges(q)) {
      if (local[e.to] >= 0) sub.add_edge(local[q], e.label, local[e.to]);
    }
  }
  return equivalent(sub, small);
}

// Does reading the same word in `big` and `small` (both deterministic) pair
// every state of the component with exactly one state of `small`, hitting all
// of them? Then the component maps onto `small` as a labelled graph.
bool covers_component(const Automaton& big, const std::vector<int>& states, const Automaton& small) {
  if (big.initial().empty() || small.initial().empty()) return false;
  std::vector<int> image(big.num_states(), -1);
  std::vector<std::pair<int, int>> stack{{big.initial().front(), small.initial().front()}};
  std::set<std::pair<int, int>> seen(stack.begin(), stack.end());
  std::vector<char> inside(big.num_states());
  for (int q : states) inside[q] = 1;
  while (!stack.empty()) {
    auto [p, q] = stack.back();
    stack.pop_back();
    if (inside[p]) {
      if (image[p] >= 0 && image[p] != q) return false;
      image[p] = q;
    }
    for (const auto& e : big.edges(p)) {
      int l = small.label_index(big.labels()[e.label]);
      int t = l < 0 ? -1 : small.step(q, l);
      if (t < 0) {
        if (inside[p] && inside[e.to]) return false;
        continue;
      }
      if (seen.insert({e.to, t}).second) stack.emplace_back(e.to, t);
    }
  }
  std::set<int> hit;
  for (int q : states) {
    if (image[q] < 0) return false;
    hit.insert(image[q]);
  }
  return static_cast<int>(hit.size()) == small.num_states();
}

}  // namespace

// ---- MinWeightAutomata ----------------------------------------------------

struct MinWeightAutomata::Impl {
  std::optional<Automaton> zero_diff, lbeta, lu, greedy, normalizer;
  CertificationReport lbeta_report, lu_report, greedy_report, normalizer_report;
  std::optional<int> slack;
};

MinWeightAutomata::MinWeightAutomata(const PisotBasis& basis, Alphabet alphabet, ConstructionOptions options)
    : basis_(basis), alphabet_(alphabet), options_(options), impl_(std::make_unique<Impl>()) {
  if (!alphabet.contains(0)) throw Error(ErrorCode::AlphabetMismatch, "alphabet must contain 0");
  b_ = find_b(basis);
  reference_ = hull(alphabet, Alphabet(1 - b_.b_weak, b_.b_weak - 1));
  oracle_ = std::make_unique<ExpansionOracle>(basis, alphabet, reference_);
  if (options_.pad < 0) options_.pad = basis.onset() + 4;
}

MinWeightAutomata::~MinWeightAutomata() = default;

const Automaton& MinWeightAutomata::zero_difference() {
  if (!impl_->zero_diff) {
    const int w = alphabet_.hi - alphabet_.lo;
    impl_->zero_diff = build_zero_automaton(basis_, Alphabet(-w, w), options_.state_cap);
  }
  return *impl_->zero_diff;
}

void MinWeightAutomata::build_lbeta_lu() {
  const int c = std::max(reference_.hi - alphabet_.lo, alphabet_.hi - reference_.lo);
  const bool fixed = options_.delta_cap > 0;
  int cap = fixed ? options_.delta_cap : b_.b_weak;
  int cap_limit = cap;
  if (!fixed) {
    Automaton zd = build_zero_automaton(basis_, Alphabet(-c, c), options_.state_cap);
    cap_limit = 2 * b_.b_weak * zd.num_states();
  }
  int pad = options_.pad;
  const int k_cert = words_budget_length(alphabet_.size(), options_.k_cert, options_.cert_word_budget);
  const int h = basis_.onset();

  KeySpace beta_keys(basis_, c, false, options_.state_cap);
  KeySpace u_keys(basis_, c, true, options_.state_cap);
  beta_keys.restrict_to_live();
  u_keys.restrict_to_live();

  CertificationReport rb{"lbeta", k_cert, cap, pad, 0, false, false, std::nullopt};
  CertificationReport ru{"lu", k_cert, cap, pad, 0, false, false, std::nullopt};
  std::optional<Automaton> lbeta, lu;

  // One construction at (cap, pad) followed by both certifications.
  auto attempt = [&]() {
    rb.delta_cap = ru.delta_cap = cap;
    rb.pad = ru.pad = pad;
    Reducer beta_reducer(beta_keys, alphabet_, reference_, cap, pad, Reducer::Mode::Beta, options_.state_cap,
                         options_.pair_budget);
    Automaton not_beta = beta_reducer.build().minimize();
    lbeta = complement(not_beta);

    // L_beta against the exhaustive bounded search.
    rb.counterexample.reset();
    {
      BetaMinimalityOracle oracle(beta_keys, reference_, pad + 2);
      using Node = std::pair<BetaMinimalityOracle::Node, int>;
      const int start = lbeta->initial().empty() ? -1 : lbeta->initial().front();
      const auto table = lbeta->transition_table();
      const std::size_t nl = lbeta->labels().size();
      for_each_word(
          alphabet_, k_cert, Node{oracle.root(), start},
          [&](const Node& s, int a, int) {
            int q = s.second < 0 ? -1 : table[s.second * nl + (a - alphabet_.lo)];
            return Node{oracle.step(s.first, a), q};
          },
          [&](const DigitWord& w, const Node& s) {
            bool automaton = s.second >= 0 && lbeta->is_terminal(s.second);
            if (automaton != !s.first.reduced) {
              rb.counterexample = w;
              return false;
            }
            return true;
          });
    }

    Reducer u_reducer(u_keys, alphabet_, reference_, cap, pad, Reducer::Mode::U, options_.state_cap,
                      options_.pair_budget);
    u_reducer.track_beta(not_beta, h + pad);
    lu = complement(u_reducer.build());

    // L_U against the expansion oracle.
    ru.counterexample.reset();
    {
      const auto table = lu->transition_table();
      const std::size_t nl = lu->labels().size();
      const int start = lu->initial().empty() ? -1 : lu->initial().front();
      using Node = std::tuple<int, std::int64_t, int>;  // state, value, weight
      for_each_word(
          alphabet_, k_cert, Node{start, 0, 0},
          [&](const Node& s, int a, int remaining) {
            auto [q, v, w] = s;
            int nq = q < 0 ? -1 : table[q * nl + (a - alphabet_.lo)];
            return Node{nq, v + a * basis_.term64(remaining), w + std::abs(a)};
          },
          [&](const DigitWord& word, const Node& s) {
            auto [q, v, w] = s;
            bool automaton = q >= 0 && lu->is_terminal(q);
            bool minimal = w == oracle_->min_weight(v);
            if (automaton != minimal) {
              ru.counterexample = word;
              return false;
            }
            return true;
          });
    }
    rb.passed = !rb.counterexample;
    ru.passed = !ru.counterexample;
    return rb.passed && ru.passed;
  };

  // With an explicit cap: widen only on certification failure. By default:
  // start small and double until two consecutive caps give the same
  // automata, never beyond the a-priori cap.
  std::optional<std::tuple<Automaton, Automaton, CertificationReport, CertificationReport>> kept;
  for (int round = 1; round <= options_.max_rounds; ++round) {
    rb.rounds = ru.rounds = round;
    bool passed;
    try {
      passed = attempt();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StateExplosion || !kept) throw;
      std::get<2>(*kept).rounds = std::get<3>(*kept).rounds = round;
      break;
    }
    if (!passed) {
      cap *= 2;
      pad += 2;
      continue;
    }
    if (fixed) {
      rb.cap_stable = ru.cap_stable = false;
      kept.emplace(*lbeta, *lu, rb, ru);
      break;
    }
    if (kept && std::get<0>(*kept) == *lbeta && std::get<1>(*kept) == *lu) {
      std::get<2>(*kept).cap_stable = std::get<3>(*kept).cap_stable = true;
      std::get<2>(*kept).rounds = std::get<3>(*kept).rounds = round;
      break;
    }
    kept.emplace(*lbeta, *lu, rb, ru);
    if (cap * 2 > cap_limit) break;
    cap *= 2;
  }
  if (!kept) {
    impl_->lbeta_report = rb;
    impl_->lu_report = ru;
    const auto& bad = ru.passed ? rb : ru;
    throw Error(ErrorCode::CertificationFailed, bad.construction + " disagrees with its oracle on " +
                                                    bad.counterexample->compact() + ": " + bad.to_json().dump());
  }
  impl_->lbeta = std::move(std::get<0>(*kept));
  impl_->lu = std::move(std::get<1>(*kept));
  impl_->lbeta_report = std::get<2>(*kept);
  impl_->lu_report = std::get<3>(*kept);
}

const Automaton& MinWeightAutomata::lbeta() {
  if (!impl_->lbeta) build_lbeta_lu();
  return *impl_->lbeta;
}

const Automaton& MinWeightAutomata::lu() {
  if (!impl_->lu) build_lbeta_lu();
  return *impl_->lu;
}

const CertificationReport& MinWeightAutomata::lbeta_report() {
  lbeta();
  return impl_->lbeta_report;
}

const CertificationReport& MinWeightAutomata::lu_report() {
  lu();
  return impl_->lu_report;
}

int MinWeightAutomata::length_slack() {
  if (impl_->slack) return *impl_->slack;
  const Automaton& l = lu();
  const Automaton& zd = zero_difference();
  Automaton pairs = pair_product(l, l, zd, alphabet_, false, [&](int p, int q, int r, int) {
                      return l.is_terminal(p) && l.is_terminal(q) && zd.is_terminal(r);
                    }).trim();
  const int n = pairs.num_states();
  if (n == 0) return *(impl_->slack = 0);
  auto input_of = [&](const Automaton::Edge& e) { return pairs.labels()[e.label][0]; };
  auto output_of = [&](const Automaton::Edge& e) { return pairs.labels()[e.label][1]; };

  // States reached by (0,0)*.
  std::vector<char> idle(n);
  std::vector<int> stack{pairs.initial().front()};
  idle[stack[0]] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (const auto& e : pairs.edges(q)) {
      if (input_of(e) == 0 && output_of(e) == 0 && !idle[e.to]) {
        idle[e.to] = 1;
        stack.push_back(e.to);
      }
    }
  }
  // Longest run of input zeros after the output has started; the graph of
  // such edges must be acyclic.
  std::vector<int> dist(n, -1);
  for (int q = 0; q < n; ++q) {
    if (!idle[q]) continue;
    for (const auto& e : pairs.edges(q)) {
      if (input_of(e) == 0 && output_of(e) != 0) dist[e.to] = std::max(dist[e.to], 1);
    }
  }
  // Relax in rounds; more than n rounds with changes means a cycle.
  for (int round = 0;; ++round) {
    bool changed = false;
    for (int q = 0; q < n; ++q) {
      if (dist[q] < 0) continue;
      for (const auto& e : pairs.edges(q)) {
        if (input_of(e) == 0 && dist[q] + 1 > dist[e.to]) {
          dist[e.to] = dist[q] + 1;
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (round > n) throw Error(ErrorCode::DiagnosticFailed, "unbounded run of leading zeros in equivalent pairs");
  }
  int best = 0;
  for (int q = 0; q < n; ++q) {
    if (dist[q] < 0) continue;
    bool exits = pairs.is_terminal(q);
    for (const auto& e : pairs.edges(q)) exits = exits || input_of(e) != 0;
    if (exits) best = std::max(best, dist[q]);
  }
  impl_->slack = best;
  return best;
}

void MinWeightAutomata::build_greedy() {
  const Automaton& l = lu();
  const Automaton& zd = zero_difference();
  Automaton pairs = pair_product(l, l, zd, alphabet_, true, [&](int p, int q, int r, int cmp) {
                      return cmp == kLess && l.is_terminal(p) && l.is_terminal(q) && zd.is_terminal(r);
                    }).trim();
  Automaton h = close_initial_under_zero(project(pairs, Side::Input).relabel(l.labels()));
  Automaton g = intersect(l, complement(h.minimize()));

  // Certify: one word per value, and it is the lexicographically largest
  // (absolute digits) among the oracle's minimal expansions.
  CertificationReport rep{"greedy", 0, impl_->lu_report.delta_cap, impl_->lu_report.pad, 1, true, false, std::nullopt};
  const int m = length_slack();
  int k = 1;
  while (k < 40 && std::pow(static_cast<double>(alphabet_.size()), k) <= 2e5) ++k;
  k = std::min(k, options_.k_cert);
  rep.k_cert = k;
  std::map<std::int64_t, DigitWord> seen;
  for (const auto& w : g.enumerate_words(k)) {
    std::int64_t v = basis_.value_u64(w);
    if (!seen.emplace(v, w).second) {
      rep.passed = false;
      rep.counterexample = w;
      break;
    }
  }
  if (rep.passed) {
    const std::int64_t limit = basis_.term64(std::max(0, k - m - 2));
    for (std::int64_t n = -limit; n <= limit && rep.passed; ++n) {
      if (alphabet_.lo == 0 && n < 0) continue;
      auto it = seen.find(n);
      auto expansions = oracle_->enumerate_minimal(n, k);
      if (expansions.empty()) {
        if (it != seen.end()) {
          rep.passed = false;
          rep.counterexample = it->second;
        }
        continue;
      }
      auto abs_key = [](const DigitWord& w) {
        std::vector<int> a;
        for (int d : w.digits) a.push_back(std::abs(d));
        return a;
      };
      auto best = *std::max_element(expansions.begin(), expansions.end(),
                                    [&](const auto& x, const auto& y) { return abs_key(x) < abs_key(y); });
      if (it == seen.end() || it->second != best) {
        rep.passed = false;
        rep.counterexample = best;
      }
    }
  }
  impl_->greedy_report = rep;
  if (!rep.passed) {
    throw Error(ErrorCode::CertificationFailed, "greedy automaton disagrees with the oracle: " + rep.to_json().dump());
  }
  impl_->greedy = std::move(g);
}

const Automaton& MinWeightAutomata::greedy() {
  if (!impl_->greedy) build_greedy();
  return *impl_->greedy;
}

const CertificationReport& MinWeightAutomata::greedy_report() {
  greedy();
  return impl_->greedy_report;
}

void MinWeightAutomata::build_normalizer() {
  const Automaton& l = lu();
  const Automaton& g = greedy();
  const Automaton& zd = zero_difference();
  Automaton n = pair_product(l, g, zd, alphabet_, false, [&](int p, int q, int r, int) {
                  return l.is_terminal(p) && g.is_terminal(q) && zd.is_terminal(r);
                }).minimize();
  impl_->normalizer = std::move(n);

  CertificationReport rep{"normalizer", 0, impl_->lu_report.delta_cap, impl_->lu_report.pad, 1, true, false, std::nullopt};
  const std::int64_t limit = std::min<std::int64_t>(200, basis_.term64(std::min(options_.k_cert, 20)));
  rep.k_cert = static_cast<int>(limit);
  for (std::int64_t v = -limit; v <= limit; ++v) {
    if (alphabet_.lo == 0 && v < 0) continue;
    if (oracle_->count_f(v) != count_f(v)) {
      rep.passed = false;
      rep.counterexample = greedy_word(v);
      break;
    }
  }
  impl_->normalizer_report = rep;
  if (!rep.passed) {
    impl_->normalizer.reset();
    throw Error(ErrorCode::CertificationFailed, "normalizer path counts disagree with the oracle: " + rep.to_json().dump());
  }
}

const Automaton& MinWeightAutomata::normalizer() {
  if (!impl_->normalizer) build_normalizer();
  return *impl_->normalizer;
}

const CertificationReport& MinWeightAutomata::normalizer_report() {
  normalizer();
  return impl_->normalizer_report;
}

DigitWord MinWeightAutomata::greedy_word(std::int64_t n) {
  if (n == 0) return DigitWord();
  const Automaton& g = greedy();
  if (g.initial().empty()) throw Error(ErrorCode::Unrepresentable, "empty greedy language");
  const int m = length_slack();
  const auto table = g.transition_table();
  const std::size_t nl = g.labels().size();
  const std::int64_t a = std::abs(n);
  int len = 0;
  while (basis_.term64(len) <= a) ++len;
  len += m + 1;
  std::vector<std::int64_t> bound(len + 1, 0);  // max |value| of a word of length i
  for (int i = 1; i <= len; ++i) bound[i] = bound[i - 1] + alphabet_.max_abs() * basis_.term64(i - 1);
  std::vector<int> word;
  std::function<bool(int, int, std::int64_t)> rec = [&](int q, int remaining, std::int64_t r) -> bool {
    if (remaining == 0) return r == 0 && g.is_terminal(q);
    if (std::abs(r) > bound[remaining]) return false;
    for (std::size_t l = 0; l < nl; ++l) {
      int to = table[q * nl + l];
      if (to < 0) continue;
      int d = g.labels()[l][0];
      word.push_back(d);
      if (rec(to, remaining - 1, r - d * basis_.term64(remaining - 1))) return true;
      word.pop_back();
    }
    return false;
  };
  if (!rec(g.initial().front(), len, n)) {
    throw Error(ErrorCode::Unrepresentable, std::to_string(n) + " has no greedy minimal-weight word");
  }
  return DigitWord(word).stripped();
}

BigInt MinWeightAutomata::count_f(std::int64_t n) {
  const Automaton& norm = normalizer();
  const int m = length_slack();
  DigitWord y;
  try {
    y = greedy_word(n);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unrepresentable) throw;
    return 0;
  }
  y = y.padded(y.size() + m);
  if (norm.initial().empty()) return 0;
  std::vector<BigInt> v(norm.num_states());
  v[norm.initial().front()] = 1;
  for (int b : y.digits) {
    std::vector<BigInt> next(norm.num_states());
    for (int q = 0; q < norm.num_states(); ++q) {
      if (v[q] == 0) continue;
      for (const auto& e : norm.edges(q)) {
        if (norm.labels()[e.label][1] == b) next[e.to] += v[q];
      }
    }
    v.swap(next);
  }
  BigInt total = 0;
  for (int q = 0; q < norm.num_states(); ++q) {
    if (norm.is_terminal(q)) total += v[q];
  }
  return total;
}

DiagnosticsReport MinWeightAutomata::diagnostics() {
  DiagnosticsReport rep;
  const Automaton& mb = lbeta();
  const Automaton& mu = lu();
  rep.primitivity_exponent = primitivity_exponent(mb);
  rep.primitive = rep.primitivity_exponent > 0;
  auto sccs = nontrivial_sccs(mu);
  rep.scc_count = static_cast<int>(sccs.size());
  rep.scc_matches_beta = sccs.size() == 1 && component_equals(mu, sccs.front(), mb);
  rep.scc_covers_beta = sccs.size() == 1 && covers_component(mu, sccs.front(), mb);
  rep.synchronizing_zeros = synchronizing_zeros(mb, std::max(64, 4 * mb.num_states()));
  return rep;
}

// ---- free-standing forms --------------------------------------------------

Automaton build_min_weight_beta(const PisotBasis& basis, const Alphabet& alphabet, int delta_cap, int pad) {
  ConstructionOptions options;
  options.delta_cap = delta_cap;
  options.pad = pad;
  MinWeightAutomata m(basis, alphabet, options);
  return m.lbeta();
}

Automaton build_min_weight_u(const PisotBasis& basis, const Alphabet& alphabet) {
  MinWeightAutomata m(basis, alphabet);
  return m.lu();
}

Automaton build_greedy_automaton(const PisotBasis& basis, const Alphabet& alphabet) {
  MinWeightAutomata m(basis, alphabet);
  return m.greedy();
}

Automaton build_normalizer(const PisotBasis& basis, const Alphabet& alphabet) {
  MinWeightAutomata m(basis, alphabet);
  return m.normalizer();
}

int length_slack(const PisotBasis& basis, const Alphabet& alphabet) {
  MinWeightAutomata m(basis, alphabet);
  return m.length_slack();
}

DiagnosticsReport diagnostics(const PisotBasis& basis, const Alphabet& alphabet) {
  MinWeightAutomata m(basis, alphabet);
  return m.diagnostics();
}

}  // namespace pisotmw
