#include "pisotmw/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace pisotmw {

// ---- CountMatrix ----------------------------------------------------------

CountMatrix CountMatrix::operator*(const CountMatrix& other) const {
  if (n_ != other.n_) throw Error(ErrorCode::DimensionMismatch, "matrix sizes differ");
  CountMatrix out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      const BigInt& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < n_; ++j) {
        const BigInt& b = other(k, j);
        if (b != 0) out(i, j) += a * b;
      }
    }
  }
  return out;
}

CountMatrix CountMatrix::operator+(const CountMatrix& other) const {
  if (n_ != other.n_) throw Error(ErrorCode::DimensionMismatch, "matrix sizes differ");
  CountMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
  return out;
}

CountMatrix CountMatrix::identity(int n) {
  CountMatrix out(n);
  for (int i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

CountMatrix CountMatrix::pow(int k) const {
  CountMatrix result = identity(n_), base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

bool CountMatrix::positive() const {
  return std::all_of(data_.begin(), data_.end(), [](const BigInt& x) { return x > 0; });
}

std::vector<double> CountMatrix::to_double() const {
  std::vector<double> out(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) out[i] = static_cast<double>(data_[i]);
  return out;
}

// ---- construction and access ----------------------------------------------

Automaton::Automaton(int arity, std::vector<Label> labels) : arity_(arity), labels_(std::move(labels)) {
  if (arity != 1 && arity != 2) throw Error(ErrorCode::DomainError, "arity must be 1 or 2");
  if (arity == 1) {
    for (auto& l : labels_) l[1] = 0;
  }
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

Automaton Automaton::over(const Alphabet& alphabet) {
  std::vector<Label> labels;
  for (int a : alphabet.digits()) labels.push_back(digit_label(a));
  return Automaton(1, labels);
}

Automaton Automaton::over_pairs(const Alphabet& input, const Alphabet& output) {
  std::vector<Label> labels;
  for (int a : input.digits()) {
    for (int b : output.digits()) labels.push_back({a, b});
  }
  return Automaton(2, labels);
}

Automaton Automaton::universal(int arity, std::vector<Label> labels) {
  Automaton a(arity, std::move(labels));
  int q = a.add_state(true);
  a.add_initial(q);
  for (int l = 0; l < static_cast<int>(a.labels_.size()); ++l) a.add_edge(q, l, q);
  return a;
}

int Automaton::label_index(const Label& label) const {
  Label key = label;
  if (arity_ == 1) key[1] = 0;
  auto it = std::lower_bound(labels_.begin(), labels_.end(), key);
  if (it == labels_.end() || *it != key) return -1;
  return static_cast<int>(it - labels_.begin());
}

std::size_t Automaton::num_edges() const {
  std::size_t n = 0;
  for (const auto& e : out_) n += e.size();
  return n;
}

bool Automaton::is_initial(int q) const {
  return std::find(initial_.begin(), initial_.end(), q) != initial_.end();
}

std::vector<int> Automaton::terminal_states() const {
  std::vector<int> out;
  for (int q = 0; q < num_states(); ++q) {
    if (terminal_[q]) out.push_back(q);
  }
  return out;
}

int Automaton::add_state(bool terminal) {
  out_.emplace_back();
  terminal_.push_back(terminal);
  return num_states() - 1;
}

void Automaton::add_edge(int from, int label, int to) { out_[from].push_back({label, to}); }

void Automaton::add_initial(int q) {
  if (!is_initial(q)) initial_.push_back(q);
}

void Automaton::require_arity(int arity) const {
  if (arity_ != arity) throw Error(ErrorCode::AlphabetMismatch, "automaton has the wrong label arity");
}

bool Automaton::is_deterministic() const {
  if (initial_.size() > 1) return false;
  std::vector<int> seen(labels_.size(), -1);
  for (int q = 0; q < num_states(); ++q) {
    for (const auto& e : out_[q]) {
      if (seen[e.label] == q) return false;
      seen[e.label] = q;
    }
  }
  return true;
}

int Automaton::step(int q, int label) const {
  for (const auto& e : out_[q]) {
    if (e.label == label) return e.to;
  }
  return -1;
}

std::vector<int> Automaton::transition_table() const {
  const std::size_t k = labels_.size();
  std::vector<int> table(static_cast<std::size_t>(num_states()) * k, -1);
  for (int q = 0; q < num_states(); ++q) {
    for (const auto& e : out_[q]) table[q * k + e.label] = e.to;
  }
  return table;
}

// ---- acceptance and counting ----------------------------------------------

bool Automaton::accepts(const std::vector<Label>& word) const {
  std::vector<int> current = initial_;
  std::vector<char> mark(num_states());
  for (const auto& letter : word) {
    int l = label_index(letter);
    if (l < 0) return false;
    std::vector<int> next;
    std::fill(mark.begin(), mark.end(), 0);
    for (int q : current) {
      for (const auto& e : out_[q]) {
        if (e.label == l && !mark[e.to]) {
          mark[e.to] = 1;
          next.push_back(e.to);
        }
      }
    }
    if (next.empty()) return false;
    current.swap(next);
  }
  return std::any_of(current.begin(), current.end(), [&](int q) { return terminal_[q]; });
}

bool Automaton::accepts(const DigitWord& word) const {
  require_arity(1);
  std::vector<Label> letters;
  for (int a : word.digits) letters.push_back(digit_label(a));
  return accepts(letters);
}

bool Automaton::accepts(const DigitWord& input, const DigitWord& output) const {
  require_arity(2);
  if (input.size() != output.size()) return false;
  std::vector<Label> letters;
  for (std::size_t i = 0; i < input.size(); ++i) letters.push_back({input.digits[i], output.digits[i]});
  return accepts(letters);
}

std::vector<std::vector<Label>> Automaton::enumerate(int k) const {
  const int n = num_states();
  // live[r][q]: a terminal state is reachable from q in exactly r steps.
  std::vector<std::vector<char>> live(k + 1, std::vector<char>(n));
  for (int q = 0; q < n; ++q) live[0][q] = terminal_[q];
  for (int r = 1; r <= k; ++r) {
    for (int q = 0; q < n; ++q) {
      for (const auto& e : out_[q]) {
        if (live[r - 1][e.to]) {
          live[r][q] = 1;
          break;
        }
      }
    }
  }
  std::vector<std::vector<Label>> out;
  std::vector<Label> prefix;
  auto rec = [&](auto&& self, const std::vector<int>& states, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(prefix);
      return;
    }
    for (int l = 0; l < static_cast<int>(labels_.size()); ++l) {
      std::vector<int> next;
      for (int q : states) {
        for (const auto& e : out_[q]) {
          if (e.label == l && live[remaining - 1][e.to]) next.push_back(e.to);
        }
      }
      if (next.empty()) continue;
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      prefix.push_back(labels_[l]);
      self(self, next, remaining - 1);
      prefix.pop_back();
    }
  };
  std::vector<int> start;
  for (int q : initial_) {
    if (live[k][q]) start.push_back(q);
  }
  if (!start.empty()) rec(rec, start, k);
  return out;
}

std::vector<DigitWord> Automaton::enumerate_words(int k) const {
  require_arity(1);
  std::vector<DigitWord> out;
  for (const auto& letters : enumerate(k)) {
    DigitWord w;
    for (const auto& l : letters) w.digits.push_back(l[0]);
    out.push_back(std::move(w));
  }
  return out;
}

BigInt Automaton::count_paths(int k) const {
  std::vector<BigInt> v(num_states());
  for (int q : initial_) v[q] += 1;
  for (int step = 0; step < k; ++step) {
    std::vector<BigInt> next(num_states());
    for (int q = 0; q < num_states(); ++q) {
      if (v[q] == 0) continue;
      for (const auto& e : out_[q]) next[e.to] += v[q];
    }
    v.swap(next);
  }
  BigInt total = 0;
  for (int q = 0; q < num_states(); ++q) {
    if (terminal_[q]) total += v[q];
  }
  return total;
}

BigInt Automaton::count_accepted(int k) const {
  if (!is_deterministic()) throw Error(ErrorCode::NotDeterministic, "word counting needs a deterministic automaton");
  return count_paths(k);
}

CountMatrix Automaton::adjacency() const {
  CountMatrix m(num_states());
  for (int q = 0; q < num_states(); ++q) {
    for (const auto& e : out_[q]) m(q, e.to) += 1;
  }
  return m;
}

CountMatrix Automaton::adjacency(int label) const {
  CountMatrix m(num_states());
  for (int q = 0; q < num_states(); ++q) {
    for (const auto& e : out_[q]) {
      if (e.label == label) m(q, e.to) += 1;
    }
  }
  return m;
}

// ---- structural operations ------------------------------------------------

namespace {

// Keeps the states with keep[q], renumbered in increasing order.
Automaton restrict_to(const Automaton& a, const std::vector<char>& keep) {
  Automaton out(a.arity(), a.labels());
  std::vector<int> index(a.num_states(), -1);
  for (int q = 0; q < a.num_states(); ++q) {
    if (keep[q]) index[q] = out.add_state(a.is_terminal(q));
  }
  for (int q = 0; q < a.num_states(); ++q) {
    if (!keep[q]) continue;
    for (const auto& e : a.edges(q)) {
      if (keep[e.to]) out.add_edge(index[q], e.label, index[e.to]);
    }
  }
  for (int q : a.initial()) {
    if (keep[q]) out.add_initial(index[q]);
  }
  return out;
}

std::vector<char> forward_closure(const Automaton& a) {
  std::vector<char> seen(a.num_states());
  std::vector<int> stack;
  for (int q : a.initial()) {
    if (!seen[q]) {
      seen[q] = 1;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (const auto& e : a.edges(q)) {
      if (!seen[e.to]) {
        seen[e.to] = 1;
        stack.push_back(e.to);
      }
    }
  }
  return seen;
}

std::vector<char> backward_closure(const Automaton& a) {
  std::vector<std::vector<int>> rev(a.num_states());
  for (int q = 0; q < a.num_states(); ++q) {
    for (const auto& e : a.edges(q)) rev[e.to].push_back(q);
  }
  std::vector<char> seen(a.num_states());
  std::vector<int> stack;
  for (int q = 0; q < a.num_states(); ++q) {
    if (a.is_terminal(q)) {
      seen[q] = 1;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int p : rev[q]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

// BFS renumbering from the single initial state, edges in label order.
Automaton canonical(const Automaton& a) {
  Automaton out(a.arity(), a.labels());
  if (a.initial().empty()) return out;
  std::vector<int> index(a.num_states(), -1);
  std::deque<int> queue{a.initial().front()};
  index[a.initial().front()] = out.add_state(a.is_terminal(a.initial().front()));
  out.add_initial(0);
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    auto edges = a.edges(q);
    std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) { return x.label < y.label; });
    for (const auto& e : edges) {
      if (index[e.to] < 0) {
        index[e.to] = out.add_state(a.is_terminal(e.to));
        queue.push_back(e.to);
      }
      out.add_edge(index[q], e.label, index[e.to]);
    }
  }
  return out;
}

}  // namespace

Automaton Automaton::reachable() const { return restrict_to(*this, forward_closure(*this)); }

Automaton Automaton::trim() const {
  auto fwd = forward_closure(*this);
  auto bwd = backward_closure(*this);
  std::vector<char> keep(num_states());
  for (int q = 0; q < num_states(); ++q) keep[q] = fwd[q] && bwd[q];
  return restrict_to(*this, keep);
}

Automaton Automaton::determinize() const {
  Automaton out(arity_, labels_);
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    auto it = index.find(set);
    if (it != index.end()) return it->second;
    bool term = std::any_of(set.begin(), set.end(), [&](int q) { return terminal_[q]; });
    int id = out.add_state(term);
    index.emplace(set, id);
    subsets.push_back(std::move(set));
    return id;
  };
  out.add_initial(intern(initial_));
  const int k = static_cast<int>(labels_.size());
  for (std::size_t cur = 0; cur < subsets.size(); ++cur) {
    std::vector<std::vector<int>> targets(k);
    for (int q : subsets[cur]) {
      for (const auto& e : out_[q]) targets[e.label].push_back(e.to);
    }
    for (int l = 0; l < k; ++l) {
      if (targets[l].empty()) continue;
      int to = intern(std::move(targets[l]));
      out.add_edge(static_cast<int>(cur), l, to);
    }
  }
  return out;
}

Automaton Automaton::complete() const {
  Automaton out = *this;
  if (out.initial_.empty()) out.add_initial(out.add_state(false));
  const int k = static_cast<int>(labels_.size());
  int sink = -1;
  const int n = out.num_states();
  for (int q = 0; q < n; ++q) {
    std::vector<char> has(k);
    for (const auto& e : out.out_[q]) has[e.label] = 1;
    for (int l = 0; l < k; ++l) {
      if (has[l]) continue;
      if (sink < 0) {
        sink = out.add_state(false);
        for (int m = 0; m < k; ++m) out.add_edge(sink, m, sink);
      }
      out.add_edge(q, l, sink);
    }
  }
  return out;
}

Automaton Automaton::minimize() const {
  Automaton d = is_deterministic() ? reachable() : determinize();
  d = d.complete();
  const int n = d.num_states();
  const int k = static_cast<int>(labels_.size());
  const auto table = d.transition_table();

  // Moore refinement.
  std::vector<int> cls(n);
  for (int q = 0; q < n; ++q) cls[q] = d.is_terminal(q) ? 1 : 0;
  int classes = -1;
  while (true) {
    std::map<std::vector<int>, int> sig_index;
    std::vector<int> next(n);
    std::vector<int> sig(k + 1);
    for (int q = 0; q < n; ++q) {
      sig[0] = cls[q];
      for (int l = 0; l < k; ++l) sig[l + 1] = cls[table[static_cast<std::size_t>(q) * k + l]];
      auto [it, inserted] = sig_index.emplace(sig, static_cast<int>(sig_index.size()));
      next[q] = it->second;
    }
    const int count = static_cast<int>(sig_index.size());
    cls.swap(next);
    if (count == classes) break;
    classes = count;
  }

  Automaton quotient(arity_, labels_);
  for (int c = 0; c < classes; ++c) quotient.add_state(false);
  std::vector<char> done(classes);
  for (int q = 0; q < n; ++q) {
    if (done[cls[q]]) continue;
    done[cls[q]] = 1;
    quotient.set_terminal(cls[q], d.is_terminal(q));
    for (int l = 0; l < k; ++l) quotient.add_edge(cls[q], l, cls[table[static_cast<std::size_t>(q) * k + l]]);
  }
  quotient.add_initial(cls[d.initial().front()]);
  return canonical(quotient.trim());
}

Automaton Automaton::relabel(const std::vector<Label>& labels) const {
  Automaton out(arity_, labels);
  for (const auto& l : labels_) {
    if (out.label_index(l) < 0) throw Error(ErrorCode::AlphabetMismatch, "relabel must keep every label");
  }
  for (int q = 0; q < num_states(); ++q) out.add_state(terminal_[q]);
  for (int q = 0; q < num_states(); ++q) {
    for (const auto& e : out_[q]) out.add_edge(q, out.label_index(labels_[e.label]), e.to);
  }
  for (int q : initial_) out.add_initial(q);
  return out;
}

bool operator==(const Automaton& a, const Automaton& b) {
  if (a.arity_ != b.arity_ || a.labels_ != b.labels_ || a.terminal_ != b.terminal_) return false;
  auto ia = a.initial_, ib = b.initial_;
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  if (ia != ib) return false;
  for (int q = 0; q < a.num_states(); ++q) {
    std::vector<std::pair<int, int>> ea, eb;
    for (const auto& e : a.out_[q]) ea.emplace_back(e.label, e.to);
    for (const auto& e : b.out_[q]) eb.emplace_back(e.label, e.to);
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    if (ea != eb) return false;
  }
  return true;
}

// ---- serialization --------------------------------------------------------

std::string label_text(const Label& label, int arity) {
  if (arity == 1) return std::to_string(label[0]);
  return std::to_string(label[0]) + "|" + std::to_string(label[1]);
}

nlohmann::json Automaton::to_json() const {
  nlohmann::json j;
  j["labels"] = nlohmann::json::array();
  for (const auto& l : labels_) {
    if (arity_ == 1) {
      j["labels"].push_back(l[0]);
    } else {
      j["labels"].push_back({l[0], l[1]});
    }
  }
  j["states"] = num_states();
  j["initial"] = initial_;
  j["terminal"] = terminal_states();
  j["transitions"] = nlohmann::json::array();
  for (int q = 0; q < num_states(); ++q) {
    for (const auto& e : out_[q]) j["transitions"].push_back({q, e.label, e.to});
  }
  return j;
}

Automaton Automaton::from_json(const nlohmann::json& j) {
  try {
    std::vector<Label> labels;
    int arity = 1;
    for (const auto& l : j.at("labels")) {
      if (l.is_array()) {
        arity = 2;
        labels.push_back({l.at(0).get<int>(), l.at(1).get<int>()});
      } else {
        labels.push_back(digit_label(l.get<int>()));
      }
    }
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != labels || std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      throw Error(ErrorCode::ParseError, "labels must be sorted and distinct");
    }
    Automaton a(arity, labels);
    const int n = j.at("states").get<int>();
    for (int q = 0; q < n; ++q) a.add_state(false);
    auto check = [&](int q) {
      if (q < 0 || q >= n) throw Error(ErrorCode::ParseError, "state index out of range");
      return q;
    };
    for (const auto& q : j.at("initial")) a.add_initial(check(q.get<int>()));
    for (const auto& q : j.at("terminal")) a.set_terminal(check(q.get<int>()));
    for (const auto& t : j.at("transitions")) {
      int label = t.at(1).get<int>();
      if (label < 0 || label >= static_cast<int>(labels.size())) {
        throw Error(ErrorCode::ParseError, "label index out of range");
      }
      a.add_edge(check(t.at(0).get<int>()), label, check(t.at(2).get<int>()));
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string Automaton::to_dot(const std::string& name) const {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (int q = 0; q < num_states(); ++q) {
    os << "  " << q << (terminal_[q] ? " [shape=doublecircle];\n" : ";\n");
  }
  for (int q : initial_) {
    os << "  init" << q << " [shape=point];\n  init" << q << " -> " << q << ";\n";
  }
  for (int q = 0; q < num_states(); ++q) {
    std::map<int, std::vector<int>> by_target;
    for (const auto& e : out_[q]) by_target[e.to].push_back(e.label);
    for (auto& [to, ls] : by_target) {
      std::sort(ls.begin(), ls.end());
      os << "  " << q << " -> " << to << " [label=\"";
      for (std::size_t i = 0; i < ls.size(); ++i) {
        os << (i ? ", " : "") << label_text(labels_[ls[i]], arity_);
      }
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

// ---- Boolean operations ---------------------------------------------------

namespace {

void require_same_labels(const Automaton& a, const Automaton& b) {
  if (a.arity() != b.arity() || a.labels() != b.labels()) {
    throw Error(ErrorCode::AlphabetMismatch, "automata are over different label sets");
  }
}

}  // namespace

Automaton complement(const Automaton& a) {
  Automaton d = (a.is_deterministic() ? a.reachable() : a.determinize()).complete();
  for (int q = 0; q < d.num_states(); ++q) d.set_terminal(q, !d.is_terminal(q));
  return d.minimize();
}

Automaton intersect(const Automaton& a, const Automaton& b) {
  require_same_labels(a, b);
  Automaton out(a.arity(), a.labels());
  std::unordered_map<std::int64_t, int> index;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](int p, int q) {
    std::int64_t key = static_cast<std::int64_t>(p) * b.num_states() + q;
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = out.add_state(a.is_terminal(p) && b.is_terminal(q));
    index.emplace(key, id);
    pairs.emplace_back(p, q);
    return id;
  };
  for (int p : a.initial()) {
    for (int q : b.initial()) out.add_initial(intern(p, q));
  }
  for (std::size_t cur = 0; cur < pairs.size(); ++cur) {
    auto [p, q] = pairs[cur];
    for (const auto& ea : a.edges(p)) {
      for (const auto& eb : b.edges(q)) {
        if (ea.label == eb.label) out.add_edge(static_cast<int>(cur), ea.label, intern(ea.to, eb.to));
      }
    }
  }
  return out.minimize();
}

Automaton unite(const Automaton& a, const Automaton& b) {
  require_same_labels(a, b);
  Automaton out = a;
  const int offset = a.num_states();
  for (int q = 0; q < b.num_states(); ++q) out.add_state(b.is_terminal(q));
  for (int q = 0; q < b.num_states(); ++q) {
    for (const auto& e : b.edges(q)) out.add_edge(q + offset, e.label, e.to + offset);
  }
  for (int q : b.initial()) out.add_initial(q + offset);
  return out.minimize();
}

Automaton difference(const Automaton& a, const Automaton& b) {
  require_same_labels(a, b);
  return intersect(a, complement(b));
}

bool equivalent(const Automaton& a, const Automaton& b) {
  if (a.arity() != b.arity()) return false;
  if (a.labels() == b.labels()) return a.minimize() == b.minimize();
  std::vector<Label> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  Automaton merged(a.arity(), labels);
  return a.relabel(merged.labels()).minimize() == b.relabel(merged.labels()).minimize();
}

Automaton project(const Automaton& transducer, Side side) {
  if (transducer.arity() != 2) throw Error(ErrorCode::AlphabetMismatch, "projection needs a pair automaton");
  const int c = side == Side::Input ? 0 : 1;
  std::vector<Label> labels;
  for (const auto& l : transducer.labels()) labels.push_back(digit_label(l[c]));
  Automaton out(1, labels);
  for (int q = 0; q < transducer.num_states(); ++q) out.add_state(transducer.is_terminal(q));
  for (int q = 0; q < transducer.num_states(); ++q) {
    // Distinct pairs may collapse onto the same digit.
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : transducer.edges(q)) {
      edges.emplace_back(out.label_index(digit_label(transducer.labels()[e.label][c])), e.to);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto [l, to] : edges) out.add_edge(q, l, to);
  }
  for (int q : transducer.initial()) out.add_initial(q);
  return out;
}

Automaton concatenate(const Automaton& a, const Automaton& b) {
  require_same_labels(a, b);
  Automaton out(a.arity(), a.labels());
  const int offset = a.num_states();
  for (int q = 0; q < a.num_states(); ++q) out.add_state(false);
  for (int q = 0; q < b.num_states(); ++q) out.add_state(b.is_terminal(q));
  for (int q = 0; q < a.num_states(); ++q) {
    for (const auto& e : a.edges(q)) {
      out.add_edge(q, e.label, e.to);
      if (a.is_terminal(e.to)) {
        for (int i : b.initial()) out.add_edge(q, e.label, i + offset);
      }
    }
  }
  for (int q = 0; q < b.num_states(); ++q) {
    for (const auto& e : b.edges(q)) out.add_edge(q + offset, e.label, e.to + offset);
  }
  bool empty_in_a = false;
  for (int q : a.initial()) {
    out.add_initial(q);
    empty_in_a = empty_in_a || a.is_terminal(q);
  }
  if (empty_in_a) {
    for (int i : b.initial()) out.add_initial(i + offset);
  }
  return out;
}

}  // namespace pisotmw
