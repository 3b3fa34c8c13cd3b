#pragma once

// Finite automata over digit labels and letter-to-letter transducers over
// digit pairs, with the usual closure operations and exact path counting.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pisotmw/numeration.hpp"

namespace pisotmw {

/// A digit (arity 1, second component unused and zero) or a digit pair
/// (input, output).
using Label = std::array<int, 2>;

inline Label digit_label(int a) { return {a, 0}; }

/// Square matrix of nonnegative arbitrary-precision integers.
class CountMatrix {
 public:
  CountMatrix() = default;
  explicit CountMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

  int size() const { return n_; }
  BigInt& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const BigInt& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

  CountMatrix operator*(const CountMatrix& other) const;
  CountMatrix operator+(const CountMatrix& other) const;
  CountMatrix pow(int k) const;
  static CountMatrix identity(int n);
  bool positive() const;
  std::vector<double> to_double() const;  // row major

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<BigInt> data_;
};

class Automaton {
 public:
  struct Edge {
    int label;  // index into labels()
    int to;
  };

  Automaton() = default;
  /// Labels are sorted and deduplicated; arity is 1 for digits, 2 for pairs.
  Automaton(int arity, std::vector<Label> labels);

  static Automaton over(const Alphabet& alphabet);
  static Automaton over_pairs(const Alphabet& input, const Alphabet& output);
  /// One state, initial and terminal, with a loop for every label.
  static Automaton universal(int arity, std::vector<Label> labels);

  int arity() const { return arity_; }
  const std::vector<Label>& labels() const { return labels_; }
  int label_index(const Label& label) const;  // -1 when absent
  int num_states() const { return static_cast<int>(out_.size()); }
  std::size_t num_edges() const;
  const std::vector<Edge>& edges(int q) const { return out_[q]; }
  const std::vector<int>& initial() const { return initial_; }
  bool is_initial(int q) const;
  bool is_terminal(int q) const { return terminal_[q]; }
  std::vector<int> terminal_states() const;

  int add_state(bool terminal = false);
  void add_edge(int from, int label, int to);
  void add_initial(int q);
  void set_terminal(int q, bool value = true) { terminal_[q] = value; }

  bool is_deterministic() const;
  /// Successor under a label in a deterministic automaton, or -1.
  int step(int q, int label) const;
  /// Dense successor table, row q at q * labels().size(); -1 where missing.
  std::vector<int> transition_table() const;

  /// Acceptance of a label sequence; digit words go through the overload.
  bool accepts(const std::vector<Label>& word) const;
  bool accepts(const DigitWord& word) const;
  bool accepts(const DigitWord& input, const DigitWord& output) const;

  /// Accepted words of length k in lexicographic order.
  std::vector<std::vector<Label>> enumerate(int k) const;
  std::vector<DigitWord> enumerate_words(int k) const;

  /// Number of accepted words of length k; requires a deterministic automaton.
  BigInt count_accepted(int k) const;
  /// Number of accepting paths of length k, for any automaton.
  BigInt count_paths(int k) const;

  /// A_a for one label, or the sum over all labels.
  CountMatrix adjacency() const;
  CountMatrix adjacency(int label) const;

  Automaton trim() const;
  Automaton reachable() const;
  Automaton determinize() const;
  /// Adds a sink when some transition is missing.
  Automaton complete() const;
  /// Deterministic, trim, minimal and canonically numbered.
  Automaton minimize() const;
  /// Same states, different (larger) label set.
  Automaton relabel(const std::vector<Label>& labels) const;

  nlohmann::json to_json() const;
  static Automaton from_json(const nlohmann::json& j);
  std::string to_dot(const std::string& name = "A") const;

  /// Structural equality (meaningful on canonical minimal forms).
  friend bool operator==(const Automaton& a, const Automaton& b);

 private:
  void require_arity(int arity) const;

  int arity_ = 1;
  std::vector<Label> labels_;
  std::vector<std::vector<Edge>> out_;
  std::vector<int> initial_;
  std::vector<bool> terminal_;
};

Automaton complement(const Automaton& a);
Automaton intersect(const Automaton& a, const Automaton& b);
Automaton unite(const Automaton& a, const Automaton& b);
Automaton difference(const Automaton& a, const Automaton& b);
/// Language equality, decided on canonical minimal forms.
bool equivalent(const Automaton& a, const Automaton& b);

enum class Side { Input, Output };
/// Erases one component of every pair label; the result is a digit NFA.
Automaton project(const Automaton& transducer, Side side);

/// Concatenation L(a) L(b).
Automaton concatenate(const Automaton& a, const Automaton& b);

std::string label_text(const Label& label, int arity);

}  // namespace pisotmw
