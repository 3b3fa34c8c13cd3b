#pragma once

// Linear recurrent numeration systems of Pisot type: the base sequence U,
// exact arithmetic in Z[beta], digit words and the two value maps.

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "pisotmw/error.hpp"

namespace pisotmw {

using BigInt = boost::multiprecision::cpp_int;
using HighFloat = boost::multiprecision::cpp_bin_float_50;
using HighComplex = boost::multiprecision::cpp_complex_50;

/// Contiguous digit set {lo, ..., hi} with lo <= 0 <= hi.
struct Alphabet {
  int lo = -1;
  int hi = 1;

  Alphabet() = default;
  Alphabet(int lo_, int hi_);

  bool contains(int digit) const { return digit >= lo && digit <= hi; }
  int size() const { return hi - lo + 1; }
  int max_abs() const { return std::max(-lo, hi); }
  bool symmetric() const { return lo == -hi; }
  std::vector<int> digits() const;

  /// Parses "lo..hi", e.g. "-1..1".
  static Alphabet parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

/// Smallest contiguous alphabet containing both.
Alphabet hull(const Alphabet& a, const Alphabet& b);

/// Finite digit string, most significant digit first. The empty word has
/// value 0.
struct DigitWord {
  std::vector<int> digits;

  DigitWord() = default;
  explicit DigitWord(std::vector<int> d) : digits(std::move(d)) {}

  std::size_t size() const { return digits.size(); }
  bool empty() const { return digits.empty(); }
  int weight() const;
  DigitWord stripped() const;
  DigitWord padded(std::size_t length) const;
  bool over(const Alphabet& alphabet) const;

  /// Compact rendering: one character per digit, negatives prefixed by '-'
  /// ("100-1"). The empty word renders as "0".
  std::string compact() const;
  std::string csv() const;

  /// Accepts the compact form or a comma-separated list.
  static DigitWord parse(std::string_view text);

  friend bool operator==(const DigitWord&, const DigitWord&) = default;
  friend auto operator<=>(const DigitWord&, const DigitWord&) = default;
};

/// Z[beta] modulo the minimal polynomial; shared by every AlgebraicInt of a
/// basis so that operands can be checked for compatibility.
class BetaRing {
 public:
  /// Coefficients constant term first, monic.
  explicit BetaRing(std::vector<std::int64_t> min_poly);

  int degree() const { return degree_; }
  const std::vector<std::int64_t>& min_poly() const { return min_poly_; }

  /// In-place multiplication by beta of a canonical coefficient vector.
  void mul_by_beta(std::vector<std::int64_t>& coeffs) const;
  std::vector<std::int64_t> multiply(const std::vector<std::int64_t>& a,
                                     const std::vector<std::int64_t>& b) const;

 private:
  std::vector<std::int64_t> min_poly_;
  int degree_;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

class AlgebraicInt {
 public:
  AlgebraicInt() = default;
  AlgebraicInt(std::shared_ptr<const BetaRing> ring, std::vector<std::int64_t> coeffs);
  static AlgebraicInt zero(std::shared_ptr<const BetaRing> ring);

  const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
  const std::shared_ptr<const BetaRing>& ring() const { return ring_; }
  bool is_zero() const;

  AlgebraicInt operator+(const AlgebraicInt& other) const;
  AlgebraicInt operator-(const AlgebraicInt& other) const;
  AlgebraicInt operator-() const;
  AlgebraicInt operator*(const AlgebraicInt& other) const;
  AlgebraicInt mul_by_beta() const;
  AlgebraicInt add_integer(std::int64_t value) const;

  /// Equality of canonical forms; throws BasisMismatch across rings.
  bool equals(const AlgebraicInt& other) const;
  friend bool operator==(const AlgebraicInt& a, const AlgebraicInt& b) { return a.equals(b); }

 private:
  void check_ring(const AlgebraicInt& other) const;

  std::shared_ptr<const BetaRing> ring_;
  std::vector<std::int64_t> coeffs_;
};

class PisotBasis {
 public:
  static constexpr double kDefaultPisotMargin = 1e-9;

  /// Validates and constructs a basis. min_poly is given constant term first.
  static PisotBasis make(std::vector<std::int64_t> min_poly, std::vector<BigInt> initial_terms,
                         double pisot_margin = kDefaultPisotMargin, std::string name = "custom");

  static PisotBasis fibonacci();
  static PisotBasis tribonacci();
  static PisotBasis smallest_pisot();
  /// "fibonacci", "tribonacci" or "smallest-pisot".
  static PisotBasis builtin(std::string_view name);
  static std::vector<std::string> builtin_names();

  /// Reads the key = value description (name, min_poly, initial_terms,
  /// pisot_margin). Unknown keys are rejected.
  static PisotBasis from_config(std::string_view text);
  static PisotBasis from_file(const std::string& path);
  std::string to_config() const;

  const std::string& name() const { return name_; }
  int degree() const { return ring_->degree(); }
  int onset() const { return h_; }
  const std::vector<std::int64_t>& min_poly() const { return ring_->min_poly(); }
  const std::vector<BigInt>& initial_terms() const { return initial_terms_; }
  double pisot_margin() const { return pisot_margin_; }
  const std::shared_ptr<const BetaRing>& ring() const { return ring_; }

  const HighFloat& beta() const { return beta_; }
  double beta_double() const { return static_cast<double>(beta_); }
  /// All roots; roots()[0] is beta itself, the rest are the conjugates.
  const std::vector<HighComplex>& roots() const { return roots_; }
  std::vector<HighComplex> conjugates() const;
  /// Largest conjugate modulus |beta_2|.
  double second_modulus() const;

  /// Constants c_i with U_{h+k} = sum_i c_i beta_i^k (double precision).
  const std::vector<std::complex<double>>& recurrence_constants() const { return constants_; }
  /// c in U_k ~ c beta^k, fitted from k = 60.
  double fitted_constant() const;

  BigInt term(std::size_t k) const;
  /// Fast path; throws Overflow when U_k does not fit into 63 bits.
  std::int64_t term64(std::size_t k) const;

  BigInt value_u(const DigitWord& word) const;
  std::int64_t value_u64(const DigitWord& word) const;
  AlgebraicInt value_beta(const DigitWord& word) const;
  AlgebraicInt algebraic(std::vector<std::int64_t> coeffs) const;

  /// Evaluates sum_j m_j beta_i^j at the stored root; index 1 is beta.
  HighComplex embed(const AlgebraicInt& a, int index) const;
  /// Double precision evaluation at the root with index 1..d.
  std::complex<double> embed_double(const std::vector<std::int64_t>& coeffs, int index) const;

  /// Greedy U-expansion of n >= 0 ("0" is returned as the empty word).
  DigitWord greedy_expansion(std::int64_t n) const;
  DigitWord greedy_expansion(const BigInt& n) const;
  /// Checks the prefix inequalities of the greedy definition.
  bool is_greedy(const DigitWord& word) const;

  /// Sum of U_0..U_{k-1}.
  std::int64_t prefix_sum64(std::size_t k) const;

 private:
  PisotBasis() = default;
  void extend_terms(std::size_t k) const;

  std::string name_;
  std::shared_ptr<const BetaRing> ring_;
  std::vector<BigInt> initial_terms_;
  int h_ = 0;
  double pisot_margin_ = kDefaultPisotMargin;
  HighFloat beta_;
  std::vector<HighComplex> roots_;
  std::vector<std::complex<double>> roots_double_;
  std::vector<std::complex<double>> constants_;

  struct TermCache {
    std::mutex mutex;
    std::vector<BigInt> terms;
    std::vector<std::int64_t> terms64;  // valid prefix of terms
  };
  std::shared_ptr<TermCache> cache_;
};

}  // namespace pisotmw
