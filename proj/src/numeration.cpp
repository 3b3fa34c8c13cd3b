#include "pisotmw/numeration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Dense>

namespace pisotmw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPisot: return "NotPisot";
    case ErrorCode::NotIncreasing: return "NotIncreasing";
    case ErrorCode::BadFirstTerm: return "BadFirstTerm";
    case ErrorCode::InsufficientTerms: return "InsufficientTerms";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::Unrepresentable: return "Unrepresentable";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::NotDeterministic: return "NotDeterministic";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::StateExplosion: return "StateExplosion";
    case ErrorCode::CertificationFailed: return "CertificationFailed";
    case ErrorCode::DiagnosticFailed: return "DiagnosticFailed";
    case ErrorCode::NotUniqueDominant: return "NotUniqueDominant";
    case ErrorCode::PrimitivityMissing: return "PrimitivityMissing";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Alphabet / DigitWord

Alphabet::Alphabet(int lo_, int hi_) : lo(lo_), hi(hi_) {
  if (lo > 0 || hi < 0) {
    throw Error(ErrorCode::DomainError, "alphabet must contain 0");
  }
}

std::vector<int> Alphabet::digits() const {
  std::vector<int> out;
  for (int a = lo; a <= hi; ++a) out.push_back(a);
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view s) {
  s = trim(s);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Alphabet Alphabet::parse(std::string_view text) {
  text = trim(text);
  auto pos = text.find("..");
  if (pos == std::string_view::npos) {
    throw Error(ErrorCode::ParseError, "alphabet must look like lo..hi");
  }
  return Alphabet(parse_number<int>(text.substr(0, pos)), parse_number<int>(text.substr(pos + 2)));
}

std::string Alphabet::to_string() const {
  return std::to_string(lo) + ".." + std::to_string(hi);
}

Alphabet hull(const Alphabet& a, const Alphabet& b) {
  return Alphabet(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

int DigitWord::weight() const {
  int w = 0;
  for (int d : digits) w += std::abs(d);
  return w;
}

DigitWord DigitWord::stripped() const {
  auto it = std::find_if(digits.begin(), digits.end(), [](int d) { return d != 0; });
  return DigitWord(std::vector<int>(it, digits.end()));
}

DigitWord DigitWord::padded(std::size_t length) const {
  if (digits.size() >= length) return *this;
  std::vector<int> out(length - digits.size(), 0);
  out.insert(out.end(), digits.begin(), digits.end());
  return DigitWord(std::move(out));
}

bool DigitWord::over(const Alphabet& alphabet) const {
  return std::all_of(digits.begin(), digits.end(), [&](int d) { return alphabet.contains(d); });
}

std::string DigitWord::compact() const {
  if (digits.empty()) return "0";
  std::string out;
  for (int d : digits) {
    if (d < -9 || d > 9) return csv();
    if (d < 0) out += '-';
    out += static_cast<char>('0' + std::abs(d));
  }
  return out;
}

std::string DigitWord::csv() const {
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(digits[i]);
  }
  return out;
}

DigitWord DigitWord::parse(std::string_view text) {
  text = trim(text);
  DigitWord w;
  if (text.empty()) return w;
  if (text.find(',') != std::string_view::npos) {
    for (auto part : split(text, ',')) w.digits.push_back(parse_number<int>(part));
    return w;
  }
  for (std::size_t i = 0; i < text.size(); ++i) {
    bool negative = false;
    if (text[i] == '-') {
      negative = true;
      if (++i == text.size()) throw Error(ErrorCode::ParseError, "dangling '-' in digit word");
    }
    char c = text[i];
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::ParseError, "bad digit character in '" + std::string(text) + "'");
    }
    int d = c - '0';
    w.digits.push_back(negative ? -d : d);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Z[beta]

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "Z[beta] coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "Z[beta] coefficient overflow");
  return r;
}

BetaRing::BetaRing(std::vector<std::int64_t> min_poly) : min_poly_(std::move(min_poly)) {
  if (min_poly_.size() < 2 || min_poly_.back() != 1) {
    throw Error(ErrorCode::DomainError, "minimal polynomial must be monic of degree >= 1");
  }
  degree_ = static_cast<int>(min_poly_.size()) - 1;
}

void BetaRing::mul_by_beta(std::vector<std::int64_t>& c) const {
  std::int64_t top = c[degree_ - 1];
  for (int j = degree_ - 1; j > 0; --j) c[j] = c[j - 1];
  c[0] = 0;
  if (top != 0) {
    for (int j = 0; j < degree_; ++j) c[j] = checked_add(c[j], checked_mul(-min_poly_[j], top));
  }
}

std::vector<std::int64_t> BetaRing::multiply(const std::vector<std::int64_t>& a,
                                             const std::vector<std::int64_t>& b) const {
  // Horner in beta over the coefficients of a.
  std::vector<std::int64_t> acc(degree_, 0);
  for (int j = degree_ - 1; j >= 0; --j) {
    mul_by_beta(acc);
    for (int i = 0; i < degree_; ++i) acc[i] = checked_add(acc[i], checked_mul(a[j], b[i]));
  }
  return acc;
}

AlgebraicInt::AlgebraicInt(std::shared_ptr<const BetaRing> ring, std::vector<std::int64_t> coeffs)
    : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) > ring_->degree()) {
    // Reduce a longer polynomial by Horner evaluation.
    std::vector<std::int64_t> acc(ring_->degree(), 0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      ring_->mul_by_beta(acc);
      acc[0] = checked_add(acc[0], *it);
    }
    coeffs_ = std::move(acc);
  }
  coeffs_.resize(ring_->degree(), 0);
}

AlgebraicInt AlgebraicInt::zero(std::shared_ptr<const BetaRing> ring) {
  int d = ring->degree();
  return AlgebraicInt(std::move(ring), std::vector<std::int64_t>(d, 0));
}

bool AlgebraicInt::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::int64_t c) { return c == 0; });
}

void AlgebraicInt::check_ring(const AlgebraicInt& other) const {
  if (ring_ != other.ring_ && (!ring_ || !other.ring_ || ring_->min_poly() != other.ring_->min_poly())) {
    throw Error(ErrorCode::BasisMismatch, "operands belong to different bases");
  }
}

AlgebraicInt AlgebraicInt::operator+(const AlgebraicInt& o) const {
  check_ring(o);
  std::vector<std::int64_t> c(coeffs_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = checked_add(coeffs_[j], o.coeffs_[j]);
  return AlgebraicInt(ring_, std::move(c));
}

AlgebraicInt AlgebraicInt::operator-() const {
  std::vector<std::int64_t> c(coeffs_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = checked_mul(coeffs_[j], -1);
  return AlgebraicInt(ring_, std::move(c));
}

AlgebraicInt AlgebraicInt::operator-(const AlgebraicInt& o) const { return *this + (-o); }

AlgebraicInt AlgebraicInt::operator*(const AlgebraicInt& o) const {
  check_ring(o);
  return AlgebraicInt(ring_, ring_->multiply(coeffs_, o.coeffs_));
}

AlgebraicInt AlgebraicInt::mul_by_beta() const {
  auto c = coeffs_;
  ring_->mul_by_beta(c);
  return AlgebraicInt(ring_, std::move(c));
}

AlgebraicInt AlgebraicInt::add_integer(std::int64_t value) const {
  auto c = coeffs_;
  c[0] = checked_add(c[0], value);
  return AlgebraicInt(ring_, std::move(c));
}

bool AlgebraicInt::equals(const AlgebraicInt& o) const {
  check_ring(o);
  return coeffs_ == o.coeffs_;
}

// ---------------------------------------------------------------------------
// PisotBasis

namespace {

HighComplex eval_poly(const std::vector<std::int64_t>& p, const HighComplex& x) {
  HighComplex acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + HighComplex(HighFloat(*it));
  return acc;
}

HighComplex eval_derivative(const std::vector<std::int64_t>& p, const HighComplex& x) {
  HighComplex acc(0);
  for (std::size_t j = p.size() - 1; j >= 1; --j) {
    acc = acc * x + HighComplex(HighFloat(p[j] * static_cast<std::int64_t>(j)));
  }
  return acc;
}

// Double-precision roots from the companion matrix, each polished by Newton
// iteration in 50-digit arithmetic.
std::vector<HighComplex> polynomial_roots(const std::vector<std::int64_t>& p) {
  const int d = static_cast<int>(p.size()) - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -static_cast<double>(p[i]);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<HighComplex> roots;
  const HighFloat tiny("1e-48");
  for (int i = 0; i < d; ++i) {
    auto z = solver.eigenvalues()[i];
    HighComplex x(HighFloat(z.real()), HighFloat(z.imag()));
    for (int iter = 0; iter < 200; ++iter) {
      HighComplex dp = eval_derivative(p, x);
      if (abs(dp) == 0) break;
      HighComplex step = eval_poly(p, x) / dp;
      x -= step;
      if (abs(step) < tiny) break;
    }
    if (abs(x.imag()) < HighFloat("1e-40")) x = HighComplex(x.real(), HighFloat(0));
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end(),
            [](const HighComplex& a, const HighComplex& b) { return abs(a) > abs(b); });
  return roots;
}

std::vector<BigInt> parse_big_list(std::string_view text) {
  std::vector<BigInt> out;
  for (auto part : split(text, ',')) {
    if (part.empty()) throw Error(ErrorCode::ParseError, "empty list entry");
    try {
      out.emplace_back(std::string(part));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(part) + "'");
    }
  }
  return out;
}

}  // namespace

PisotBasis PisotBasis::make(std::vector<std::int64_t> min_poly, std::vector<BigInt> initial_terms,
                            double pisot_margin, std::string name) {
  if (min_poly.size() < 2 || min_poly.back() != 1) {
    throw Error(ErrorCode::DomainError, "minimal polynomial must be monic of degree >= 1");
  }
  const int d = static_cast<int>(min_poly.size()) - 1;
  if (initial_terms.empty() || static_cast<int>(initial_terms.size()) < d) {
    throw Error(ErrorCode::InsufficientTerms,
                "need at least " + std::to_string(d) + " initial terms");
  }
  if (initial_terms[0] != 1) throw Error(ErrorCode::BadFirstTerm, "U_0 must equal 1");
  for (std::size_t k = 1; k < initial_terms.size(); ++k) {
    if (initial_terms[k] <= initial_terms[k - 1]) {
      throw Error(ErrorCode::NotIncreasing, "initial terms must be strictly increasing");
    }
  }
  if (min_poly[0] == 0) {
    // A Pisot root together with 0 means the polynomial is reducible.
    throw Error(ErrorCode::NotPisot, "polynomial has the root 0 and is not minimal");
  }

  PisotBasis b;
  b.name_ = std::move(name);
  b.pisot_margin_ = pisot_margin;
  b.ring_ = std::make_shared<BetaRing>(min_poly);
  b.roots_ = polynomial_roots(min_poly);

  const HighComplex& top = b.roots_[0];
  if (top.imag() != 0 || top.real() <= 1 + HighFloat(pisot_margin)) {
    throw Error(ErrorCode::NotPisot, "dominant root is not a real number > 1");
  }
  for (int i = 1; i < d; ++i) {
    if (abs(b.roots_[i]) >= 1 - HighFloat(pisot_margin)) {
      throw Error(ErrorCode::NotPisot, "conjugate of modulus " +
                                           abs(b.roots_[i]).str(12) + " is not below 1");
    }
  }
  b.beta_ = top.real();
  for (const auto& r : b.roots_) {
    b.roots_double_.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  }

  // Smallest onset h such that the recurrence holds on every supplied term
  // at index >= h + d. Every monic polynomial with all conjugates inside the
  // unit disc and nonzero constant term is irreducible, so this recurrence is
  // the minimal one.
  const int n = static_cast<int>(initial_terms.size());
  int h = -1;
  for (int cand = 0; cand + d <= n; ++cand) {
    bool ok = true;
    for (int k = cand + d; k < n && ok; ++k) {
      BigInt acc = 0;
      for (int j = 0; j < d; ++j) acc -= BigInt(min_poly[j]) * initial_terms[k - d + j];
      ok = acc == initial_terms[k];
    }
    if (ok) {
      h = cand;
      break;
    }
  }
  if (h < 0) throw Error(ErrorCode::InsufficientTerms, "recurrence never holds on the initial terms");
  b.h_ = h;
  b.initial_terms_ = std::move(initial_terms);
  b.cache_ = std::make_shared<TermCache>();
  b.cache_->terms = b.initial_terms_;

  for (std::size_t k = 1; k < 200; ++k) {
    if (b.term(k) <= b.term(k - 1)) {
      throw Error(ErrorCode::NotIncreasing, "generated sequence stops increasing at k = " + std::to_string(k));
    }
  }

  // U_{h+k} = sum_i c_i beta_i^k, solved from k = 0..d-1.
  Eigen::MatrixXcd vander(d, d);
  Eigen::VectorXcd rhs(d);
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) vander(k, i) = std::pow(b.roots_double_[i], k);
    rhs(k) = static_cast<double>(b.term(h + k));
  }
  Eigen::VectorXcd c = vander.fullPivLu().solve(rhs);
  for (int i = 0; i < d; ++i) b.constants_.push_back(c(i));
  return b;
}

PisotBasis PisotBasis::fibonacci() {
  return make({-1, -1, 1}, {1, 2}, kDefaultPisotMargin, "fibonacci");
}

PisotBasis PisotBasis::tribonacci() {
  return make({-1, -1, -1, 1}, {1, 2, 4}, kDefaultPisotMargin, "tribonacci");
}

PisotBasis PisotBasis::smallest_pisot() {
  return make({-1, -1, 0, 1}, {1, 2, 3, 4, 6}, kDefaultPisotMargin, "smallest-pisot");
}

std::vector<std::string> PisotBasis::builtin_names() {
  return {"fibonacci", "tribonacci", "smallest-pisot"};
}

PisotBasis PisotBasis::builtin(std::string_view name) {
  if (name == "fibonacci") return fibonacci();
  if (name == "tribonacci") return tribonacci();
  if (name == "smallest-pisot") return smallest_pisot();
  throw Error(ErrorCode::ParseError, "unknown basis '" + std::string(name) + "'");
}

PisotBasis PisotBasis::from_config(std::string_view text) {
  std::map<std::string, std::string> fields;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::ParseError, "expected key = value: " + line);
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (key != "name" && key != "min_poly" && key != "initial_terms" && key != "pisot_margin") {
      throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
    }
    if (!fields.emplace(key, value).second) throw Error(ErrorCode::ParseError, "duplicate key '" + key + "'");
  }
  if (!fields.count("min_poly") || !fields.count("initial_terms")) {
    throw Error(ErrorCode::ParseError, "min_poly and initial_terms are required");
  }
  std::vector<std::int64_t> poly;
  for (const auto& c : parse_big_list(fields["min_poly"])) poly.push_back(static_cast<std::int64_t>(c));
  double margin = kDefaultPisotMargin;
  if (fields.count("pisot_margin")) {
    try {
      margin = std::stod(fields["pisot_margin"]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad pisot_margin");
    }
  }
  std::string name = fields.count("name") ? fields["name"] : "custom";
  return make(std::move(poly), parse_big_list(fields["initial_terms"]), margin, std::move(name));
}

PisotBasis PisotBasis::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open basis file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_config(ss.str());
}

std::string PisotBasis::to_config() const {
  std::ostringstream out;
  out << "name = " << name_ << "\nmin_poly = ";
  for (std::size_t j = 0; j < min_poly().size(); ++j) out << (j ? ", " : "") << min_poly()[j];
  out << "\ninitial_terms = ";
  for (std::size_t j = 0; j < initial_terms_.size(); ++j) out << (j ? ", " : "") << initial_terms_[j];
  out.precision(17);
  out << "\npisot_margin = " << pisot_margin_ << "\n";
  return out.str();
}

std::vector<HighComplex> PisotBasis::conjugates() const {
  return std::vector<HighComplex>(roots_.begin() + 1, roots_.end());
}

double PisotBasis::second_modulus() const {
  return roots_.size() > 1 ? std::abs(roots_double_[1]) : 0.0;
}

double PisotBasis::fitted_constant() const {
  return static_cast<double>(HighFloat(term(60)) / pow(beta_, 60));
}

void PisotBasis::extend_terms(std::size_t k) const {
  auto& terms = cache_->terms;
  const int d = degree();
  const auto& p = min_poly();
  while (terms.size() <= k) {
    std::size_t n = terms.size();
    BigInt acc = 0;
    for (int j = 0; j < d; ++j) acc -= BigInt(p[j]) * terms[n - d + j];
    terms.push_back(std::move(acc));
  }
}

BigInt PisotBasis::term(std::size_t k) const {
  std::lock_guard lock(cache_->mutex);
  extend_terms(k);
  return cache_->terms[k];
}

std::int64_t PisotBasis::term64(std::size_t k) const {
  std::lock_guard lock(cache_->mutex);
  auto& t64 = cache_->terms64;
  if (k < t64.size()) return t64[k];
  extend_terms(k);
  static const BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max()) / 4;
  while (t64.size() <= k) {
    const BigInt& t = cache_->terms[t64.size()];
    if (t > limit) throw Error(ErrorCode::Overflow, "U_" + std::to_string(k) + " exceeds 61 bits");
    t64.push_back(static_cast<std::int64_t>(t));
  }
  return t64[k];
}

std::int64_t PisotBasis::prefix_sum64(std::size_t k) const {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < k; ++j) s = checked_add(s, term64(j));
  return s;
}

BigInt PisotBasis::value_u(const DigitWord& word) const {
  BigInt v = 0;
  const std::size_t n = word.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (word.digits[i] != 0) v += BigInt(word.digits[i]) * term(n - 1 - i);
  }
  return v;
}

std::int64_t PisotBasis::value_u64(const DigitWord& word) const {
  std::int64_t v = 0;
  const std::size_t n = word.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (word.digits[i] != 0) v = checked_add(v, checked_mul(word.digits[i], term64(n - 1 - i)));
  }
  return v;
}

AlgebraicInt PisotBasis::value_beta(const DigitWord& word) const {
  std::vector<std::int64_t> acc(degree(), 0);
  for (int digit : word.digits) {
    ring_->mul_by_beta(acc);
    acc[0] = checked_add(acc[0], digit);
  }
  return AlgebraicInt(ring_, std::move(acc));
}

AlgebraicInt PisotBasis::algebraic(std::vector<std::int64_t> coeffs) const {
  return AlgebraicInt(ring_, std::move(coeffs));
}

HighComplex PisotBasis::embed(const AlgebraicInt& a, int index) const {
  if (index < 1 || index > degree()) throw Error(ErrorCode::DomainError, "root index out of range");
  if (a.ring() && a.ring()->min_poly() != min_poly()) {
    throw Error(ErrorCode::BasisMismatch, "element belongs to a different basis");
  }
  const HighComplex& x = roots_[index - 1];
  HighComplex acc(0);
  const auto& c = a.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + HighComplex(HighFloat(*it));
  return acc;
}

std::complex<double> PisotBasis::embed_double(const std::vector<std::int64_t>& coeffs, int index) const {
  const auto x = roots_double_[index - 1];
  std::complex<double> acc = 0;
  for (int j = degree() - 1; j >= 0; --j) acc = acc * x + static_cast<double>(coeffs[j]);
  return acc;
}

DigitWord PisotBasis::greedy_expansion(std::int64_t n) const {
  if (n < 0) throw Error(ErrorCode::DomainError, "greedy expansion needs n >= 0");
  if (n == 0) return DigitWord();
  std::size_t top = 0;
  while (term64(top + 1) <= n) ++top;
  std::vector<int> digits;
  digits.reserve(top + 1);
  for (std::size_t j = top + 1; j-- > 0;) {
    std::int64_t u = term64(j);
    digits.push_back(static_cast<int>(n / u));
    n %= u;
  }
  return DigitWord(std::move(digits));
}

DigitWord PisotBasis::greedy_expansion(const BigInt& n) const {
  if (n < 0) throw Error(ErrorCode::DomainError, "greedy expansion needs n >= 0");
  if (n == 0) return DigitWord();
  std::size_t top = 0;
  while (term(top + 1) <= n) ++top;
  std::vector<int> digits;
  BigInt rest = n;
  for (std::size_t j = top + 1; j-- > 0;) {
    BigInt u = term(j);
    digits.push_back(static_cast<int>(rest / u));
    rest %= u;
  }
  return DigitWord(std::move(digits));
}

bool PisotBasis::is_greedy(const DigitWord& word) const {
  if (!word.empty() && word.digits.front() == 0) return false;
  BigInt partial = 0;
  const std::size_t n = word.size();
  for (std::size_t j = 0; j < n; ++j) {
    int digit = word.digits[n - 1 - j];
    if (digit < 0) return false;
    partial += BigInt(digit) * term(j);
    if (partial >= term(j + 1)) return false;
  }
  return true;
}

}  // namespace pisotmw
