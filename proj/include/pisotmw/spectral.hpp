#pragma once

// Quantitative layer on top of the constructed automata: dominant
// eigenvalues, the gamma bound and the derived exponents, the measures mu_k
// with their characteristic functions, summatory ratios, joint spectral
// radius bounds of the output matrices and the exact maximum of f_k.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pisotmw/automata.hpp"
#include "pisotmw/constructions.hpp"

namespace pisotmw {

struct DominantEigs {
  double alpha = 0;
  double alpha2_modulus = 0;
};

/// Largest eigenvalue (simple and strictly dominant) and the second largest
/// root modulus of the characteristic polynomial.
DominantEigs dominant_eigs(const CountMatrix& a, double tolerance = 1e-9);

struct GammaBound {
  double gamma = 0;
  int ell = 0;
  int k1 = 0, k2 = 0, k3 = 0;
};

/// gamma = rho(A^ell - J)^(1/ell) for the adjacency matrix A of M_beta.
GammaBound gamma_upper(MinWeightAutomata& m);

struct Exponents {
  double eta = 0, theta = 0, zeta = 0, lambda = 0;
};

Exponents exponents(double alpha, double alpha2_modulus, double beta, double gamma, double epsilon);
/// eta alone; it does not depend on gamma.
double eta_exponent(double alpha, double alpha2_modulus, double beta, double epsilon);
inline double default_epsilon(double alpha, double alpha2_modulus) { return 0.05 * (alpha - alpha2_modulus); }

struct SpectralReport {
  double alpha = 0, alpha2_modulus = 0, beta = 0;
  double gamma = 0;
  int ell = 0;
  double epsilon = 0;
  Exponents exps;
  nlohmann::json to_json() const;
};

SpectralReport spectral_report(MinWeightAutomata& m);

/// Row vector v1 A^k v2 for k = 0..k_max on M_U (exact).
std::vector<BigInt> total_masses(MinWeightAutomata& m, int k_max);

/// nu_k-hat(t) = v1 prod_{j=1..k} A(t beta^-j) v2 / M_k in 50-digit arithmetic.
HighComplex characteristic_function(MinWeightAutomata& m, int k, double t);

/// f_k(n) for |n| <= limit: the number of L_U words of length k with value n.
struct ValueCounts {
  int k = 0;
  std::int64_t limit = 0;
  std::vector<std::uint64_t> counts;  // index n + limit
  std::uint64_t at(std::int64_t n) const {
    return n < -limit || n > limit ? 0 : counts[static_cast<std::size_t>(n + limit)];
  }
};

/// Throws DepthTooLarge when the values of length-k words leave 63 bits.
ValueCounts value_counts(MinWeightAutomata& m, int k, std::int64_t limit);
/// The same with limit = the largest value of a length-k word.
ValueCounts value_counts(MinWeightAutomata& m, int k);
/// Value counts of the length-k words of any digit automaton.
ValueCounts word_value_counts(const Automaton& a, const PisotBasis& basis, int k, std::int64_t limit);

struct MeasureHistogram {
  int k = 0;
  std::vector<double> bin_edges;
  std::vector<double> masses;
  std::string to_csv() const;
};

/// Histogram of mu_k over the support interval (sum_{j<k} U_j / U_k) [min, max]
/// of the alphabet. A value on an interior bin edge counts half to each side,
/// so a symmetric alphabet gives an exactly symmetric histogram.
MeasureHistogram empirical_measure(MinWeightAutomata& m, int k, int bins);

/// mu_k([lo, hi]) evaluated exactly on the integer values n / U_k.
double measure_of(MinWeightAutomata& m, const ValueCounts& counts, double lo, double hi);

struct Summatory {
  BigInt sum;
  double ratio = 0;  // S(N) / N^(log_beta alpha)
};

/// S(N) = sum_{|n|<N} f(n).
Summatory summatory(MinWeightAutomata& m, std::int64_t n_max);
/// S(N) for every N in 1..n_max (index N).
std::vector<BigInt> summatory_table(MinWeightAutomata& m, std::int64_t n_max);

struct SelfSimilarity {
  double mass = 0;         // mu_k(A)
  double scaled_mass = 0;  // mu_k(beta^-1 A)
  double alpha = 0;
  double relative_deviation = 0;  // |alpha mu_k(beta^-1 A) - mu_k(A)| / mu_k(A), 0 when both vanish
};

SelfSimilarity self_similarity_check(MinWeightAutomata& m, int k, double lo, double hi);

struct JsrBounds {
  int depth = 0;
  double lower = 0;
  double upper = 0;
};

/// Bounds on the joint spectral radius by products up to the given length.
/// The set is first split along the strongly connected components of the
/// union graph; the radius is the largest over the diagonal blocks.
JsrBounds jsr_estimate(const std::vector<CountMatrix>& matrices, int depth);
/// Bounds for every depth 1..depth.
std::vector<JsrBounds> jsr_profile(const std::vector<CountMatrix>& matrices, int depth);

/// R_a: normalizer edges with output a; restricted to input 0 when asked.
CountMatrix output_matrix(MinWeightAutomata& m, int a, bool zero_input = false);
std::vector<CountMatrix> output_matrices(MinWeightAutomata& m);
/// R_y = R_{y_first} ... R_{y_last}.
CountMatrix output_product(MinWeightAutomata& m, const DigitWord& y);

struct MaxFk {
  BigInt value;
  std::int64_t witness = 0;
  DigitWord word;  // output word realizing the maximum, with leading zeros
};

/// max_n f_k(n) through the normalizer; k_cap bounds the depth.
MaxFk max_fk(MinWeightAutomata& m, int k, int k_cap = 200);
/// The same maximum by the expansion oracle over all values of length-k words.
MaxFk max_fk_oracle(MinWeightAutomata& m, int k);

/// Whether a <= b entrywise.
bool dominated(const CountMatrix& a, const CountMatrix& b);

}  // namespace pisotmw
