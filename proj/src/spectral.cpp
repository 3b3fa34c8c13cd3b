#include "pisotmw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>

namespace pisotmw {

namespace {

Eigen::MatrixXd to_eigen(const CountMatrix& a) {
  const int n = a.size();
  auto flat = a.to_double();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = flat[static_cast<std::size_t>(i) * n + j];
  }
  return m;
}

std::vector<double> moduli(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  std::vector<double> out;
  for (int i = 0; i < m.rows(); ++i) out.push_back(std::abs(solver.eigenvalues()[i]));
  std::sort(out.rbegin(), out.rend());
  return out;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  auto mods = moduli(m);
  return mods.empty() ? 0 : mods.front();
}

double row_sum_norm(const Eigen::MatrixXd& m) {
  return m.rows() == 0 ? 0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

std::int64_t prefix_value_bound(const PisotBasis& basis, const Alphabet& alphabet, int k) {
  try {
    std::int64_t s = 0;
    for (int j = 0; j < k; ++j) s = checked_add(s, basis.term64(j));
    return checked_mul(s, alphabet.max_abs());
  } catch (const Error&) {
    throw Error(ErrorCode::DepthTooLarge, "word values of length " + std::to_string(k) + " exceed 63 bits");
  }
}

// Rank of a digit in the preference order 0 < -1 < 1 < -2 < 2 < ...
int digit_rank(int d) { return 2 * std::abs(d) - (d < 0 ? 1 : 0); }

// Within the first `lead` positions zeros come first, so that words whose
// greedy expansion fits in k digits win; after that, the larger rank.
bool preferred(const std::vector<int>& a, const std::vector<int>& b, int lead) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] == b[i]) continue;
    if (static_cast<int>(i) < lead) return digit_rank(a[i]) < digit_rank(b[i]);
    return digit_rank(a[i]) > digit_rank(b[i]);
  }
  return false;
}

// Strongly connected components of the union graph (Kosaraju).
std::vector<std::vector<int>> union_components(const std::vector<Eigen::MatrixXd>& ms) {
  const int n = static_cast<int>(ms.front().rows());
  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      bool edge = false;
      for (const auto& m : ms) edge = edge || m(i, j) != 0;
      if (edge) {
        fwd[i].push_back(j);
        bwd[j].push_back(i);
      }
    }
  }
  std::vector<int> order;
  std::vector<char> seen(n);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < fwd[v].size()) {
        int w = fwd[v][i++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    out.emplace_back();
    std::vector<int> stack{*it};
    comp[*it] = static_cast<int>(out.size()) - 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out.back().push_back(v);
      for (int w : bwd[v]) {
        if (comp[w] < 0) {
          comp[w] = comp[*it];
          stack.push_back(w);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

bool entrywise_leq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a.array() <= b.array()).all(); }

// Bounds at every depth for one irreducible block. The upper bound takes
// the better of the plain max-row-sum norm and the same norm after a
// diagonal rescaling adapted to the products of that length.
std::vector<JsrBounds> block_profile(const std::vector<Eigen::MatrixXd>& ms, int depth) {
  const auto n = ms.front().rows();
  std::vector<std::vector<Eigen::MatrixXd>> levels;
  std::vector<Eigen::MatrixXd> frontier{Eigen::MatrixXd::Identity(n, n)};
  std::vector<double> lowers;
  double lower = 0;
  for (int t = 1; t <= depth; ++t) {
    std::vector<Eigen::MatrixXd> next;
    for (const auto& p : frontier) {
      for (const auto& m : ms) {
        Eigen::MatrixXd q = p * m;
        if (q.isZero(0)) continue;
        next.push_back(std::move(q));
      }
    }
    // Entrywise larger products dominate every extension, for both bounds.
    std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.sum() > b.sum(); });
    std::vector<Eigen::MatrixXd> kept;
    for (auto& q : next) {
      bool covered = false;
      for (const auto& k : kept) {
        if (entrywise_leq(q, k)) {
          covered = true;
          break;
        }
      }
      if (!covered) kept.push_back(std::move(q));
    }
    frontier.swap(kept);
    for (const auto& p : frontier) lower = std::max(lower, std::pow(spectral_radius(p), 1.0 / t));
    lowers.push_back(lower);
    levels.push_back(frontier);
  }

  std::vector<JsrBounds> out;
  double upper = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= depth; ++t) {
    const auto& products = levels[t - 1];
    double plain = 0;
    for (const auto& p : products) plain = std::max(plain, row_sum_norm(p));
    // Power iteration for w ~ max_P P w; every positive w bounds the
    // depth-t norms by max_i (max_P P w)_i / w_i.
    double scaled = plain;
    Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
    for (int iteration = 0; iteration < 200 && !products.empty(); ++iteration) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (const auto& p : products) v = v.cwiseMax(p * w);
      scaled = std::min(scaled, v.cwiseQuotient(w).maxCoeff());
      if (v.maxCoeff() <= 0) break;
      w = (v / v.maxCoeff()).array() + 1e-9;
    }
    upper = std::min({upper, std::pow(plain, 1.0 / t), std::pow(scaled, 1.0 / t)});
    out.push_back({t, lowers[t - 1], upper});
  }
  return out;
}

}  // namespace

DominantEigs dominant_eigs(const CountMatrix& a, double tolerance) {
  if (a.size() == 0) throw Error(ErrorCode::NotUniqueDominant, "empty matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(a), false);
  std::vector<std::complex<double>> ev(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(ev.begin(), ev.end(), [](auto x, auto y) { return std::abs(x) > std::abs(y); });
  DominantEigs out;
  out.alpha = ev.front().real();
  out.alpha2_modulus = ev.size() > 1 ? std::abs(ev[1]) : 0;
  const double scale = std::max(1.0, std::abs(ev.front()));
  if (std::abs(ev.front().imag()) > tolerance * scale || out.alpha <= 0 ||
      out.alpha2_modulus >= std::abs(ev.front()) - tolerance * scale) {
    throw Error(ErrorCode::NotUniqueDominant, "no simple strictly dominant eigenvalue");
  }
  return out;
}

GammaBound gamma_upper(MinWeightAutomata& m) {
  const Automaton& mb = m.lbeta();
  const int n = mb.num_states();
  if (n == 0 || mb.initial().empty()) throw Error(ErrorCode::PrimitivityMissing, "empty L_beta automaton");
  const int init = mb.initial().front();
  const int zero = mb.label_index(digit_label(0));
  int one_digit = m.alphabet().contains(1) ? 1 : m.alphabet().lo;
  const int one = mb.label_index(digit_label(one_digit));
  if (zero < 0 || one < 0 || one_digit == 0) throw Error(ErrorCode::PrimitivityMissing, "alphabet without a nonzero digit");

  GammaBound g;
  g.k1 = synchronizing_zeros(mb, 4 * n + 64);
  if (g.k1 < 0) throw Error(ErrorCode::PrimitivityMissing, "no synchronizing run of zeros");
  // Loop 1 0^k2 at the initial state.
  auto loop_length = [&](int at_least) {
    int q = mb.step(init, one);
    if (q < 0) return -1;
    for (int k = 0; k <= 4 * n + 64; ++k) {
      if (q == init && k >= at_least) return k;
      q = mb.step(q, zero);
      if (q < 0) return -1;
    }
    return -1;
  };
  g.k2 = loop_length(0);
  if (g.k2 < 0) throw Error(ErrorCode::PrimitivityMissing, "no loop through the digit at the initial state");
  // Eccentricity of the initial state.
  std::vector<int> dist(n, -1);
  std::vector<int> queue{init};
  dist[init] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& e : mb.edges(queue[i])) {
      if (dist[e.to] < 0) {
        dist[e.to] = dist[queue[i]] + 1;
        queue.push_back(e.to);
      }
    }
  }
  g.k3 = *std::max_element(dist.begin(), dist.end());

  // No path labelled (0^k1 d 0^k2, 0^(k1+1+k2)) in the beta-equality
  // automaton, read from any of its states.
  const int w = m.alphabet().hi - m.alphabet().lo;
  Automaton eq = build_beta_zero_automaton(m.basis(), Alphabet(-w, w));
  const int e0 = eq.label_index(digit_label(0)), ed = eq.label_index(digit_label(-one_digit));
  auto survives = [&](int k1, int k2) {
    std::vector<char> live(eq.num_states(), 1);
    auto apply = [&](int label) {
      std::vector<char> next(eq.num_states());
      bool any = false;
      for (int q = 0; q < eq.num_states(); ++q) {
        if (!live[q]) continue;
        int t = eq.step(q, label);
        if (t >= 0) next[t] = any = true;
      }
      live.swap(next);
      return any;
    };
    for (int i = 0; i < k1; ++i) {
      if (!apply(e0)) return false;
    }
    if (!apply(ed)) return false;
    for (int i = 0; i < k2; ++i) {
      if (!apply(e0)) return false;
    }
    return true;
  };
  for (int attempt = 0; survives(g.k1, g.k2); ++attempt) {
    if (attempt > 4 * n + 64) throw Error(ErrorCode::PrimitivityMissing, "zero runs never separate the pair");
    ++g.k1;
    if (attempt % 2 == 1) {
      int next = loop_length(g.k2 + 1);
      if (next > 0) g.k2 = next;
    }
  }
  g.ell = g.k1 + g.k2 + g.k3 + 1;

  CountMatrix power = mb.adjacency().pow(g.ell);
  if (!power.positive()) throw Error(ErrorCode::PrimitivityMissing, "A_beta^ell has a zero entry");
  Eigen::MatrixXd tilde = to_eigen(power) - Eigen::MatrixXd::Ones(n, n);
  g.gamma = std::pow(spectral_radius(tilde), 1.0 / g.ell);
  return g;
}

double eta_exponent(double alpha, double alpha2_modulus, double beta, double epsilon) {
  const double second = alpha2_modulus + epsilon;
  if (!(beta > 1) || !(second > 0) || !(alpha > second)) {
    throw Error(ErrorCode::DomainError, "eta needs beta > 1 and alpha > |alpha2| + eps > 0");
  }
  const double gap = std::log(alpha) - std::log(second);
  return gap / (std::log(beta) + gap);
}

Exponents exponents(double alpha, double alpha2_modulus, double beta, double gamma, double epsilon) {
  const double second = alpha2_modulus + epsilon;
  if (!(beta > 1) || !(second > 0) || !(alpha > second) || !(gamma > 0) || !(gamma < alpha)) {
    throw Error(ErrorCode::DomainError, "exponents need beta > 1, alpha > |alpha2| + eps > 0 and 0 < gamma < alpha");
  }
  Exponents e;
  e.eta = eta_exponent(alpha, alpha2_modulus, beta, epsilon);
  e.theta = (std::log(alpha) - std::log(gamma)) / std::log(beta);
  e.zeta = 2 * e.theta * e.eta / (e.eta * (e.theta + 2) + 2 * e.theta);
  e.lambda = std::log(alpha) / std::log(beta) - e.zeta;
  return e;
}

nlohmann::json SpectralReport::to_json() const {
  return {{"alpha", alpha}, {"alpha2_modulus", alpha2_modulus}, {"beta", beta},       {"gamma", gamma},
          {"ell", ell},     {"epsilon", epsilon},               {"eta", exps.eta},   {"theta", exps.theta},
          {"zeta", exps.zeta}, {"lambda", exps.lambda}};
}

SpectralReport spectral_report(MinWeightAutomata& m) {
  SpectralReport r;
  auto eig = dominant_eigs(m.lu().adjacency());
  r.alpha = eig.alpha;
  r.alpha2_modulus = eig.alpha2_modulus;
  r.beta = m.basis().beta_double();
  auto g = gamma_upper(m);
  r.gamma = g.gamma;
  r.ell = g.ell;
  r.epsilon = default_epsilon(r.alpha, r.alpha2_modulus);
  r.exps = exponents(r.alpha, r.alpha2_modulus, r.beta, r.gamma, r.epsilon);
  return r;
}

std::vector<BigInt> total_masses(MinWeightAutomata& m, int k_max) {
  const Automaton& lu = m.lu();
  std::vector<BigInt> v(lu.num_states()), out;
  if (!lu.initial().empty()) v[lu.initial().front()] = 1;
  for (int k = 0; k <= k_max; ++k) {
    BigInt total = 0;
    for (int q = 0; q < lu.num_states(); ++q) {
      if (lu.is_terminal(q)) total += v[q];
    }
    out.push_back(total);
    std::vector<BigInt> next(lu.num_states());
    for (int q = 0; q < lu.num_states(); ++q) {
      if (v[q] == 0) continue;
      for (const auto& e : lu.edges(q)) next[e.to] += v[q];
    }
    v.swap(next);
  }
  return out;
}

HighComplex characteristic_function(MinWeightAutomata& m, int k, double t) {
  const Automaton& lu = m.lu();
  const int n = lu.num_states();
  if (n == 0) return HighComplex(0);
  const HighFloat two_pi = 2 * boost::math::constants::pi<HighFloat>();
  std::vector<HighComplex> v(n, HighComplex(0));
  v[lu.initial().front()] = HighComplex(1);
  HighFloat x = HighFloat(t);
  for (int j = 1; j <= k; ++j) {
    x /= m.basis().beta();
    std::vector<HighComplex> weight;
    for (const auto& l : lu.labels()) {
      HighFloat phase = two_pi * l[0] * x;
      weight.emplace_back(cos(phase), sin(phase));
    }
    std::vector<HighComplex> next(n, HighComplex(0));
    for (int q = 0; q < n; ++q) {
      for (const auto& e : lu.edges(q)) next[e.to] += v[q] * weight[e.label];
    }
    v.swap(next);
  }
  HighComplex sum(0);
  for (int q = 0; q < n; ++q) {
    if (lu.is_terminal(q)) sum += v[q];
  }
  BigInt mk = total_masses(m, k).back();
  return sum / HighComplex(HighFloat(mk));
}

ValueCounts value_counts(MinWeightAutomata& m, int k, std::int64_t limit) {
  return word_value_counts(m.lu(), m.basis(), k, limit);
}

ValueCounts word_value_counts(const Automaton& lu, const PisotBasis& basis, int k, std::int64_t limit) {
  int lo = 0, hi = 0;
  for (const auto& l : lu.labels()) lo = std::min(lo, l[0]), hi = std::max(hi, l[0]);
  const Alphabet alphabet(lo, hi);
  prefix_value_bound(basis, alphabet, k);  // throws when too deep
  struct Entry {
    int q;
    std::int64_t v;
    std::uint64_t c;
  };
  std::vector<Entry> cur;
  if (!lu.initial().empty()) cur.push_back({lu.initial().front(), 0, 1});
  for (int pos = k - 1; pos >= 0; --pos) {
    const std::int64_t u = basis.term64(pos);
    const std::int64_t reach = limit + prefix_value_bound(basis, alphabet, pos);
    std::vector<Entry> next;
    for (const auto& e : cur) {
      for (const auto& edge : lu.edges(e.q)) {
        std::int64_t v = e.v + lu.labels()[edge.label][0] * u;
        if (v > reach || v < -reach) continue;
        next.push_back({edge.to, v, e.c});
      }
    }
    std::sort(next.begin(), next.end(), [](const Entry& a, const Entry& b) { return a.q != b.q ? a.q < b.q : a.v < b.v; });
    cur.clear();
    for (const auto& e : next) {
      if (!cur.empty() && cur.back().q == e.q && cur.back().v == e.v) {
        if (__builtin_add_overflow(cur.back().c, e.c, &cur.back().c)) {
          throw Error(ErrorCode::Overflow, "path count exceeds 64 bits");
        }
      } else {
        cur.push_back(e);
      }
    }
  }
  ValueCounts out;
  out.k = k;
  out.limit = limit;
  out.counts.assign(static_cast<std::size_t>(2 * limit + 1), 0);
  for (const auto& e : cur) {
    if (lu.is_terminal(e.q) && e.v >= -limit && e.v <= limit) out.counts[static_cast<std::size_t>(e.v + limit)] += e.c;
  }
  return out;
}

ValueCounts value_counts(MinWeightAutomata& m, int k) {
  return value_counts(m, k, prefix_value_bound(m.basis(), m.alphabet(), k));
}

std::string MeasureHistogram::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "bin_lo,bin_hi,mass\n";
  for (std::size_t i = 0; i < masses.size(); ++i) out << bin_edges[i] << ',' << bin_edges[i + 1] << ',' << masses[i] << '\n';
  return out.str();
}

MeasureHistogram empirical_measure(MinWeightAutomata& m, int k, int bins) {
  if (bins < 1) throw Error(ErrorCode::DomainError, "need at least one bin");
  const std::int64_t span = prefix_value_bound(m.basis(), Alphabet(0, 1), k);
  if (span > 50'000'000) throw Error(ErrorCode::DepthTooLarge, "too many values for an exact histogram");
  ValueCounts counts = value_counts(m, k);
  const std::int64_t lo = m.alphabet().lo * span, hi = m.alphabet().hi * span;
  const double uk = static_cast<double>(m.basis().term64(k));
  MeasureHistogram h;
  h.k = k;
  for (int i = 0; i <= bins; ++i) h.bin_edges.push_back((lo + (hi - lo) * static_cast<double>(i) / bins) / uk);
  // Exact doubled counts per bin; a point on an interior edge gives one
  // half to each neighbour.
  std::vector<unsigned __int128> twice(bins, 0);
  unsigned __int128 total = 0;
  const __int128 d = hi - lo;
  for (std::int64_t n = -counts.limit; n <= counts.limit; ++n) {
    const std::uint64_t c = counts.at(n);
    if (c == 0 || d == 0) continue;
    total += c;
    const __int128 t = static_cast<__int128>(n - lo) * bins;
    const int index = static_cast<int>(t / d);
    if (t % d == 0 && index > 0 && index < bins) {
      twice[index - 1] += c;
      twice[index] += c;
    } else {
      twice[std::clamp(index, 0, bins - 1)] += 2 * static_cast<unsigned __int128>(c);
    }
  }
  h.masses.assign(bins, 0);
  if (total == 0) return h;
  for (int i = 0; i < bins; ++i) {
    h.masses[i] = static_cast<double>(static_cast<long double>(twice[i]) / (2 * static_cast<long double>(total)));
  }
  return h;
}

double measure_of(MinWeightAutomata& m, const ValueCounts& counts, double lo, double hi) {
  if (hi < lo) return 0;
  const long double uk = m.basis().term64(counts.k);
  long double total = 0, inside = 0;
  for (std::int64_t n = -counts.limit; n <= counts.limit; ++n) {
    std::uint64_t c = counts.at(n);
    if (c == 0) continue;
    total += c;
    long double x = n / uk;
    if (x >= lo && x <= hi) inside += c;
  }
  return total == 0 ? 0 : static_cast<double>(inside / total);
}

std::vector<BigInt> summatory_table(MinWeightAutomata& m, std::int64_t n_max) {
  if (n_max < 1) throw Error(ErrorCode::DomainError, "N must be positive");
  const PisotBasis& basis = m.basis();
  // f(n) = f_K(n) once K exceeds every minimal expansion of |n| < N; the
  // length is raised until one more digit changes nothing.
  int k = static_cast<int>(basis.greedy_expansion(n_max).size()) + m.length_slack() + 1;
  ValueCounts counts = value_counts(m, k, n_max);
  for (;;) {
    ValueCounts longer = value_counts(m, k + 1, n_max);
    if (longer.counts == counts.counts) break;
    counts = std::move(longer);
    ++k;
  }
  std::vector<BigInt> s(static_cast<std::size_t>(n_max + 1));
  BigInt acc = 0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    acc += counts.at(n - 1);
    if (n > 1) acc += counts.at(-(n - 1));
    s[static_cast<std::size_t>(n)] = acc;
  }
  return s;
}

Summatory summatory(MinWeightAutomata& m, std::int64_t n_max) {
  auto table = summatory_table(m, n_max);
  Summatory out;
  out.sum = table.back();
  const double alpha = dominant_eigs(m.lu().adjacency()).alpha;
  const double exponent = std::log(alpha) / std::log(m.basis().beta_double());
  out.ratio = static_cast<double>(out.sum) / std::pow(static_cast<double>(n_max), exponent);
  return out;
}

SelfSimilarity self_similarity_check(MinWeightAutomata& m, int k, double lo, double hi) {
  ValueCounts counts = value_counts(m, k);
  const double beta = m.basis().beta_double();
  SelfSimilarity s;
  s.alpha = dominant_eigs(m.lu().adjacency()).alpha;
  s.mass = measure_of(m, counts, lo, hi);
  s.scaled_mass = measure_of(m, counts, lo / beta, hi / beta);
  if (s.mass > 0) s.relative_deviation = std::abs(s.alpha * s.scaled_mass - s.mass) / s.mass;
  else s.relative_deviation = s.scaled_mass == 0 ? 0 : std::numeric_limits<double>::infinity();
  return s;
}

std::vector<JsrBounds> jsr_profile(const std::vector<CountMatrix>& matrices, int depth) {
  if (matrices.empty()) throw Error(ErrorCode::DimensionMismatch, "empty matrix set");
  if (depth < 1) throw Error(ErrorCode::DomainError, "depth must be positive");
  for (const auto& a : matrices) {
    if (a.size() != matrices.front().size()) throw Error(ErrorCode::DimensionMismatch, "matrices of different sizes");
  }
  std::vector<Eigen::MatrixXd> ms;
  for (const auto& a : matrices) ms.push_back(to_eigen(a));
  std::vector<JsrBounds> out(depth);
  for (int t = 0; t < depth; ++t) out[t] = {t + 1, 0, 0};
  if (ms.front().rows() == 0) return out;
  for (const auto& comp : union_components(ms)) {
    const int s = static_cast<int>(comp.size());
    std::vector<Eigen::MatrixXd> block;
    bool cyclic = false;
    for (const auto& m : ms) {
      Eigen::MatrixXd b(s, s);
      for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) b(i, j) = m(comp[i], comp[j]);
      }
      cyclic = cyclic || !b.isZero(0);
      block.push_back(std::move(b));
    }
    if (!cyclic) continue;
    auto prof = block_profile(block, depth);
    for (int t = 0; t < depth; ++t) {
      out[t].lower = std::max(out[t].lower, prof[t].lower);
      out[t].upper = std::max(out[t].upper, prof[t].upper);
    }
  }
  return out;
}

JsrBounds jsr_estimate(const std::vector<CountMatrix>& matrices, int depth) {
  return jsr_profile(matrices, depth).back();
}

CountMatrix output_matrix(MinWeightAutomata& m, int a, bool zero_input) {
  const Automaton& n = m.normalizer();
  CountMatrix r(n.num_states());
  for (int q = 0; q < n.num_states(); ++q) {
    for (const auto& e : n.edges(q)) {
      const auto& l = n.labels()[e.label];
      if (l[1] == a && (!zero_input || l[0] == 0)) r(q, e.to) += 1;
    }
  }
  return r;
}

std::vector<CountMatrix> output_matrices(MinWeightAutomata& m) {
  std::vector<CountMatrix> out;
  for (int a : m.alphabet().digits()) out.push_back(output_matrix(m, a));
  return out;
}

CountMatrix output_product(MinWeightAutomata& m, const DigitWord& y) {
  CountMatrix p = CountMatrix::identity(m.normalizer().num_states());
  for (int a : y.digits) p = p * output_matrix(m, a);
  return p;
}

bool dominated(const CountMatrix& a, const CountMatrix& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "matrices of different sizes");
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) {
      if (a(i, j) > b(i, j)) return false;
    }
  }
  return true;
}

MaxFk max_fk(MinWeightAutomata& m, int k, int k_cap) {
  if (k < 0) throw Error(ErrorCode::DomainError, "negative length");
  if (k > k_cap) throw Error(ErrorCode::DepthTooLarge, "k beyond the configured cap");
  const Automaton& norm = m.normalizer();
  const int n = norm.num_states();
  const int slack = m.length_slack();
  const auto digits = m.alphabet().digits();
  std::vector<CountMatrix> full, leading;
  for (int a : digits) {
    full.push_back(output_matrix(m, a));
    leading.push_back(output_matrix(m, a, true));
  }
  // Output words have length k + slack: the input z of length k is padded
  // by slack zeros, during which the output may already start.
  struct Node {
    std::vector<BigInt> v;
    std::vector<int> word;
  };
  std::vector<Node> frontier(1);
  frontier[0].v.assign(n, 0);
  if (n > 0 && !norm.initial().empty()) frontier[0].v[norm.initial().front()] = 1;
  for (int step = 0; step < k + slack; ++step) {
    const auto& ms = step < slack ? leading : full;
    std::vector<Node> next;
    for (const auto& node : frontier) {
      for (std::size_t d = 0; d < digits.size(); ++d) {
        Node child{std::vector<BigInt>(n), node.word};
        child.word.push_back(digits[d]);
        bool any = false;
        for (int i = 0; i < n; ++i) {
          if (node.v[i] == 0) continue;
          for (int j = 0; j < n; ++j) {
            if (ms[d](i, j) != 0) {
              child.v[j] += node.v[i] * ms[d](i, j);
              any = true;
            }
          }
        }
        if (any) next.push_back(std::move(child));
      }
    }
    // Preferred words first; a vector below a preferred one never wins.
    std::sort(next.begin(), next.end(), [&](const Node& a, const Node& b) { return preferred(a.word, b.word, slack); });
    std::vector<Node> kept;
    for (auto& c : next) {
      bool covered = false;
      for (const auto& k2 : kept) {
        bool le = true;
        for (int i = 0; i < n && le; ++i) le = c.v[i] <= k2.v[i];
        if (le) {
          covered = true;
          break;
        }
      }
      if (!covered) kept.push_back(std::move(c));
    }
    frontier.swap(kept);
  }
  MaxFk best;
  best.value = -1;
  for (const auto& node : frontier) {
    BigInt total = 0;
    for (int q = 0; q < n; ++q) {
      if (norm.is_terminal(q)) total += node.v[q];
    }
    if (total > best.value) {
      best.value = total;
      best.word = DigitWord(node.word);
    }
  }
  if (best.value < 0) best.value = 0;
  best.witness = static_cast<std::int64_t>(m.basis().value_u(best.word));
  return best;
}

MaxFk max_fk_oracle(MinWeightAutomata& m, int k) {
  const std::int64_t bound = prefix_value_bound(m.basis(), m.alphabet(), k);
  MaxFk best;
  best.value = -1;
  for (std::int64_t n = 0; n <= bound; ++n) {
    for (std::int64_t v : {n, -n}) {
      if (v == -n && n == 0) continue;
      BigInt f = m.oracle().count_fk(v, k);
      if (f > best.value) {
        best.value = f;
        best.witness = v;
      }
    }
  }
  if (best.witness != 0 || best.value > 0) best.word = m.greedy_word(best.witness);
  return best;
}

}  // namespace pisotmw
