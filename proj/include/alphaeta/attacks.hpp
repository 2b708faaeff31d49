#pragma once

// The attacker's bench: per-qumode quantum discrimination, ciphertext error
// on a fixed half-circle alphabet, keystream candidates from wedge outcomes,
// empirical Gamma/Lambda, assisted brute-force seed search against an LFSR,
// and the wedge-decoding analysis.

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "alphaeta/fock.hpp"
#include "alphaeta/gf2.hpp"
#include "alphaeta/keystream.hpp"
#include "alphaeta/measurement.hpp"
#include "alphaeta/numeric.hpp"
#include "alphaeta/parallel.hpp"
#include "alphaeta/rng.hpp"
#include "alphaeta/signal.hpp"

namespace alphaeta {

/// Signed circular distance a - b on Z_{2M}, in [-M, M).
inline long circular_steps(std::uint32_t a, std::uint32_t b, unsigned M) {
  long mod = 2L * M;
  long d = ((static_cast<long>(a) - static_cast<long>(b)) % mod + mod) % mod;
  return d >= static_cast<long>(M) ? d - mod : d;
}

// ---------------------------------------------------------------------------
// Individual attack: optimal discrimination of the two bit mixtures.

struct IndividualAttackResult {
  double p_error = 0.5;
  double p_error_refined = 0.5;  // at 1.5x cutoff
  std::size_t cutoff = 0;
  std::size_t refined_cutoff = 0;
  double truncated_mass = 0.0;  // Poisson tail dropped per state
};

/// rho^x = (1/M) sum_z |psi(x,z)><psi(x,z)|; P_e = 1/2 - ||rho^0 - rho^1||_1 / 4.
/// `rotation` shifts every phase by the same angle.
inline double helstrom_mixture_error(double S, unsigned M, std::size_t cutoff, double rotation = 0.0,
                                     double* truncated_mass = nullptr) {
  require(M >= 1, "individual attack: M must be positive");
  const auto dim = static_cast<Eigen::Index>(cutoff + 1);
  FockOperator diff = FockOperator::Zero(dim, dim);
  for (unsigned x = 0; x < 2; ++x) {
    double sign = x == 0 ? 1.0 : -1.0;
    for (std::uint32_t z = 0; z < M; ++z) {
      FockVector v = coherent_state(S, mapper(x, z, M) + rotation, cutoff, truncated_mass);
      diff.noalias() += (sign / static_cast<double>(M)) * (v * v.adjoint());
    }
  }
  diff = 0.5 * (diff + diff.adjoint());
  double pe = 0.5 - 0.25 * trace_norm(diff);
  return std::clamp(pe, 0.0, 0.5);
}

inline IndividualAttackResult individual_attack_error(double S, unsigned M, std::size_t n_cutoff,
                                                      double tolerance = 1e-4) {
  require(S >= 0.0, "individual attack: S must be nonnegative");
  require(static_cast<double>(n_cutoff) >= S + 10.0 * std::sqrt(S) + 20.0,
          "individual attack: cutoff below S + 10 sqrt(S) + 20");
  IndividualAttackResult r;
  r.cutoff = n_cutoff;
  r.refined_cutoff = static_cast<std::size_t>(std::ceil(1.5 * static_cast<double>(n_cutoff)));
  r.p_error = helstrom_mixture_error(S, M, r.cutoff, 0.0, &r.truncated_mass);
  r.p_error_refined = helstrom_mixture_error(S, M, r.refined_cutoff);
  if (std::abs(r.p_error - r.p_error_refined) > tolerance)
    throw BudgetExceeded("individual attack: result not converged in the Fock cutoff");
  return r;
}

// ---------------------------------------------------------------------------
// Half-circle ciphertext error.

/// Bit carried by the fixed half-circle alphabet: 1 on [pi, 2pi).
inline unsigned half_circle_bit(double phase) { return wrap_angle(phase) >= kPi ? 1U : 0U; }

/// Same bit for a wedge index j (wedge centre j pi/M).
inline unsigned half_circle_bit(std::uint32_t j, unsigned M) { return j >= M ? 1U : 0U; }

enum class EveNoiseModel {
  heterodyne,           // Gaussian quadrature noise, hard half-circle decision
  wedge_approximation,  // uniform phase within +-1/sqrt(S); ambiguous windows count
};

struct HalfCircleResult {
  EveNoiseModel model = EveNoiseModel::heterodyne;
  double S = 0.0;
  std::size_t trials = 0;
  std::size_t errors = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double reference = 0.0;       // 2 / (pi sqrt S)
  double model_exact = 0.0;     // exact value under the sampled model
};

inline double halfcircle_reference(double S) { return 2.0 / (kPi * std::sqrt(S)); }

/// Exact half-circle error under Gaussian heterodyne noise with a uniformly
/// distributed signal phase: E|delta| / pi for the wrapped phase error delta.
inline double halfcircle_error_heterodyne_exact(double S) {
  // The density is even; beyond 40 standard deviations it is below double
  // precision relative to the bulk.
  auto f = [S](double d) { return d * heterodyne_phase_density(S, d); };
  double sigma = kQuadratureStd / std::sqrt(std::max(S, 1e-12));
  double upper = std::min(kPi, 40.0 * sigma);
  double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 10, 1e-12);
  return 2.0 * v / kPi;
}

inline HalfCircleResult eve_halfcircle_error(double S, std::size_t trials, std::uint64_t seed,
                                             EveNoiseModel model = EveNoiseModel::heterodyne,
                                             unsigned threads = 1) {
  require(S > 0.0, "eve_halfcircle_error: S must be positive");
  HalfCircleResult r;
  r.model = model;
  r.S = S;
  r.trials = trials;
  r.reference = halfcircle_reference(S);
  r.model_exact = model == EveNoiseModel::heterodyne ? halfcircle_error_heterodyne_exact(S)
                                                     : std::min(1.0, r.reference);
  double expected = r.model_exact;
  require(static_cast<double>(trials) * expected >= 9.0 * (1.0 - expected),
          "eve_halfcircle_error: too few trials for 3-sigma resolution at the expected rate");
  const std::size_t chunks = 64;
  auto sizes = split_trials(trials, chunks);
  const double w = 1.0 / std::sqrt(S);
  auto counts = parallel_map(chunks, threads, [&](std::size_t c) {
    Rng rng = make_rng(seed, "eve_halfcircle", c);
    std::size_t errors = 0;
    for (std::size_t t = 0; t < sizes[c]; ++t) {
      double theta = 2.0 * kPi * uniform01(rng);
      if (model == EveNoiseModel::heterodyne) {
        HeterodynePoint p = heterodyne_sample(S, theta, rng);
        if (half_circle_bit(p.phase()) != half_circle_bit(theta)) ++errors;
      } else {
        double phi = theta + w * (2.0 * uniform01(rng) - 1.0);
        // Window [phi - w, phi + w] straddles a boundary of the half circles.
        double to_boundary = std::abs(angle_diff(phi, 0.0));
        to_boundary = std::min(to_boundary, kPi - to_boundary);
        if (to_boundary < w) ++errors;
      }
    }
    return errors;
  });
  r.errors = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  r.estimate = static_cast<double>(r.errors) / static_cast<double>(trials);
  r.std_error = binomial_sigma(std::max(r.estimate, 1.0 / static_cast<double>(trials)),
                               static_cast<double>(trials));
  return r;
}

// ---------------------------------------------------------------------------
// Keystream candidates from a wedge outcome.

struct CandidateSet {
  std::size_t index = 0;  // symbol position, 1-based; 0 when unused
  unsigned x = 0;
  std::uint32_t j = 0;
  unsigned window = 0;
  std::vector<std::uint32_t> values;
  std::vector<double> weights;

  bool contains(std::uint32_t z) const {
    return std::find(values.begin(), values.end(), z) != values.end();
  }
};

/// All z whose mapper wedge for bit x lies within `window` wedges of j.
/// Weights are the heterodyne probability of landing in wedge j from each
/// candidate state at energy S (uniform when S = 0 or all masses underflow).
inline CandidateSet candidate_keystreams(unsigned x, std::uint32_t j, unsigned M, unsigned window,
                                         double S = 0.0) {
  require(M >= 1 && j < 2 * M, "candidate_keystreams: wedge index out of range");
  require(x <= 1, "candidate_keystreams: data bit must be 0 or 1");
  CandidateSet c;
  c.x = x;
  c.j = j;
  c.window = window;
  double total = 0.0;
  for (std::uint32_t z = 0; z < M; ++z) {
    long d = circular_steps(j, mapper_steps(x, z, M), M);
    if (std::abs(d) > static_cast<long>(window)) continue;
    c.values.push_back(z);
    double w = S > 0.0 ? heterodyne_wedge_mass(S, M, d) : 1.0;
    c.weights.push_back(w);
    total += w;
  }
  if (total <= 0.0) {
    std::fill(c.weights.begin(), c.weights.end(), 1.0);
    total = static_cast<double>(c.weights.size());
  }
  for (auto& w : c.weights) w /= total;
  return c;
}

/// Window (in wedges) spanning one heterodyne phase standard deviation.
inline unsigned one_sigma_window(double S, unsigned M) {
  double sigma = kQuadratureStd / std::sqrt(S);
  return static_cast<unsigned>(std::lround(sigma / (kPi / static_cast<double>(M))));
}

// ---------------------------------------------------------------------------
// Empirical Gamma / Lambda on the 2M-wedge ciphertext.

struct EmpiricalGammaLambda {
  long gamma_emp = 0;
  long lambda_emp = 0;
  double gamma_closed = 0.0;  // M / (pi sqrt S)
  std::size_t trials_per_cell = 0;
  std::size_t gamma_cells = 0;    // (x, j) cells entering the minimum
  std::size_t skipped_cells = 0;  // observed but underpopulated (x, j) cells
  long relation_gap = 0;          // (Lambda + 1) - 2 (Gamma + 1)
  bool relation_holds = false;    // |gap| <= 1
};

/// Monte Carlo Gamma and Lambda under heterodyne measurement with
/// epsilon-support counting: a candidate or outcome counts when its empirical
/// conditional frequency is at least epsilon. Every (x, z) cell gets the same
/// number of trials.
inline EmpiricalGammaLambda empirical_gamma_lambda(double S, unsigned M, std::size_t trials,
                                                   double epsilon, std::uint64_t seed,
                                                   unsigned threads = 1) {
  require(S > 0.0, "empirical_gamma_lambda: S must be positive");
  require(M >= 2 && is_power_of_two(M), "empirical_gamma_lambda: M must be a power of two >= 2");
  require(epsilon > 0.0 && epsilon < 1.0, "empirical_gamma_lambda: epsilon must lie in (0, 1)");
  const std::size_t cells = 2 * static_cast<std::size_t>(M);
  const std::size_t per_cell = (trials + cells - 1) / cells;
  const double min_population = 10.0 / epsilon;
  if (static_cast<double>(per_cell) < min_population)
    throw InputError("empirical_gamma_lambda: insufficient trials to populate all (x, z) cells (need " +
                     std::to_string(static_cast<std::size_t>(min_population * cells)) + ")");

  struct CellResult {
    long lambda_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> hist;  // (j, count)
  };
  auto results = parallel_map(cells, threads, [&](std::size_t cell) {
    unsigned x = static_cast<unsigned>(cell / M);
    auto z = static_cast<std::uint32_t>(cell % M);
    double theta = mapper(x, z, M);
    Rng rng = make_rng(seed, "empirical_gamma_lambda", cell);
    std::vector<std::uint32_t> counts(2 * M, 0);
    for (std::size_t t = 0; t < per_cell; ++t) {
      HeterodynePoint p = heterodyne_sample(S, theta, rng);
      if (p.at_origin()) continue;
      ++counts[wedge_quantize(p, M).j];
    }
    CellResult r;
    for (std::uint32_t j = 0; j < 2 * M; ++j) {
      if (counts[j] == 0) continue;
      r.hist.emplace_back(j, counts[j]);
      if (static_cast<double>(counts[j]) >= epsilon * static_cast<double>(per_cell)) ++r.lambda_count;
    }
    return r;
  });

  EmpiricalGammaLambda out;
  out.trials_per_cell = per_cell;
  out.gamma_closed = static_cast<double>(M) / (kPi * std::sqrt(S));
  out.lambda_emp = std::numeric_limits<long>::max();
  for (const auto& r : results) out.lambda_emp = std::min(out.lambda_emp, r.lambda_count - 1);

  // Regroup by (x, j): counts over z.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> by_xj(2 * cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t x = cell / M;
    auto z = static_cast<std::uint32_t>(cell % M);
    for (auto [j, n] : results[cell].hist) by_xj[x * cells + j].emplace_back(z, n);
  }
  out.gamma_emp = std::numeric_limits<long>::max();
  for (const auto& zs : by_xj) {
    if (zs.empty()) continue;
    double total = 0.0;
    for (auto [z, n] : zs) total += n;
    if (total < min_population) {
      ++out.skipped_cells;
      continue;
    }
    long support = 0;
    for (auto [z, n] : zs)
      if (static_cast<double>(n) >= epsilon * total) ++support;
    out.gamma_emp = std::min(out.gamma_emp, support - 1);
    ++out.gamma_cells;
  }
  require(out.gamma_cells > 0, "empirical_gamma_lambda: no sufficiently populated (x, j) cell");
  out.relation_gap = (out.lambda_emp + 1) - 2 * (out.gamma_emp + 1);
  out.relation_holds = std::abs(out.relation_gap) <= 1;
  return out;
}

// ---------------------------------------------------------------------------
// Assisted brute-force known-plaintext search against an LFSR keystream.

struct KpaInstance {
  std::vector<std::uint8_t> known_bits;
  std::vector<std::uint32_t> wedges;  // observed wedge index per qumode
};

struct SearchReport {
  std::vector<BitVector> recovered_seeds;
  std::size_t work = 0;  // linear-system solves
  bool success = false;
  std::vector<std::size_t> pivot_symbols;  // 1-based
  std::vector<std::size_t> candidate_counts;
  double mean_candidates = 0.0;
  double predicted_complexity = 0.0;  // (mean candidates)^{#pivots}
  bool aborted = false;               // hit max_work

  bool contains(const BitVector& seed) const {
    return std::find(recovered_seeds.begin(), recovered_seeds.end(), seed) != recovered_seeds.end();
  }
};

struct SearchOptions {
  std::size_t max_work = std::size_t{1} << 32;
};

/// Enumerates one candidate keystream value per pivot symbol, solves the
/// GF(2) system for the seed and keeps seeds whose keystream falls inside
/// every other symbol's candidate window.
inline SearchReport kpa_lfsr_search(const KpaInstance& instance, const LfsrConfig& taps, unsigned M,
                                    unsigned window, const SearchOptions& options = {}) {
  taps.validate(false);
  require(M >= 2 && is_power_of_two(M), "kpa_lfsr_search: M must be a power of two >= 2");
  const unsigned m = log2_exact(M);
  const std::size_t n = instance.known_bits.size();
  require(instance.wedges.size() == n, "kpa_lfsr_search: plaintext and wedge counts differ");
  require(n * m >= taps.length, "kpa_lfsr_search: need n*m >= |K| keystream bits");

  LfsrLinearForms forms(taps);
  std::vector<std::vector<BitVector>> sym_forms(n);
  std::vector<std::vector<bool>> allowed(n, std::vector<bool>(M, false));
  std::vector<CandidateSet> candidates(n);
  SearchReport report;
  for (std::size_t i = 0; i < n; ++i) {
    sym_forms[i] = forms.symbol(i + 1, m);
    candidates[i] = candidate_keystreams(instance.known_bits[i] & 1U, instance.wedges[i], M, window);
    candidates[i].index = i + 1;
    for (auto z : candidates[i].values) allowed[i][z] = true;
    report.candidate_counts.push_back(candidates[i].values.size());
  }
  report.mean_candidates =
      std::accumulate(report.candidate_counts.begin(), report.candidate_counts.end(), 0.0) /
      static_cast<double>(n);

  // Pivots: earliest symbols that raise the rank, until full rank.
  std::vector<BitVector> rows;
  std::size_t rank = 0;
  for (std::size_t i = 0; i < n && rank < taps.length; ++i) {
    auto trial = rows;
    trial.insert(trial.end(), sym_forms[i].begin(), sym_forms[i].end());
    std::size_t r = gf2_rank(trial, taps.length);
    if (r > rank) {
      rows = std::move(trial);
      rank = r;
      report.pivot_symbols.push_back(i);
    }
  }
  require(rank == taps.length, "kpa_lfsr_search: keystream forms do not determine the seed");
  report.predicted_complexity =
      std::pow(report.mean_candidates, static_cast<double>(report.pivot_symbols.size()));

  Gf2System system(rows, taps.length);
  std::vector<bool> is_pivot(n, false);
  for (auto p : report.pivot_symbols) is_pivot[p] = true;

  const std::size_t P = report.pivot_symbols.size();
  for (auto p : report.pivot_symbols)
    if (candidates[p].values.empty()) {
      for (auto& p1 : report.pivot_symbols) ++p1;
      return report;
    }
  std::vector<std::size_t> odometer(P, 0);
  BitVector rhs(rows.size());
  for (;;) {
    if (report.work >= options.max_work) {
      report.aborted = true;
      break;
    }
    std::size_t row = 0;
    for (std::size_t k = 0; k < P; ++k) {
      std::uint32_t z = candidates[report.pivot_symbols[k]].values[odometer[k]];
      for (unsigned b = 0; b < m; ++b) rhs.set(row++, (z >> (m - 1 - b)) & 1U);
    }
    ++report.work;
    if (auto seed = system.solve(rhs); seed && seed->any()) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        if (is_pivot[i]) continue;
        ok = allowed[i][evaluate_symbol(sym_forms[i], *seed)];
      }
      if (ok) report.recovered_seeds.push_back(*seed);
    }
    std::size_t k = 0;
    while (k < P && ++odometer[k] == candidates[report.pivot_symbols[k]].values.size()) {
      odometer[k] = 0;
      ++k;
    }
    if (k == P) break;
  }
  report.success = !report.recovered_seeds.empty();
  for (auto& p : report.pivot_symbols) ++p;
  return report;
}

struct KpaTrialStats {
  std::size_t trials = 0;
  std::size_t recalled = 0;      // planted seed among the recovered seeds
  std::size_t unique = 0;        // planted seed was the only survivor
  std::size_t in_window = 0;     // every phase error was inside the window
  double mean_work = 0.0;
  std::size_t max_work = 0;
  double mean_candidates = 0.0;
  std::size_t max_candidates = 0;
  double mean_predicted = 0.0;
  bool window_too_small = false;  // recall below the configured threshold
};

struct KpaHarnessConfig {
  std::size_t key_length = 16;
  std::vector<std::size_t> taps;  // empty: maximal_taps(key_length)
  unsigned M = 16;
  double S = 20.0;
  unsigned window = 2;
  std::size_t symbols = 16;
  std::size_t trials = 100;
  double recall_threshold = 0.99;
};

/// Planted-seed harness: random seed and data, heterodyne wedge outcomes at
/// energy S, then kpa_lfsr_search.
inline KpaTrialStats kpa_self_test(const KpaHarnessConfig& cfg, std::uint64_t seed, unsigned threads = 1) {
  LfsrConfig lfsr;
  lfsr.length = cfg.key_length;
  lfsr.taps = cfg.taps.empty() ? maximal_taps(cfg.key_length) : cfg.taps;
  lfsr.validate(false);
  const unsigned m = log2_exact(cfg.M);
  struct Trial {
    bool recalled = false, unique = false, in_window = false;
    std::size_t work = 0, max_cand = 0;
    double mean_cand = 0.0, predicted = 0.0;
  };
  auto trials = parallel_map(cfg.trials, threads, [&](std::size_t t) {
    Rng rng = make_rng(seed, "kpa_self_test", t);
    LfsrConfig planted = lfsr;
    planted.seed = BitVector(cfg.key_length);
    do {
      for (std::size_t b = 0; b < cfg.key_length; ++b) planted.seed.set(b, random_bit(rng));
    } while (!planted.seed.any());
    auto z = lfsr_symbols(planted, cfg.symbols, m);
    KpaInstance inst;
    Trial out;
    out.in_window = true;
    for (std::size_t i = 0; i < cfg.symbols; ++i) {
      auto x = static_cast<std::uint8_t>(random_bit(rng));
      std::uint32_t s = mapper_steps(x, z[i], cfg.M);
      HeterodynePoint p = heterodyne_sample(cfg.S, steps_to_radians(s, cfg.M), rng);
      std::uint32_t j = wedge_quantize(p, cfg.M).j;
      if (std::abs(circular_steps(j, s, cfg.M)) > static_cast<long>(cfg.window)) out.in_window = false;
      inst.known_bits.push_back(x);
      inst.wedges.push_back(j);
    }
    auto rep = kpa_lfsr_search(inst, lfsr, cfg.M, cfg.window);
    out.recalled = rep.contains(planted.seed);
    out.unique = out.recalled && rep.recovered_seeds.size() == 1;
    out.work = rep.work;
    out.mean_cand = rep.mean_candidates;
    out.max_cand = *std::max_element(rep.candidate_counts.begin(), rep.candidate_counts.end());
    out.predicted = rep.predicted_complexity;
    return out;
  });
  KpaTrialStats s;
  s.trials = cfg.trials;
  for (const auto& t : trials) {
    s.recalled += t.recalled;
    s.unique += t.unique;
    s.in_window += t.in_window;
    s.mean_work += static_cast<double>(t.work);
    s.max_work = std::max(s.max_work, t.work);
    s.mean_candidates += t.mean_cand;
    s.max_candidates = std::max(s.max_candidates, t.max_cand);
    s.mean_predicted += t.predicted;
  }
  double n = static_cast<double>(std::max<std::size_t>(1, cfg.trials));
  s.mean_work /= n;
  s.mean_candidates /= n;
  s.mean_predicted /= n;
  s.window_too_small = static_cast<double>(s.recalled) < cfg.recall_threshold * n;
  return s;
}

// ---------------------------------------------------------------------------
// Wedge decoding with the key: F_j(z) = l_j xor G_j(z).

/// Bit whose mapper phase in basis z is nearer wedge j. When j is equidistant
/// from both states the state M/2 steps behind j wins.
inline unsigned wedge_decode(std::uint32_t j, std::uint32_t z, unsigned M) {
  require(z < M && j < 2 * M, "wedge_decode: index out of range");
  long d = std::abs(circular_steps(j, z, M));  // distance to the x xor Pol(z) = 0 state
  unsigned flip;
  if (2 * d < static_cast<long>(M))
    flip = 0;
  else if (2 * d > static_cast<long>(M))
    flip = 1;
  else
    flip = circular_steps(j, z, M) > 0 ? 0 : 1;
  return (flip ^ basis_polarity(z)) & 1U;
}

inline unsigned wedge_decode_G(std::uint32_t j, std::uint32_t z, unsigned M) {
  return wedge_decode(j, z, M) ^ half_circle_bit(j, M);
}

/// Probability that wedge decoding with the true key fails under heterodyne
/// noise, by integrating the outcome-phase density over the failing wedges.
inline double wedge_decode_failure_exact(double S, unsigned M) {
  // Signal at step 0 in basis z = 0, bit 0; outcome wedge d fails when the
  // decoded bit is 1.
  double p = 0.0;
  for (long d = -static_cast<long>(M); d < static_cast<long>(M); ++d) {
    auto j = static_cast<std::uint32_t>((d + 2L * M) % (2L * M));
    if (wedge_decode(j, 0, M) != 0) p += heterodyne_wedge_mass(S, M, d);
  }
  return p;
}

struct NonReductionWitness {
  std::uint32_t j = 0, j_other = 0, z = 0;
  unsigned F = 0, F_other = 0;
};

struct NishiokaReport {
  unsigned M = 0;
  double S = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double mc_failure_rate = 0.0;
  double mc_sigma = 0.0;
  double lambda_prime = 0.0;   // 1/2 e^{-S}
  double exact_failure = 0.0;  // heterodyne, integrated
  std::optional<NonReductionWitness> witness;
  std::size_t witness_count = 0;
  // G depends on j at fixed z, and on z at fixed j.
  std::optional<std::array<std::uint32_t, 3>> g_depends_on_j;  // (j, j', z)
  std::optional<std::array<std::uint32_t, 3>> g_depends_on_z;  // (j, z, z')
};

/// Exhaustive search over (j, j', z) for equal half-circle bits and equal key
/// with different wedge decodings.
inline NishiokaReport nishioka_certificates(unsigned M) {
  NishiokaReport r;
  r.M = M;
  for (std::uint32_t z = 0; z < M; ++z)
    for (std::uint32_t j = 0; j < 2 * M; ++j)
      for (std::uint32_t j2 = 0; j2 < 2 * M; ++j2) {
        if (half_circle_bit(j, M) != half_circle_bit(j2, M)) continue;
        unsigned f1 = wedge_decode(j, z, M), f2 = wedge_decode(j2, z, M);
        if (f1 == f2) continue;
        ++r.witness_count;
        if (!r.witness) r.witness = NonReductionWitness{j, j2, z, f1, f2};
        if (!r.g_depends_on_j && wedge_decode_G(j, z, M) != wedge_decode_G(j2, z, M))
          r.g_depends_on_j = std::array<std::uint32_t, 3>{j, j2, z};
      }
  for (std::uint32_t j = 0; j < 2 * M && !r.g_depends_on_z; ++j)
    for (std::uint32_t z = 0; z < M && !r.g_depends_on_z; ++z)
      for (std::uint32_t z2 = z + 1; z2 < M; ++z2)
        if (wedge_decode_G(j, z, M) != wedge_decode_G(j, z2, M)) {
          r.g_depends_on_z = std::array<std::uint32_t, 3>{j, z, z2};
          break;
        }
  return r;
}

/// Monte Carlo failure rate of wedge decoding with the true key, plus the
/// non-reduction certificates.
inline NishiokaReport nishioka_reduction_demo(unsigned M, double S, std::size_t trials,
                                              std::uint64_t seed, unsigned threads = 1) {
  require(M >= 2 && is_power_of_two(M), "nishioka: M must be a power of two >= 2");
  require(S > 0.0, "nishioka: S must be positive");
  NishiokaReport r = nishioka_certificates(M);
  r.S = S;
  r.trials = trials;
  r.lambda_prime = 0.5 * std::exp(-S);
  r.exact_failure = wedge_decode_failure_exact(S, M);
  if (trials > 0) {
    const std::size_t chunks = 64;
    auto sizes = split_trials(trials, chunks);
    auto counts = parallel_map(chunks, threads, [&](std::size_t c) {
      Rng rng = make_rng(seed, "nishioka", c);
      std::size_t fails = 0;
      for (std::size_t t = 0; t < sizes[c]; ++t) {
        auto x = static_cast<unsigned>(random_bit(rng));
        auto z = static_cast<std::uint32_t>(rng() % M);
        HeterodynePoint p = heterodyne_sample(S, mapper(x, z, M), rng);
        if (p.at_origin()) continue;
        if (wedge_decode(wedge_quantize(p, M).j, z, M) != x) ++fails;
      }
      return fails;
    });
    r.failures = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    r.mc_failure_rate = static_cast<double>(r.failures) / static_cast<double>(trials);
  }
  r.mc_sigma = binomial_sigma(r.lambda_prime, static_cast<double>(std::max<std::size_t>(trials, 1)));
  return r;
}

}  // namespace alphaeta
