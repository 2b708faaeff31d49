#pragma once

// Small alpha-eta instances that can be enumerated exactly: the per-symbol
// channel is discretized into wedges and the running key comes from a short
// LFSR whose nonzero seeds form the key space.

#include <cstdint>
#include <vector>

#include "alphaeta/cipher_table.hpp"
#include "alphaeta/entropy.hpp"
#include "alphaeta/keystream.hpp"
#include "alphaeta/signal.hpp"

namespace alphaeta {

/// Table with plaintext x, "key" z in [0, M) and ciphertext wedge j in
/// [0, 2M): j = theta(x, z) + r - window steps, r = 0..2 window, equally likely.
inline CipherTable wedge_channel_table(unsigned M, unsigned window) {
  require(M >= 2 && is_power_of_two(M), "wedge_channel_table: M must be a power of two >= 2");
  require(2 * window + 1 <= M, "wedge_channel_table: window must leave the two bits separable");
  std::vector<CipherEntry> entries;
  for (unsigned x = 0; x < 2; ++x)
    for (std::uint32_t z = 0; z < M; ++z) {
      CipherEntry e{x, z, {}, {}};
      std::uint32_t s = mapper_steps(x, z, M);
      for (unsigned r = 0; r <= 2 * window; ++r) e.ys.push_back((s + 2 * M + r - window) % (2 * M));
      entries.push_back(std::move(e));
    }
  return CipherTable(CipherTable::index_names(2), CipherTable::index_names(M),
                     CipherTable::index_names(2 * M), entries);
}

/// Every nonzero seed of an L-bit LFSR in numeric order (seed value v has
/// a_1 as its most significant bit).
inline std::vector<BitVector> all_nonzero_seeds(std::size_t length) {
  require(length >= 1 && length <= 24, "all_nonzero_seeds: length out of range");
  std::vector<BitVector> seeds;
  for (std::uint64_t v = 1; v < (std::uint64_t{1} << length); ++v) {
    BitVector s(length);
    for (std::size_t i = 0; i < length; ++i) s.set(i, (v >> (length - 1 - i)) & 1U);
    seeds.push_back(std::move(s));
  }
  return seeds;
}

/// Per-key symbol streams z_1..z_n for every nonzero seed.
inline KeySchedule lfsr_key_schedule(const LfsrConfig& taps, std::size_t n, unsigned m) {
  std::vector<std::vector<std::size_t>> streams;
  for (const auto& seed : all_nonzero_seeds(taps.length)) {
    LfsrConfig c = taps;
    c.seed = seed;
    auto z = lfsr_symbols(c, n, m);
    streams.emplace_back(z.begin(), z.end());
  }
  return KeySchedule::streams(std::move(streams));
}

struct ToyAlphaEta {
  unsigned M = 4;
  std::size_t key_length = 6;
  unsigned window = 1;
  std::size_t n_max = 7;
};

struct ToyAlphaEtaResult {
  GammaLambda per_symbol;  // exact Gamma, Lambda of the wedge channel
  EntropyProfile profile;
  ShannonLimitCheck shannon;
  bool key_equivocation_nonincreasing = true;  // H(K | X_n Y_n)
  double n1_bound = 0.0;                      // |K| / log2(M / (Gamma + 1))
};

inline ToyAlphaEtaResult run_toy_alphaeta(const ToyAlphaEta& cfg, const EnumerationLimits& limits = {}) {
  ToyAlphaEtaResult r;
  CipherTable table = wedge_channel_table(cfg.M, cfg.window);
  r.per_symbol = gamma_lambda_exact(table);
  LfsrConfig taps;
  taps.length = cfg.key_length;
  taps.taps = maximal_taps(cfg.key_length);
  auto schedule = lfsr_key_schedule(taps, cfg.n_max, log2_exact(cfg.M));
  r.profile = entropy_profile(table, SequencePrior::uniform(), {}, cfg.n_max, schedule, limits);
  r.shannon = shannon_limit_check(r.profile);
  for (std::size_t i = 1; i < r.profile.n_max; ++i)
    if (r.profile.H_K_given_XY[i] > r.profile.H_K_given_XY[i - 1] + kEntropyZeroTol)
      r.key_equivocation_nonincreasing = false;
  r.n1_bound = static_cast<double>(cfg.key_length) /
               std::log2(static_cast<double>(cfg.M) / static_cast<double>(r.per_symbol.gamma + 1));
  return r;
}

}  // namespace alphaeta
