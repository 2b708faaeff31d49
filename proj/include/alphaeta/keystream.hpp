#pragma once

// Seed-key expansion: a Fibonacci LFSR running key, chopped into m-bit basis
// symbols, plus the GF(2) linear forms that express each keystream bit in
// terms of the seed bits.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alphaeta/gf2.hpp"
#include "alphaeta/numeric.hpp"

namespace alphaeta {

/// Fibonacci LFSR. Output bit t (1-based) is a_t, with a_1..a_L the seed bits
/// in order and a_t = XOR over taps p of a_{t-p} for t > L.
struct LfsrConfig {
  std::size_t length = 0;
  std::vector<std::size_t> taps;  // positions in 1..length; must contain length
  BitVector seed;

  void validate(bool need_seed = true) const {
    require(length >= 1, "lfsr: length must be positive");
    require(!taps.empty(), "lfsr: no taps");
    for (auto t : taps) require(t >= 1 && t <= length, "lfsr: tap position out of range");
    require(std::find(taps.begin(), taps.end(), length) != taps.end(),
            "lfsr: tap at position |K| is required (full-degree polynomial)");
    if (need_seed) {
      require(seed.size() == length, "lfsr: seed width does not match length");
      require(seed.any(), "lfsr: zero seed");
    }
  }

  /// Parses the seed from hex; the L-bit value's most significant bit is a_1.
  static BitVector seed_from_hex(const std::string& hex, std::size_t length) {
    std::string h = hex;
    if (h.rfind("0x", 0) == 0 || h.rfind("0X", 0) == 0) h = h.substr(2);
    require(!h.empty(), "lfsr: empty seed_hex");
    std::vector<int> bits;  // most significant first
    for (char c : h) {
      int v;
      if (c >= '0' && c <= '9')
        v = c - '0';
      else if (c >= 'a' && c <= 'f')
        v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F')
        v = c - 'A' + 10;
      else
        throw InputError("lfsr: invalid hex digit in seed");
      for (int b = 3; b >= 0; --b) bits.push_back((v >> b) & 1);
    }
    while (bits.size() > length) {
      require(bits.front() == 0, "lfsr: seed_hex wider than length");
      bits.erase(bits.begin());
    }
    while (bits.size() < length) bits.insert(bits.begin(), 0);
    BitVector seed(length);
    for (std::size_t i = 0; i < length; ++i) seed.set(i, bits[i]);
    return seed;
  }

  static std::string seed_to_hex(const BitVector& seed) {
    std::size_t pad = (4 - seed.size() % 4) % 4;
    std::string out;
    int acc = 0, n = static_cast<int>(pad);
    for (std::size_t i = 0; i < seed.size(); ++i) {
      acc = (acc << 1) | (seed.get(i) ? 1 : 0);
      if (++n == 4) {
        out.push_back("0123456789abcdef"[acc]);
        acc = 0;
        n = 0;
      }
    }
    return out;
  }

  static LfsrConfig from_json(const nlohmann::json& j) {
    LfsrConfig c;
    require(j.contains("length") && j.contains("taps"), "lfsr: config needs length and taps");
    c.length = j.at("length").get<std::size_t>();
    c.taps = j.at("taps").get<std::vector<std::size_t>>();
    if (j.contains("seed_hex")) c.seed = seed_from_hex(j.at("seed_hex").get<std::string>(), c.length);
    return c;
  }

  nlohmann::json to_json() const {
    return {{"length", length}, {"taps", taps}, {"seed_hex", seed_to_hex(seed)}};
  }
};

/// Seed-to-bit-stream expansion box. Only the LFSR ships; anything else
/// (for instance a block cipher in stream mode) plugs in here.
class KeystreamGenerator {
 public:
  virtual ~KeystreamGenerator() = default;
  virtual bool next_bit() = 0;

  std::vector<std::uint8_t> bits(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = next_bit() ? 1 : 0;
    return out;
  }
};

class LfsrGenerator final : public KeystreamGenerator {
 public:
  explicit LfsrGenerator(const LfsrConfig& config) : taps_(config.taps), window_(config.length) {
    config.validate();
    for (std::size_t i = 0; i < config.length; ++i) window_[i] = config.seed.get(i) ? 1 : 0;
  }

  bool next_bit() override {
    // window_[head_] is the oldest retained bit a_{t}.
    const std::size_t L = window_.size();
    std::uint8_t out = window_[head_];
    std::uint8_t fb = 0;
    for (auto p : taps_) fb ^= window_[(head_ + L - p) % L];
    window_[head_] = fb;
    head_ = (head_ + 1) % L;
    return out;
  }

 private:
  std::vector<std::size_t> taps_;
  std::vector<std::uint8_t> window_;
  std::size_t head_ = 0;
};

inline std::vector<std::uint8_t> lfsr_stream(const LfsrConfig& config, std::size_t nbits) {
  LfsrGenerator gen(config);
  return gen.bits(nbits);
}

struct KeystreamSymbol {
  std::uint32_t value = 0;
  std::size_t position = 0;  // 1-based
  bool operator==(const KeystreamSymbol&) const = default;
};

struct ChoppedKeystream {
  std::vector<KeystreamSymbol> symbols;
  std::size_t dropped_bits = 0;  // trailing remainder, nonzero means a warning

  std::vector<std::uint32_t> values() const {
    std::vector<std::uint32_t> v;
    v.reserve(symbols.size());
    for (const auto& s : symbols) v.push_back(s.value);
    return v;
  }
};

/// Z_i = bits (i-1)m+1 .. im read most significant first.
inline ChoppedKeystream chop_symbols(const std::vector<std::uint8_t>& bits, int m) {
  require(m > 0, "chop_symbols: m must be positive");
  require(m <= 31, "chop_symbols: m too large");
  ChoppedKeystream out;
  std::size_t um = static_cast<std::size_t>(m);
  std::size_t count = bits.size() / um;
  out.dropped_bits = bits.size() % um;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t v = 0;
    for (std::size_t b = 0; b < um; ++b) v = (v << 1) | (bits[i * um + b] & 1U);
    out.symbols.push_back({v, i + 1});
  }
  return out;
}

/// m deterministic m-bit to m-bit maps f_1..f_m.
struct ExpansionSpec {
  unsigned m = 0;
  std::vector<std::vector<std::uint32_t>> functions;

  static ExpansionSpec identity(unsigned m) {
    std::vector<std::uint32_t> id(1U << m);
    for (std::uint32_t z = 0; z < id.size(); ++z) id[z] = z;
    return {m, std::vector<std::vector<std::uint32_t>>(m, id)};
  }
};

/// Z' = (f_1(Z_1), ..., f_m(Z_1), f_1(Z_2), ..., f_m(Z_n)).
inline std::vector<std::uint32_t> expand_keystream(const std::vector<std::uint32_t>& z,
                                                   const ExpansionSpec& spec) {
  require(spec.m >= 1 && spec.m <= 31, "expand_keystream: invalid m");
  require(spec.functions.size() == spec.m,
          "expand_keystream: expected exactly m functions, got " +
              std::to_string(spec.functions.size()));
  const std::uint32_t M = 1U << spec.m;
  for (const auto& f : spec.functions) {
    require(f.size() == M, "expand_keystream: each function must be a table over [0, M)");
    for (auto v : f) require(v < M, "expand_keystream: function value out of range");
  }
  std::vector<std::uint32_t> out;
  out.reserve(z.size() * spec.m);
  for (auto zi : z) {
    require(zi < M, "expand_keystream: symbol out of range");
    for (const auto& f : spec.functions) out.push_back(f[zi]);
  }
  return out;
}

/// Linear forms over the seed bits for every output bit of an LFSR with the
/// given taps. Forms are generated lazily and cached.
class LfsrLinearForms {
 public:
  explicit LfsrLinearForms(const LfsrConfig& config) : length_(config.length), taps_(config.taps) {
    config.validate(false);
    for (std::size_t i = 0; i < length_; ++i) forms_.push_back(BitVector::unit(length_, i));
  }

  std::size_t length() const { return length_; }

  /// Form of output bit t (1-based).
  const BitVector& bit(std::size_t t) {
    require(t >= 1, "linear forms: bit index is 1-based");
    while (forms_.size() < t) {
      std::size_t next = forms_.size() + 1;  // 1-based index being built
      BitVector f(length_);
      for (auto p : taps_) f ^= forms_[next - p - 1];
      forms_.push_back(std::move(f));
    }
    return forms_[t - 1];
  }

  /// Forms for the m bits of symbol i (1-based), most significant first.
  std::vector<BitVector> symbol(std::size_t i, unsigned m) {
    require(i >= 1, "linear forms: symbol index is 1-based");
    std::vector<BitVector> out;
    for (unsigned b = 0; b < m; ++b) out.push_back(bit((i - 1) * m + b + 1));
    return out;
  }

 private:
  std::size_t length_;
  std::vector<std::size_t> taps_;
  std::vector<BitVector> forms_;
};

inline std::vector<BitVector> keystream_linear_forms(const LfsrConfig& config, std::size_t i,
                                                     unsigned m) {
  LfsrLinearForms forms(config);
  return forms.symbol(i, m);
}

/// Evaluates m forms at a seed and packs them into a symbol, first form most
/// significant.
inline std::uint32_t evaluate_symbol(const std::vector<BitVector>& forms, const BitVector& seed) {
  std::uint32_t v = 0;
  for (const auto& f : forms) v = (v << 1) | (f.dot(seed) ? 1U : 0U);
  return v;
}

/// Keystream symbols for a seed: chop_symbols(lfsr_stream(config, n*m), m).
inline std::vector<std::uint32_t> lfsr_symbols(const LfsrConfig& config, std::size_t n, unsigned m) {
  return chop_symbols(lfsr_stream(config, n * m), static_cast<int>(m)).values();
}

/// Common maximal-length tap sets, x^L + ... + 1 in the a_t recurrence form.
inline std::vector<std::size_t> maximal_taps(std::size_t length) {
  switch (length) {
    case 2: return {2, 1};
    case 3: return {3, 2};
    case 4: return {4, 1};
    case 5: return {5, 3};
    case 6: return {6, 5};
    case 7: return {7, 6};
    case 8: return {8, 6, 5, 4};
    case 9: return {9, 5};
    case 10: return {10, 7};
    case 11: return {11, 9};
    case 12: return {12, 11, 10, 4};
    case 13: return {13, 12, 11, 8};
    case 14: return {14, 13, 12, 2};
    case 15: return {15, 14};
    case 16: return {16, 15, 13, 4};
    case 17: return {17, 14};
    case 18: return {18, 11};
    case 19: return {19, 18, 17, 14};
    case 20: return {20, 17};
    default: throw InputError("maximal_taps: no table entry for length " + std::to_string(length));
  }
}

}  // namespace alphaeta
