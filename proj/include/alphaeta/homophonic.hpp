#pragma once

// Homophonic substitution: a dyadic i.i.d. source is mapped onto exactly
// uniform l-bit blocks, each symbol owning a share of the blocks equal to
// its probability.

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "alphaeta/numeric.hpp"
#include "alphaeta/rng.hpp"

namespace alphaeta {

using Rational = boost::rational<long long>;

/// Parses "a/b", "a" or a JSON number into a rational. Floating numbers are
/// accepted when they are exact binary fractions.
inline Rational parse_probability(const nlohmann::json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(s));
      return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw InputError("homophonic: cannot parse probability \"" + s + "\"");
    }
  }
  require(v.is_number(), "homophonic: probability must be a number or \"a/b\"");
  double p = v.get<double>();
  for (long long den = 1; den <= (1LL << 40); den <<= 1) {
    double num = p * static_cast<double>(den);
    if (num == std::floor(num)) return Rational(static_cast<long long>(num), den);
  }
  throw InputError("homophonic: probability " + std::to_string(p) + " is not dyadic");
}

struct SourcePrior {
  std::vector<std::string> symbols;
  std::vector<Rational> probabilities;

  /// [{"symbol": "A", "p": "1/2"}, ...]
  static SourcePrior from_json(const nlohmann::json& j) {
    require(j.is_array(), "homophonic: prior must be an array of {symbol, p}");
    SourcePrior prior;
    for (const auto& e : j) {
      require(e.contains("symbol") && e.contains("p"), "homophonic: prior entry needs symbol and p");
      prior.symbols.push_back(e.at("symbol").get<std::string>());
      prior.probabilities.push_back(parse_probability(e.at("p")));
    }
    return prior;
  }

  double entropy_bits() const {
    double h = 0.0;
    for (auto p : probabilities) h += entropy_term(boost::rational_cast<double>(p));
    return h;
  }

  /// Smallest l with every probability a multiple of 2^-l, or 0 if none.
  unsigned smallest_block_length() const {
    unsigned l = 0;
    for (auto p : probabilities) {
      long long den = p.denominator();
      if (!is_power_of_two(static_cast<unsigned long long>(den))) return 0;
      l = std::max(l, log2_exact(static_cast<unsigned long long>(den)));
    }
    return std::max(l, 1U);
  }
};

class HomophonicCode {
 public:
  HomophonicCode(SourcePrior prior, unsigned l) : prior_(std::move(prior)), l_(l) {
    require(l_ >= 1, "homophonic: block length l >= 1 required");
    require(l_ <= 30, "homophonic: block length l too large");
    require(!prior_.symbols.empty(), "homophonic: empty prior");
    require(prior_.symbols.size() == prior_.probabilities.size(), "homophonic: malformed prior");
    Rational total(0);
    for (auto p : prior_.probabilities) {
      require(p > Rational(0), "homophonic: probabilities must be positive");
      total += p;
    }
    require(total == Rational(1), "homophonic: probabilities must sum to 1");
    const long long blocks = 1LL << l_;
    std::uint64_t next = 0;
    for (auto p : prior_.probabilities) {
      Rational count = p * Rational(blocks);
      if (count.denominator() != 1) {
        unsigned suggested = prior_.smallest_block_length();
        throw InputError(suggested == 0
                             ? "homophonic: prior is not dyadic"
                             : "homophonic: prior is not dyadic at l = " + std::to_string(l_) +
                                   "; smallest valid l is " + std::to_string(suggested));
      }
      std::vector<std::uint64_t> set;
      for (long long k = 0; k < count.numerator(); ++k) set.push_back(next++);
      sets_.push_back(std::move(set));
    }
    owner_.assign(static_cast<std::size_t>(blocks), 0);
    for (std::size_t s = 0; s < sets_.size(); ++s)
      for (auto b : sets_[s]) owner_[b] = s;
  }

  unsigned block_length() const { return l_; }
  std::size_t alphabet_size() const { return sets_.size(); }
  const SourcePrior& prior() const { return prior_; }
  const std::vector<std::uint64_t>& blocks_of(std::size_t symbol) const { return sets_.at(symbol); }

  std::size_t symbol_index(const std::string& name) const {
    for (std::size_t i = 0; i < prior_.symbols.size(); ++i)
      if (prior_.symbols[i] == name) return i;
    throw InputError("homophonic: unknown symbol \"" + name + "\"");
  }

  std::string block_string(std::uint64_t b) const {
    std::string s(l_, '0');
    for (unsigned i = 0; i < l_; ++i)
      if ((b >> (l_ - 1 - i)) & 1U) s[i] = '1';
    return s;
  }

  std::vector<std::uint64_t> encode(const std::vector<std::size_t>& symbols, Rng& rng) const {
    std::vector<std::uint64_t> out;
    out.reserve(symbols.size());
    for (auto s : symbols) {
      require(s < sets_.size(), "homophonic: symbol index out of range");
      const auto& set = sets_[s];
      out.push_back(set[std::uniform_int_distribution<std::size_t>(0, set.size() - 1)(rng)]);
    }
    return out;
  }

  std::vector<std::size_t> decode(const std::vector<std::uint64_t>& blocks) const {
    std::vector<std::size_t> out;
    out.reserve(blocks.size());
    for (auto b : blocks) {
      require(b < owner_.size(), "homophonic: block is not " + std::to_string(l_) + " bits long");
      out.push_back(owner_[b]);
    }
    return out;
  }

  /// P(block = b) = P(s) / |set(s)| for the owning symbol, checked against
  /// 2^-l in exact arithmetic, together with disjointness and coverage.
  bool uniformity_exact() const {
    std::vector<int> seen(owner_.size(), 0);
    for (const auto& set : sets_)
      for (auto b : set) ++seen[b];
    for (auto c : seen)
      if (c != 1) return false;
    const Rational target(1, 1LL << l_);
    for (std::size_t b = 0; b < owner_.size(); ++b) {
      std::size_t s = owner_[b];
      Rational pb = prior_.probabilities[s] / Rational(static_cast<long long>(sets_[s].size()));
      if (pb != target) return false;
    }
    return true;
  }

  /// Output bits per unit of source entropy.
  double expansion_factor() const { return static_cast<double>(l_) / prior_.entropy_bits(); }

  nlohmann::json to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      const auto& p = prior_.probabilities[s];
      std::vector<std::string> blocks;
      for (auto b : sets_[s]) blocks.push_back(block_string(b));
      entries.push_back({{"symbol", prior_.symbols[s]},
                         {"p", std::to_string(p.numerator()) + "/" + std::to_string(p.denominator())},
                         {"blocks", blocks}});
    }
    return {{"l", l_}, {"code", entries}};
  }

  /// Accepts either a code table written by to_json or {"l": .., "prior": [..]}.
  static HomophonicCode from_json(const nlohmann::json& j) {
    require(j.contains("l"), "homophonic: missing field l");
    unsigned l = j.at("l").get<unsigned>();
    if (j.contains("prior")) return HomophonicCode(SourcePrior::from_json(j.at("prior")), l);
    require(j.contains("code"), "homophonic: need prior or code");
    HomophonicCode code(SourcePrior::from_json(j.at("code")), l);
    for (std::size_t s = 0; s < code.sets_.size(); ++s) {
      const auto& e = j.at("code")[s];
      if (!e.contains("blocks")) continue;
      std::vector<std::string> listed = e.at("blocks").get<std::vector<std::string>>();
      std::vector<std::string> built;
      for (auto b : code.sets_[s]) built.push_back(code.block_string(b));
      require(listed == built, "homophonic: code table is not the lexicographic allocation");
    }
    return code;
  }

 private:
  SourcePrior prior_;
  unsigned l_;
  std::vector<std::vector<std::uint64_t>> sets_;
  std::vector<std::size_t> owner_;
};

inline HomophonicCode build_code(const SourcePrior& prior, unsigned l) { return HomophonicCode(prior, l); }

/// Draws i.i.d. symbols from the prior.
inline std::vector<std::size_t> sample_source(const SourcePrior& prior, std::size_t n, Rng& rng) {
  std::vector<double> w;
  for (auto p : prior.probabilities) w.push_back(boost::rational_cast<double>(p));
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  std::vector<std::size_t> out(n);
  for (auto& s : out) s = dist(rng);
  return out;
}

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// Pearson test of the blocks against the uniform distribution on 2^l values.
inline ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& blocks, unsigned l) {
  const std::size_t bins = std::size_t{1} << l;
  std::vector<double> counts(bins, 0.0);
  for (auto b : blocks) {
    require(b < bins, "chi_square_uniform: block out of range");
    counts[b] += 1.0;
  }
  double expected = static_cast<double>(blocks.size()) / static_cast<double>(bins);
  require(expected > 0.0, "chi_square_uniform: no blocks");
  ChiSquareResult r;
  for (double c : counts) r.statistic += (c - expected) * (c - expected) / expected;
  r.dof = static_cast<double>(bins - 1);
  r.p_value = boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
  return r;
}

/// Block file: 8-byte little-endian block count, then the blocks as a
/// big-endian bit string of l bits each, zero padded to a byte.
inline void write_blocks(std::ostream& os, const std::vector<std::uint64_t>& blocks, unsigned l) {
  std::uint64_t n = blocks.size();
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((n >> (8 * i)) & 0xFF));
  unsigned acc = 0, fill = 0;
  for (auto b : blocks)
    for (unsigned i = 0; i < l; ++i) {
      acc = (acc << 1) | static_cast<unsigned>((b >> (l - 1 - i)) & 1U);
      if (++fill == 8) {
        os.put(static_cast<char>(acc));
        acc = fill = 0;
      }
    }
  if (fill) os.put(static_cast<char>(acc << (8 - fill)));
}

inline std::vector<std::uint64_t> read_blocks(std::istream& is, unsigned l) {
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) {
    int c = is.get();
    require(c != EOF, "homophonic: truncated block file header");
    n |= static_cast<std::uint64_t>(c & 0xFF) << (8 * i);
  }
  std::vector<std::uint64_t> out;
  out.reserve(n);
  unsigned byte = 0, left = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    std::uint64_t b = 0;
    for (unsigned i = 0; i < l; ++i) {
      if (left == 0) {
        int c = is.get();
        require(c != EOF, "homophonic: block file shorter than its header says");
        byte = static_cast<unsigned>(c & 0xFF);
        left = 8;
      }
      b = (b << 1) | ((byte >> --left) & 1U);
    }
    out.push_back(b);
  }
  return out;
}

/// Source file: one byte per symbol, the byte being the symbol's index.
inline std::vector<std::size_t> read_symbol_bytes(std::istream& is, std::size_t alphabet) {
  std::vector<std::size_t> out;
  for (int c; (c = is.get()) != EOF;) {
    require(static_cast<std::size_t>(c) < alphabet, "homophonic: symbol byte out of range");
    out.push_back(static_cast<std::size_t>(c));
  }
  return out;
}

inline void write_symbol_bytes(std::ostream& os, const std::vector<std::size_t>& symbols) {
  for (auto s : symbols) os.put(static_cast<char>(s));
}

}  // namespace alphaeta
