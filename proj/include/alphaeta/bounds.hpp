#pragma once

// Closed-form estimates: wedge counts, unicity-distance lower bounds, search
// complexity, error probabilities and the coding-theorem bound.

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "alphaeta/numeric.hpp"

namespace alphaeta {

struct WedgeCounts {
  double N_het = 0.0;
  double N_phase = 0.0;
  double gamma_het = 0.0;         // N_het, clamped at 0 below one wedge
  double gamma_het_strict = 0.0;  // max(0, N_het - 1)
  double gamma_phase = 0.0;       // gamma_het / 2
  bool no_randomization = false;  // N_het < 1
};

/// Number of the 2M signal points covered by one standard deviation of the
/// measurement noise.
inline WedgeCounts wedge_counts(double S, unsigned M) {
  require(S > 0.0, "wedge_counts: S must be positive");
  require(M >= 2, "wedge_counts: M must be at least 2");
  WedgeCounts w;
  w.N_het = static_cast<double>(M) / (kPi * std::sqrt(S));
  w.N_phase = w.N_het / 2.0;
  w.no_randomization = w.N_het < 1.0;
  w.gamma_het = w.no_randomization ? 0.0 : w.N_het;
  w.gamma_het_strict = std::max(0.0, w.N_het - 1.0);
  w.gamma_phase = w.gamma_het / 2.0;
  return w;
}

/// A lower bound on a length. Empty means infinite (full randomization).
struct LengthBound {
  std::optional<double> value;

  bool infinite() const { return !value.has_value(); }
  /// Rounded up for reporting.
  std::optional<long long> reported() const {
    if (!value) return std::nullopt;
    return static_cast<long long>(std::ceil(*value - 1e-9));
  }
  nlohmann::json to_json() const {
    if (!value) return "infinite";
    return *reported();
  }
};

/// n >= |K| / C. C <= 0 gives an infinite bound.
inline LengthBound capacity_unicity(double key_bits, double capacity) {
  require(key_bits >= 0.0, "capacity_unicity: key length must be nonnegative");
  if (!(capacity > 0.0)) return {};
  return {key_bits / capacity};
}

struct UnicityBounds {
  LengthBound n0;  // ciphertext-only
  LengthBound n1;  // known plaintext
};

/// n0 >= |K| / log2(M/(Lambda+1)), n1 >= |K| / log2(M/(Gamma+1)).
inline UnicityBounds unicity_bounds(double key_bits, unsigned M, double gamma, double lambda) {
  require(M >= 1, "unicity_bounds: M must be positive");
  require(gamma >= 0.0 && lambda >= 0.0, "unicity_bounds: Gamma and Lambda must be nonnegative");
  UnicityBounds b;
  b.n0 = capacity_unicity(key_bits, std::log2(static_cast<double>(M) / (lambda + 1.0)));
  b.n1 = capacity_unicity(key_bits, std::log2(static_cast<double>(M) / (gamma + 1.0)));
  return b;
}

struct SearchComplexity {
  double log2_work = 0.0;
  bool zero_complexity = false;  // Gamma < 1
};

/// log2 of Gamma^{|K|/m}.
inline SearchComplexity search_complexity(double gamma, double key_bits, unsigned m) {
  require(m >= 1, "search_complexity: m must be positive");
  if (gamma < 1.0) return {0.0, true};
  return {key_bits / static_cast<double>(m) * std::log2(gamma), false};
}

struct ErrorFormulas {
  double P_e_bob_helstrom = 0.0;
  double P_e_bob_approx = 0.0;
  double lambda_prime_het = 0.0;
  double lambda_prime_phase = 0.0;
  double P_b_eve = 0.0;
};

/// S is the attacker's energy, eta_S Bob's received energy.
inline ErrorFormulas error_formulas(double S, double eta_S) {
  require(S >= 0.0 && eta_S >= 0.0, "error_formulas: energies must be nonnegative");
  ErrorFormulas e;
  e.P_e_bob_helstrom = 0.5 * (1.0 - std::sqrt(-std::expm1(-4.0 * eta_S)));
  e.P_e_bob_approx = 0.25 * std::exp(-4.0 * eta_S);
  e.lambda_prime_het = 0.5 * std::exp(-S);
  e.lambda_prime_phase = 0.5 * std::exp(-2.0 * S);
  e.P_b_eve = S > 0.0 ? 2.0 / (kPi * std::sqrt(S)) : std::numeric_limits<double>::infinity();
  return e;
}

inline constexpr double kBerFloor = 1e-9;

enum class GammaRounding { nearest, none };

struct BoundsInput {
  double key_bits = 4400.0;
  unsigned M = 2048;
  double S = 4e4;
  double eta = 1.0;
  GammaRounding rounding = GammaRounding::nearest;
  std::optional<double> gamma;      // overrides the wedge estimate
  std::optional<double> lambda;     // default 2 Gamma + 1
  std::optional<double> capacity;   // default log2(M/(Gamma+1))

  static BoundsInput from_json(const nlohmann::json& j) {
    BoundsInput in;
    in.key_bits = j.value("key_bits", in.key_bits);
    in.M = j.value("M", in.M);
    in.S = j.value("S", in.S);
    in.eta = j.value("eta", in.eta);
    std::string r = j.value("gamma_rounding", std::string("nearest"));
    require(r == "nearest" || r == "none", "bounds.gamma_rounding: expected \"nearest\" or \"none\"");
    in.rounding = r == "nearest" ? GammaRounding::nearest : GammaRounding::none;
    if (j.contains("gamma")) in.gamma = j.at("gamma").get<double>();
    if (j.contains("lambda")) in.lambda = j.at("lambda").get<double>();
    if (j.contains("capacity")) in.capacity = j.at("capacity").get<double>();
    return in;
  }
};

struct BoundsReport {
  BoundsInput input;
  WedgeCounts wedges;
  double gamma = 0.0;   // value fed to the bounds
  double lambda = 0.0;
  unsigned m = 0;
  UnicityBounds unicity;
  SearchComplexity complexity;
  ErrorFormulas errors;
  double capacity = 0.0;
  LengthBound capacity_bound;
  bool bob_below_ber_floor = false;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["input"] = {{"key_bits", input.key_bits}, {"M", input.M}, {"S", input.S}, {"eta", input.eta}};
    j["N_het"] = wedges.N_het;
    j["N_phase"] = wedges.N_phase;
    j["Gamma_het"] = wedges.gamma_het;
    j["Gamma_het_strict"] = wedges.gamma_het_strict;
    j["Gamma_phase"] = wedges.gamma_phase;
    j["no_randomization"] = wedges.no_randomization;
    j["Gamma"] = gamma;
    j["Lambda"] = lambda;
    j["n0_bound"] = unicity.n0.to_json();
    j["n1_bound"] = unicity.n1.to_json();
    j["n0_bound_exact"] = unicity.n0.value ? nlohmann::json(*unicity.n0.value) : nlohmann::json("infinite");
    j["n1_bound_exact"] = unicity.n1.value ? nlohmann::json(*unicity.n1.value) : nlohmann::json("infinite");
    j["complexity_log2"] = complexity.log2_work;
    j["zero_complexity"] = complexity.zero_complexity;
    j["P_e_bob"] = errors.P_e_bob_helstrom;
    j["P_e_bob_approx"] = errors.P_e_bob_approx;
    j["P_e_bob_below_1e-9"] = bob_below_ber_floor;
    j["lambda_prime_het"] = errors.lambda_prime_het;
    j["lambda_prime_phase"] = errors.lambda_prime_phase;
    j["P_b_eve"] = errors.P_b_eve;
    j["capacity"] = capacity;
    j["capacity_bound_n"] = capacity_bound.to_json();
    return j;
  }

  void write_text(std::ostream& os) const {
    auto line = [&os](const std::string& k, const std::string& v) {
      os << std::left << std::setw(22) << k << v << '\n';
    };
    auto num = [](double v) {
      std::ostringstream s;
      s << std::setprecision(6) << v;
      return s.str();
    };
    auto bound = [&num](const LengthBound& b) {
      if (b.infinite()) return std::string("infinite");
      return std::to_string(*b.reported()) + "  (" + num(*b.value) + ")";
    };
    line("|K|", num(input.key_bits));
    line("M", std::to_string(input.M));
    line("S", num(input.S));
    line("eta", num(input.eta));
    line("N_het", num(wedges.N_het));
    line("N_phase", num(wedges.N_phase));
    line("Gamma_het", num(wedges.gamma_het) + (wedges.no_randomization ? "  (no randomization)" : ""));
    line("Gamma_het (N_het-1)", num(wedges.gamma_het_strict));
    line("Gamma_phase", num(wedges.gamma_phase));
    line("Gamma used", num(gamma));
    line("Lambda used", num(lambda));
    line("n0 bound (CTA)", bound(unicity.n0));
    line("n1 bound (KPA)", bound(unicity.n1));
    line("log2 complexity", complexity.zero_complexity ? std::string("0  (Gamma < 1)") : num(complexity.log2_work));
    line("P_e Bob (Helstrom)", num(errors.P_e_bob_helstrom) + (bob_below_ber_floor ? "  (negligible vs 1e-9)" : ""));
    line("P_e Bob (1/4 e^-4nS)", num(errors.P_e_bob_approx));
    line("lambda' het", num(errors.lambda_prime_het));
    line("lambda' phase", num(errors.lambda_prime_phase));
    line("P_b Eve", num(errors.P_b_eve));
    line("capacity", num(capacity));
    line("capacity bound n", bound(capacity_bound));
  }
};

inline BoundsReport compute_bounds(const BoundsInput& in) {
  require(in.key_bits > 0.0, "bounds.key_bits: must be positive");
  require(in.M >= 2 && is_power_of_two(in.M), "bounds.M: must be a power of two >= 2");
  require(in.S > 0.0, "bounds.S: must be positive");
  require(in.eta > 0.0 && in.eta <= 1.0, "bounds.eta: must lie in (0, 1]");
  BoundsReport r;
  r.input = in;
  r.wedges = wedge_counts(in.S, in.M);
  r.m = log2_exact(in.M);
  if (in.gamma)
    r.gamma = *in.gamma;
  else
    r.gamma = in.rounding == GammaRounding::nearest ? std::round(r.wedges.gamma_het) : r.wedges.gamma_het;
  r.lambda = in.lambda ? *in.lambda : 2.0 * r.gamma + 1.0;
  r.unicity = unicity_bounds(in.key_bits, in.M, r.gamma, r.lambda);
  r.complexity = search_complexity(r.gamma, in.key_bits, r.m);
  r.errors = error_formulas(in.S, in.eta * in.S);
  r.bob_below_ber_floor = r.errors.P_e_bob_helstrom < kBerFloor;
  r.capacity = in.capacity ? *in.capacity : std::log2(static_cast<double>(in.M) / (r.gamma + 1.0));
  r.capacity_bound = capacity_unicity(in.key_bits, r.capacity);
  return r;
}

}  // namespace alphaeta
