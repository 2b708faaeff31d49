#pragma once

// Exact conditional entropies of a finite random cipher used on sequences,
// by full enumeration of the joint distribution over (key, plaintext,
// ciphertext) sequences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "alphaeta/cipher_table.hpp"
#include "alphaeta/numeric.hpp"
#include "alphaeta/parallel.hpp"

namespace alphaeta {

inline constexpr double kEntropyZeroTol = 1e-9;

/// Distribution of plaintext sequences.
class SequencePrior {
 public:
  enum class Kind { uniform, iid, explicit_table };

  static SequencePrior uniform() { return SequencePrior(Kind::uniform, {}, 0); }

  static SequencePrior iid(std::vector<double> marginal) {
    check_distribution(marginal, "iid marginal");
    return SequencePrior(Kind::iid, std::move(marginal), 0);
  }

  /// Probabilities of all length-`length` sequences, indexed with the first
  /// symbol most significant. Shorter lengths are obtained by marginalizing.
  static SequencePrior explicit_table(std::vector<double> probs, std::size_t length) {
    check_distribution(probs, "explicit sequence table");
    return SequencePrior(Kind::explicit_table, std::move(probs), length);
  }

  Kind kind() const { return kind_; }

  /// P(x_1..x_n) for all sequences over an alphabet of size q, in index order.
  std::vector<double> sequence_probabilities(std::size_t q, std::size_t n) const {
    std::size_t count = ipow(q, n);
    std::vector<double> p(count);
    switch (kind_) {
      case Kind::uniform:
        for (auto& v : p) v = 1.0 / static_cast<double>(count);
        break;
      case Kind::iid: {
        require(values_.size() == q, "iid prior: marginal size does not match plaintext alphabet");
        for (std::size_t s = 0; s < count; ++s) {
          double prob = 1.0;
          std::size_t rest = s;
          for (std::size_t i = 0; i < n; ++i) {
            prob *= values_[rest % q];
            rest /= q;
          }
          p[s] = prob;
        }
        break;
      }
      case Kind::explicit_table: {
        require(values_.size() == ipow(q, length_),
                "explicit prior: table size must be |X|^length");
        require(n <= length_, "explicit prior: n exceeds the table's sequence length");
        std::size_t suffix = ipow(q, length_ - n);
        for (std::size_t s = 0; s < count; ++s) {
          double total = 0.0;
          for (std::size_t t = 0; t < suffix; ++t) total += values_[s * suffix + t];
          p[s] = total;
        }
        break;
      }
    }
    return p;
  }

  static std::size_t ipow(std::size_t base, std::size_t e) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= base;
    return r;
  }

 private:
  SequencePrior(Kind kind, std::vector<double> values, std::size_t length)
      : kind_(kind), values_(std::move(values)), length_(length) {}

  static void check_distribution(const std::vector<double>& p, const std::string& what) {
    double total = 0.0;
    for (double v : p) {
      require(v >= 0.0, what + ": negative probability");
      total += v;
    }
    require(std::abs(total - 1.0) < 1e-9, what + ": probabilities do not sum to 1");
  }

  Kind kind_;
  std::vector<double> values_;
  std::size_t length_;
};

/// Maps a cipher key to the table key used at each sequence position. A plain
/// table reuses the same key at every position; a keystream-driven cipher
/// uses z_i.
class KeySchedule {
 public:
  static KeySchedule constant(std::size_t num_keys) {
    KeySchedule s;
    s.num_keys_ = num_keys;
    return s;
  }

  static KeySchedule streams(std::vector<std::vector<std::size_t>> per_key) {
    require(!per_key.empty(), "key schedule: no keys");
    KeySchedule s;
    s.num_keys_ = per_key.size();
    s.streams_ = std::move(per_key);
    return s;
  }

  std::size_t num_keys() const { return num_keys_; }
  bool is_constant() const { return streams_.empty(); }

  std::size_t max_length() const {
    if (is_constant()) return std::numeric_limits<std::size_t>::max();
    std::size_t m = std::numeric_limits<std::size_t>::max();
    for (const auto& s : streams_) m = std::min(m, s.size());
    return m;
  }

  std::size_t table_key(std::size_t key, std::size_t position) const {
    return is_constant() ? key : streams_[key][position];
  }

 private:
  std::size_t num_keys_ = 0;
  std::vector<std::vector<std::size_t>> streams_;
};

struct EnumerationLimits {
  double max_joint_states = static_cast<double>(1ULL << 26);
  unsigned threads = 1;
};

/// Exact entropies (bits) for n = 1..n_max; index 0 of each vector is n = 1.
struct EntropyProfile {
  std::size_t n_max = 0;
  double H_K = 0.0;
  std::vector<double> H_K_given_Y;
  std::vector<double> H_K_given_XY;
  std::vector<double> H_X_given_Y;
  std::vector<double> H_Y_given_X;
  std::vector<double> H_X_given_KY;
  /// min over plaintext sequences x_n with P(x_n) > 0 of H(K | X_n = x_n, Y_n).
  std::vector<double> min_H_K_given_xY;
  std::optional<std::size_t> n0, n1, n_d, n1_bar;

  void write_csv(std::ostream& os) const {
    os << "n,H_K_given_Y,H_K_given_XY,H_X_given_Y,H_Y_given_X\n";
    os.precision(17);
    for (std::size_t i = 0; i < n_max; ++i) {
      os << (i + 1) << ',' << H_K_given_Y[i] << ',' << H_K_given_XY[i] << ',' << H_X_given_Y[i]
         << ',' << H_Y_given_X[i] << '\n';
    }
  }
};

namespace detail {

struct EntropySums {
  double h_kxy = 0.0;      // H(K, X_n, Y_n) contribution
  double h_xy = 0.0;       // H(X_n, Y_n) contribution
  double h_k_given_x = 0.0;  // P(x) H(K | X = x, Y)
  double h_k_given_x_cond = std::numeric_limits<double>::infinity();  // H(K | X = x, Y)
};

// Depth-first walk over ciphertext sequences produced by (k, x_n).
template <typename Visit>
void walk_ciphertexts(const CipherTable& t, const KeySchedule& sched, std::size_t key,
                      const std::vector<std::size_t>& xs, std::size_t pos, std::size_t y_index,
                      double prob, Visit& visit) {
  if (pos == xs.size()) {
    visit(y_index, prob);
    return;
  }
  std::size_t tk = sched.table_key(key, pos);
  const auto& ys = t.support(xs[pos], tk);
  const auto& ws = t.support_weights(xs[pos], tk);
  for (std::size_t r = 0; r < ys.size(); ++r) {
    walk_ciphertexts(t, sched, key, xs, pos + 1, y_index * t.num_ciphertexts() + ys[r],
                     prob * ws[r], visit);
  }
}

inline std::vector<std::size_t> decode_sequence(std::size_t index, std::size_t q, std::size_t n) {
  std::vector<std::size_t> xs(n);
  for (std::size_t i = n; i-- > 0;) {
    xs[i] = index % q;
    index /= q;
  }
  return xs;
}

}  // namespace detail

/// Exact entropy profile of `table` used on sequences of length 1..n_max,
/// with the per-position table key given by `schedule`.
inline EntropyProfile entropy_profile(const CipherTable& table, const SequencePrior& prior,
                                      std::vector<double> key_prior, std::size_t n_max,
                                      const KeySchedule& schedule,
                                      const EnumerationLimits& limits = {}) {
  require(n_max >= 1, "entropy_profile: n_max must be at least 1");
  std::size_t nk = schedule.num_keys();
  if (key_prior.empty()) key_prior.assign(nk, 1.0 / static_cast<double>(nk));
  require(key_prior.size() == nk, "entropy_profile: key prior size does not match key count");
  double kp_total = 0.0;
  for (double p : key_prior) {
    require(p >= 0.0, "entropy_profile: negative key probability");
    kp_total += p;
  }
  require(std::abs(kp_total - 1.0) < 1e-9, "entropy_profile: key prior does not sum to 1");
  if (schedule.is_constant())
    require(nk == table.num_keys(), "entropy_profile: key count does not match the table");
  require(n_max <= schedule.max_length(), "entropy_profile: keystreams shorter than n_max");

  const std::size_t qx = table.num_plaintexts();
  const std::size_t qy = table.num_ciphertexts();
  double joint = std::pow(static_cast<double>(qx), static_cast<double>(n_max)) *
                 static_cast<double>(nk) *
                 std::pow(static_cast<double>(table.max_support()), static_cast<double>(n_max));
  if (joint > limits.max_joint_states) {
    throw BudgetExceeded("entropy_profile: |X|^n * |K| * (max randomizer count)^n = " +
                         std::to_string(qx) + "^" + std::to_string(n_max) + " * " +
                         std::to_string(nk) + " * " + std::to_string(table.max_support()) + "^" +
                         std::to_string(n_max) + " exceeds the cap of " +
                         std::to_string(static_cast<long long>(limits.max_joint_states)));
  }
  double ydim = std::pow(static_cast<double>(qy), static_cast<double>(n_max));
  if (ydim > limits.max_joint_states) {
    throw BudgetExceeded("entropy_profile: |Y|^n = " + std::to_string(qy) + "^" +
                         std::to_string(n_max) + " exceeds the cap");
  }

  EntropyProfile out;
  out.n_max = n_max;
  for (double p : key_prior) out.H_K += entropy_term(p);

  for (std::size_t n = 1; n <= n_max; ++n) {
    const std::size_t num_x = SequencePrior::ipow(qx, n);
    const std::size_t num_y = SequencePrior::ipow(qy, n);
    const auto px = prior.sequence_probabilities(qx, n);
    double h_x = 0.0;
    for (double p : px) h_x += entropy_term(p);

    // Pass over plaintext sequences: H(K,X,Y), H(X,Y), H(K | X = x, Y).
    auto per_x = parallel_map(num_x, limits.threads, [&](std::size_t xi) {
      detail::EntropySums s;
      if (px[xi] <= 0.0) return s;
      auto xs = detail::decode_sequence(xi, qx, n);
      std::vector<double> pxy(num_y, 0.0);
      double h_ky_given_x = 0.0;
      for (std::size_t k = 0; k < nk; ++k) {
        if (key_prior[k] <= 0.0) continue;
        double base = key_prior[k] * px[xi];
        auto visit = [&](std::size_t y, double w) {
          double p = base * w;
          s.h_kxy += entropy_term(p);
          h_ky_given_x += entropy_term(key_prior[k] * w);
          pxy[y] += p;
        };
        detail::walk_ciphertexts(table, schedule, k, xs, 0, 0, 1.0, visit);
      }
      double h_y_given_x = 0.0;
      for (double p : pxy) {
        s.h_xy += entropy_term(p);
        h_y_given_x += entropy_term(p / px[xi]);
      }
      s.h_k_given_x_cond = std::max(0.0, h_ky_given_x - h_y_given_x);
      s.h_k_given_x = px[xi] * s.h_k_given_x_cond;
      return s;
    });

    double h_kxy = 0.0, h_xy = 0.0, h_k_given_xy = 0.0;
    double min_cond = std::numeric_limits<double>::infinity();
    for (const auto& s : per_x) {
      h_kxy += s.h_kxy;
      h_xy += s.h_xy;
      h_k_given_xy += s.h_k_given_x;
      min_cond = std::min(min_cond, s.h_k_given_x_cond);
    }

    // Pass over keys in canonical order: H(K,Y) and H(Y).
    std::vector<double> py(num_y, 0.0);
    std::vector<double> pky(num_y, 0.0);
    double h_ky = 0.0;
    for (std::size_t k = 0; k < nk; ++k) {
      if (key_prior[k] <= 0.0) continue;
      std::fill(pky.begin(), pky.end(), 0.0);
      for (std::size_t xi = 0; xi < num_x; ++xi) {
        if (px[xi] <= 0.0) continue;
        auto xs = detail::decode_sequence(xi, qx, n);
        double base = key_prior[k] * px[xi];
        auto visit = [&](std::size_t y, double w) { pky[y] += base * w; };
        detail::walk_ciphertexts(table, schedule, k, xs, 0, 0, 1.0, visit);
      }
      for (std::size_t y = 0; y < num_y; ++y) {
        h_ky += entropy_term(pky[y]);
        py[y] += pky[y];
      }
    }
    double h_y = 0.0;
    for (double p : py) h_y += entropy_term(p);

    out.H_K_given_Y.push_back(std::max(0.0, h_ky - h_y));
    out.H_K_given_XY.push_back(std::max(0.0, h_k_given_xy));
    out.H_X_given_Y.push_back(std::max(0.0, h_xy - h_y));
    out.H_Y_given_X.push_back(std::max(0.0, h_xy - h_x));
    out.H_X_given_KY.push_back(std::max(0.0, h_kxy - h_ky));
    out.min_H_K_given_xY.push_back(min_cond);
  }

  for (std::size_t i = 0; i < n_max; ++i) {
    std::size_t n = i + 1;
    if (!out.n0 && out.H_K_given_Y[i] < kEntropyZeroTol) out.n0 = n;
    if (!out.n1 && out.H_K_given_XY[i] < kEntropyZeroTol) out.n1 = n;
    if (!out.n_d && std::abs(out.H_Y_given_X[i] - out.H_K) < kEntropyZeroTol) out.n_d = n;
    if (!out.n1_bar && out.min_H_K_given_xY[i] < kEntropyZeroTol) out.n1_bar = n;
  }
  return out;
}

/// Convenience overload: same key at every position, uniform key prior.
inline EntropyProfile entropy_profile(const CipherTable& table, const SequencePrior& prior,
                                      std::size_t n_max, const EnumerationLimits& limits = {}) {
  return entropy_profile(table, prior, {}, n_max, KeySchedule::constant(table.num_keys()), limits);
}

struct ShannonLimitCheck {
  bool holds = true;
  double min_slack = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> violating_n;
};

/// H(X_n | Y_n) <= H(K) at every n of the profile.
inline ShannonLimitCheck shannon_limit_check(const EntropyProfile& profile) {
  ShannonLimitCheck c;
  for (std::size_t i = 0; i < profile.n_max; ++i) {
    double slack = profile.H_K - profile.H_X_given_Y[i];
    c.min_slack = std::min(c.min_slack, slack);
    if (slack < -kEntropyZeroTol && !c.violating_n) {
      c.holds = false;
      c.violating_n = i + 1;
    }
  }
  return c;
}

}  // namespace alphaeta
