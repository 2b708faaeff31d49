#pragma once

// Finite random ciphers given as explicit encryption tables, with the exact
// per-symbol randomization measures (Gamma, Lambda).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alphaeta/numeric.hpp"

namespace alphaeta {

/// One row of an encryption table: plaintext x under key k may produce any of
/// `ys`; list position is the randomizer value r.
struct CipherEntry {
  std::size_t x = 0;
  std::size_t k = 0;
  std::vector<std::size_t> ys;
  std::vector<double> weights;  // empty means uniform
};

class CipherTable {
 public:
  CipherTable() = default;

  CipherTable(std::vector<std::string> plaintexts, std::vector<std::string> keys,
              std::vector<std::string> ciphertexts, const std::vector<CipherEntry>& entries)
      : plaintexts_(std::move(plaintexts)),
        keys_(std::move(keys)),
        ciphertexts_(std::move(ciphertexts)) {
    require(!plaintexts_.empty() && !keys_.empty() && !ciphertexts_.empty(),
            "cipher table: alphabets must be nonempty");
    cells_.assign(plaintexts_.size() * keys_.size(), Cell{});
    std::vector<bool> seen(cells_.size(), false);
    for (const auto& e : entries) {
      require(e.x < plaintexts_.size(), "cipher table: plaintext index out of range");
      require(e.k < keys_.size(), "cipher table: key index out of range");
      require(!e.ys.empty(), "cipher table: empty ciphertext list for (" + plaintexts_[e.x] +
                                 ", " + keys_[e.k] + ")");
      require(e.weights.empty() || e.weights.size() == e.ys.size(),
              "cipher table: weights and ys differ in length");
      std::size_t idx = e.x * keys_.size() + e.k;
      require(!seen[idx], "cipher table: duplicate entry for (" + plaintexts_[e.x] + ", " +
                              keys_[e.k] + ")");
      seen[idx] = true;
      Cell cell;
      cell.list = e.ys;
      double total = 0.0;
      for (std::size_t r = 0; r < e.ys.size(); ++r) {
        require(e.ys[r] < ciphertexts_.size(), "cipher table: ciphertext symbol out of range");
        double w = e.weights.empty() ? 1.0 / static_cast<double>(e.ys.size()) : e.weights[r];
        require(w >= 0.0, "cipher table: negative weight");
        cell.list_weights.push_back(w);
        total += w;
      }
      require(std::abs(total - 1.0) < 1e-9, "cipher table: weights for (" + plaintexts_[e.x] +
                                                ", " + keys_[e.k] + ") do not sum to 1");
      // Merged distribution over distinct ciphertexts.
      std::map<std::size_t, double> merged;
      for (std::size_t r = 0; r < cell.list.size(); ++r) merged[cell.list[r]] += cell.list_weights[r];
      for (auto [y, w] : merged) {
        if (w <= 0.0) continue;
        cell.support.push_back(y);
        cell.support_weights.push_back(w);
      }
      cells_[idx] = std::move(cell);
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      require(seen[i], "cipher table: missing entry for (" + plaintexts_[i / keys_.size()] +
                           ", " + keys_[i % keys_.size()] + ")");
    }
  }

  /// Builds a deterministic table from y = f(x, k).
  template <typename F>
  static CipherTable from_function(std::size_t nx, std::size_t nk, std::size_t ny, F&& f) {
    std::vector<CipherEntry> entries;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t k = 0; k < nk; ++k) entries.push_back({x, k, {f(x, k)}, {}});
    return CipherTable(index_names(nx), index_names(nk), index_names(ny), entries);
  }

  static std::vector<std::string> index_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return names;
  }

  std::size_t num_plaintexts() const { return plaintexts_.size(); }
  std::size_t num_keys() const { return keys_.size(); }
  std::size_t num_ciphertexts() const { return ciphertexts_.size(); }
  const std::vector<std::string>& plaintext_alphabet() const { return plaintexts_; }
  const std::vector<std::string>& key_alphabet() const { return keys_; }
  const std::vector<std::string>& ciphertext_alphabet() const { return ciphertexts_; }

  /// Ordered randomizer list E(x, k, r), r = 0..size-1.
  const std::vector<std::size_t>& list(std::size_t x, std::size_t k) const { return cell(x, k).list; }
  const std::vector<double>& list_weights(std::size_t x, std::size_t k) const {
    return cell(x, k).list_weights;
  }
  /// Distinct reachable ciphertexts and their total probabilities.
  const std::vector<std::size_t>& support(std::size_t x, std::size_t k) const {
    return cell(x, k).support;
  }
  const std::vector<double>& support_weights(std::size_t x, std::size_t k) const {
    return cell(x, k).support_weights;
  }

  std::size_t max_support() const {
    std::size_t m = 0;
    for (const auto& c : cells_) m = std::max(m, c.support.size());
    return m;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["plaintext_alphabet"] = plaintexts_;
    j["key_alphabet"] = keys_;
    j["ciphertext_alphabet"] = ciphertexts_;
    j["entries"] = nlohmann::json::array();
    for (std::size_t x = 0; x < num_plaintexts(); ++x) {
      for (std::size_t k = 0; k < num_keys(); ++k) {
        nlohmann::json e;
        e["x"] = plaintexts_[x];
        e["k"] = keys_[k];
        std::vector<std::string> ys;
        for (auto y : list(x, k)) ys.push_back(ciphertexts_[y]);
        e["ys"] = ys;
        e["weights"] = list_weights(x, k);
        j["entries"].push_back(std::move(e));
      }
    }
    return j;
  }

  static CipherTable from_json(const nlohmann::json& j) {
    auto field = [&](const char* name) -> const nlohmann::json& {
      require(j.contains(name), std::string("cipher table: missing field '") + name + "'");
      return j.at(name);
    };
    auto px = field("plaintext_alphabet").get<std::vector<std::string>>();
    auto pk = field("key_alphabet").get<std::vector<std::string>>();
    auto py = field("ciphertext_alphabet").get<std::vector<std::string>>();
    auto lookup = [](const std::vector<std::string>& alphabet, const std::string& s,
                     const char* what) {
      auto it = std::find(alphabet.begin(), alphabet.end(), s);
      require(it != alphabet.end(), std::string("cipher table: unknown ") + what + " '" + s + "'");
      return static_cast<std::size_t>(it - alphabet.begin());
    };
    std::vector<CipherEntry> entries;
    std::size_t i = 0;
    for (const auto& e : field("entries")) {
      std::string where = "cipher table: entries[" + std::to_string(i++) + "]";
      require(e.contains("x") && e.contains("k") && e.contains("ys"), where + " needs x, k, ys");
      CipherEntry ce;
      ce.x = lookup(px, e.at("x").get<std::string>(), "plaintext");
      ce.k = lookup(pk, e.at("k").get<std::string>(), "key");
      for (const auto& y : e.at("ys")) ce.ys.push_back(lookup(py, y.get<std::string>(), "ciphertext"));
      if (e.contains("weights")) ce.weights = e.at("weights").get<std::vector<double>>();
      entries.push_back(std::move(ce));
    }
    return CipherTable(std::move(px), std::move(pk), std::move(py), entries);
  }

 private:
  struct Cell {
    std::vector<std::size_t> list;
    std::vector<double> list_weights;
    std::vector<std::size_t> support;
    std::vector<double> support_weights;
  };
  const Cell& cell(std::size_t x, std::size_t k) const { return cells_.at(x * keys_.size() + k); }

  std::vector<std::string> plaintexts_;
  std::vector<std::string> keys_;
  std::vector<std::string> ciphertexts_;
  std::vector<Cell> cells_;
};

/// A ciphertext y reachable from two plaintexts under the same key.
struct Collision {
  std::size_t k, x, x_other, y;
  bool operator==(const Collision&) const = default;
};

struct ValidationReport {
  bool decryptable = true;
  std::vector<Collision> collisions;
};

/// Checks that for every key the reachable ciphertext sets of distinct
/// plaintexts are pairwise disjoint.
inline ValidationReport validate_table(const CipherTable& t) {
  ValidationReport report;
  for (std::size_t k = 0; k < t.num_keys(); ++k) {
    std::vector<long long> owner(t.num_ciphertexts(), -1);
    for (std::size_t x = 0; x < t.num_plaintexts(); ++x) {
      for (auto y : t.support(x, k)) {
        if (owner[y] >= 0) {
          report.decryptable = false;
          report.collisions.push_back({k, static_cast<std::size_t>(owner[y]), x, y});
        } else {
          owner[y] = static_cast<long long>(x);
        }
      }
    }
  }
  return report;
}

struct GammaLambda {
  long gamma = 0;
  long lambda = 0;
};

/// Exact per-symbol key redundancy (Gamma) and ciphertext randomization
/// (Lambda) of a decryptable table. Gamma is the smallest value over
/// (x, reachable y, r) of
///   |{k : y reachable from (x,k)}| - |{k : y = E(x,k,r)}|,
/// and Lambda is the smallest |{y reachable from (x,k)}| - 1.
inline GammaLambda gamma_lambda_exact(const CipherTable& t) {
  auto report = validate_table(t);
  if (!report.decryptable) {
    const auto& c = report.collisions.front();
    throw InputError("gamma_lambda_exact: table is not decryptable (key " +
                     t.key_alphabet()[c.k] + ", ciphertext " + t.ciphertext_alphabet()[c.y] + ")");
  }
  long gamma = std::numeric_limits<long>::max();
  long lambda = std::numeric_limits<long>::max();
  for (std::size_t x = 0; x < t.num_plaintexts(); ++x) {
    std::size_t max_r = 0;
    for (std::size_t k = 0; k < t.num_keys(); ++k) {
      max_r = std::max(max_r, t.list(x, k).size());
      lambda = std::min(lambda, static_cast<long>(t.support(x, k).size()) - 1);
    }
    std::vector<long> reach(t.num_ciphertexts(), 0);
    for (std::size_t k = 0; k < t.num_keys(); ++k)
      for (auto y : t.support(x, k)) ++reach[y];
    for (std::size_t y = 0; y < t.num_ciphertexts(); ++y) {
      if (reach[y] == 0) continue;
      for (std::size_t r = 0; r < max_r; ++r) {
        long fixed = 0;
        for (std::size_t k = 0; k < t.num_keys(); ++k) {
          const auto& l = t.list(x, k);
          if (r < l.size() && l[r] == y) ++fixed;
        }
        gamma = std::min(gamma, reach[y] - fixed);
      }
    }
  }
  return {gamma, lambda};
}

/// The five-key example random cipher with plaintexts {0,1} and ciphertexts
/// {a..e}.
inline CipherTable example_random_cipher() {
  auto j = nlohmann::json::parse(R"({
    "plaintext_alphabet": ["0", "1"],
    "key_alphabet": ["k0", "k1", "k2", "k3", "k4"],
    "ciphertext_alphabet": ["a", "b", "c", "d", "e"],
    "entries": [
      {"x": "0", "k": "k0", "ys": ["a", "b"]},
      {"x": "1", "k": "k0", "ys": ["c", "d", "e"]},
      {"x": "0", "k": "k1", "ys": ["c", "d"]},
      {"x": "1", "k": "k1", "ys": ["e", "a", "b"]},
      {"x": "0", "k": "k2", "ys": ["e", "a"]},
      {"x": "1", "k": "k2", "ys": ["b", "c", "d"]},
      {"x": "0", "k": "k3", "ys": ["b", "c"]},
      {"x": "1", "k": "k3", "ys": ["d", "e", "a"]},
      {"x": "0", "k": "k4", "ys": ["d", "e"]},
      {"x": "1", "k": "k4", "ys": ["a", "b", "c"]}
    ]})");
  return CipherTable::from_json(j);
}

}  // namespace alphaeta
