#pragma once

// Experiment runner: one function per subcommand, each reading a JSON
// configuration and writing CSV / JSON artifacts into an output directory.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alphaeta/attacks.hpp"
#include "alphaeta/bounds.hpp"
#include "alphaeta/cipher_table.hpp"
#include "alphaeta/entropy.hpp"
#include "alphaeta/homophonic.hpp"
#include "alphaeta/keystream.hpp"
#include "alphaeta/measurement.hpp"
#include "alphaeta/signal.hpp"
#include "alphaeta/toy.hpp"

#ifndef ALPHAETA_VERSION
#define ALPHAETA_VERSION "0.1.0"
#endif

namespace alphaeta {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Typed access to a JSON object that reports errors by field path.
class ConfigNode {
 public:
  ConfigNode(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  const std::string& path() const { return path_; }
  const nlohmann::json& raw() const { return j_; }
  bool has(const std::string& key) const { return j_.contains(key); }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }
  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(field(key) + ": " + what);
  }

  template <typename T>
  T get(const std::string& key) const {
    if (!has(key)) fail(key, "required field is missing");
    return convert<T>(key, j_.at(key));
  }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    return has(key) ? convert<T>(key, j_.at(key)) : fallback;
  }

  /// A number or a nonempty array of numbers.
  template <typename T>
  std::vector<T> grid(const std::string& key, std::vector<T> fallback = {}) const {
    if (!has(key)) {
      if (fallback.empty()) fail(key, "required field is missing");
      return fallback;
    }
    const auto& v = j_.at(key);
    std::vector<T> out;
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) out.push_back(convert<T>(key + "[" + std::to_string(i) + "]", v[i]));
    } else {
      out.push_back(convert<T>(key, v));
    }
    if (out.empty()) fail(key, "grid must be nonempty");
    return out;
  }

  ConfigNode child(const std::string& key) const {
    if (!has(key)) fail(key, "required section is missing");
    return ConfigNode(j_.at(key), field(key));
  }

  std::optional<ConfigNode> optional_child(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return ConfigNode(j_.at(key), field(key));
  }

  /// Runs `f`, prefixing library input errors with this node's path.
  template <typename F>
  auto guard(F&& f) const {
    try {
      return f();
    } catch (const InputError& e) {
      fail(e.what());
    } catch (const nlohmann::json::exception& e) {
      fail(e.what());
    }
  }

 private:
  template <typename T>
  T convert(const std::string& key, const nlohmann::json& v) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(key, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(key, "expected an integer");
      if constexpr (std::is_unsigned_v<T>)
        if (v.get<long long>() < 0 && !v.is_number_unsigned()) fail(key, "expected a nonnegative integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(key, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(key, "expected a string");
    }
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(key, e.what());
    }
  }

  const nlohmann::json& j_;
  std::string path_;
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::filesystem::path config_dir = ".";
  std::ostream* log = &std::cout;
};

struct RunContext {
  RunOptions options;
  nlohmann::json outputs = nlohmann::json::array();
  nlohmann::json timings = nlohmann::json::object();
  nlohmann::json summary = nlohmann::json::object();

  std::ostream& log() { return *options.log; }

  std::uint64_t seed(const ConfigNode& root) const {
    if (options.seed) return *options.seed;
    if (!root.has("seed")) root.fail("seed", "master seed is mandatory for stochastic runs (config 'seed' or --seed)");
    return root.get<std::uint64_t>("seed");
  }

  std::filesystem::path output(const std::string& name) {
    outputs.push_back(name);
    return options.out_dir / name;
  }

  std::filesystem::path resolve(const std::string& p) const {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : options.config_dir / path;
  }

  template <typename F>
  auto timed(const std::string& name, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } else {
      auto r = f();
      timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return r;
    }
  }
};

inline std::ofstream open_output(const std::filesystem::path& p, bool binary = false) {
  std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

inline nlohmann::json read_json_file(const std::filesystem::path& p, const std::string& field) {
  std::ifstream is(p);
  if (!is) throw ConfigError(field + ": cannot open file " + p.string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(field + ": " + p.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
  auto os = open_output(p);
  os << j.dump(2) << '\n';
}

/// Shortest round-trip text for a double.
inline std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// simulate: Bob and Eve error sweeps over (S, M, eta).

inline std::vector<std::uint32_t> simulation_keystream(const ConfigNode& root, std::size_t n, unsigned M,
                                                       std::uint64_t seed, std::size_t grid_index) {
  if (auto lfsr = root.optional_child("lfsr")) {
    LfsrConfig c = lfsr->guard([&] { return LfsrConfig::from_json(lfsr->raw()); });
    lfsr->guard([&] {
      c.validate();
      return 0;
    });
    return lfsr_symbols(c, n, log2_exact(M));
  }
  Rng rng = make_rng(seed, "simulate.keystream", grid_index);
  std::vector<std::uint32_t> z(n);
  for (auto& v : z) v = static_cast<std::uint32_t>(rng() % M);
  return z;
}

inline int run_simulate(const nlohmann::json& config, RunContext& ctx) {
  ConfigNode root(config, "");
  ConfigNode sim = root.has("simulate") ? root.child("simulate") : root;
  auto S_grid = sim.grid<double>("S");
  auto M_grid = sim.grid<unsigned>("M", {2048});
  auto eta_grid = sim.grid<double>("eta", {1.0});
  auto trials = sim.get<std::size_t>("trials", 1000000);
  auto eve_trials = sim.get<std::size_t>("eve_trials", trials);
  auto measurement = sim.get<std::string>("bob_measurement", "heterodyne");
  auto records = sim.get<std::size_t>("records", 0);
  if (measurement != "heterodyne" && measurement != "phase_exact" && measurement != "phase_lorentzian")
    sim.fail("bob_measurement", "expected heterodyne, phase_exact or phase_lorentzian");
  if (trials == 0) sim.fail("trials", "must be positive");
  for (auto M : M_grid)
    if (M < 2 || !is_power_of_two(M)) sim.fail("M", "every M must be a power of two >= 2");
  for (auto S : S_grid)
    if (!(S > 0.0)) sim.fail("S", "every S must be positive");
  for (auto eta : eta_grid)
    if (!(eta > 0.0 && eta <= 1.0)) sim.fail("eta", "every eta must lie in (0, 1]");
  const std::uint64_t seed = ctx.seed(root);

  struct Point {
    double S, eta;
    unsigned M;
  };
  std::vector<Point> grid;
  for (double S : S_grid)
    for (unsigned M : M_grid)
      for (double eta : eta_grid) grid.push_back({S, eta, M});

  struct Row {
    std::size_t bob_errors = 0;
    HalfCircleResult eve;
  };
  auto rows = ctx.timed("simulate", [&] {
    std::vector<Row> out;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto& pt = grid[g];
      AlphaEtaParams params{pt.S, pt.M, pt.eta};
      auto z = simulation_keystream(root, trials, pt.M, seed, g);
      Rng data_rng = make_rng(seed, "simulate.data", g);
      std::vector<std::uint8_t> bits(trials);
      for (auto& b : bits) b = static_cast<std::uint8_t>(random_bit(data_rng));
      auto qumodes = encrypt_sequence(bits, z, params);
      const std::size_t chunks = 64;
      auto sizes = split_trials(trials, chunks);
      std::vector<std::size_t> starts(chunks, 0);
      for (std::size_t c = 1; c < chunks; ++c) starts[c] = starts[c - 1] + sizes[c - 1];
      double energy = pt.S * pt.eta;
      std::optional<PhaseSampler> sampler;
      if (measurement != "heterodyne")
        sampler.emplace(energy, measurement == "phase_exact" ? PhaseMode::exact : PhaseMode::lorentzian);
      auto errs = parallel_map(chunks, ctx.options.threads, [&](std::size_t c) {
        Rng rng = make_rng(seed, "simulate.bob", g * chunks + c);
        std::size_t e = 0;
        for (std::size_t i = starts[c]; i < starts[c] + sizes[c]; ++i) {
          QumodeRecord rec = apply_channel(qumodes[i], pt.eta);
          unsigned decided;
          if (sampler)
            decided = bob_decide(sampler->sample(rec.theta(), rng), rec.z, rec.M);
          else
            decided = bob_decide(heterodyne_sample(rec, rng), rec.z, rec.M);
          if (decided != rec.x) ++e;
        }
        return e;
      });
      Row r;
      for (auto e : errs) r.bob_errors += e;
      r.eve = sim.guard([&] {
        return eve_halfcircle_error(pt.S, eve_trials, substream_seed(seed, "simulate.eve", g),
                                    EveNoiseModel::heterodyne, ctx.options.threads);
      });
      out.push_back(r);

      if (g == 0 && records > 0) {
        std::size_t n = std::min(records, trials);
        std::vector<QumodeRecord> head(qumodes.begin(), qumodes.begin() + static_cast<long>(n));
        auto qs = open_output(ctx.output("qumodes.csv"));
        write_qumode_csv(qs, head);
        std::vector<MeasurementRow> mrows;
        Rng rng = make_rng(seed, "simulate.records", 0);
        for (const auto& q : head) {
          QumodeRecord rec = apply_channel(q, pt.eta);
          HeterodynePoint p = heterodyne_sample(rec, rng);
          MeasurementRow m{rec.index, "heterodyne", p.q1, p.q2, p.phase(),
                           p.at_origin() ? 0U : wedge_quantize(p, rec.M).j};
          mrows.push_back(m);
        }
        auto ms = open_output(ctx.output("measurements.csv"));
        write_measurement_csv(ms, mrows);
      }
    }
    return out;
  });

  auto os = open_output(ctx.output("simulate.csv"));
  os << "S,M,eta,trials,bob_errors,bob_ber,bob_ber_sigma,bob_ref_heterodyne,bob_ref_helstrom,"
        "eve_trials,eve_errors,eve_ber,eve_ref,eve_exact\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& pt = grid[g];
    double e = pt.S * pt.eta;
    double ber = static_cast<double>(rows[g].bob_errors) / static_cast<double>(trials);
    double ref = bob_error_reference(e, BobModel::heterodyne);
    os << fmt(pt.S) << ',' << pt.M << ',' << fmt(pt.eta) << ',' << trials << ',' << rows[g].bob_errors << ','
       << fmt(ber) << ',' << fmt(binomial_sigma(ref, static_cast<double>(trials))) << ',' << fmt(ref) << ','
       << fmt(bob_error_reference(e, BobModel::helstrom)) << ',' << rows[g].eve.trials << ','
       << rows[g].eve.errors << ',' << fmt(rows[g].eve.estimate) << ',' << fmt(rows[g].eve.reference) << ','
       << fmt(rows[g].eve.model_exact) << '\n';
    ctx.log() << "S=" << pt.S << " M=" << pt.M << " eta=" << pt.eta << "  Bob BER " << ber << " (Q ref " << ref
              << ")  Eve half-circle " << rows[g].eve.estimate << " (2/(pi sqrt S) " << rows[g].eve.reference
              << ")\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// attack: individual attack, half-circle error, empirical Gamma/Lambda, KPA.

inline EveNoiseModel parse_eve_model(const ConfigNode& node) {
  auto m = node.get<std::string>("model", "heterodyne");
  if (m == "heterodyne") return EveNoiseModel::heterodyne;
  if (m == "wedge_approximation") return EveNoiseModel::wedge_approximation;
  node.fail("model", "expected heterodyne or wedge_approximation");
}

inline int run_attack(const nlohmann::json& config, RunContext& ctx) {
  ConfigNode root(config, "");
  ConfigNode att = root.has("attack") ? root.child("attack") : root;
  bool any = false;
  nlohmann::json summary;

  if (auto ind = att.optional_child("individual")) {
    any = true;
    auto S_grid = ind->grid<double>("S");
    auto M_grid = ind->grid<unsigned>("M");
    auto tol = ind->get<double>("tolerance", 1e-4);
    auto os = open_output(ctx.output("individual.csv"));
    os << "S,M,cutoff,p_error,refined_cutoff,p_error_refined\n";
    ctx.timed("individual", [&] {
      for (double S : S_grid)
        for (unsigned M : M_grid) {
          std::size_t cutoff = ind->get<std::size_t>("cutoff", default_fock_cutoff(S));
          auto r = ind->guard([&] { return individual_attack_error(S, M, cutoff, tol); });
          os << fmt(S) << ',' << M << ',' << r.cutoff << ',' << fmt(r.p_error) << ',' << r.refined_cutoff << ','
             << fmt(r.p_error_refined) << '\n';
          ctx.log() << "individual attack S=" << S << " M=" << M << "  P_e = " << r.p_error << '\n';
        }
    });
  }

  if (auto hc = att.optional_child("halfcircle")) {
    any = true;
    auto S_grid = hc->grid<double>("S");
    auto trials = hc->get<std::size_t>("trials", 1000000);
    auto model = parse_eve_model(*hc);
    const std::uint64_t seed = ctx.seed(root);
    auto os = open_output(ctx.output("halfcircle.csv"));
    os << "model,S,trials,errors,estimate,std_error,reference,model_exact\n";
    ctx.timed("halfcircle", [&] {
      for (std::size_t g = 0; g < S_grid.size(); ++g) {
        auto r = hc->guard([&] {
          return eve_halfcircle_error(S_grid[g], trials, substream_seed(seed, "attack.halfcircle", g), model,
                                      ctx.options.threads);
        });
        os << (model == EveNoiseModel::heterodyne ? "heterodyne" : "wedge_approximation") << ',' << fmt(r.S)
           << ',' << r.trials << ',' << r.errors << ',' << fmt(r.estimate) << ',' << fmt(r.std_error) << ','
           << fmt(r.reference) << ',' << fmt(r.model_exact) << '\n';
        ctx.log() << "half-circle S=" << r.S << "  P_b = " << r.estimate << "  (2/(pi sqrt S) = " << r.reference
                  << ")\n";
      }
    });
  }

  if (auto gl = att.optional_child("gamma_lambda")) {
    any = true;
    auto S = gl->get<double>("S");
    auto M = gl->get<unsigned>("M");
    auto trials = gl->get<std::size_t>("trials");
    auto eps = gl->get<double>("epsilon", 1e-3);
    const std::uint64_t seed = ctx.seed(root);
    auto r = ctx.timed("gamma_lambda", [&] {
      return gl->guard([&] { return empirical_gamma_lambda(S, M, trials, eps, seed, ctx.options.threads); });
    });
    auto os = open_output(ctx.output("gamma_lambda.csv"));
    os << "S,M,trials_per_cell,epsilon,gamma_emp,lambda_emp,gamma_closed,relation_gap\n";
    os << fmt(S) << ',' << M << ',' << r.trials_per_cell << ',' << fmt(eps) << ',' << r.gamma_emp << ','
       << r.lambda_emp << ',' << fmt(r.gamma_closed) << ',' << r.relation_gap << '\n';
    ctx.log() << "empirical Gamma = " << r.gamma_emp << ", Lambda = " << r.lambda_emp << "  (M/(pi sqrt S) = "
              << r.gamma_closed << ")\n";
  }

  if (auto kpa = att.optional_child("kpa")) {
    any = true;
    KpaHarnessConfig cfg;
    cfg.key_length = kpa->get<std::size_t>("key_length", cfg.key_length);
    cfg.taps = kpa->get<std::vector<std::size_t>>("taps", {});
    cfg.M = kpa->get<unsigned>("M", cfg.M);
    cfg.S = kpa->get<double>("S", cfg.S);
    cfg.window = kpa->get<unsigned>("window", cfg.window);
    cfg.symbols = kpa->get<std::size_t>("symbols", cfg.symbols);
    cfg.trials = kpa->get<std::size_t>("trials", cfg.trials);
    cfg.recall_threshold = kpa->get<double>("recall_threshold", cfg.recall_threshold);
    const std::uint64_t seed = ctx.seed(root);
    auto s = ctx.timed("kpa", [&] { return kpa->guard([&] { return kpa_self_test(cfg, seed, ctx.options.threads); }); });
    auto os = open_output(ctx.output("kpa.csv"));
    os << "key_length,M,S,window,symbols,trials,recalled,unique,in_window,mean_work,max_work,mean_candidates,"
          "max_candidates,mean_predicted,window_too_small\n";
    os << cfg.key_length << ',' << cfg.M << ',' << fmt(cfg.S) << ',' << cfg.window << ',' << cfg.symbols << ','
       << s.trials << ',' << s.recalled << ',' << s.unique << ',' << s.in_window << ',' << fmt(s.mean_work) << ','
       << s.max_work << ',' << fmt(s.mean_candidates) << ',' << s.max_candidates << ',' << fmt(s.mean_predicted)
       << ',' << (s.window_too_small ? 1 : 0) << '\n';
    ctx.log() << "KPA search: recalled " << s.recalled << "/" << s.trials << ", mean work " << s.mean_work
              << " solves" << (s.window_too_small ? "  [window too small]" : "") << '\n';
  }

  if (auto inst = att.optional_child("kpa_instance")) {
    any = true;
    auto lfsr_node = inst->child("lfsr");
    LfsrConfig taps = lfsr_node.guard([&] { return LfsrConfig::from_json(lfsr_node.raw()); });
    KpaInstance k;
    k.known_bits = inst->get<std::vector<std::uint8_t>>("known_bits");
    k.wedges = inst->get<std::vector<std::uint32_t>>("wedges");
    auto M = inst->get<unsigned>("M");
    auto window = inst->get<unsigned>("window");
    auto rep = ctx.timed("kpa_instance", [&] { return inst->guard([&] { return kpa_lfsr_search(k, taps, M, window); }); });
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& sd : rep.recovered_seeds) seeds.push_back(LfsrConfig::seed_to_hex(sd));
    summary["kpa_instance"] = {{"recovered_seeds_hex", seeds},
                               {"work", rep.work},
                               {"pivot_symbols", rep.pivot_symbols},
                               {"candidate_counts", rep.candidate_counts},
                               {"predicted_complexity", rep.predicted_complexity}};
    ctx.log() << "KPA instance: " << rep.recovered_seeds.size() << " seed(s) after " << rep.work << " solves\n";
  }

  if (!any) att.fail("expected at least one of individual, halfcircle, gamma_lambda, kpa, kpa_instance");
  if (!summary.empty()) write_json(ctx.output("attack.json"), summary);
  return 0;
}

// ---------------------------------------------------------------------------
// analyze: exact Gamma / Lambda and entropy profiles of cipher tables.

inline SequencePrior parse_prior(const ConfigNode& root) {
  if (!root.has("prior")) return SequencePrior::uniform();
  auto p = root.child("prior");
  auto kind = p.get<std::string>("kind", "uniform");
  return p.guard([&] {
    if (kind == "uniform") return SequencePrior::uniform();
    if (kind == "iid") return SequencePrior::iid(p.get<std::vector<double>>("marginal"));
    if (kind == "explicit") {
      return SequencePrior::explicit_table(p.get<std::vector<double>>("probabilities"),
                                           p.get<std::size_t>("length"));
    }
    p.fail("kind", "expected uniform, iid or explicit");
  });
}

inline int run_analyze(const nlohmann::json& config, RunContext& ctx) {
  ConfigNode root(config, "");
  ConfigNode an = root.has("analyze") ? root.child("analyze") : root;
  EnumerationLimits limits;
  limits.threads = ctx.options.threads;
  limits.max_joint_states = an.get<double>("max_joint_states", limits.max_joint_states);
  nlohmann::json report;

  if (auto toy = an.optional_child("toy")) {
    ToyAlphaEta cfg;
    cfg.M = toy->get<unsigned>("M", cfg.M);
    cfg.key_length = toy->get<std::size_t>("key_length", cfg.key_length);
    cfg.window = toy->get<unsigned>("window", cfg.window);
    cfg.n_max = toy->get<std::size_t>("n_max", cfg.n_max);
    auto r = ctx.timed("toy", [&] { return toy->guard([&] { return run_toy_alphaeta(cfg, limits); }); });
    auto os = open_output(ctx.output("toy_profile.csv"));
    r.profile.write_csv(os);
    report["toy"] = {{"Gamma", r.per_symbol.gamma},
                     {"Lambda", r.per_symbol.lambda},
                     {"H_K", r.profile.H_K},
                     {"n1_bound", r.n1_bound},
                     {"n1", r.profile.n1 ? nlohmann::json(*r.profile.n1) : nlohmann::json(nullptr)},
                     {"n0", r.profile.n0 ? nlohmann::json(*r.profile.n0) : nlohmann::json(nullptr)},
                     {"shannon_limit_holds", r.shannon.holds},
                     {"key_equivocation_nonincreasing", r.key_equivocation_nonincreasing}};
    ctx.log() << "toy alpha-eta: Gamma = " << r.per_symbol.gamma << ", n1 bound = " << r.n1_bound
              << ", exact n1 = " << (r.profile.n1 ? std::to_string(*r.profile.n1) : "> n_max") << '\n';
  }

  if (an.has("table")) {
    const auto& t = an.raw().at("table");
    nlohmann::json tj;
    if (t.is_string())
      tj = read_json_file(ctx.resolve(t.get<std::string>()), an.field("table"));
    else
      tj = t;
    ConfigNode tnode(tj, an.field("table"));
    CipherTable table = tnode.guard([&] { return CipherTable::from_json(tj); });
    auto validation = validate_table(table);
    nlohmann::json collisions = nlohmann::json::array();
    for (const auto& c : validation.collisions)
      collisions.push_back({{"k", table.key_alphabet()[c.k]},
                            {"x", table.plaintext_alphabet()[c.x]},
                            {"x_other", table.plaintext_alphabet()[c.x_other]},
                            {"y", table.ciphertext_alphabet()[c.y]}});
    report["decryptable"] = validation.decryptable;
    report["collisions"] = collisions;
    if (!validation.decryptable) {
      write_json(ctx.output("analyze.json"), report);
      tnode.fail("table is not decryptable (" + std::to_string(validation.collisions.size()) + " collisions)");
    }
    auto gl = ctx.timed("gamma_lambda", [&] { return gamma_lambda_exact(table); });
    report["Gamma"] = gl.gamma;
    report["Lambda"] = gl.lambda;
    ctx.log() << "Gamma = " << gl.gamma << ", Lambda = " << gl.lambda << '\n';
    auto n_max = an.get<std::size_t>("n_max", 0);
    if (n_max > 0) {
      auto prior = parse_prior(an);
      auto profile = ctx.timed("profile", [&] {
        try {
          return entropy_profile(table, prior, n_max, limits);
        } catch (const InputError& e) {
          an.fail(e.what());
        }
      });
      auto os = open_output(ctx.output("profile.csv"));
      profile.write_csv(os);
      auto opt = [](const std::optional<std::size_t>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
      report["H_K"] = profile.H_K;
      report["n0"] = opt(profile.n0);
      report["n1"] = opt(profile.n1);
      report["n_d"] = opt(profile.n_d);
      report["n1_bar"] = opt(profile.n1_bar);
      report["shannon_limit_holds"] = shannon_limit_check(profile).holds;
    }
  }
  if (report.empty()) an.fail("expected a table or a toy section");
  write_json(ctx.output("analyze.json"), report);
  return 0;
}

// ---------------------------------------------------------------------------
// bounds

inline int run_bounds(const nlohmann::json& config, RunContext& ctx) {
  ConfigNode root(config, "");
  ConfigNode b = root.has("bounds") ? root.child("bounds") : root;
  auto r = ctx.timed("bounds", [&] {
    return b.guard([&] { return compute_bounds(BoundsInput::from_json(b.raw())); });
  });
  r.write_text(ctx.log());
  {
    auto os = open_output(ctx.output("bounds.txt"));
    r.write_text(os);
  }
  write_json(ctx.output("bounds.json"), r.to_json());
  return 0;
}

// ---------------------------------------------------------------------------
// homophonic: build / check / encode / decode.

inline int run_homophonic(const nlohmann::json& config, RunContext& ctx) {
  ConfigNode root(config, "");
  ConfigNode h = root.has("homophonic") ? root.child("homophonic") : root;
  nlohmann::json cj;
  if (h.has("code") && h.raw().at("code").is_string())
    cj = read_json_file(ctx.resolve(h.get<std::string>("code")), h.field("code"));
  else
    cj = h.child("code").raw();
  ConfigNode cnode(cj, h.field("code"));
  HomophonicCode code = cnode.guard([&] { return HomophonicCode::from_json(cj); });
  write_json(ctx.output("code.json"), code.to_json());
  auto mode = h.get<std::string>("mode", "check");
  nlohmann::json report = {{"l", code.block_length()},
                           {"uniformity_exact", code.uniformity_exact()},
                           {"source_entropy_bits", code.prior().entropy_bits()},
                           {"expansion_factor", code.expansion_factor()}};
  if (mode == "check") {
    auto symbols = h.get<std::size_t>("symbols", 1000000);
    auto roundtrip = h.get<std::size_t>("roundtrip_symbols", 10000);
    const std::uint64_t seed = ctx.seed(root);
    ctx.timed("check", [&] {
      Rng src = make_rng(seed, "homophonic.source", 0);
      Rng enc = make_rng(seed, "homophonic.encode", 0);
      auto rt = sample_source(code.prior(), roundtrip, src);
      report["roundtrip_ok"] = code.decode(code.encode(rt, enc)) == rt;
      auto blocks = code.encode(sample_source(code.prior(), symbols, src), enc);
      auto chi = chi_square_uniform(blocks, code.block_length());
      report["chi_square"] = {{"blocks", symbols}, {"statistic", chi.statistic}, {"dof", chi.dof},
                              {"p_value", chi.p_value}};
    });
    ctx.log() << "uniformity (exact): " << (code.uniformity_exact() ? "yes" : "no")
              << ", round trip: " << (report["roundtrip_ok"].get<bool>() ? "ok" : "FAILED")
              << ", chi-square p = " << report["chi_square"]["p_value"].get<double>() << '\n';
  } else if (mode == "encode" || mode == "decode") {
    auto in = ctx.resolve(h.get<std::string>("input"));
    std::ifstream is(in, std::ios::binary);
    if (!is) h.fail("input", "cannot open " + in.string());
    auto out_name = h.get<std::string>("output", mode == "encode" ? "blocks.bin" : "symbols.bin");
    auto os = open_output(ctx.output(out_name), true);
    h.guard([&] {
      if (mode == "encode") {
        const std::uint64_t seed = ctx.seed(root);
        Rng enc = make_rng(seed, "homophonic.encode", 0);
        auto symbols = read_symbol_bytes(is, code.alphabet_size());
        write_blocks(os, code.encode(symbols, enc), code.block_length());
        report["symbols"] = symbols.size();
      } else {
        auto blocks = read_blocks(is, code.block_length());
        write_symbol_bytes(os, code.decode(blocks));
        report["blocks"] = blocks.size();
      }
      return 0;
    });
  } else {
    h.fail("mode", "expected check, encode or decode");
  }
  write_json(ctx.output("homophonic.json"), report);
  return 0;
}

// ---------------------------------------------------------------------------
// nishioka: wedge decoding with the key, and the non-reduction witness.

inline int run_nishioka(const nlohmann::json& config, RunContext& ctx) {
  ConfigNode root(config, "");
  ConfigNode n = root.has("nishioka") ? root.child("nishioka") : root;
  auto M = n.get<unsigned>("M", 4);
  auto S = n.get<double>("S", 4.0);
  auto trials = n.get<std::size_t>("trials", 0);
  std::uint64_t seed = trials > 0 ? ctx.seed(root) : 0;
  auto r = ctx.timed("nishioka", [&] {
    return n.guard([&] { return nishioka_reduction_demo(M, S, trials, seed, ctx.options.threads); });
  });
  nlohmann::json j = {{"M", M},
                      {"S", S},
                      {"trials", trials},
                      {"failures", r.failures},
                      {"mc_failure_rate", r.mc_failure_rate},
                      {"lambda_prime", r.lambda_prime},
                      {"exact_failure_heterodyne", r.exact_failure},
                      {"witness_count", r.witness_count}};
  if (r.witness)
    j["witness"] = {{"j", r.witness->j}, {"j_other", r.witness->j_other}, {"z", r.witness->z},
                    {"F", r.witness->F}, {"F_other", r.witness->F_other}};
  if (r.g_depends_on_j) j["G_depends_on_j"] = *r.g_depends_on_j;
  if (r.g_depends_on_z) j["G_depends_on_z"] = *r.g_depends_on_z;
  write_json(ctx.output("nishioka.json"), j);
  if (r.witness)
    ctx.log() << "witness: j=" << r.witness->j << " j'=" << r.witness->j_other << " z=" << r.witness->z
              << "  l equal, F=" << r.witness->F << " vs " << r.witness->F_other << '\n';
  else
    ctx.log() << "no witness found\n";
  if (trials > 0)
    ctx.log() << "decoding failure with key: " << r.mc_failure_rate << "  (1/2 e^-S = " << r.lambda_prime
              << ", exact heterodyne " << r.exact_failure << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------

using CommandFn = std::function<int(const nlohmann::json&, RunContext&)>;

inline const std::map<std::string, CommandFn>& command_table() {
  static const std::map<std::string, CommandFn> table = {
      {"simulate", run_simulate}, {"attack", run_attack},         {"analyze", run_analyze},
      {"bounds", run_bounds},     {"homophonic", run_homophonic}, {"nishioka", run_nishioka},
  };
  return table;
}

/// Runs a subcommand and writes manifest.json next to its artifacts.
inline int run_command(const std::string& name, const nlohmann::json& config, RunOptions options) {
  auto it = command_table().find(name);
  if (it == command_table().end()) throw ConfigError("unknown subcommand '" + name + "'");
  std::filesystem::create_directories(options.out_dir);
  RunContext ctx;
  ctx.options = std::move(options);
  auto t0 = std::chrono::steady_clock::now();
  int status = it->second(config, ctx);
  ctx.timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json manifest = {{"command", name},
                             {"version", ALPHAETA_VERSION},
                             {"config", config},
                             {"threads", ctx.options.threads},
                             {"outputs", ctx.outputs},
                             {"timings_seconds", ctx.timings}};
  if (ctx.options.seed) manifest["seed"] = *ctx.options.seed;
  else if (config.contains("seed")) manifest["seed"] = config.at("seed");
  write_json(ctx.options.out_dir / "manifest.json", manifest);
  return status;
}

}  // namespace alphaeta
