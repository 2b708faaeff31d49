// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance [--criterion N] [--out DIR]

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "alphaeta/alphaeta.hpp"

using namespace alphaeta;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned threads() { return std::max(1U, std::thread::hardware_concurrency()); }

fs::path g_out = "acceptance_out";

RunOptions options_for(const std::string& name) {
  static std::ostringstream sink;
  RunOptions o;
  o.out_dir = g_out / name;
  o.threads = threads();
  o.config_dir = ALPHAETA_CONFIG_DIR;
  o.log = &sink;
  return o;
}

nlohmann::json load(const fs::path& p) {
  std::ifstream is(p);
  return nlohmann::json::parse(is);
}

std::string num(double v, int prec = 4) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

std::vector<std::map<std::string, std::string>> read_csv(const fs::path& p) {
  std::ifstream is(p);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
    return out;
  };
  if (std::getline(is, line)) header = split(line);
  while (std::getline(is, line)) {
    auto cells = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(row);
  }
  return rows;
}

Outcome criterion1() {
  auto o = options_for("c1");
  run_command("analyze", load(fs::path(ALPHAETA_CONFIG_DIR) / "analyze_example.json"), o);
  auto j = load(o.out_dir / "analyze.json");
  long gamma = j["Gamma"], lambda = j["Lambda"];
  return {gamma == 1 && lambda == 1, "Gamma=" + std::to_string(gamma) + " Lambda=" + std::to_string(lambda)};
}

Outcome criterion2() {
  auto r = compute_bounds(BoundsInput{});
  long n0 = *r.unicity.n0.reported(), n1 = *r.unicity.n1.reported();
  double c = r.complexity.log2_work;
  bool ok = n0 == 550 && n1 >= 489 && n1 <= 490 && std::abs(c - 634.0) <= 0.01 * 634.0;
  return {ok, "Gamma=" + num(r.gamma) + " Lambda=" + num(r.lambda) + " n0=" + std::to_string(n0) +
                  " n1=" + std::to_string(n1) + " log2 complexity=" + num(c, 6)};
}

Outcome criterion3() {
  auto o = options_for("c3");
  nlohmann::json cfg = {{"seed", 3}, {"S", {0.25, 1.0}}, {"M", {2048}}, {"trials", 1000000}, {"eve_trials", 1000}};
  run_command("simulate", cfg, o);
  bool ok = true;
  std::string detail;
  for (const auto& row : read_csv(o.out_dir / "simulate.csv")) {
    double e = std::stod(row.at("S")) * std::stod(row.at("eta"));
    double ber = std::stod(row.at("bob_ber"));
    double ref = q_function(2.0 * std::sqrt(e));
    double sigma = binomial_sigma(ref, std::stod(row.at("trials")));
    double z = (ber - ref) / sigma;
    ok = ok && std::abs(z) <= 3.0;
    detail += "etaS=" + num(e) + " BER=" + num(ber, 5) + " Q=" + num(ref, 5) + " (" + num(z, 2) + " sigma); ";
  }
  double h = helstrom_two_state_error(1.0), a = 0.25 * std::exp(-4.0);
  ok = ok && std::abs(h - 0.00460) <= 1e-5 && std::abs(h - a) <= 0.01 * a;
  detail += "Helstrom(1)=" + num(h, 6) + " 1/4 e^-4=" + num(a, 6);
  return {ok, detail};
}

Outcome criterion4() {
  auto r = nishioka_reduction_demo(8, 4.0, 1000000, 4, threads());
  double z = (r.mc_failure_rate - r.lambda_prime) / r.mc_sigma;
  double at100 = error_formulas(100.0, 100.0).lambda_prime_het;
  bool ok = std::abs(z) <= 3.0 && std::abs(at100 - 1.9e-44) <= 0.05e-44;
  return {ok, "S=4 M=8 MC=" + num(r.mc_failure_rate) + " 1/2 e^-S=" + num(r.lambda_prime) + " (" + num(z, 3) +
                  " sigma), exact heterodyne=" + num(r.exact_failure) + "; 1/2 e^-100=" + num(at100, 3)};
}

Outcome criterion5() {
  const double S = 4.0;
  bool ok = true;
  double prev = 0.0, last = 0.0, worst = 0.0;
  std::string detail;
  for (unsigned M : {2U, 4U, 8U, 16U, 32U, 64U}) {
    auto r = individual_attack_error(S, M, default_fock_cutoff(S));
    ok = ok && r.p_error >= prev - 1e-12;
    worst = std::max(worst, std::abs(r.p_error - r.p_error_refined));
    prev = last = r.p_error;
    detail += "M=" + std::to_string(M) + ":" + num(r.p_error) + " ";
  }
  ok = ok && last >= 0.45 && worst <= 1e-4;
  return {ok, detail + "cutoff gap=" + num(worst, 2)};
}

Outcome criterion6() {
  bool ok = true;
  std::string detail;
  std::uint64_t k = 0;
  for (double S : {100.0, 400.0}) {
    auto r = eve_halfcircle_error(S, 1000000, substream_seed(6, "acceptance.halfcircle", k++),
                                  EveNoiseModel::heterodyne, threads());
    double rel = std::abs(r.estimate - r.reference) / r.reference;
    ok = ok && rel <= 0.10;
    detail += "S=" + num(S) + " P_b=" + num(r.estimate) + " 2/(pi sqrt S)=" + num(r.reference) + " (off " +
              num(100.0 * rel, 3) + "%); ";
  }
  auto big = eve_halfcircle_error(4e4, 1000000, substream_seed(6, "acceptance.halfcircle", k++),
                                  EveNoiseModel::heterodyne, threads());
  ok = ok && big.estimate >= 1e-3 && big.estimate <= 1e-2;
  detail += "S=4e4 P_b=" + num(big.estimate) + " (band 0.001-0.01)";
  auto wedge = eve_halfcircle_error(4e4, 1000000, substream_seed(6, "acceptance.halfcircle", k++),
                                    EveNoiseModel::wedge_approximation, threads());
  detail += "; wedge-approximation model at S=4e4: " + num(wedge.estimate);
  return {ok, detail};
}

Outcome criterion7() {
  const unsigned M = 2048;
  auto r = empirical_gamma_lambda(4e4, M, std::size_t{2} * M * 25000, 1e-3, 7, threads());
  bool ok = std::abs(r.gamma_emp - 3) <= 1 && r.relation_holds;
  return {ok, "Gamma_emp=" + std::to_string(r.gamma_emp) + " Lambda_emp=" + std::to_string(r.lambda_emp) +
                  " (Lambda+1)-2(Gamma+1)=" + std::to_string(r.relation_gap) +
                  " closed form=" + num(r.gamma_closed)};
}

Outcome criterion8() {
  bool ok = true;
  std::string detail;
  for (std::size_t K : {8U, 12U, 16U, 20U}) {
    KpaHarnessConfig cfg;
    cfg.key_length = K;
    auto s = kpa_self_test(cfg, 8, threads());
    double bound = 2.0 * std::pow(static_cast<double>(s.max_candidates), 4.0);
    double ratio = s.mean_work / s.mean_predicted;
    ok = ok && s.recalled >= 99 && ratio >= 0.25 && ratio <= 4.0;
    if (K == 16) ok = ok && static_cast<double>(s.max_work) <= bound;
    detail += "|K|=" + std::to_string(K) + " recall=" + std::to_string(s.recalled) + "/" +
              std::to_string(s.trials) + " work mean=" + num(s.mean_work) + " max=" + std::to_string(s.max_work) +
              " predicted=" + num(s.mean_predicted) + "; ";
  }
  return {ok, detail + "candidates <= 3 per symbol, work bound at |K|=16: 2*3^4"};
}

Outcome criterion9() {
  ToyAlphaEta cfg;
  auto r = run_toy_alphaeta(cfg);
  double n1 = r.profile.n1 ? static_cast<double>(*r.profile.n1) : static_cast<double>(cfg.n_max + 1);
  bool ok = r.shannon.holds && r.key_equivocation_nonincreasing && n1 >= r.n1_bound;
  return {ok, "Gamma=" + std::to_string(r.per_symbol.gamma) + " n1 bound=" + num(r.n1_bound) + " exact n1=" +
                  (r.profile.n1 ? std::to_string(*r.profile.n1) : "> " + std::to_string(cfg.n_max)) +
                  " Shannon limit " + (r.shannon.holds ? "holds" : "violated")};
}

Outcome criterion10() {
  auto cfg = load(fs::path(ALPHAETA_CONFIG_DIR) / "homophonic.json");
  auto code = HomophonicCode::from_json(cfg["code"]);
  Rng src = make_rng(10, "acceptance.source", 0), enc = make_rng(10, "acceptance.encode", 0);
  auto rt = sample_source(code.prior(), 10000, src);
  bool roundtrip = code.decode(code.encode(rt, enc)) == rt;
  auto chi = chi_square_uniform(code.encode(sample_source(code.prior(), 1000000, src), enc), code.block_length());
  bool ok = code.uniformity_exact() && roundtrip && chi.p_value > 1e-4;
  return {ok, std::string("uniformity exact=") + (code.uniformity_exact() ? "yes" : "no") + " round trip=" +
                  (roundtrip ? "ok" : "failed") + " chi2=" + num(chi.statistic) + " p=" + num(chi.p_value)};
}

Outcome criterion11() {
  auto r = nishioka_certificates(4);
  if (!r.witness) return {false, "no witness"};
  const auto& w = *r.witness;
  return {true, "j=" + std::to_string(w.j) + " j'=" + std::to_string(w.j_other) + " z=" + std::to_string(w.z) +
                    " F=" + std::to_string(w.F) + "/" + std::to_string(w.F_other) + " (" +
                    std::to_string(r.witness_count) + " witnesses)"};
}

struct Criterion {
  std::function<Outcome()> run;
  double limit_seconds;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-eta acceptance checks"};
  int only = 0;
  std::string out = g_out.string();
  app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  app.add_option("--out", out, "scratch directory");
  CLI11_PARSE(app, argc, argv);
  g_out = out;

  const std::map<int, Criterion> criteria = {
      {1, {criterion1, 1}},   {2, {criterion2, 1}},   {3, {criterion3, 30}},  {4, {criterion4, 60}},
      {5, {criterion5, 300}}, {6, {criterion6, 60}},  {7, {criterion7, 120}}, {8, {criterion8, 300}},
      {9, {criterion9, 600}}, {10, {criterion10, 60}}, {11, {criterion11, 1}},
  };
  bool all = true;
  for (const auto& [id, c] : criteria) {
    if (only && id != only) continue;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass && secs <= c.limit_seconds;
    all = all && pass;
    std::cout << "CRITERION " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << o.detail << "  ["
              << num(secs, 3) << " s, limit " << c.limit_seconds << " s]" << std::endl;
  }
  return all ? 0 : 1;
}
