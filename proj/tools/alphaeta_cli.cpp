#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "alphaeta/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"alpha-eta cipher simulator and cryptanalysis toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  for (const auto& [name, fn] : alphaeta::command_table()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  }
  CLI11_PARSE(app, argc, argv);

  auto* sub = app.get_subcommands().front();
  alphaeta::RunOptions options;
  options.out_dir = out_dir;
  options.threads = threads;
  if (sub->count("--seed")) options.seed = seed;
  options.config_dir = std::filesystem::path(config_path).parent_path();
  try {
    nlohmann::json config = alphaeta::read_json_file(config_path, "--config");
    return alphaeta::run_command(sub->get_name(), config, options);
  } catch (const alphaeta::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const alphaeta::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
