#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"
#include "verify.hpp"

using namespace ergodic::cli;

int main(int argc, char** argv) {
  CLI::App app{"Ergodic time-partition scenario runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  RunOptions options;
  std::string out_dir;
  app.add_option("--out-dir", out_dir, "Directory for artifacts (default: the config's `output`)");
  app.add_option("--threads", options.threads, "Run up to N experiment blocks in parallel")
      ->check(CLI::PositiveNumber);
  app.add_flag("--strict-float", options.strict_float, "Fail on any state renormalization event");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run every experiment block of a config");
  run->add_option("config", config_path, "Scenario config file")->required();
  run->fallthrough();

  VerifyOptions verify_options;
  auto* verify = app.add_subcommand("verify", "Run the invariant batteries");
  verify->add_option("--seed", verify_options.seed, "Battery seed");
  verify->add_option("--trials", verify_options.trials, "Random cases per battery")->check(CLI::PositiveNumber);
  verify->add_option("--inject-fault", verify_options.inject_fault, "Corrupt a partition on purpose")
      ->check(CLI::IsMember({"coverage"}));
  verify->fallthrough();

  long window = 0;
  std::string csco;
  auto* dump = app.add_subcommand("dump-partition", "Print one window's partition records");
  dump->add_option("config", config_path, "Scenario config file")->required();
  dump->add_option("--window", window, "Window index N")->required()->check(CLI::NonNegativeNumber);
  dump->add_option("--csco", csco, "CSCO id")->required();
  dump->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  options.out_dir = out_dir;

  if (*run) return run_scenario(config_path, options, std::cerr);

  if (*verify) return print_report(verify_suite(verify_options), std::cout) ? 0 : 1;

  try {
    const auto config = load_config(config_path);
    std::cout << dump_partition(config, csco, window);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
