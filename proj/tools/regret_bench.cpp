// Experiment harness: runs configured experiments, the rate and consistency
// studies, and the acceptance suite.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "regret/acceptance.hpp"
#include "regret/config.hpp"
#include "regret/csv.hpp"
#include "regret/experiments.hpp"
#include "regret/quadratic_closed_form.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kDivergence = 2;
constexpr int kVerifyFailure = 3;

int report(const regret::ExperimentResult& r) {
  for (const auto& f : r.files) std::cout << "wrote " << f << '\n';
  for (const auto& [k, v] : r.summary) std::cout << k << " = " << regret::csv::format_double(v) << '\n';
  for (const auto& d : r.diagnostics) std::cerr << "diagnostic: " << d << '\n';
  if (r.diverged) {
    std::cerr << "error: solver divergence\n";
    return kDivergence;
  }
  return 0;
}

template <typename Fn>
int guarded(const std::string& path, Fn&& fn) {
  try {
    const auto cfg = regret::load_config(path);
    return report(fn(cfg));
  } catch (const regret::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDivergence;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret-optimal dynamics: experiments, rate studies and acceptance checks"};
  app.footer(regret::config_keys_help());
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment named in a config file");
  run->add_option("config", config_path, "Config file")->required();

  auto* rates = app.add_subcommand("rates", "Rate-bound study on the quadratic in a config file");
  rates->add_option("config", config_path, "Config file")->required();

  auto* consistency =
      app.add_subcommand("consistency", "Growing-horizon probe on the quadratic in a config file");
  consistency->add_option("config", config_path, "Config file")->required();

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite; exit 3 on any failure");
  std::vector<int> only;
  bool tamper_psi = false;
  verify->add_option("--only", only, "Run only these criteria (1-11); skips the aggregate")
      ->check(CLI::Range(1, 11))
      ->delimiter(',');
  verify->add_flag("--tamper-psi", tamper_psi,
                   "Replace the scalar root with its negation (mutation check)");

  CLI11_PARSE(app, argc, argv);

  if (*run) return guarded(config_path, [](const auto& c) { return regret::run_experiment(c); });
  if (*rates) return guarded(config_path, [](const auto& c) { return regret::run_rates(c); });
  if (*consistency) {
    return guarded(config_path, [](const auto& c) { return regret::run_consistency(c); });
  }

  auto opts = regret::default_acceptance_options();
  if (tamper_psi) opts.psi = [](double x) { return -regret::psi(x); };
  auto print = [](const regret::CriterionResult& r) {
    std::cout << regret::format_result(r) << std::endl;
  };
  bool ok = true;
  if (!only.empty()) {
    for (int id : only) {
      const auto r = regret::run_criterion(id, opts);
      print(r);
      ok = ok && r.passed;
    }
  } else {
    for (const auto& r : regret::run_acceptance(opts, print)) ok = ok && r.passed;
  }
  std::cout << (ok ? "verify: all criteria passed" : "verify: FAILED") << std::endl;
  return ok ? 0 : kVerifyFailure;
}
