#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jscc/commands.hpp"
#include "jscc/config.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  std::string format;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "experiment config (JSON)")
      ->required();
  sub->add_option("--out", o.out_path, "output file (default: stdout)");
  sub->add_option("--seed", o.seed, "override sim.seed")
      ->each([&](const std::string&) { o.seed_set = true; });
  sub->add_option("--threads", o.threads, "worker threads for sweep points")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "override output.format")
      ->check(CLI::IsMember({"csv", "json"}));
}

jscc::ExperimentConfig load(const CommonOpts& o) {
  jscc::ExperimentConfig cfg = jscc::load_config(o.config_path);
  if (o.seed_set) cfg.sim.seed = o.seed;
  if (!o.format.empty()) cfg.output.format = o.format;
  cfg.validate();
  return cfg;
}

void emit(const CommonOpts& o, const jscc::ExperimentConfig& cfg,
          const std::string& doc) {
  const std::string& path = !o.out_path.empty() ? o.out_path : cfg.output.path;
  if (path.empty()) {
    std::cout << doc;
  } else {
    jscc::atomic_write(path, doc);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"error-exponent bounds, multi-class codec simulation and "
               "sphere-packing converse for source-channel coding"};
  app.require_subcommand(1);

  CommonOpts exp_o, rates_o, sim_o, bound_o;
  std::string join_path;

  CLI::App* exp = app.add_subcommand("exponents", "exponent bound sweep");
  add_common(exp, exp_o);
  CLI::App* rates = app.add_subcommand("rates", "optimal rate pairs");
  add_common(rates, rates_o);
  CLI::App* sim = app.add_subcommand("simulate", "Monte-Carlo FER sweep");
  add_common(sim, sim_o);
  CLI::App* bound = app.add_subcommand("bound", "two-class converse sweep");
  add_common(bound, bound_o);
  bound->add_option("--join", join_path,
                    "simulate CSV to compare against the bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (exp->parsed()) {
      const auto cfg = load(exp_o);
      emit(exp_o, cfg, jscc::cmd_exponents(cfg, exp_o.threads));
    } else if (rates->parsed()) {
      const auto cfg = load(rates_o);
      emit(rates_o, cfg, jscc::cmd_rates(cfg, rates_o.threads));
    } else if (sim->parsed()) {
      const auto cfg = load(sim_o);
      emit(sim_o, cfg, jscc::cmd_simulate(cfg));
    } else if (bound->parsed()) {
      const auto cfg = load(bound_o);
      std::string join_csv;
      if (!join_path.empty()) {
        std::ifstream in(join_path);
        if (!in) throw std::runtime_error("cannot open --join: " + join_path);
        std::stringstream buf;
        buf << in.rdbuf();
        join_csv = buf.str();
      }
      emit(bound_o, cfg, jscc::cmd_bound(cfg, bound_o.threads, join_csv));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
