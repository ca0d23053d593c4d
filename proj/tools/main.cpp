#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "commands.hpp"
#include "linattn/error.hpp"

using namespace linattn;
using namespace linattn::cli;

namespace {

using Command = std::function<void(const ExperimentConfig&, Run&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"gen-data", cmd_gen_data},         {"kernel", cmd_kernel},     {"spectral-check", cmd_spectral_check},
      {"ntk-sweep", cmd_ntk_sweep},       {"influence", cmd_influence}, {"attack", cmd_attack},
      {"malleability", cmd_malleability}, {"intervene", cmd_intervene}, {"train", cmd_train},
      {"landscape", cmd_landscape}};
  return table;
}

int exit_code(const Error& e) {
  std::fprintf(stderr, "error [%s]: %s\n", std::string(to_string(e.code())).c_str(), e.what());
  return is_numerical(e.code()) ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearized-attention kernel experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string chosen;

  for (const auto& [name, fn] : commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "single seed (overrides config)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  std::string figure;
  CLI::App* repro = app.add_subcommand("reproduce", "run a pinned desk-scale configuration");
  repro->add_option("figure", figure, "fig1, table2-desk or table4-desk")
      ->required()
      ->check(CLI::IsMember({"fig1", "table2-desk", "table4-desk"}));
  repro->add_option("--out", out_dir, "output directory")->required();
  repro->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  repro->callback([&chosen] { chosen = "reproduce"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (chosen == "reproduce") {
      Run run("reproduce " + figure, out_dir);
      const int t = threads.value_or(1);
      json config = figure == "fig1"          ? reproduce_fig1(t, run)
                    : figure == "table2-desk" ? reproduce_table2(t, run)
                                              : reproduce_table4(t, run);
      run.finish(config);
      return 0;
    }
    ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.seeds = {*seed};
    if (threads) cfg.threads = *threads;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (cfg.out.empty()) fail(ErrorCode::ConfigError, "no output directory: pass --out or set \"out\"");
    validate(cfg);
    Run run(chosen, cfg.out);
    commands().at(chosen)(cfg, run);
    run.finish(to_json(cfg));
    return 0;
  } catch (const Error& e) {
    return exit_code(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
