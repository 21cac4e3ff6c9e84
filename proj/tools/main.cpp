#include <CLI11.hpp>
#include <iostream>

#include "oc4seq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"oc4seq: multi-scale one-class GRU anomaly detection for event sequences"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  const char* commands[][2] = {
      {"gen", "generate a synthetic Markov-chain corpus with planted anomalies"},
      {"train", "train the configured detector on data.train"},
      {"score", "score validation/test (or score.inputs) sequences"},
      {"eval", "pick a threshold on validation scores and report test metrics"},
      {"sweep", "train one model per (alpha, layers) grid point, report validation AP"},
      {"project", "export 2D projections of global sequence representations"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--set", overrides, "override a config key, e.g. --set train.alpha=0.1")
        ->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  oc4seq::cli::RunConfig cfg;
  try {
    cfg = oc4seq::cli::load_config(
        config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path),
        overrides);
  } catch (...) {
    return oc4seq::cli::exit_code_for_current_exception();
  }
  return oc4seq::cli::run_command(command, cfg);
}
