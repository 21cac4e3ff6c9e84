#pragma once

// Experiment driver behind the `oc4seq` tool. Every command reads a single
// RunConfig; results are written under `output_dir`.

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "oc4seq/model.hpp"
#include "oc4seq/synthetic.hpp"

namespace oc4seq::cli {

enum class Detector { kOC4Seq, kGlobalOnly, kPca };

const char* to_string(Detector d);
Detector parse_detector(const std::string& s);

struct DataPaths {
  std::string train;
  std::string val_normal;
  std::string val_abnormal;
  std::string test_normal;
  std::string test_abnormal;
};

enum class AnomalyKind { kLocal, kPermutation };

struct GenConfig {
  ChainSpec chain;
  std::size_t n_train = 2000;
  /// Extra normal sequences shared out 3/7 between validation and test.
  std::size_t n_normal_holdout = 1000;
  std::size_t n_abnormal = 300;
  AnomalyKind anomaly = AnomalyKind::kLocal;
  std::size_t span = 5;
  std::size_t spans = 1;
};

struct SweepConfig {
  std::vector<double> alphas{0.0, 0.01, 0.1, 1.0, 10.0};
  std::vector<std::size_t> layers{2};
};

struct RunConfig {
  std::uint64_t seed = 0;
  Detector detector = Detector::kOC4Seq;
  std::string output_dir = "out";
  /// Model file; empty means the detector's default name inside output_dir.
  std::string checkpoint;
  DataPaths data;
  TrainConfig train;
  GenConfig gen;
  SweepConfig sweep;
  /// Sequence files for `score`; empty means the validation and test files.
  std::vector<std::string> score_inputs;

  std::filesystem::path out(const std::string& name) const;
  std::filesystem::path model_path() const;
};

/// Default configuration as JSON; also the schema for accepted keys.
nlohmann::json default_config_json();

/// Layers `overrides` ("a.b=value", value parsed as JSON when possible)
/// over the file (if any) over defaults. Unknown keys throw ConfigError.
RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<std::string>& overrides);
RunConfig config_from_json(const nlohmann::json& j);

void cmd_gen(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_score(const RunConfig& cfg);
void cmd_eval(const RunConfig& cfg);
void cmd_sweep(const RunConfig& cfg);
void cmd_project(const RunConfig& cfg);

/// Dispatches by name and maps exceptions to exit codes:
/// 0 ok, 1 usage/config, 2 data, 3 numeric failure.
int run_command(const std::string& command, const RunConfig& cfg);
int exit_code_for_current_exception();

}  // namespace oc4seq::cli
