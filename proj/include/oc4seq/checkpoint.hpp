#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "oc4seq/model.hpp"

namespace oc4seq {

/// Model plus the training recipe that produced it, when known.
struct Checkpoint {
  OC4SeqModel model;
  std::optional<TrainConfig> train_config;
};

/// {"format":"oc4seq-ckpt","version":1,"config":{...},
///  "centers":{"c":[...],"c_L":[...]},"params":{name:[[r,c],[values]]}}
std::string checkpoint_json(const OC4SeqModel& model,
                            const std::optional<TrainConfig>& train_config = std::nullopt);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const OC4SeqModel& model,
                     const std::optional<TrainConfig>& train_config = std::nullopt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace oc4seq
