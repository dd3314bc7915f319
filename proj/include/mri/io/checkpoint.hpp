#pragma once

#include <string>

#include <json.hpp>

#include "mri/varnet.hpp"

namespace mri::io {

// Checkpoint file: magic "MICP" | version u8 = 1 | u32 LE header length |
// JSON header (mode, cascades, channels, step, config, tensor names+shapes) |
// one CTNS blob per parameter in header order.
void save_checkpoint(const std::string& path, const ReconModel& model,
                     const nlohmann::json& config, long step);

struct LoadedCheckpoint {
  ReconModel model;
  nlohmann::json config;
  long step = 0;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace mri::io
