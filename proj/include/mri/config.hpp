#pragma once

#include <string>

#include <json.hpp>

#include "mri/varnet.hpp"

namespace mri {

// Experiment parameters, validated against module preconditions before any
// compute starts. Defaults mirror the simulation protocol where stated and
// desk scale elsewhere.
struct ExperimentConfig {
  int image_size = 64;
  int coils = 4;
  int accel = 4;
  double center_fraction = 0.08;
  int cascades = 4;
  int channels = 16;
  double lr = 1e-3;
  int steps = 2000;
  uint64_t seed = 0;
  MotionParams motion;
  ReconMode mode = ReconMode::varnet_mi;
  int ellipses = 6;

  void validate() const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
};

}  // namespace mri
