#include "mri/config.hpp"

#include <fstream>

#include "mri/kspace.hpp"

namespace mri {

void ExperimentConfig::validate() const {
  if (image_size < 16) throw config_error("config: image_size must be >= 16");
  if (image_size % 2 != 0)
    throw config_error("config: image_size must be even (the REC net pools by 2)");
  if (coils < 1) throw config_error("config: coils must be >= 1");
  if (accel < 1) throw config_error("config: accel must be >= 1");
  if (!(center_fraction > 0.0 && center_fraction < 1.0))
    throw config_error("config: center_fraction must be in (0, 1)");
  if (center_block_width(image_size, center_fraction) < 1)
    throw config_error("config: center block is empty at this image size");
  if (cascades < 1) throw config_error("config: cascades must be >= 1");
  if (channels < 1) throw config_error("config: channels must be >= 1");
  if (lr <= 0.0) throw config_error("config: lr must be positive");
  if (steps < 1) throw config_error("config: steps must be >= 1");
  if (ellipses < 1) throw config_error("config: ellipses must be >= 1");
  if (motion.max_events < 0 || motion.max_events > 16)
    throw config_error("config: motion.max_events must be in [0, 16]");
  if (motion.max_trans_px < 0.0 || motion.max_trans_px > 10.0)
    throw config_error("config: motion.max_trans_px must be in [0, 10]");
  if (motion.max_rot_deg < 0.0 || motion.max_rot_deg > 10.0)
    throw config_error("config: motion.max_rot_deg must be in [0, 10]");
}

nlohmann::json ExperimentConfig::to_json() const {
  return {
      {"image_size", image_size},
      {"coils", coils},
      {"accel", accel},
      {"center_fraction", center_fraction},
      {"cascades", cascades},
      {"channels", channels},
      {"lr", lr},
      {"steps", steps},
      {"seed", seed},
      {"motion",
       {{"max_events", motion.max_events},
        {"max_trans_px", motion.max_trans_px},
        {"max_rot_deg", motion.max_rot_deg}}},
      {"mode", to_string(mode)},
      {"ellipses", ellipses},
  };
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.image_size = j.value("image_size", c.image_size);
  c.coils = j.value("coils", c.coils);
  c.accel = j.value("accel", c.accel);
  c.center_fraction = j.value("center_fraction", c.center_fraction);
  c.cascades = j.value("cascades", c.cascades);
  c.channels = j.value("channels", c.channels);
  c.lr = j.value("lr", c.lr);
  c.steps = j.value("steps", c.steps);
  c.seed = j.value("seed", c.seed);
  if (j.contains("motion")) {
    const auto& m = j.at("motion");
    c.motion.max_events = m.value("max_events", c.motion.max_events);
    c.motion.max_trans_px = m.value("max_trans_px", c.motion.max_trans_px);
    c.motion.max_rot_deg = m.value("max_rot_deg", c.motion.max_rot_deg);
  }
  if (j.contains("mode")) c.mode = recon_mode_from_string(j.at("mode").get<std::string>());
  c.ellipses = j.value("ellipses", c.ellipses);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("cannot open config: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

}  // namespace mri
