#pragma once

#include <string>
#include <vector>

#include "mri/config.hpp"
#include "mri/detect.hpp"
#include "mri/metrics.hpp"

namespace mri::cli {

// Library-level command implementations. They throw config_error / io_error /
// divergence_error; the binary maps those onto exit codes 2 / 3 / 4.

// Writes per-item tensors (clean image, maps, clean k-space, corrupted
// k-space, mask) plus manifest.json. Per-item seeds are seed ^ item index.
// balanced forces alternating motion labels (detection experiments);
// otherwise varnet_mi items get a 0..max_events trajectory and varnet items
// are motion-free.
void cmd_gen_data(const ExperimentConfig& config, int n_images,
                  const std::string& out_dir, bool balanced = false);

// Trains on the dataset items (cycled in manifest order, fresh motion per
// step) and writes the checkpoint plus a per-step loss CSV next to it.
void cmd_train(const ExperimentConfig& config, const std::string& data_dir,
               const std::string& out_checkpoint);

// Writes <out_prefix>_image.ctns, <out_prefix>.png and <out_prefix>_features.json.
void cmd_recon(const std::string& checkpoint, const std::string& kspace_file,
               const std::string& mask_file, const std::string& out_prefix);

// Trains an SVM from features.json files (each must carry a label).
void cmd_svm_train(const std::vector<std::string>& features_files,
                   const std::string& out_model, double lambda, int epochs,
                   uint64_t seed);

// Prints "<id>\t<yes|no>" per file; when every file carries a label, also
// prints the confusion metrics and the row-normalized matrix.
void cmd_detect(const std::string& svm_model,
                const std::vector<std::string>& features_files, std::ostream& out);

// Evaluates two checkpoints over the dataset's motion and no-motion
// partitions (the four-condition grid) and writes JSON + CSV reports.
void cmd_eval(const std::string& checkpoint_a, const std::string& checkpoint_b,
              const std::string& test_dir, const std::string& out_report);

// Renders a previously written eval report, recomputing aggregates from rows.
void cmd_report(const std::string& report_json, std::ostream& out);

}  // namespace mri::cli
