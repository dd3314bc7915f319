#pragma once

#include <string>
#include <vector>

#include "mri/nn/ssim.hpp"
#include "mri/types.hpp"

namespace mri {

/// ||ref - img||_F / ||ref||_F (unsquared norm ratio). Throws on zero ref.
double nmse(const RealImage& ref, const RealImage& img);

/// 20*log10(max(ref) / rmse); +infinity when the images are identical.
double psnr(const RealImage& ref, const RealImage& img);

/// Uniform-window SSIM, same implementation the training loss uses.
double ssim_metric(const RealImage& ref, const RealImage& img);

struct MetricRow {
  std::string id;
  std::string mode;       // model condition label
  bool motion = false;    // motion condition label
  double nmse_pct = 0.0;  // percent
  double psnr_db = 0.0;   // +inf marker allowed
  double ssim_pct = 0.0;  // percent
  bool failed = false;
  std::string error;
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // population std over rows
};

struct MetricsReport {
  std::string mode;
  bool motion = false;
  std::vector<MetricRow> rows;
  Aggregate nmse_pct, psnr_db, ssim_pct;
};

// One condition group. Both images are normalized by the reference maximum
// before metric evaluation; per-image failures are recorded on the row, not
// raised. Row order follows input order.
MetricsReport evaluate_batch(const std::vector<std::pair<RealImage, RealImage>>& pairs,
                             const std::string& mode_label, bool motion_label,
                             const std::vector<std::string>* ids = nullptr);

// Lossless JSON round-trip: nonfinite values are encoded as strings.
std::string report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const std::string& text);
std::string report_to_csv(const MetricsReport& r);

}  // namespace mri
