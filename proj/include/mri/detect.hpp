#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mri/varnet.hpp"

namespace mri {

// Linear max-margin classifier over MIDCP features. Feature standardization
// is part of the model so inference matches training.
struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;
  std::vector<double> means;
  std::vector<double> stds;
};

// Full-batch subgradient descent on hinge loss + lambda*||w||^2/2 with step
// 1/(lambda*t); returns the best-epoch weights (by training hinge loss).
// Deterministic for fixed inputs. Labels: true = motion.
SvmModel svm_train(const std::vector<MidcpFeatures>& features,
                   const std::vector<bool>& labels, double lambda, int epochs,
                   uint64_t seed);

enum class MotionCall { no_motion = 0, motion = 1 };

// motion iff w . standardize(f) + b > 0; an exact tie classifies as no_motion.
MotionCall svm_predict(const SvmModel& model, const MidcpFeatures& f);

struct ConfusionCounts {
  long tp = 0, tn = 0, fp = 0, fn = 0;
  long total() const { return tp + tn + fp + fn; }
};

// nullopt marks an undefined metric (zero denominator), never reported as 0.
struct ConfusionMetrics {
  std::optional<double> accuracy, precision, sensitivity, specificity;
};

ConfusionMetrics confusion_metrics(const ConfusionCounts& c);

// Row-normalized 2x2 matrix; row 0 = with motion (tp, fn), row 1 = no motion
// (fp, tn). Throws if a true-label row is empty.
std::array<std::array<double, 2>, 2> normalized_confusion(const ConfusionCounts& c);

}  // namespace mri
