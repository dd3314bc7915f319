#include "mri/detect.hpp"

#include <cmath>

namespace mri {

namespace {

std::vector<double> standardize(const SvmModel& m, const std::vector<double>& f) {
  std::vector<double> out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = (f[i] - m.means[i]) / m.stds[i];
  return out;
}

// mean training objective pieces at (w, b)
double hinge_loss(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                  const std::vector<double>& w, double b) {
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double m = b;
    for (size_t j = 0; j < w.size(); ++j) m += w[j] * x[i][j];
    acc += std::max(0.0, 1.0 - y[i] * m);
  }
  return acc / static_cast<double>(x.size());
}

}  // namespace

SvmModel svm_train(const std::vector<MidcpFeatures>& features,
                   const std::vector<bool>& labels, double lambda, int epochs,
                   uint64_t /*seed*/) {
  if (features.size() != labels.size() || features.empty())
    throw config_error("svm_train: features/labels size mismatch");
  const size_t dim = features[0].values.size();
  size_t pos = 0, neg = 0;
  for (bool l : labels) (l ? pos : neg)++;
  if (pos < 2 || neg < 2)
    throw config_error("svm_train: need at least 2 examples per class");
  if (lambda <= 0.0) throw config_error("svm_train: lambda must be positive");
  if (epochs < 1) throw config_error("svm_train: epochs must be >= 1");

  SvmModel model;
  model.lambda = lambda;
  model.means.assign(dim, 0.0);
  model.stds.assign(dim, 0.0);

  const double n = static_cast<double>(features.size());
  for (const auto& f : features) {
    if (f.values.size() != dim) throw config_error("svm_train: inconsistent feature length");
    for (size_t j = 0; j < dim; ++j) model.means[j] += f.values[j];
  }
  for (size_t j = 0; j < dim; ++j) model.means[j] /= n;
  for (const auto& f : features)
    for (size_t j = 0; j < dim; ++j) {
      const double d = f.values[j] - model.means[j];
      model.stds[j] += d * d;
    }
  for (size_t j = 0; j < dim; ++j) {
    model.stds[j] = std::sqrt(model.stds[j] / n);
    if (model.stds[j] <= 0.0) model.stds[j] = 1.0;  // constant feature
  }

  std::vector<std::vector<double>> x(features.size());
  std::vector<int> y(features.size());
  for (size_t i = 0; i < features.size(); ++i) {
    x[i] = standardize(model, features[i].values);
    y[i] = labels[i] ? 1 : -1;
  }

  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::vector<double> best_w = w;
  double best_b = b;
  double best_loss = hinge_loss(x, y, w, b);

  for (int t = 1; t <= epochs; ++t) {
    std::vector<double> gw(dim, 0.0);
    double gb = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      double m = b;
      for (size_t j = 0; j < dim; ++j) m += w[j] * x[i][j];
      if (y[i] * m < 1.0) {
        for (size_t j = 0; j < dim; ++j) gw[j] -= y[i] * x[i][j];
        gb -= y[i];
      }
    }
    const double step = 1.0 / (lambda * static_cast<double>(t));
    for (size_t j = 0; j < dim; ++j) w[j] -= step * (lambda * w[j] + gw[j] / n);
    b -= step * gb / n;

    const double l = hinge_loss(x, y, w, b);
    if (l < best_loss) {
      best_loss = l;
      best_w = w;
      best_b = b;
    }
  }

  model.weights = best_w;
  model.bias = best_b;
  return model;
}

MotionCall svm_predict(const SvmModel& model, const MidcpFeatures& f) {
  if (f.values.size() != model.weights.size())
    throw shape_error("svm_predict: feature length mismatch");
  const std::vector<double> z = standardize(model, f.values);
  double m = model.bias;
  for (size_t j = 0; j < z.size(); ++j) m += model.weights[j] * z[j];
  return m > 0.0 ? MotionCall::motion : MotionCall::no_motion;
}

ConfusionMetrics confusion_metrics(const ConfusionCounts& c) {
  ConfusionMetrics m;
  const long total = c.total();
  if (total > 0)
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
  if (c.tp + c.fp > 0)
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0)
    m.sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (c.tn + c.fp > 0)
    m.specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  return m;
}

std::array<std::array<double, 2>, 2> normalized_confusion(const ConfusionCounts& c) {
  if (c.tp + c.fn <= 0 || c.tn + c.fp <= 0)
    throw config_error("normalized_confusion: empty true-label row");
  const double row0 = static_cast<double>(c.tp + c.fn);
  const double row1 = static_cast<double>(c.fp + c.tn);
  return {{{c.tp / row0, c.fn / row0}, {c.fp / row1, c.tn / row1}}};
}

}  // namespace mri
