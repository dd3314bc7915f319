#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mri/motion.hpp"
#include "mri/nn/ops.hpp"
#include "mri/types.hpp"

namespace mri {

enum class ReconMode { varnet, varnet_mi };

std::string to_string(ReconMode mode);
ReconMode recon_mode_from_string(const std::string& s);

struct MotionParams {
  int max_events = 16;
  double max_trans_px = 10.0;
  double max_rot_deg = 10.0;
};

// Width of the MIDCP conv stack. The REC width is the model's `channels`.
inline constexpr int kMidcpChannels = 8;

// Unrolled cascade: k_{t+1} = k_t - eta_t * mask(k_t - k_hat) + R_t(k_t).
// Each cascade owns an MIDCP net (eta estimator) and a REC net (R_t).
struct ReconModel {
  struct MidcpNet {
    nn::TensorPtr w1, b1, w2, b2, w3, b3;
  };
  // two-scale encoder-decoder with a skip connection; final 1x1 conv
  // zero-initialized so an untrained model is the pure-DC fixed point
  struct RecNet {
    nn::TensorPtr w_in, b_in, w_d1, b_d1, w_d2, b_d2, w_f, b_f, w_out, b_out;
  };

  ReconMode mode = ReconMode::varnet;
  int cascades = 0;
  int channels = 16;
  // standardizing the log-magnitude input keeps eta keyed to k-space texture
  // rather than global scale; the MIDCP stack trains faster than the REC nets
  // because its gradient arrives through a single scalar per cascade
  bool midcp_standardize = true;
  double midcp_lr_scale = 5.0;

  std::vector<MidcpNet> midcp;
  std::vector<RecNet> rec;

  static ReconModel init(ReconMode mode, int cascades, int channels, uint64_t seed);

  // stable (name, tensor) ordering used by the optimizer and checkpoints
  std::vector<std::pair<std::string, nn::TensorPtr>> named_parameters() const;
  std::vector<nn::TensorPtr> parameters() const;
};

struct MidcpFeatures {
  std::vector<double> values;  // eta_1 .. eta_T, all > 0
};

struct ReconResult {
  RealImage image;  // rss of ifft2c(final_kspace)
  KSpace final_kspace;
  MidcpFeatures features;
};

// Graph-building forward pass (training path; inference reads the values).
struct CascadeNodes {
  nn::TensorPtr image;
  nn::TensorPtr final_k;
  std::vector<nn::TensorPtr> etas;
};
CascadeNodes cascade_graph(const KSpace& k_hat, const SamplingMask& mask,
                           const SensitivityMaps& maps, const ReconModel& model);

nn::TensorPtr midcp_graph(nn::TensorPtr k, const ReconModel::MidcpNet& net,
                          bool standardize_input = true);
nn::TensorPtr rec_graph(nn::TensorPtr k, std::shared_ptr<const SensitivityMaps> maps,
                        const ReconModel::RecNet& net);

/// eta_t for a concrete k-space (value-only wrapper over midcp_graph).
double midcp_forward(const KSpace& k, const ReconModel::MidcpNet& net,
                     bool standardize_input = true);

/// eta * mask(k_t - k_hat); the caller subtracts this from k_t.
KSpace dc_residual(const KSpace& k_t, const KSpace& k_hat, const SamplingMask& mask,
                   double eta);

/// R_t(k_t) for a concrete k-space (value-only wrapper over rec_graph).
KSpace rec_block(const KSpace& k_t, const SensitivityMaps& maps,
                 const ReconModel::RecNet& net);

ReconResult cascade_forward(const KSpace& k_hat, const SamplingMask& mask,
                            const SensitivityMaps& maps, const ReconModel& model);

struct TrainingExample {
  KSpace k_input;    // masked, possibly motion-corrupted
  RealImage target;  // motion-free rss target
  bool motion_label = false;
};

// varnet mode: clean acquisition, label false. varnet_mi mode: a trajectory
// with 0..max_events events is sampled and applied; label = events > 0.
// The target is the motion-free image in both modes.
TrainingExample make_training_example(const ComplexImage& image,
                                      const SensitivityMaps& maps,
                                      const SamplingMask& mask, ReconMode mode,
                                      Rng& rng, const MotionParams& motion = {});

struct TrainingItem {
  ComplexImage image;
  SensitivityMaps maps;
  KSpace kclean;  // unmasked forward acquisition
  SamplingMask mask;
};
using ItemProvider = std::function<TrainingItem(int step)>;

struct TrainResult {
  std::vector<double> loss_curve;  // one entry per step
};

// Single-threaded, deterministic per seed. Sensitivity maps for the cascade
// are estimated from the clean acquisition (matching inference conditions).
// Throws divergence_error if the loss becomes non-finite.
TrainResult train(ReconModel& model, const ItemProvider& items, int steps, double lr,
                  uint64_t seed, const MotionParams& motion = {},
                  std::ostream* log = nullptr);

// Masks k_hat, estimates maps from its ACS region, runs the cascade. Pure:
// no parameter mutation.
ReconResult reconstruct(const KSpace& k_hat, const SamplingMask& mask,
                        const ReconModel& model);

}  // namespace mri
