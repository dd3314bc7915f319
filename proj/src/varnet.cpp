#include "mri/varnet.hpp"

#include <cmath>
#include <ostream>

#include "mri/kspace.hpp"
#include "mri/nn/adam.hpp"
#include "mri/nn/ssim.hpp"
#include "mri/phantom.hpp"

namespace mri {

using nn::TensorPtr;

std::string to_string(ReconMode mode) {
  return mode == ReconMode::varnet ? "varnet" : "varnet_mi";
}

ReconMode recon_mode_from_string(const std::string& s) {
  if (s == "varnet") return ReconMode::varnet;
  if (s == "varnet_mi") return ReconMode::varnet_mi;
  throw config_error("unknown mode: " + s);
}

namespace {

// Kaiming-uniform for leaky_relu(0.2)
TensorPtr init_conv(Rng& rng, int cout, int cin, int kh, int kw) {
  auto t = nn::Tensor::make({cout, cin, kh, kw}, true);
  const double gain = std::sqrt(2.0 / (1.0 + 0.04));
  const double bound = gain * std::sqrt(3.0 / (static_cast<double>(cin) * kh * kw));
  for (double& v : t->value) v = rng.uniform(-bound, bound);
  return t;
}

TensorPtr init_zeros(std::vector<int> shape) { return nn::Tensor::make(std::move(shape), true); }

// softplus(0.5413...) = 1, so every net starts at eta = 1 independent of
// its input; input dependence has to be learned.
constexpr double kMidcpBiasInit = 0.54132485461292;

}  // namespace

ReconModel ReconModel::init(ReconMode mode, int cascades, int channels, uint64_t seed) {
  if (cascades < 1) throw config_error("ReconModel: cascades must be >= 1");
  if (channels < 1) throw config_error("ReconModel: channels must be >= 1");

  ReconModel m;
  m.mode = mode;
  m.cascades = cascades;
  m.channels = channels;
  Rng rng(seed);

  const int mc = kMidcpChannels;
  for (int t = 0; t < cascades; ++t) {
    MidcpNet h;
    h.w1 = init_conv(rng, mc, 1, 3, 3);
    h.b1 = init_zeros({mc});
    h.w2 = init_conv(rng, mc, mc, 3, 3);
    h.b2 = init_zeros({mc});
    h.w3 = init_zeros({1, mc, 3, 3});
    h.b3 = init_zeros({1});
    h.b3->value[0] = kMidcpBiasInit;
    m.midcp.push_back(std::move(h));

    RecNet r;
    r.w_in = init_conv(rng, channels, 2, 3, 3);
    r.b_in = init_zeros({channels});
    r.w_d1 = init_conv(rng, 2 * channels, channels, 3, 3);
    r.b_d1 = init_zeros({2 * channels});
    r.w_d2 = init_conv(rng, channels, 2 * channels, 3, 3);
    r.b_d2 = init_zeros({channels});
    r.w_f = init_conv(rng, channels, 2 * channels, 3, 3);
    r.b_f = init_zeros({channels});
    r.w_out = init_zeros({2, channels, 1, 1});
    r.b_out = init_zeros({2});
    m.rec.push_back(std::move(r));
  }
  return m;
}

std::vector<std::pair<std::string, TensorPtr>> ReconModel::named_parameters() const {
  std::vector<std::pair<std::string, TensorPtr>> out;
  for (int t = 0; t < cascades; ++t) {
    const std::string mp = "midcp." + std::to_string(t) + ".";
    const MidcpNet& h = midcp[static_cast<size_t>(t)];
    out.emplace_back(mp + "conv1.weight", h.w1);
    out.emplace_back(mp + "conv1.bias", h.b1);
    out.emplace_back(mp + "conv2.weight", h.w2);
    out.emplace_back(mp + "conv2.bias", h.b2);
    out.emplace_back(mp + "conv3.weight", h.w3);
    out.emplace_back(mp + "conv3.bias", h.b3);

    const std::string rp = "rec." + std::to_string(t) + ".";
    const RecNet& r = rec[static_cast<size_t>(t)];
    out.emplace_back(rp + "enc.weight", r.w_in);
    out.emplace_back(rp + "enc.bias", r.b_in);
    out.emplace_back(rp + "down1.weight", r.w_d1);
    out.emplace_back(rp + "down1.bias", r.b_d1);
    out.emplace_back(rp + "down2.weight", r.w_d2);
    out.emplace_back(rp + "down2.bias", r.b_d2);
    out.emplace_back(rp + "fuse.weight", r.w_f);
    out.emplace_back(rp + "fuse.bias", r.b_f);
    out.emplace_back(rp + "out.weight", r.w_out);
    out.emplace_back(rp + "out.bias", r.b_out);
  }
  return out;
}

std::vector<TensorPtr> ReconModel::parameters() const {
  std::vector<TensorPtr> out;
  for (auto& [name, t] : named_parameters()) out.push_back(t);
  return out;
}

TensorPtr midcp_graph(TensorPtr k, const ReconModel::MidcpNet& net,
                      bool standardize_input) {
  // log-magnitude featurization tames the k-space dynamic range
  auto s = sum_channels(log1p_elem(nn::complex_abs(std::move(k))));
  if (standardize_input) s = nn::standardize(s);
  auto h1 = leaky_relu(conv2d(s, net.w1, net.b1));
  auto h2 = leaky_relu(conv2d(h1, net.w2, net.b2));
  auto h3 = leaky_relu(conv2d(h2, net.w3, net.b3));
  return softplus(reduce_mean(h3));
}

TensorPtr rec_graph(TensorPtr k, std::shared_ptr<const SensitivityMaps> maps,
                    const ReconModel::RecNet& net) {
  auto x = nn::sense_combine_op(nn::ifft2c_op(std::move(k)), maps);
  auto xc = nn::complex_to_channels(x);
  auto c1 = leaky_relu(conv2d(xc, net.w_in, net.b_in));
  auto d = nn::avgpool2(c1);
  auto m1 = leaky_relu(conv2d(d, net.w_d1, net.b_d1));
  auto m2 = leaky_relu(conv2d(m1, net.w_d2, net.b_d2));
  auto u = nn::upsample_nearest2(m2);
  auto f = leaky_relu(conv2d(nn::concat_channels(c1, u), net.w_f, net.b_f));
  auto o = conv2d(f, net.w_out, net.b_out);
  return nn::fft2c_op(nn::sense_expand_op(nn::channels_to_complex(o), maps));
}

CascadeNodes cascade_graph(const KSpace& k_hat, const SamplingMask& mask,
                           const SensitivityMaps& maps, const ReconModel& model) {
  if (k_hat.c != maps.c || k_hat.h != maps.h || k_hat.w != maps.w)
    throw shape_error("cascade_graph: k-space/maps shape mismatch");
  if (k_hat.w != mask.w) throw shape_error("cascade_graph: k-space/mask width mismatch");

  auto maps_sp = std::make_shared<const SensitivityMaps>(maps);
  auto mask_sp = std::make_shared<const SamplingMask>(mask);

  CascadeNodes out;
  TensorPtr khat_node = nn::tensor_from_kspace(k_hat);
  TensorPtr k = khat_node;
  for (int t = 0; t < model.cascades; ++t) {
    TensorPtr eta =
        midcp_graph(k, model.midcp[static_cast<size_t>(t)], model.midcp_standardize);
    TensorPtr dc = nn::scale_by_scalar(nn::mask_columns_op(nn::sub(k, khat_node), mask_sp), eta);
    TensorPtr r = rec_graph(k, maps_sp, model.rec[static_cast<size_t>(t)]);
    k = nn::add(nn::sub(k, dc), r);
    out.etas.push_back(std::move(eta));
  }
  out.final_k = k;
  out.image = nn::rss_op(nn::ifft2c_op(k));
  return out;
}

double midcp_forward(const KSpace& k, const ReconModel::MidcpNet& net,
                     bool standardize_input) {
  return midcp_graph(nn::tensor_from_kspace(k), net, standardize_input)->value[0];
}

KSpace dc_residual(const KSpace& k_t, const KSpace& k_hat, const SamplingMask& mask,
                   double eta) {
  if (k_t.c != k_hat.c || k_t.h != k_hat.h || k_t.w != k_hat.w)
    throw shape_error("dc_residual: shape mismatch");
  if (k_t.w != mask.w) throw shape_error("dc_residual: mask width mismatch");
  KSpace out(k_t.c, k_t.h, k_t.w);
  for (int ci = 0; ci < k_t.c; ++ci)
    for (int r = 0; r < k_t.h; ++r)
      for (int c = 0; c < k_t.w; ++c)
        if (mask.sampled(c))
          out.at(ci, r, c) = eta * (k_t.at(ci, r, c) - k_hat.at(ci, r, c));
  return out;
}

KSpace rec_block(const KSpace& k_t, const SensitivityMaps& maps,
                 const ReconModel::RecNet& net) {
  if (k_t.c != maps.c || k_t.h != maps.h || k_t.w != maps.w)
    throw shape_error("rec_block: shape mismatch");
  auto maps_sp = std::make_shared<const SensitivityMaps>(maps);
  auto r = rec_graph(nn::tensor_from_kspace(k_t), maps_sp, net);
  return nn::kspace_from_tensor(*r);
}

ReconResult cascade_forward(const KSpace& k_hat, const SamplingMask& mask,
                            const SensitivityMaps& maps, const ReconModel& model) {
  CascadeNodes nodes = cascade_graph(k_hat, mask, maps, model);
  ReconResult res;
  res.image = nn::real_from_tensor(*nodes.image);
  res.final_kspace = nn::kspace_from_tensor(*nodes.final_k);
  for (const auto& eta : nodes.etas) res.features.values.push_back(eta->value[0]);
  return res;
}

TrainingExample make_training_example(const ComplexImage& image,
                                      const SensitivityMaps& maps,
                                      const SamplingMask& mask, ReconMode mode,
                                      Rng& rng, const MotionParams& motion) {
  TrainingExample ex;
  if (mode == ReconMode::varnet_mi) {
    MotionTrajectory traj = sample_trajectory(rng, image.w, motion.max_events,
                                              motion.max_trans_px, motion.max_rot_deg);
    ex.k_input = apply_mask(corrupt_kspace(image, maps, traj), mask);
    ex.motion_label = traj.label();
  } else {
    ex.k_input = apply_mask(forward_acquire(image, maps), mask);
    ex.motion_label = false;
  }
  ex.target = rss_combine(sense_expand(image, maps));
  return ex;
}

TrainResult train(ReconModel& model, const ItemProvider& items, int steps, double lr,
                  uint64_t seed, const MotionParams& motion, std::ostream* log) {
  if (steps < 1) throw config_error("train: steps must be >= 1");

  Rng rng(seed);
  const auto named = model.named_parameters();
  std::vector<nn::TensorPtr> params;
  std::vector<double> scales;
  for (const auto& [name, p] : named) {
    params.push_back(p);
    scales.push_back(name.rfind("midcp.", 0) == 0 ? model.midcp_lr_scale : 1.0);
  }
  nn::Adam adam(params, lr);
  adam.set_lr_scales(std::move(scales));

  TrainResult res;
  res.loss_curve.reserve(static_cast<size_t>(steps));

  for (int s = 0; s < steps; ++s) {
    TrainingItem item = items(s);
    TrainingExample ex =
        make_training_example(item.image, item.maps, item.mask, model.mode, rng, motion);
    SensitivityMaps maps_est = estimate_sens_maps(item.kclean, item.mask.center_fraction);

    CascadeNodes nodes = cascade_graph(ex.k_input, item.mask, maps_est, model);
    auto loss = nn::ssim_loss_node(nodes.image, nn::tensor_from_real(ex.target));
    const double lv = loss->value[0];
    if (!std::isfinite(lv))
      throw divergence_error("train: loss diverged at step " + std::to_string(s));

    nn::backward(loss);
    adam.step();
    res.loss_curve.push_back(lv);
    if (log && (s % 100 == 0 || s + 1 == steps))
      *log << "step " << s << "  loss " << lv << "\n";
  }
  return res;
}

ReconResult reconstruct(const KSpace& k_hat, const SamplingMask& mask,
                        const ReconModel& model) {
  KSpace k0 = apply_mask(k_hat, mask);
  SensitivityMaps maps = estimate_sens_maps(k0, mask.center_fraction);
  return cascade_forward(k0, mask, maps, model);
}

}  // namespace mri
