// mricli: dataset generation, training, reconstruction, motion detection and
// evaluation for the motion-informed reconstruction library.

#include <CLI11.hpp>
#include <iostream>

#include "mri/commands.hpp"

namespace {

mri::ExperimentConfig resolve_config(const std::string& config_path,
                                     bool seed_set, uint64_t seed) {
  mri::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = mri::ExperimentConfig::load(config_path);
  if (seed_set) cfg.seed = seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motion-informed MRI reconstruction pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  app.add_option("--config", config_path, "experiment config JSON")->expected(1);
  app.add_option("--seed", seed, "global seed override")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--out", out, "output directory or file");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a phantom dataset");
  int n_images = 10;
  bool balanced = false;
  gen->add_option("-n,--n-images", n_images, "number of items");
  gen->add_flag("--balanced", balanced, "alternate motion/no-motion labels");

  // train
  auto* tr = app.add_subcommand("train", "train a reconstruction model");
  std::string data_dir, checkpoint_out;
  tr->add_option("--data", data_dir, "dataset directory")->required();
  tr->add_option("--checkpoint", checkpoint_out, "output checkpoint path")->required();
  std::string mode_override;
  tr->add_option("--mode", mode_override, "varnet | varnet_mi");

  // recon
  auto* rc = app.add_subcommand("recon", "reconstruct from k-space");
  std::string ck_path, kspace_file, mask_file, out_prefix;
  rc->add_option("--checkpoint", ck_path)->required();
  rc->add_option("--kspace", kspace_file)->required();
  rc->add_option("--mask", mask_file)->required();
  rc->add_option("--prefix", out_prefix, "output path prefix")->required();

  // svm-train
  auto* st = app.add_subcommand("svm-train", "train the motion-detection SVM");
  std::vector<std::string> feat_files;
  std::string svm_out;
  double lambda = 0.01;
  int epochs = 500;
  st->add_option("--model", svm_out)->required();
  st->add_option("--lambda", lambda);
  st->add_option("--epochs", epochs);
  st->add_option("files", feat_files, "features.json files")->required();

  // detect
  auto* dt = app.add_subcommand("detect", "classify features as motion/no-motion");
  std::string svm_path;
  std::vector<std::string> detect_files;
  dt->add_option("--model", svm_path)->required();
  dt->add_option("files", detect_files, "features.json files")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "compare two checkpoints on a dataset");
  std::string ck_a, ck_b, test_dir, report_out;
  ev->add_option("--checkpoint-a", ck_a)->required();
  ev->add_option("--checkpoint-b", ck_b)->required();
  ev->add_option("--data", test_dir)->required();
  ev->add_option("--report", report_out)->required();

  // report
  auto* rp = app.add_subcommand("report", "print a previously written report");
  std::string report_in;
  rp->add_option("report", report_in)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      auto cfg = resolve_config(config_path, seed_set, seed);
      if (out.empty()) throw mri::config_error("gen-data: --out is required");
      mri::cli::cmd_gen_data(cfg, n_images, out, balanced);
    } else if (tr->parsed()) {
      auto cfg = resolve_config(config_path, seed_set, seed);
      if (!mode_override.empty()) cfg.mode = mri::recon_mode_from_string(mode_override);
      mri::cli::cmd_train(cfg, data_dir, checkpoint_out);
    } else if (rc->parsed()) {
      mri::cli::cmd_recon(ck_path, kspace_file, mask_file, out_prefix);
    } else if (st->parsed()) {
      mri::cli::cmd_svm_train(feat_files, svm_out, lambda, epochs, seed);
    } else if (dt->parsed()) {
      mri::cli::cmd_detect(svm_path, detect_files, std::cout);
    } else if (ev->parsed()) {
      mri::cli::cmd_eval(ck_a, ck_b, test_dir, report_out);
    } else if (rp->parsed()) {
      mri::cli::cmd_report(report_in, std::cout);
    }
  } catch (const mri::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mri::divergence_error& e) {
    std::cerr << "numerical divergence: " << e.what() << '\n';
    return 4;
  } catch (const mri::io_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
