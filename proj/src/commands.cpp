#include "mri/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mri/io/checkpoint.hpp"
#include "mri/io/png.hpp"
#include "mri/io/tensor_container.hpp"
#include "mri/kspace.hpp"
#include "mri/phantom.hpp"

namespace fs = std::filesystem;

namespace mri::cli {

namespace {

std::string item_id(int i) {
  std::ostringstream os;
  os << "item_" << std::setw(4) << std::setfill('0') << i;
  return os.str();
}

nlohmann::json trajectory_to_json(const MotionTrajectory& traj) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : traj.events)
    events.push_back({{"start_line", e.start_line},
                      {"dx", e.dx},
                      {"dy", e.dy},
                      {"theta", e.theta}});
  return events;
}

nlohmann::json load_manifest(const std::string& data_dir) {
  std::ifstream is(fs::path(data_dir) / "manifest.json");
  if (!is) throw io_error("cannot open manifest in " + data_dir);
  nlohmann::json j;
  is >> j;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot open for write: " + path.string());
  os << text;
  if (!os) throw io_error("write failed: " + path.string());
}

struct LoadedItem {
  std::string id;
  bool label = false;
  ComplexImage image;
  SensitivityMaps maps;
  KSpace kclean;
  KSpace kcorrupt;
  SamplingMask mask;
};

LoadedItem load_item(const std::string& data_dir, const nlohmann::json& entry) {
  const fs::path dir(data_dir);
  const auto& files = entry.at("files");
  LoadedItem item;
  item.id = entry.at("id").get<std::string>();
  item.label = entry.at("label").get<bool>();
  item.image = io::complex_image_from(io::load_blob((dir / files.at("image").get<std::string>()).string()));
  item.maps = io::maps_from(io::load_blob((dir / files.at("maps").get<std::string>()).string()));
  item.kclean = io::kspace_from(io::load_blob((dir / files.at("kclean").get<std::string>()).string()));
  item.kcorrupt = io::kspace_from(io::load_blob((dir / files.at("kcorrupt").get<std::string>()).string()));
  item.mask = io::mask_from(io::load_blob((dir / files.at("mask").get<std::string>()).string()));
  return item;
}

}  // namespace

void cmd_gen_data(const ExperimentConfig& config, int n_images,
                  const std::string& out_dir, bool balanced) {
  config.validate();
  if (n_images < 1) throw config_error("gen-data: n_images must be >= 1");

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  nlohmann::json manifest;
  manifest["config"] = config.to_json();
  manifest["balanced"] = balanced;
  manifest["n_items"] = n_images;
  manifest["items"] = nlohmann::json::array();

  const int n = config.image_size;
  for (int i = 0; i < n_images; ++i) {
    const uint64_t seed_i = config.seed ^ static_cast<uint64_t>(i);
    Rng rng(seed_i);

    const ComplexImage image = gen_phantom(seed_i, n, n, config.ellipses);
    const SensitivityMaps maps = gen_coil_maps(seed_i, config.coils, n, n);
    const SamplingMask mask =
        make_equispaced_mask(n, config.accel, config.center_fraction, seed_i);
    const KSpace kclean = forward_acquire(image, maps);

    MotionTrajectory traj;
    traj.n_lines = n;
    if (config.mode == ReconMode::varnet_mi) {
      if (balanced) {
        const bool want_motion = (i % 2) == 1;
        if (want_motion) {
          do {
            traj = sample_trajectory(rng, n, config.motion.max_events,
                                     config.motion.max_trans_px,
                                     config.motion.max_rot_deg);
          } while (traj.events.empty());
        }
      } else {
        traj = sample_trajectory(rng, n, config.motion.max_events,
                                 config.motion.max_trans_px, config.motion.max_rot_deg);
      }
    }
    const KSpace kcorrupt =
        traj.events.empty() ? kclean : corrupt_kspace(image, maps, traj);

    const std::string id = item_id(i);
    io::save_blob((dir / (id + "_image.ctns")).string(), io::to_blob(image));
    io::save_blob((dir / (id + "_maps.ctns")).string(), io::to_blob(maps));
    io::save_blob((dir / (id + "_kclean.ctns")).string(), io::to_blob(kclean));
    io::save_blob((dir / (id + "_kcorrupt.ctns")).string(), io::to_blob(kcorrupt));
    io::save_blob((dir / (id + "_mask.ctns")).string(), io::to_blob(mask));

    manifest["items"].push_back(
        {{"id", id},
         {"seed", seed_i},
         {"label", traj.label()},
         {"trajectory", trajectory_to_json(traj)},
         {"files",
          {{"image", id + "_image.ctns"},
           {"maps", id + "_maps.ctns"},
           {"kclean", id + "_kclean.ctns"},
           {"kcorrupt", id + "_kcorrupt.ctns"},
           {"mask", id + "_mask.ctns"}}}});
  }

  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

void cmd_train(const ExperimentConfig& config, const std::string& data_dir,
               const std::string& out_checkpoint) {
  config.validate();
  const nlohmann::json manifest = load_manifest(data_dir);
  const auto& entries = manifest.at("items");
  if (entries.empty()) throw io_error("train: dataset is empty");

  // preload the whole desk-scale dataset; items are cycled per step
  std::vector<TrainingItem> items;
  for (const auto& entry : entries) {
    LoadedItem li = load_item(data_dir, entry);
    items.push_back({std::move(li.image), std::move(li.maps), std::move(li.kclean),
                     std::move(li.mask)});
  }

  ReconModel model =
      ReconModel::init(config.mode, config.cascades, config.channels, config.seed);
  const ItemProvider provider = [&items](int step) {
    return items[static_cast<size_t>(step) % items.size()];
  };

  TrainResult result = train(model, provider, config.steps, config.lr, config.seed,
                             config.motion, &std::cerr);

  io::save_checkpoint(out_checkpoint, model, config.to_json(), config.steps);

  std::ostringstream csv;
  csv.precision(17);
  for (size_t i = 0; i < result.loss_curve.size(); ++i)
    csv << i << ',' << result.loss_curve[i] << '\n';
  write_text(out_checkpoint + ".loss.csv", csv.str());
}

void cmd_recon(const std::string& checkpoint, const std::string& kspace_file,
               const std::string& mask_file, const std::string& out_prefix) {
  const io::LoadedCheckpoint ck = io::load_checkpoint(checkpoint);
  const KSpace k = io::kspace_from(io::load_blob(kspace_file));
  const SamplingMask mask = io::mask_from(io::load_blob(mask_file));

  const ReconResult res = reconstruct(k, mask, ck.model);

  io::save_blob(out_prefix + "_image.ctns", io::to_blob(res.image));
  io::write_png_gray(out_prefix + ".png", res.image);

  nlohmann::json feats;
  feats["id"] = fs::path(out_prefix).filename().string();
  feats["mode"] = to_string(ck.model.mode);
  feats["cascades"] = ck.model.cascades;
  feats["features"] = res.features.values;
  write_text(out_prefix + "_features.json", feats.dump(2) + "\n");
}

void cmd_svm_train(const std::vector<std::string>& features_files,
                   const std::string& out_model, double lambda, int epochs,
                   uint64_t seed) {
  std::vector<MidcpFeatures> features;
  std::vector<bool> labels;
  for (const auto& path : features_files) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open features: " + path);
    nlohmann::json j;
    is >> j;
    if (!j.contains("label"))
      throw config_error("svm-train: features file lacks a label: " + path);
    features.push_back({j.at("features").get<std::vector<double>>()});
    labels.push_back(j.at("label").get<bool>());
  }

  const SvmModel model = svm_train(features, labels, lambda, epochs, seed);
  nlohmann::json j = {{"weights", model.weights},
                      {"bias", model.bias},
                      {"lambda", model.lambda},
                      {"means", model.means},
                      {"stds", model.stds}};
  write_text(out_model, j.dump(2) + "\n");
}

void cmd_detect(const std::string& svm_model,
                const std::vector<std::string>& features_files, std::ostream& out) {
  std::ifstream ms(svm_model);
  if (!ms) throw io_error("cannot open svm model: " + svm_model);
  nlohmann::json mj;
  ms >> mj;
  SvmModel model;
  model.weights = mj.at("weights").get<std::vector<double>>();
  model.bias = mj.at("bias").get<double>();
  model.lambda = mj.at("lambda").get<double>();
  model.means = mj.at("means").get<std::vector<double>>();
  model.stds = mj.at("stds").get<std::vector<double>>();

  ConfusionCounts counts;
  bool all_labeled = true;
  for (const auto& path : features_files) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open features: " + path);
    nlohmann::json j;
    is >> j;
    const MidcpFeatures f{j.at("features").get<std::vector<double>>()};
    const MotionCall call = svm_predict(model, f);
    const std::string id =
        j.contains("id") ? j.at("id").get<std::string>() : fs::path(path).stem().string();
    out << id << '\t' << (call == MotionCall::motion ? "yes" : "no") << '\n';

    if (j.contains("label")) {
      const bool truth = j.at("label").get<bool>();
      if (truth && call == MotionCall::motion) counts.tp++;
      else if (truth) counts.fn++;
      else if (call == MotionCall::motion) counts.fp++;
      else counts.tn++;
    } else {
      all_labeled = false;
    }
  }

  if (all_labeled && counts.total() > 0) {
    const ConfusionMetrics m = confusion_metrics(counts);
    auto fmt = [](const std::optional<double>& v) {
      return v ? std::to_string(*v) : std::string("undefined");
    };
    out << "counts\ttp=" << counts.tp << " tn=" << counts.tn << " fp=" << counts.fp
        << " fn=" << counts.fn << '\n';
    out << "accuracy\t" << fmt(m.accuracy) << '\n';
    out << "precision\t" << fmt(m.precision) << '\n';
    out << "sensitivity\t" << fmt(m.sensitivity) << '\n';
    out << "specificity\t" << fmt(m.specificity) << '\n';
    if (counts.tp + counts.fn > 0 && counts.tn + counts.fp > 0) {
      const auto nm = normalized_confusion(counts);
      out << "normalized_confusion\t" << nm[0][0] << ' ' << nm[0][1] << " / "
          << nm[1][0] << ' ' << nm[1][1] << '\n';
    }
  }
}

void cmd_eval(const std::string& checkpoint_a, const std::string& checkpoint_b,
              const std::string& test_dir, const std::string& out_report) {
  const io::LoadedCheckpoint ck_a = io::load_checkpoint(checkpoint_a);
  const io::LoadedCheckpoint ck_b = io::load_checkpoint(checkpoint_b);
  const nlohmann::json manifest = load_manifest(test_dir);

  struct Bucket {
    std::vector<std::pair<RealImage, RealImage>> pairs;
    std::vector<std::string> ids;
  };
  // four condition groups: model {a, b} x motion {true, false}
  Bucket buckets[2][2];

  for (const auto& entry : manifest.at("items")) {
    const LoadedItem item = load_item(test_dir, entry);
    const RealImage target = rss_combine(sense_expand(item.image, item.maps));
    const KSpace& input = item.label ? item.kcorrupt : item.kclean;

    const io::LoadedCheckpoint* cks[2] = {&ck_a, &ck_b};
    for (int m = 0; m < 2; ++m) {
      const ReconResult res = reconstruct(input, item.mask, cks[m]->model);
      Bucket& b = buckets[m][item.label ? 0 : 1];
      b.pairs.emplace_back(target, res.image);
      b.ids.push_back(item.id);
    }
  }

  const std::string names[2] = {"a:" + to_string(ck_a.model.mode),
                                "b:" + to_string(ck_b.model.mode)};
  nlohmann::json out;
  out["checkpoints"] = {{"a", checkpoint_a}, {"b", checkpoint_b}};
  out["groups"] = nlohmann::json::array();
  std::ostringstream csv;
  csv << "id,mode,motion,nmse_pct,psnr_db,ssim_pct\n";

  for (int m = 0; m < 2; ++m)
    for (int mo = 0; mo < 2; ++mo) {
      const Bucket& b = buckets[m][mo];
      if (b.pairs.empty()) continue;
      const MetricsReport rep =
          evaluate_batch(b.pairs, names[m], mo == 0, &b.ids);
      out["groups"].push_back(nlohmann::json::parse(report_to_json(rep)));
      const std::string full_csv = report_to_csv(rep);
      csv << full_csv.substr(full_csv.find('\n') + 1);  // drop header
    }

  write_text(out_report, out.dump(2) + "\n");
  write_text(out_report + ".csv", csv.str());
}

void cmd_report(const std::string& report_json, std::ostream& out) {
  std::ifstream is(report_json);
  if (!is) throw io_error("cannot open report: " + report_json);
  nlohmann::json j;
  is >> j;

  out << "condition grid (mean +/- std over items)\n";
  for (const auto& g : j.at("groups")) {
    const MetricsReport rep = report_from_json(g.dump());

    // recompute aggregates from rows as a consistency check
    std::vector<double> nm, ps, ss;
    for (const auto& row : rep.rows)
      if (!row.failed) {
        nm.push_back(row.nmse_pct);
        ps.push_back(row.psnr_db);
        ss.push_back(row.ssim_pct);
      }
    auto mean = [](const std::vector<double>& v) {
      double a = 0;
      for (double x : v) a += x;
      return v.empty() ? 0.0 : a / static_cast<double>(v.size());
    };
    const double dn = std::abs(mean(nm) - rep.nmse_pct.mean);
    const double ds = std::abs(mean(ss) - rep.ssim_pct.mean);
    if (dn > 1e-9 || ds > 1e-9)
      throw io_error("report: stored aggregates disagree with rows");

    out << "  " << rep.mode << (rep.motion ? " / motion   " : " / no-motion")
        << "  n=" << rep.rows.size() << "  NMSE% " << rep.nmse_pct.mean << " +/- "
        << rep.nmse_pct.stddev << "  PSNR " << rep.psnr_db.mean << " +/- "
        << rep.psnr_db.stddev << "  SSIM% " << rep.ssim_pct.mean << " +/- "
        << rep.ssim_pct.stddev << '\n';
  }
}

}  // namespace mri::cli
