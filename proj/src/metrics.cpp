#include "mri/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace mri {

namespace {

void require_match(const RealImage& a, const RealImage& b) {
  if (a.h != b.h || a.w != b.w) throw shape_error("metrics: shape mismatch");
}

Aggregate aggregate(const std::vector<double>& v) {
  Aggregate a;
  if (v.empty()) return a;
  for (double x : v) a.mean += x;
  a.mean /= static_cast<double>(v.size());
  if (v.size() == 1) return a;
  double acc = 0.0;
  for (double x : v) acc += (x - a.mean) * (x - a.mean);
  a.stddev = std::sqrt(acc / static_cast<double>(v.size()));
  return a;
}

nlohmann::json num_or_marker(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double from_marker(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double nmse(const RealImage& ref, const RealImage& img) {
  require_match(ref, img);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < ref.data.size(); ++i) {
    const double d = ref.data[i] - img.data[i];
    num += d * d;
    den += ref.data[i] * ref.data[i];
  }
  if (den <= 0.0) throw config_error("nmse: zero reference");
  return std::sqrt(num) / std::sqrt(den);
}

double psnr(const RealImage& ref, const RealImage& img) {
  require_match(ref, img);
  double max_ref = 0.0, acc = 0.0;
  for (size_t i = 0; i < ref.data.size(); ++i) {
    max_ref = std::max(max_ref, ref.data[i]);
    const double d = ref.data[i] - img.data[i];
    acc += d * d;
  }
  const double rmse = std::sqrt(acc / static_cast<double>(ref.data.size()));
  if (rmse == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(max_ref / rmse);
}

double ssim_metric(const RealImage& ref, const RealImage& img) {
  return nn::ssim(ref, img);
}

MetricsReport evaluate_batch(const std::vector<std::pair<RealImage, RealImage>>& pairs,
                             const std::string& mode_label, bool motion_label,
                             const std::vector<std::string>* ids) {
  if (pairs.empty()) throw config_error("evaluate_batch: empty batch");

  MetricsReport rep;
  rep.mode = mode_label;
  rep.motion = motion_label;
  std::vector<double> nmses, psnrs, ssims;

  for (size_t i = 0; i < pairs.size(); ++i) {
    MetricRow row;
    row.id = ids ? (*ids)[i] : "item_" + std::to_string(i);
    row.mode = mode_label;
    row.motion = motion_label;
    try {
      const RealImage& ref = pairs[i].first;
      const RealImage& img = pairs[i].second;
      double peak = 0.0;
      for (double v : ref.data) peak = std::max(peak, v);
      if (peak <= 0.0) throw config_error("evaluate_batch: zero reference");
      RealImage nref = ref, nimg = img;
      for (double& v : nref.data) v /= peak;
      for (double& v : nimg.data) v /= peak;

      row.nmse_pct = 100.0 * nmse(nref, nimg);
      row.psnr_db = psnr(nref, nimg);
      row.ssim_pct = 100.0 * ssim_metric(nref, nimg);
      nmses.push_back(row.nmse_pct);
      psnrs.push_back(row.psnr_db);
      ssims.push_back(row.ssim_pct);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    rep.rows.push_back(std::move(row));
  }

  rep.nmse_pct = aggregate(nmses);
  rep.psnr_db = aggregate(psnrs);
  rep.ssim_pct = aggregate(ssims);
  return rep;
}

std::string report_to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["mode"] = r.mode;
  j["motion"] = r.motion;
  j["aggregates"] = {
      {"nmse_pct", {{"mean", num_or_marker(r.nmse_pct.mean)}, {"std", num_or_marker(r.nmse_pct.stddev)}}},
      {"psnr_db", {{"mean", num_or_marker(r.psnr_db.mean)}, {"std", num_or_marker(r.psnr_db.stddev)}}},
      {"ssim_pct", {{"mean", num_or_marker(r.ssim_pct.mean)}, {"std", num_or_marker(r.ssim_pct.stddev)}}},
  };
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json jr;
    jr["id"] = row.id;
    jr["mode"] = row.mode;
    jr["motion"] = row.motion;
    jr["failed"] = row.failed;
    if (row.failed) {
      jr["error"] = row.error;
    } else {
      jr["nmse_pct"] = num_or_marker(row.nmse_pct);
      jr["psnr_db"] = num_or_marker(row.psnr_db);
      jr["ssim_pct"] = num_or_marker(row.ssim_pct);
    }
    j["rows"].push_back(std::move(jr));
  }
  return j.dump(2);
}

MetricsReport report_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  MetricsReport r;
  r.mode = j.at("mode").get<std::string>();
  r.motion = j.at("motion").get<bool>();
  const auto& ag = j.at("aggregates");
  r.nmse_pct = {from_marker(ag.at("nmse_pct").at("mean")), from_marker(ag.at("nmse_pct").at("std"))};
  r.psnr_db = {from_marker(ag.at("psnr_db").at("mean")), from_marker(ag.at("psnr_db").at("std"))};
  r.ssim_pct = {from_marker(ag.at("ssim_pct").at("mean")), from_marker(ag.at("ssim_pct").at("std"))};
  for (const auto& jr : j.at("rows")) {
    MetricRow row;
    row.id = jr.at("id").get<std::string>();
    row.mode = jr.at("mode").get<std::string>();
    row.motion = jr.at("motion").get<bool>();
    row.failed = jr.at("failed").get<bool>();
    if (row.failed) {
      row.error = jr.at("error").get<std::string>();
    } else {
      row.nmse_pct = from_marker(jr.at("nmse_pct"));
      row.psnr_db = from_marker(jr.at("psnr_db"));
      row.ssim_pct = from_marker(jr.at("ssim_pct"));
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::string report_to_csv(const MetricsReport& r) {
  std::ostringstream os;
  os << "id,mode,motion,nmse_pct,psnr_db,ssim_pct\n";
  os.precision(17);
  for (const auto& row : r.rows) {
    if (row.failed) continue;
    os << row.id << ',' << row.mode << ',' << (row.motion ? 1 : 0) << ','
       << row.nmse_pct << ',' << row.psnr_db << ',' << row.ssim_pct << '\n';
  }
  return os.str();
}

}  // namespace mri
