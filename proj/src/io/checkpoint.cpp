#include "mri/io/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "mri/io/tensor_container.hpp"

namespace mri::io {

namespace {
constexpr char kMagic[4] = {'M', 'I', 'C', 'P'};
constexpr uint8_t kVersion = 1;
}  // namespace

void save_checkpoint(const std::string& path, const ReconModel& model,
                     const nlohmann::json& config, long step) {
  const auto named = model.named_parameters();

  nlohmann::json header;
  header["mode"] = to_string(model.mode);
  header["cascades"] = model.cascades;
  header["channels"] = model.channels;
  header["midcp_standardize"] = model.midcp_standardize;
  header["midcp_lr_scale"] = model.midcp_lr_scale;
  header["step"] = step;
  header["config"] = config;
  header["tensors"] = nlohmann::json::array();
  for (const auto& [name, t] : named)
    header["tensors"].push_back({{"name", name}, {"shape", t->shape}});
  const std::string htext = header.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot open checkpoint for write: " + path);
  os.write(kMagic, 4);
  os.put(static_cast<char>(kVersion));
  const uint32_t hlen = static_cast<uint32_t>(htext.size());
  unsigned char lb[4];
  for (int i = 0; i < 4; ++i) lb[i] = static_cast<unsigned char>(hlen >> (8 * i));
  os.write(reinterpret_cast<const char*>(lb), 4);
  os.write(htext.data(), static_cast<std::streamsize>(htext.size()));

  for (const auto& [name, t] : named) {
    TensorBlob blob;
    blob.dtype = Dtype::f64;
    for (int d : t->shape) blob.dims.push_back(static_cast<uint64_t>(d));
    blob.payload.resize(t->value.size() * sizeof(double));
    std::memcpy(blob.payload.data(), t->value.data(), blob.payload.size());
    write_blob(os, blob);
  }
  if (!os) throw io_error("checkpoint write failed: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open checkpoint: " + path);

  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw io_error("checkpoint: bad magic");
  const int version = is.get();
  if (version != kVersion) throw io_error("checkpoint: unsupported version");
  unsigned char lb[4];
  is.read(reinterpret_cast<char*>(lb), 4);
  uint32_t hlen = 0;
  for (int i = 0; i < 4; ++i) hlen |= static_cast<uint32_t>(lb[i]) << (8 * i);
  std::string htext(hlen, '\0');
  is.read(htext.data(), hlen);
  if (!is) throw io_error("checkpoint: truncated header");

  const nlohmann::json header = nlohmann::json::parse(htext);
  LoadedCheckpoint out;
  out.config = header.at("config");
  out.step = header.at("step").get<long>();
  out.model = ReconModel::init(recon_mode_from_string(header.at("mode").get<std::string>()),
                               header.at("cascades").get<int>(),
                               header.at("channels").get<int>(), /*seed=*/0);
  out.model.midcp_standardize = header.value("midcp_standardize", true);
  out.model.midcp_lr_scale = header.value("midcp_lr_scale", 1.0);

  const auto named = out.model.named_parameters();
  const auto& tensors = header.at("tensors");
  if (tensors.size() != named.size())
    throw io_error("checkpoint: tensor count mismatch");

  for (size_t i = 0; i < named.size(); ++i) {
    const auto& [name, t] = named[i];
    if (tensors[i].at("name").get<std::string>() != name)
      throw io_error("checkpoint: unexpected tensor name " + name);
    TensorBlob blob = read_blob(is);
    if (blob.dtype != Dtype::f64 || blob.count() != t->value.size())
      throw io_error("checkpoint: tensor shape mismatch for " + name);
    std::memcpy(t->value.data(), blob.payload.data(), blob.payload.size());
  }
  return out;
}

}  // namespace mri::io
