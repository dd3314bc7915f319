#include "mri/io/tensor_container.hpp"

#include <cstring>
#include <fstream>

namespace mri::io {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'N', 'S'};
constexpr uint8_t kVersion = 1;

void put_u64le(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t get_u64le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

TensorBlob make_c128(std::vector<uint64_t> dims, const std::vector<cplx>& data) {
  TensorBlob b;
  b.dtype = Dtype::c128;
  b.dims = std::move(dims);
  b.payload.resize(data.size() * sizeof(cplx));
  for (size_t i = 0; i < data.size(); ++i) {
    const double re = data[i].real(), im = data[i].imag();
    std::memcpy(b.payload.data() + 16 * i, &re, 8);
    std::memcpy(b.payload.data() + 16 * i + 8, &im, 8);
  }
  return b;
}

std::vector<cplx> c128_data(const TensorBlob& b) {
  if (b.dtype != Dtype::c128) throw io_error("tensor: expected c128 dtype");
  std::vector<cplx> out(b.payload.size() / sizeof(cplx));
  for (size_t i = 0; i < out.size(); ++i) {
    double re, im;
    std::memcpy(&re, b.payload.data() + 16 * i, 8);
    std::memcpy(&im, b.payload.data() + 16 * i + 8, 8);
    out[i] = cplx(re, im);
  }
  return out;
}

}  // namespace

size_t dtype_size(Dtype d) {
  switch (d) {
    case Dtype::f32: return 4;
    case Dtype::f64: return 8;
    case Dtype::c64: return 8;
    case Dtype::c128: return 16;
  }
  throw io_error("tensor: unknown dtype");
}

void write_blob(std::ostream& os, const TensorBlob& blob) {
  if (blob.payload.size() != blob.count() * dtype_size(blob.dtype))
    throw io_error("tensor: payload size does not match dims");
  os.write(kMagic, 4);
  const uint8_t head[4] = {kVersion, static_cast<uint8_t>(blob.dtype),
                           static_cast<uint8_t>(blob.dims.size()), 0};
  os.write(reinterpret_cast<const char*>(head), 4);
  for (uint64_t d : blob.dims) put_u64le(os, d);
  os.write(reinterpret_cast<const char*>(blob.payload.data()),
           static_cast<std::streamsize>(blob.payload.size()));
  if (!os) throw io_error("tensor: write failed");
}

TensorBlob read_blob(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw io_error("tensor: bad magic");
  uint8_t head[4];
  is.read(reinterpret_cast<char*>(head), 4);
  if (!is || head[0] != kVersion) throw io_error("tensor: unsupported version");
  if (head[1] > 3) throw io_error("tensor: unknown dtype");
  if (head[3] != 0) throw io_error("tensor: nonzero reserved byte");

  TensorBlob b;
  b.dtype = static_cast<Dtype>(head[1]);
  b.dims.resize(head[2]);
  for (auto& d : b.dims) d = get_u64le(is);
  b.payload.resize(b.count() * dtype_size(b.dtype));
  is.read(reinterpret_cast<char*>(b.payload.data()),
          static_cast<std::streamsize>(b.payload.size()));
  if (!is) throw io_error("tensor: truncated payload");
  return b;
}

void save_blob(const std::string& path, const TensorBlob& blob) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot open for write: " + path);
  write_blob(os, blob);
}

TensorBlob load_blob(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open for read: " + path);
  return read_blob(is);
}

TensorBlob to_blob(const ComplexImage& img) {
  return make_c128({static_cast<uint64_t>(img.h), static_cast<uint64_t>(img.w)}, img.data);
}

TensorBlob to_blob(const CoilImages& imgs) {
  return make_c128({static_cast<uint64_t>(imgs.c), static_cast<uint64_t>(imgs.h),
                    static_cast<uint64_t>(imgs.w)},
                   imgs.data);
}

TensorBlob to_blob(const KSpace& k) {
  return make_c128({static_cast<uint64_t>(k.c), static_cast<uint64_t>(k.h),
                    static_cast<uint64_t>(k.w)},
                   k.data);
}

TensorBlob to_blob(const SensitivityMaps& maps) {
  return make_c128({static_cast<uint64_t>(maps.c), static_cast<uint64_t>(maps.h),
                    static_cast<uint64_t>(maps.w)},
                   maps.data);
}

TensorBlob to_blob(const RealImage& img) {
  TensorBlob b;
  b.dtype = Dtype::f64;
  b.dims = {static_cast<uint64_t>(img.h), static_cast<uint64_t>(img.w)};
  b.payload.resize(img.data.size() * sizeof(double));
  std::memcpy(b.payload.data(), img.data.data(), b.payload.size());
  return b;
}

TensorBlob to_blob(const SamplingMask& mask) {
  TensorBlob b;
  b.dtype = Dtype::f64;
  b.dims = {static_cast<uint64_t>(mask.w)};
  std::vector<double> cols(mask.cols.begin(), mask.cols.end());
  b.payload.resize(cols.size() * sizeof(double));
  std::memcpy(b.payload.data(), cols.data(), b.payload.size());
  return b;
}

ComplexImage complex_image_from(const TensorBlob& b) {
  if (b.dims.size() != 2) throw io_error("tensor: expected 2-d complex image");
  ComplexImage img(static_cast<int>(b.dims[0]), static_cast<int>(b.dims[1]));
  img.data = c128_data(b);
  return img;
}

KSpace kspace_from(const TensorBlob& b) {
  if (b.dims.size() != 3) throw io_error("tensor: expected 3-d k-space");
  KSpace k(static_cast<int>(b.dims[0]), static_cast<int>(b.dims[1]),
           static_cast<int>(b.dims[2]));
  k.data = c128_data(b);
  return k;
}

SensitivityMaps maps_from(const TensorBlob& b) {
  if (b.dims.size() != 3) throw io_error("tensor: expected 3-d maps");
  SensitivityMaps m(static_cast<int>(b.dims[0]), static_cast<int>(b.dims[1]),
                    static_cast<int>(b.dims[2]));
  m.data = c128_data(b);
  return m;
}

RealImage real_image_from(const TensorBlob& b) {
  if (b.dtype != Dtype::f64 || b.dims.size() != 2)
    throw io_error("tensor: expected 2-d f64 image");
  RealImage img(static_cast<int>(b.dims[0]), static_cast<int>(b.dims[1]));
  std::memcpy(img.data.data(), b.payload.data(), b.payload.size());
  return img;
}

SamplingMask mask_from(const TensorBlob& b) {
  if (b.dtype != Dtype::f64 || b.dims.size() != 1)
    throw io_error("tensor: expected 1-d f64 mask");
  const int w = static_cast<int>(b.dims[0]);
  std::vector<double> cols(static_cast<size_t>(w));
  std::memcpy(cols.data(), b.payload.data(), b.payload.size());

  SamplingMask m;
  m.w = w;
  m.cols.resize(static_cast<size_t>(w));
  for (int i = 0; i < w; ++i) m.cols[static_cast<size_t>(i)] = cols[static_cast<size_t>(i)] != 0.0;

  // recover the ACS fraction from the contiguous sampled run through center
  const int mid = w / 2;
  int lo = mid, hi = mid;
  if (m.cols[static_cast<size_t>(mid)]) {
    while (lo > 0 && m.cols[static_cast<size_t>(lo - 1)]) --lo;
    while (hi + 1 < w && m.cols[static_cast<size_t>(hi + 1)]) ++hi;
    m.center_fraction = static_cast<double>(hi - lo + 1) / w;
  }
  m.accel = 0;  // unknown; informational only
  return m;
}

}  // namespace mri::io
