#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mri/types.hpp"

namespace mri::io {

// Binary tensor container:
//   magic "CTNS" | version u8 = 1 | dtype u8 | ndim u8 | reserved u8 = 0 |
//   dims ndim x u64 LE | payload row-major LE (complex interleaved re, im)
enum class Dtype : uint8_t { f32 = 0, f64 = 1, c64 = 2, c128 = 3 };

size_t dtype_size(Dtype d);

struct TensorBlob {
  Dtype dtype = Dtype::f64;
  std::vector<uint64_t> dims;
  std::vector<unsigned char> payload;

  uint64_t count() const {
    uint64_t n = 1;
    for (uint64_t d : dims) n *= d;
    return n;
  }
};

void write_blob(std::ostream& os, const TensorBlob& blob);
TensorBlob read_blob(std::istream& is);  // throws io_error on bad magic/version

void save_blob(const std::string& path, const TensorBlob& blob);
TensorBlob load_blob(const std::string& path);

// domain-type adapters (all f64/c128)
TensorBlob to_blob(const ComplexImage& img);
TensorBlob to_blob(const CoilImages& imgs);
TensorBlob to_blob(const KSpace& k);
TensorBlob to_blob(const SensitivityMaps& maps);
TensorBlob to_blob(const RealImage& img);
TensorBlob to_blob(const SamplingMask& mask);  // f64 [w] of 0/1

ComplexImage complex_image_from(const TensorBlob& b);
KSpace kspace_from(const TensorBlob& b);
SensitivityMaps maps_from(const TensorBlob& b);
RealImage real_image_from(const TensorBlob& b);
// center_fraction is recovered from the contiguous fully-sampled center run
SamplingMask mask_from(const TensorBlob& b);

}  // namespace mri::io
