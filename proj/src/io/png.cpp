#include "mri/io/png.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <fstream>

namespace mri::io {

namespace {

void put_u32be(std::vector<unsigned char>& out, uint32_t v) {
  out.push_back(static_cast<unsigned char>(v >> 24));
  out.push_back(static_cast<unsigned char>(v >> 16));
  out.push_back(static_cast<unsigned char>(v >> 8));
  out.push_back(static_cast<unsigned char>(v));
}

void write_chunk(std::ofstream& os, const char type[4],
                 const std::vector<unsigned char>& data) {
  std::vector<unsigned char> head;
  put_u32be(head, static_cast<uint32_t>(data.size()));
  os.write(reinterpret_cast<const char*>(head.data()), 4);
  os.write(type, 4);
  if (!data.empty())
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size()));
  uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(type), 4);
  if (!data.empty()) crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
  std::vector<unsigned char> tail;
  put_u32be(tail, static_cast<uint32_t>(crc));
  os.write(reinterpret_cast<const char*>(tail.data()), 4);
}

}  // namespace

void write_png_gray(const std::string& path, const RealImage& img) {
  double peak = 0.0;
  for (double v : img.data) peak = std::max(peak, std::abs(v));
  const double scale = peak > 0.0 ? 255.0 / peak : 0.0;

  // filter byte 0 per row
  std::vector<unsigned char> raw;
  raw.reserve(static_cast<size_t>(img.h) * (img.w + 1));
  for (int r = 0; r < img.h; ++r) {
    raw.push_back(0);
    for (int c = 0; c < img.w; ++c) {
      const double v = std::abs(img.at(r, c)) * scale;
      raw.push_back(static_cast<unsigned char>(std::min(255.0, std::max(0.0, v + 0.5))));
    }
  }

  uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> comp(comp_len);
  if (compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
    throw io_error("png: deflate failed");
  comp.resize(comp_len);

  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot open for write: " + path);
  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  os.write(reinterpret_cast<const char*>(sig), 8);

  std::vector<unsigned char> ihdr;
  put_u32be(ihdr, static_cast<uint32_t>(img.w));
  put_u32be(ihdr, static_cast<uint32_t>(img.h));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(0);  // grayscale
  ihdr.push_back(0);  // deflate
  ihdr.push_back(0);  // filter method
  ihdr.push_back(0);  // no interlace
  write_chunk(os, "IHDR", ihdr);
  write_chunk(os, "IDAT", comp);
  write_chunk(os, "IEND", {});
  if (!os) throw io_error("png write failed: " + path);
}

PngInfo read_png_info(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open: " + path);
  unsigned char buf[33];
  is.read(reinterpret_cast<char*>(buf), 33);
  if (!is) throw io_error("png: truncated file");
  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (std::memcmp(buf, sig, 8) != 0) throw io_error("png: bad signature");
  if (std::memcmp(buf + 12, "IHDR", 4) != 0) throw io_error("png: missing IHDR");
  auto u32 = [&](int off) {
    return (static_cast<uint32_t>(buf[off]) << 24) |
           (static_cast<uint32_t>(buf[off + 1]) << 16) |
           (static_cast<uint32_t>(buf[off + 2]) << 8) | buf[off + 3];
  };
  PngInfo info;
  info.width = u32(16);
  info.height = u32(20);
  info.bit_depth = buf[24];
  info.color_type = buf[25];
  return info;
}

}  // namespace mri::io
