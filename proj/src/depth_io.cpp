#include "podc/depth_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace podc {
namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature = {137, 80, 78, 71, 13, 10, 26, 10};

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what,
                       std::size_t offset) {
  throw std::runtime_error("depth_io: " + path.string() + ": " + what + " at offset " +
                           std::to_string(offset));
}

void append_be32(std::vector<std::uint8_t>& out, std::uint32_t value) {
  out.push_back(static_cast<std::uint8_t>(value >> 24));
  out.push_back(static_cast<std::uint8_t>(value >> 16));
  out.push_back(static_cast<std::uint8_t>(value >> 8));
  out.push_back(static_cast<std::uint8_t>(value));
}

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
         std::uint32_t(p[3]);
}

void append_le32(std::vector<std::uint8_t>& out, std::uint32_t value) {
  out.push_back(static_cast<std::uint8_t>(value));
  out.push_back(static_cast<std::uint8_t>(value >> 8));
  out.push_back(static_cast<std::uint8_t>(value >> 16));
  out.push_back(static_cast<std::uint8_t>(value >> 24));
}

std::uint32_t read_le32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& data) {
  append_be32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + data.size()));
  append_be32(out, static_cast<std::uint32_t>(crc));
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error("depth_io: cannot open " + path.string() + " for writing");
  }
  file.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  if (!file) {
    throw std::runtime_error("depth_io: short write to " + path.string());
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary | std::ios::ate);
  if (!file) {
    throw std::runtime_error("depth_io: cannot open " + path.string());
  }
  const std::streamsize size = file.tellg();
  file.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  file.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!file) {
    throw std::runtime_error("depth_io: short read from " + path.string());
  }
  return bytes;
}

void write_gray16_png(const std::filesystem::path& path, const Grid<std::uint16_t>& raw) {
  const int width = raw.cols();
  const int height = raw.rows();

  // Scanlines: filter byte 0 followed by big-endian 16-bit samples.
  std::vector<std::uint8_t> scanlines;
  scanlines.reserve(static_cast<std::size_t>(height) * (1 + 2 * width));
  for (int v = 0; v < height; ++v) {
    scanlines.push_back(0);
    for (int u = 0; u < width; ++u) {
      const std::uint16_t value = raw.at(v, u);
      scanlines.push_back(static_cast<std::uint8_t>(value >> 8));
      scanlines.push_back(static_cast<std::uint8_t>(value & 0xFF));
    }
  }

  uLongf compressed_size = compressBound(static_cast<uLong>(scanlines.size()));
  std::vector<std::uint8_t> compressed(compressed_size);
  if (compress2(compressed.data(), &compressed_size, scanlines.data(),
                static_cast<uLong>(scanlines.size()), Z_DEFAULT_COMPRESSION) != Z_OK) {
    throw std::runtime_error("depth_io: zlib compression failed for " + path.string());
  }
  compressed.resize(compressed_size);

  std::vector<std::uint8_t> ihdr;
  append_be32(ihdr, static_cast<std::uint32_t>(width));
  append_be32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(16);  // bit depth
  ihdr.push_back(0);   // grayscale
  ihdr.push_back(0);   // deflate
  ihdr.push_back(0);   // adaptive filtering
  ihdr.push_back(0);   // no interlace

  std::vector<std::uint8_t> png(kPngSignature.begin(), kPngSignature.end());
  append_chunk(png, "IHDR", ihdr);
  append_chunk(png, "IDAT", compressed);
  append_chunk(png, "IEND", {});
  write_file(path, png);
}

std::uint8_t paeth_predictor(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

Grid<std::uint16_t> read_gray16_png(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);

  if (bytes.size() < kPngSignature.size() ||
      !std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
    fail(path, "not a PNG file (bad signature)", 0);
  }

  std::size_t pos = kPngSignature.size();
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  bool have_ihdr = false;
  std::vector<std::uint8_t> idat;

  while (true) {
    if (pos + 8 > bytes.size()) fail(path, "truncated chunk header", pos);
    const std::uint32_t length = read_be32(&bytes[pos]);
    char type[5] = {0};
    std::memcpy(type, &bytes[pos + 4], 4);
    if (pos + 12 + length > bytes.size()) fail(path, "truncated chunk body", pos);

    const uLong crc = crc32(0L, &bytes[pos + 4], 4 + length);
    const std::uint32_t stored_crc = read_be32(&bytes[pos + 8 + length]);
    if (static_cast<std::uint32_t>(crc) != stored_crc) {
      fail(path, std::string("bad CRC for chunk '") + type + "'", pos + 8 + length);
    }

    const std::uint8_t* data = &bytes[pos + 8];
    if (std::strcmp(type, "IHDR") == 0) {
      if (length != 13) fail(path, "IHDR has wrong length", pos);
      width = read_be32(data);
      height = read_be32(data + 4);
      const std::uint8_t bit_depth = data[8];
      const std::uint8_t color_type = data[9];
      const std::uint8_t interlace = data[12];
      if (bit_depth != 16 || color_type != 0) {
        fail(path, "unsupported PNG (need 16-bit grayscale)", pos + 8);
      }
      if (interlace != 0) fail(path, "interlaced PNG not supported", pos + 8 + 12);
      if (width == 0 || height == 0) fail(path, "zero-sized image", pos + 8);
      have_ihdr = true;
    } else if (std::strcmp(type, "IDAT") == 0) {
      if (!have_ihdr) fail(path, "IDAT before IHDR", pos);
      idat.insert(idat.end(), data, data + length);
    } else if (std::strcmp(type, "IEND") == 0) {
      break;
    }
    // Ancillary chunks are skipped.
    pos += 12 + length;
  }

  if (!have_ihdr) fail(path, "missing IHDR", pos);
  if (idat.empty()) fail(path, "missing IDAT", pos);

  const std::size_t row_bytes = 1 + 2 * static_cast<std::size_t>(width);
  const std::size_t expected = row_bytes * height;
  std::vector<std::uint8_t> raw(expected);
  uLongf raw_size = static_cast<uLongf>(expected);
  if (uncompress(raw.data(), &raw_size, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
      raw_size != expected) {
    fail(path, "corrupt IDAT stream", pos);
  }

  // Undo per-row filters (bytes per pixel = 2).
  Grid<std::uint16_t> image(static_cast<int>(height), static_cast<int>(width), 0);
  std::vector<std::uint8_t> previous(2 * width, 0);
  std::vector<std::uint8_t> current(2 * width, 0);
  for (std::uint32_t v = 0; v < height; ++v) {
    const std::uint8_t* row = &raw[v * row_bytes];
    const std::uint8_t filter = row[0];
    for (std::size_t i = 0; i < 2 * width; ++i) {
      const int left = i >= 2 ? current[i - 2] : 0;
      const int up = previous[i];
      const int up_left = i >= 2 ? previous[i - 2] : 0;
      int value = row[1 + i];
      switch (filter) {
        case 0: break;
        case 1: value += left; break;
        case 2: value += up; break;
        case 3: value += (left + up) / 2; break;
        case 4: value += paeth_predictor(left, up, up_left); break;
        default: fail(path, "unknown scanline filter " + std::to_string(filter), v * row_bytes);
      }
      current[i] = static_cast<std::uint8_t>(value & 0xFF);
    }
    for (std::uint32_t u = 0; u < width; ++u) {
      image.at(static_cast<int>(v), static_cast<int>(u)) =
          static_cast<std::uint16_t>((current[2 * u] << 8) | current[2 * u + 1]);
    }
    std::swap(previous, current);
  }
  return image;
}

}  // namespace

void write_depth_png16(const std::filesystem::path& path, const DepthMap& depth) {
  Grid<std::uint16_t> raw(depth.rows(), depth.cols(), 0);
  for (int v = 0; v < depth.rows(); ++v) {
    for (int u = 0; u < depth.cols(); ++u) {
      const double d = depth.at(v, u);
      if (!is_valid(d)) continue;
      const long long value = std::llround(d * 256.0);
      raw.at(v, u) = static_cast<std::uint16_t>(std::clamp<long long>(value, 0, 65535));
    }
  }
  write_gray16_png(path, raw);
}

DepthMap read_depth_png16(const std::filesystem::path& path) {
  const Grid<std::uint16_t> raw = read_gray16_png(path);
  DepthMap depth(raw.rows(), raw.cols(), 0.0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != 0) depth[i] = static_cast<double>(raw[i]) / 256.0;
  }
  return depth;
}

void write_unit_png16(const std::filesystem::path& path, const Grid<double>& map) {
  Grid<std::uint16_t> raw(map.rows(), map.cols(), 0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double clamped = std::clamp(map[i], 0.0, 1.0);
    raw[i] = static_cast<std::uint16_t>(std::llround(clamped * 65535.0));
  }
  write_gray16_png(path, raw);
}

void write_float_map(const std::filesystem::path& path, const Grid<double>& map) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(12 + 4 * map.size());
  bytes.insert(bytes.end(), {'P', 'O', 'D', 'F'});
  append_le32(bytes, static_cast<std::uint32_t>(map.cols()));
  append_le32(bytes, static_cast<std::uint32_t>(map.rows()));
  for (double value : map) {
    const float f = static_cast<float>(value);
    std::uint32_t word;
    std::memcpy(&word, &f, 4);
    append_le32(bytes, word);
  }
  write_file(path, bytes);
}

Grid<double> read_float_map(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "PODF", 4) != 0) {
    fail(path, "not a PODF float map (bad magic)", 0);
  }
  const std::uint32_t width = read_le32(&bytes[4]);
  const std::uint32_t height = read_le32(&bytes[8]);
  const std::size_t expected = 12 + 4 * static_cast<std::size_t>(width) * height;
  if (bytes.size() != expected) {
    fail(path, "size does not match header (expected " + std::to_string(expected) + " bytes)",
         bytes.size() < expected ? bytes.size() : expected);
  }
  Grid<double> map(static_cast<int>(height), static_cast<int>(width), 0.0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const std::uint32_t word = read_le32(&bytes[12 + 4 * i]);
    float f;
    std::memcpy(&f, &word, 4);
    map[i] = static_cast<double>(f);
  }
  return map;
}

}  // namespace podc
