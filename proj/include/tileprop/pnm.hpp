#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tileprop {

/// Interleaved row-major raster with 1 (gray) or 3 (RGB) channels of 8- or
/// 16-bit samples.
class RasterImage {
 public:
  RasterImage(int width, int height, int channels, int depth);
  RasterImage(int width, int height, int channels, int depth, std::vector<std::uint16_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  int depth() const { return depth_; }
  std::uint16_t max_value() const { return static_cast<std::uint16_t>((1u << depth_) - 1); }

  std::uint16_t at(int x, int y, int c = 0) const { return samples_[index(x, y, c)]; }
  void set(int x, int y, int c, std::uint16_t v) { samples_[index(x, y, c)] = v; }

  const std::vector<std::uint16_t>& samples() const { return samples_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_;
  int height_;
  int channels_;
  int depth_;
  std::vector<std::uint16_t> samples_;
};

/// Parses binary PGM (P5) or PPM (P6). The header is `magic width height
/// maxval` separated by whitespace (`#` comments allowed between fields),
/// followed by exactly one whitespace byte and the raw payload. Samples are
/// big-endian when maxval > 255.
RasterImage decode_pnm(std::string_view bytes);

/// Serializes as P5/P6 with maxval 2^depth − 1.
std::string encode_pnm(const RasterImage& image);

RasterImage read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const RasterImage& image);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace tileprop
