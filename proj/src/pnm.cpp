#include "tileprop/pnm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>

#include "tileprop/error.hpp"

namespace tileprop {

RasterImage::RasterImage(int width, int height, int channels, int depth)
    : RasterImage(width, height, channels, depth,
                  std::vector<std::uint16_t>(static_cast<std::size_t>(width > 0 ? width : 0) *
                                             (height > 0 ? height : 0) *
                                             (channels > 0 ? channels : 0))) {}

RasterImage::RasterImage(int width, int height, int channels, int depth,
                         std::vector<std::uint16_t> samples)
    : width_(width), height_(height), channels_(channels), depth_(depth), samples_(std::move(samples)) {
  if (width <= 0 || height <= 0) throw DimensionError("image dimensions must be positive");
  if (channels != 1 && channels != 3) throw ValidationError("channels must be 1 or 3");
  if (depth != 8 && depth != 16) throw ValidationError("depth must be 8 or 16");
  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  if (samples_.size() != n) {
    throw DimensionError("sample buffer has " + std::to_string(samples_.size()) + " samples, expected " +
                         std::to_string(n));
  }
  if (depth == 8) {
    for (auto s : samples_) {
      if (s > 255) throw ValidationError("sample exceeds 8-bit range");
    }
  }
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  long next_int() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) throw CorruptionError("PNM header value out of range");
      ++pos_;
    }
    if (pos_ == start) throw CorruptionError("malformed PNM header");
    return value;
  }

  // The single whitespace byte separating maxval from the payload.
  void expect_separator() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw CorruptionError("missing whitespace after PNM maxval");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

RasterImage decode_pnm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw CorruptionError("not a binary PGM/PPM file (expected P5 or P6)");
  }
  const int channels = bytes[1] == '5' ? 1 : 3;
  HeaderReader header(bytes);
  const long width = header.next_int();
  const long height = header.next_int();
  const long maxval = header.next_int();
  header.expect_separator();
  if (width <= 0 || height <= 0) throw DimensionError("PNM dimensions must be positive");
  if (maxval <= 0 || maxval > 65535) throw CorruptionError("PNM maxval out of range");

  const int depth = maxval > 255 ? 16 : 8;
  const std::size_t bytes_per_sample = depth == 16 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  const std::size_t offset = header.position();
  if (bytes.size() - offset < n * bytes_per_sample) throw CorruptionError("truncated PNM payload");

  std::vector<std::uint16_t> samples(n);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  if (depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      samples[i] = static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) samples[i] = p[i];
  }
  for (auto s : samples) {
    if (s > maxval) throw CorruptionError("PNM sample exceeds maxval");
  }
  return RasterImage(static_cast<int>(width), static_cast<int>(height), channels, depth, std::move(samples));
}

std::string encode_pnm(const RasterImage& image) {
  std::string out = image.channels() == 1 ? "P5\n" : "P6\n";
  out += std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n" +
         std::to_string(image.max_value()) + "\n";
  const auto& samples = image.samples();
  if (image.depth() == 16) {
    out.reserve(out.size() + samples.size() * 2);
    for (auto s : samples) {
      out.push_back(static_cast<char>(s >> 8));
      out.push_back(static_cast<char>(s & 0xFF));
    }
  } else {
    out.reserve(out.size() + samples.size());
    for (auto s : samples) out.push_back(static_cast<char>(s));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

RasterImage read_pnm(const std::filesystem::path& path) { return decode_pnm(read_file(path)); }

void write_pnm(const std::filesystem::path& path, const RasterImage& image) {
  write_file(path, encode_pnm(image));
}

}  // namespace tileprop
