#include "tileprop/tiling.hpp"

#include <algorithm>
#include <charconv>

#include "tileprop/error.hpp"

namespace tileprop {

namespace {

std::vector<int> axis_origins(int extent, int tile, int stride) {
  std::vector<int> origins;
  const int last = extent - tile;
  for (int o = 0; o <= last; o += stride) origins.push_back(o);
  if (origins.back() != last) origins.push_back(last);
  return origins;
}

}  // namespace

std::vector<Tile> plan_grid(int img_w, int img_h, const TileGridSpec& spec) {
  if (img_w <= 0 || img_h <= 0) throw DimensionError("image dimensions must be positive");
  if (spec.tile_w <= 0 || spec.tile_h <= 0) throw DimensionError("tile dimensions must be positive");
  if (spec.stride_x <= 0 || spec.stride_y <= 0) throw DimensionError("tile strides must be positive");
  if (spec.stride_x > spec.tile_w || spec.stride_y > spec.tile_h) {
    throw DimensionError("stride larger than tile leaves uncovered pixels");
  }
  if (spec.tile_w > img_w || spec.tile_h > img_h) {
    throw DimensionError("tile " + std::to_string(spec.tile_w) + "x" + std::to_string(spec.tile_h) +
                         " larger than image " + std::to_string(img_w) + "x" + std::to_string(img_h));
  }
  const auto xs = axis_origins(img_w, spec.tile_w, spec.stride_x);
  const auto ys = axis_origins(img_h, spec.tile_h, spec.stride_y);
  std::vector<Tile> tiles;
  tiles.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) {
      tiles.push_back({static_cast<int>(tiles.size()), x, y, spec.tile_w, spec.tile_h});
    }
  }
  return tiles;
}

std::vector<Tile> whole_image_grid(int img_w, int img_h) {
  return plan_grid(img_w, img_h, {img_w, img_h, img_w, img_h});
}

RasterImage crop(const RasterImage& image, const Tile& tile) {
  if (tile.w <= 0 || tile.h <= 0 || tile.x0 < 0 || tile.y0 < 0 || tile.x0 + tile.w > image.width() ||
      tile.y0 + tile.h > image.height()) {
    throw DimensionError("tile outside image");
  }
  const int c = image.channels();
  std::vector<std::uint16_t> samples;
  samples.reserve(static_cast<std::size_t>(tile.w) * tile.h * c);
  const auto& src = image.samples();
  for (int y = tile.y0; y < tile.y0 + tile.h; ++y) {
    const auto row = src.begin() + (static_cast<std::ptrdiff_t>(y) * image.width() + tile.x0) * c;
    samples.insert(samples.end(), row, row + static_cast<std::ptrdiff_t>(tile.w) * c);
  }
  return RasterImage(tile.w, tile.h, c, image.depth(), std::move(samples));
}

BinaryMask remap_mask(const Tile& tile, const BinaryMask& local, int img_w, int img_h) {
  if (local.width() != tile.w || local.height() != tile.h) {
    throw DimensionError("tile-local mask is " + std::to_string(local.width()) + "x" +
                         std::to_string(local.height()) + ", tile is " + std::to_string(tile.w) + "x" +
                         std::to_string(tile.h));
  }
  if (tile.x0 < 0 || tile.y0 < 0 || tile.x0 + tile.w > img_w || tile.y0 + tile.h > img_h) {
    throw DimensionError("tile outside image");
  }
  return paste_mask(local, tile.x0, tile.y0, img_w, img_h);
}

bool verify_coverage(int img_w, int img_h, std::span<const Tile> grid) {
  if (img_w <= 0 || img_h <= 0) return false;
  // 2-D difference array over the clipped tile rectangles.
  const std::size_t stride = static_cast<std::size_t>(img_w) + 1;
  std::vector<int> diff(stride * (img_h + 1), 0);
  for (const auto& t : grid) {
    const int x0 = std::clamp(t.x0, 0, img_w);
    const int y0 = std::clamp(t.y0, 0, img_h);
    const int x1 = std::clamp(t.x0 + t.w, 0, img_w);
    const int y1 = std::clamp(t.y0 + t.h, 0, img_h);
    if (x1 <= x0 || y1 <= y0) continue;
    diff[y0 * stride + x0] += 1;
    diff[y0 * stride + x1] -= 1;
    diff[y1 * stride + x0] -= 1;
    diff[y1 * stride + x1] += 1;
  }
  std::vector<int> row_acc(stride, 0);
  for (int y = 0; y < img_h; ++y) {
    int run = 0;
    for (int x = 0; x < img_w; ++x) {
      run += diff[y * stride + x];
      row_acc[x] += run;
      if (row_acc[x] <= 0) return false;
    }
  }
  return true;
}

std::pair<int, int> parse_extent(const std::string& text) {
  const auto sep = text.find_first_of("xX");
  auto parse = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v <= 0) {
      throw ValidationError("expected WxH with positive integers, got '" + text + "'");
    }
    return v;
  };
  if (sep == std::string::npos) throw ValidationError("expected WxH, got '" + text + "'");
  const std::string_view view(text);
  return {parse(view.substr(0, sep)), parse(view.substr(sep + 1))};
}

}  // namespace tileprop
