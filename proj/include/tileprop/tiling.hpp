#pragma once

#include <span>
#include <string>
#include <vector>

#include "tileprop/mask.hpp"
#include "tileprop/pnm.hpp"

namespace tileprop {

/// Tile size and origin spacing of a regular grid.
struct TileGridSpec {
  int tile_w = 320;
  int tile_h = 240;
  int stride_x = 160;
  int stride_y = 120;

  friend bool operator==(const TileGridSpec&, const TileGridSpec&) = default;
};

struct Tile {
  int index;
  int x0;
  int y0;
  int w;
  int h;

  BBox region() const { return {x0, y0, w, h}; }
  friend bool operator==(const Tile&, const Tile&) = default;
};

/// Row-major tiles with origins 0, stride, 2·stride, … and a final origin
/// clamped to image − tile so the last row and column touch the border.
/// Throws DimensionError when the tile exceeds the image or a stride is not
/// positive.
std::vector<Tile> plan_grid(int img_w, int img_h, const TileGridSpec& spec);

/// A single tile covering the whole image.
std::vector<Tile> whole_image_grid(int img_w, int img_h);

/// Exact pixel copy of the tile region.
RasterImage crop(const RasterImage& image, const Tile& tile);

/// Tile-local mask placed on an img_w×img_h canvas at the tile origin.
BinaryMask remap_mask(const Tile& tile, const BinaryMask& local, int img_w, int img_h);

/// True iff every pixel of the image lies in at least one tile.
bool verify_coverage(int img_w, int img_h, std::span<const Tile> grid);

/// Parses "WxH" (e.g. "320x240").
std::pair<int, int> parse_extent(const std::string& text);

}  // namespace tileprop
