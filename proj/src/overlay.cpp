#include "tileprop/overlay.hpp"

#include <array>

#include "tileprop/error.hpp"
#include "tileprop/eval.hpp"

namespace tileprop {

namespace {

using Rgb = std::array<std::uint16_t, 3>;

constexpr Rgb kMissed{255, 0, 0};

// No entry is pure red, so found objects never look missed.
constexpr std::array<Rgb, 8> kPalette{{
    {0, 200, 255},
    {255, 220, 0},
    {0, 255, 120},
    {255, 0, 255},
    {80, 120, 255},
    {255, 140, 0},
    {160, 255, 0},
    {255, 255, 255},
}};

RasterImage to_rgb8(const RasterImage& image) {
  RasterImage out(image.width(), image.height(), 3, 8);
  const int shift = image.depth() == 16 ? 8 : 0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const int src = image.channels() == 3 ? c : 0;
        out.set(x, y, c, static_cast<std::uint16_t>(image.at(x, y, src) >> shift));
      }
    }
  }
  return out;
}

void paint(RasterImage& img, int x, int y, const Rgb& color) {
  for (int c = 0; c < 3; ++c) img.set(x, y, c, color[c]);
}

void fill(RasterImage& img, const Bitmap& bits, const Rgb& color) {
  for (int y = 0; y < bits.height; ++y) {
    for (int x = 0; x < bits.width; ++x) {
      if (!bits.at(x, y)) continue;
      for (int c = 0; c < 3; ++c) {
        const int blended = (img.at(x, y, c) + color[c] + 1) / 2;
        // Always move a step towards the overlay colour so the fill is visible.
        int v = blended;
        if (v == img.at(x, y, c) && v != color[c]) v += color[c] > v ? 1 : -1;
        img.set(x, y, c, static_cast<std::uint16_t>(v));
      }
    }
  }
}

void contour(RasterImage& img, const Bitmap& bits, const Rgb& color) {
  auto inside = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < bits.width && y < bits.height && bits.at(x, y);
  };
  for (int y = 0; y < bits.height; ++y) {
    for (int x = 0; x < bits.width; ++x) {
      if (!bits.at(x, y)) continue;
      if (!inside(x - 1, y) || !inside(x + 1, y) || !inside(x, y - 1) || !inside(x, y + 1)) {
        paint(img, x, y, color);
      }
    }
  }
}

}  // namespace

RasterImage render_overlay(const RasterImage& image, std::span<const GroundTruthObject> gt,
                           std::span<const Proposal> proposals) {
  for (const auto& g : gt) {
    if (g.mask.width() != image.width() || g.mask.height() != image.height()) {
      throw DimensionError("ground truth mask does not match overlay image");
    }
  }
  for (const auto& p : proposals) {
    if (p.mask.width() != image.width() || p.mask.height() != image.height()) {
      throw DimensionError("proposal mask does not match overlay image");
    }
  }
  RasterImage out = to_rgb8(image);
  const Assignment assignment = match(gt, proposals);

  // Fills first, then contours on top.
  std::vector<std::pair<Bitmap, Rgb>> found;
  for (const auto& pair : assignment.pairs) {
    const Rgb color = kPalette[static_cast<std::size_t>(pair.instance_id) % kPalette.size()];
    found.emplace_back(rle_decode(proposals[pair.proposal_index].mask), color);
  }
  for (const auto& [bits, color] : found) fill(out, bits, color);
  for (const auto& [bits, color] : found) contour(out, bits, color);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!assignment.iou_of(i)) contour(out, rle_decode(gt[i].mask), kMissed);
  }
  return out;
}

}  // namespace tileprop
