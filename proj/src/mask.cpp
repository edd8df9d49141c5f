#include "tileprop/mask.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "tileprop/error.hpp"

namespace tileprop {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("mask dimensions must be positive, got " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
  if (static_cast<std::int64_t>(width) * height > std::numeric_limits<std::uint32_t>::max()) {
    throw DimensionError("mask too large for 32-bit runs");
  }
}

// Walks the foreground intervals of a run sequence in linear-index space.
class ForegroundCursor {
 public:
  explicit ForegroundCursor(std::span<const std::uint32_t> runs) : runs_(runs) {}

  bool next(std::int64_t& begin, std::int64_t& end) {
    while (i_ < runs_.size()) {
      const std::int64_t len = runs_[i_];
      const bool fg = i_ % 2 == 1;
      ++i_;
      if (fg) {
        begin = pos_;
        end = pos_ + len;
        pos_ = end;
        return true;
      }
      pos_ += len;
    }
    return false;
  }

 private:
  std::span<const std::uint32_t> runs_;
  std::size_t i_ = 0;
  std::int64_t pos_ = 0;
};

}  // namespace

bool overlaps(const BBox& a, const BBox& b) {
  if (a.empty() || b.empty()) return false;
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  runs_.push_back(static_cast<std::uint32_t>(pixel_count()));
}

BinaryMask BinaryMask::from_runs(int width, int height, std::span<const std::uint32_t> runs) {
  check_dims(width, height);
  std::int64_t total = 0;
  for (auto r : runs) total += r;
  const std::int64_t expected = static_cast<std::int64_t>(width) * height;
  if (total != expected) {
    throw CorruptionError("RLE runs sum to " + std::to_string(total) + ", expected " +
                          std::to_string(expected));
  }
  MaskBuilder builder(width, height);
  ForegroundCursor cursor(runs);
  std::int64_t b = 0;
  std::int64_t e = 0;
  while (cursor.next(b, e)) builder.add(b, e);
  return std::move(builder).finish();
}

MaskBuilder::MaskBuilder(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
}

void MaskBuilder::add(std::int64_t begin, std::int64_t end) {
  if (begin >= end) return;
  if (begin < pos_ || end > static_cast<std::int64_t>(width_) * height_) {
    throw DimensionError("mask interval out of order or out of bounds");
  }
  if (begin == pos_ && runs_.size() % 2 == 0 && !runs_.empty()) {
    runs_.back() += static_cast<std::uint32_t>(end - begin);
  } else {
    runs_.push_back(static_cast<std::uint32_t>(begin - pos_));
    runs_.push_back(static_cast<std::uint32_t>(end - begin));
  }
  pos_ = end;
}

BinaryMask MaskBuilder::finish() && {
  const std::int64_t total = static_cast<std::int64_t>(width_) * height_;
  if (pos_ < total) {
    if (runs_.empty()) {
      runs_.push_back(static_cast<std::uint32_t>(total));
    } else {
      runs_.push_back(static_cast<std::uint32_t>(total - pos_));
    }
  }
  return BinaryMask(width_, height_, std::move(runs_));
}

BinaryMask rle_encode(const Bitmap& bitmap) {
  check_dims(bitmap.width, bitmap.height);
  const std::size_t n = static_cast<std::size_t>(bitmap.width) * bitmap.height;
  if (bitmap.pixels.size() != n) {
    throw DimensionError("bitmap buffer has " + std::to_string(bitmap.pixels.size()) +
                         " pixels, expected " + std::to_string(n));
  }
  MaskBuilder builder(bitmap.width, bitmap.height);
  std::size_t i = 0;
  while (i < n) {
    if (!bitmap.pixels[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && bitmap.pixels[j]) ++j;
    builder.add(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j));
    i = j;
  }
  return std::move(builder).finish();
}

Bitmap rle_decode(const BinaryMask& mask) {
  Bitmap out{mask.width(), mask.height(),
             std::vector<std::uint8_t>(static_cast<std::size_t>(mask.pixel_count()), 0)};
  ForegroundCursor cursor(mask.runs());
  std::int64_t b = 0;
  std::int64_t e = 0;
  while (cursor.next(b, e)) std::fill(out.pixels.begin() + b, out.pixels.begin() + e, 1);
  return out;
}

std::int64_t mask_area(const BinaryMask& mask) {
  std::int64_t area = 0;
  const auto runs = mask.runs();
  for (std::size_t i = 1; i < runs.size(); i += 2) area += runs[i];
  return area;
}

BBox mask_bbox(const BinaryMask& mask) {
  int x0 = std::numeric_limits<int>::max();
  int y0 = std::numeric_limits<int>::max();
  int x1 = -1;
  int y1 = -1;
  mask.for_each_span([&](const RowSpan& s) {
    x0 = std::min(x0, s.x_begin);
    x1 = std::max(x1, s.x_end);
    y0 = std::min(y0, s.row);
    y1 = std::max(y1, s.row + 1);
  });
  if (x1 < 0) return {};
  return {x0, y0, x1 - x0, y1 - y0};
}

std::int64_t mask_intersection(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError("mask size mismatch: " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
  }
  ForegroundCursor ca(a.runs());
  ForegroundCursor cb(b.runs());
  std::int64_t ab = 0, ae = 0, bb = 0, be = 0;
  bool has_a = ca.next(ab, ae);
  bool has_b = cb.next(bb, be);
  std::int64_t inter = 0;
  while (has_a && has_b) {
    const std::int64_t lo = std::max(ab, bb);
    const std::int64_t hi = std::min(ae, be);
    if (hi > lo) inter += hi - lo;
    if (ae < be) {
      has_a = ca.next(ab, ae);
    } else {
      has_b = cb.next(bb, be);
    }
  }
  return inter;
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  const std::int64_t inter = mask_intersection(a, b);
  const std::int64_t uni = mask_area(a) + mask_area(b) - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryMask shift_mask(const BinaryMask& mask, int dx, int dy) {
  MaskBuilder builder(mask.width(), mask.height());
  mask.for_each_span([&](const RowSpan& s) {
    const int row = s.row + dy;
    if (row < 0 || row >= mask.height()) return;
    const int x0 = std::clamp(s.x_begin + dx, 0, mask.width());
    const int x1 = std::clamp(s.x_end + dx, 0, mask.width());
    builder.add_span(row, x0, x1);
  });
  return std::move(builder).finish();
}

BinaryMask crop_mask(const BinaryMask& mask, const BBox& region) {
  if (region.empty() || region.x < 0 || region.y < 0 || region.x + region.w > mask.width() ||
      region.y + region.h > mask.height()) {
    throw DimensionError("crop region outside mask");
  }
  MaskBuilder builder(region.w, region.h);
  mask.for_each_span([&](const RowSpan& s) {
    if (s.row < region.y || s.row >= region.y + region.h) return;
    const int x0 = std::max(s.x_begin, region.x);
    const int x1 = std::min(s.x_end, region.x + region.w);
    if (x1 > x0) builder.add_span(s.row - region.y, x0 - region.x, x1 - region.x);
  });
  return std::move(builder).finish();
}

BinaryMask paste_mask(const BinaryMask& local, int x0, int y0, int width, int height) {
  MaskBuilder builder(width, height);
  local.for_each_span([&](const RowSpan& s) {
    const int row = s.row + y0;
    if (row < 0 || row >= height) return;
    const int a = std::clamp(s.x_begin + x0, 0, width);
    const int b = std::clamp(s.x_end + x0, 0, width);
    builder.add_span(row, a, b);
  });
  return std::move(builder).finish();
}

}  // namespace tileprop
