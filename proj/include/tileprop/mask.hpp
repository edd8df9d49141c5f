#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tileprop {

/// Axis-aligned pixel rectangle, half-open: covers [x, x+w) × [y, y+h).
struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool empty() const { return w <= 0 || h <= 0; }
  friend bool operator==(const BBox&, const BBox&) = default;
};

/// True when the two rectangles share at least one pixel.
bool overlaps(const BBox& a, const BBox& b);

/// Row-major boolean raster; nonzero bytes are foreground.
struct Bitmap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  bool at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x] != 0; }
  friend bool operator==(const Bitmap&, const Bitmap&) = default;
};

/// Foreground interval [x_begin, x_end) on one row.
struct RowSpan {
  int row;
  int x_begin;
  int x_end;
};

/// Run-length encoded binary mask.
///
/// Runs are in row-major scan order and alternate background/foreground,
/// starting with a background run that may be zero. The stored form is
/// always canonical: no zero-length run except possibly the first, so two
/// masks with the same pixels compare equal.
class BinaryMask {
 public:
  /// All-background mask.
  BinaryMask(int width, int height);

  /// Validates that the runs sum to width·height (CorruptionError otherwise)
  /// and canonicalizes internal zero-length runs.
  static BinaryMask from_runs(int width, int height, std::span<const std::uint32_t> runs);

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t pixel_count() const { return static_cast<std::int64_t>(width_) * height_; }
  std::span<const std::uint32_t> runs() const { return runs_; }
  bool empty() const { return runs_.size() <= 1; }

  /// Visits every foreground interval, split at row boundaries, in scan order.
  template <class F>
  void for_each_span(F&& f) const {
    std::int64_t pos = 0;
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      const std::int64_t len = runs_[i];
      if (i % 2 == 1) {
        std::int64_t p = pos;
        const std::int64_t end = pos + len;
        while (p < end) {
          const int row = static_cast<int>(p / width_);
          const std::int64_t row_end = static_cast<std::int64_t>(row + 1) * width_;
          const std::int64_t stop = end < row_end ? end : row_end;
          const std::int64_t row_start = static_cast<std::int64_t>(row) * width_;
          f(RowSpan{row, static_cast<int>(p - row_start), static_cast<int>(stop - row_start)});
          p = stop;
        }
      }
      pos += len;
    }
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  friend class MaskBuilder;
  BinaryMask(int width, int height, std::vector<std::uint32_t> runs)
      : width_(width), height_(height), runs_(std::move(runs)) {}

  int width_;
  int height_;
  std::vector<std::uint32_t> runs_;
};

/// Incremental canonical RLE construction from foreground intervals given in
/// strictly increasing scan order. Adjacent intervals are merged.
class MaskBuilder {
 public:
  MaskBuilder(int width, int height);

  /// Adds linear pixel indices [begin, end). `begin` must not precede the end
  /// of the previous interval.
  void add(std::int64_t begin, std::int64_t end);
  void add_span(int row, int x_begin, int x_end) {
    const std::int64_t base = static_cast<std::int64_t>(row) * width_;
    add(base + x_begin, base + x_end);
  }

  BinaryMask finish() &&;

 private:
  int width_;
  int height_;
  std::int64_t pos_ = 0;
  std::vector<std::uint32_t> runs_;
};

/// Throws DimensionError for a bitmap with a zero dimension or a pixel
/// buffer that does not match its dimensions.
BinaryMask rle_encode(const Bitmap& bitmap);
Bitmap rle_decode(const BinaryMask& mask);

std::int64_t mask_area(const BinaryMask& mask);

/// Tight bound of the foreground; {0,0,0,0} for an empty mask.
BBox mask_bbox(const BinaryMask& mask);

/// |a ∩ b|, computed on runs. Throws DimensionError on a size mismatch.
std::int64_t mask_intersection(const BinaryMask& a, const BinaryMask& b);

/// |a ∩ b| / |a ∪ b|, 0 when both are empty.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

/// Translates the foreground by (dx, dy); pixels leaving the canvas are dropped.
BinaryMask shift_mask(const BinaryMask& mask, int dx, int dy);

/// The part of `mask` inside `region`, as a region-sized mask.
BinaryMask crop_mask(const BinaryMask& mask, const BBox& region);

/// Places `local` with its top-left corner at (x0, y0) on an empty
/// width×height canvas, clipping anything outside.
BinaryMask paste_mask(const BinaryMask& local, int x0, int y0, int width, int height);

}  // namespace tileprop
