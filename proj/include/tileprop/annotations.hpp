#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tileprop/mask.hpp"
#include "tileprop/pnm.hpp"

namespace tileprop {

/// Per-pixel instance ids, row-major; 0 is background.
struct InstanceMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> labels;

  std::uint16_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }

  /// From a single-channel raster (normally a 16-bit PGM).
  static InstanceMap from_raster(const RasterImage& image);
  /// As a 16-bit single-channel raster.
  RasterImage to_raster() const;

  friend bool operator==(const InstanceMap&, const InstanceMap&) = default;
};

enum class SizeCategory { XS, S, M };

std::string_view to_string(SizeCategory category);

/// XS below 22.5² = 506.25 px, M above 32² = 1024 px, S in between
/// (inclusive on both ends). Throws ValidationError for area 0.
SizeCategory size_category(std::int64_t area);

struct GroundTruthObject {
  int instance_id;
  BinaryMask mask;
  std::int64_t area;
  SizeCategory category;
};

/// One object per distinct nonzero id, ordered by id. An id split into
/// several connected components is still one object.
std::vector<GroundTruthObject> extract_instances(const InstanceMap& map);

}  // namespace tileprop
