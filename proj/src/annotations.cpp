#include "tileprop/annotations.hpp"

#include <map>

#include "tileprop/error.hpp"

namespace tileprop {

InstanceMap InstanceMap::from_raster(const RasterImage& image) {
  if (image.channels() != 1) throw ValidationError("instance map must be a single-channel image");
  return {image.width(), image.height(), image.samples()};
}

RasterImage InstanceMap::to_raster() const { return RasterImage(width, height, 1, 16, labels); }

std::string_view to_string(SizeCategory category) {
  switch (category) {
    case SizeCategory::XS: return "XS";
    case SizeCategory::S: return "S";
    case SizeCategory::M: return "M";
  }
  return "?";
}

SizeCategory size_category(std::int64_t area) {
  if (area <= 0) throw ValidationError("size category of a degenerate annotation (area 0)");
  // area < 22.5² ⟺ 4·area < 45²
  if (4 * area < 2025) return SizeCategory::XS;
  if (area <= 1024) return SizeCategory::S;
  return SizeCategory::M;
}

std::vector<GroundTruthObject> extract_instances(const InstanceMap& map) {
  if (map.labels.size() != static_cast<std::size_t>(map.width) * map.height) {
    throw DimensionError("instance map buffer does not match its dimensions");
  }
  std::map<std::uint16_t, MaskBuilder> builders;
  const std::int64_t n = static_cast<std::int64_t>(map.labels.size());
  std::int64_t i = 0;
  while (i < n) {
    const std::uint16_t id = map.labels[i];
    std::int64_t j = i + 1;
    while (j < n && map.labels[j] == id) ++j;
    if (id != 0) {
      auto it = builders.try_emplace(id, map.width, map.height).first;
      it->second.add(i, j);
    }
    i = j;
  }
  std::vector<GroundTruthObject> objects;
  objects.reserve(builders.size());
  for (auto& [id, builder] : builders) {
    BinaryMask mask = std::move(builder).finish();
    const std::int64_t area = mask_area(mask);
    objects.push_back({id, std::move(mask), area, size_category(area)});
  }
  return objects;
}

}  // namespace tileprop
