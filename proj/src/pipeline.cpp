#include "tileprop/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "tileprop/error.hpp"
#include "tileprop/parallel.hpp"

namespace tileprop {

void PipelineConfig::validate() const {
  if (!(nms_iou > 0.0 && nms_iou <= 1.0)) throw ValidationError("nms_iou must be in (0, 1]");
  if (top_k < 1) throw ValidationError("top_k must be at least 1");
}

std::vector<Proposal> nms(std::vector<Proposal> proposals, double iou_threshold) {
  const std::size_t n = proposals.size();
  std::vector<std::int64_t> area(n);
  std::vector<BBox> box(n);
  for (std::size_t i = 0; i < n; ++i) {
    area[i] = mask_area(proposals[i].mask);
    box[i] = mask_bbox(proposals[i].mask);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (proposals[a].objectness != proposals[b].objectness) {
      return proposals[a].objectness > proposals[b].objectness;
    }
    return area[a] > area[b];
  });

  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    bool keep = true;
    for (std::size_t k : kept) {
      double iou = 0.0;
      if (overlaps(box[i], box[k])) {
        const std::int64_t inter = mask_intersection(proposals[i].mask, proposals[k].mask);
        const std::int64_t uni = area[i] + area[k] - inter;
        iou = uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
      }
      if (iou >= iou_threshold) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(i);
  }

  std::vector<Proposal> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(std::move(proposals[k]));
  return out;
}

std::vector<Proposal> merge_and_rank(std::vector<Proposal> proposals, const PipelineConfig& config) {
  config.validate();
  auto kept = nms(std::move(proposals), config.nms_iou);
  if (kept.size() > config.top_k) kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(config.top_k), kept.end());
  return kept;
}

namespace {

std::vector<Proposal> run_grid(const SceneView& scene, std::span<const Tile> tiles,
                               const DetectorProfile& detector, const PipelineConfig& config) {
  config.validate();
  detector.validate();
  std::vector<BBox> boxes;
  boxes.reserve(scene.gt.size());
  for (const auto& object : scene.gt) {
    if (object.mask.width() != scene.width || object.mask.height() != scene.height) {
      throw DimensionError("ground truth mask does not match image size");
    }
    boxes.push_back(mask_bbox(object.mask));
  }

  std::vector<std::vector<Proposal>> per_tile(tiles.size());
  parallel_for(tiles.size(), config.jobs, [&](std::size_t t) {
    const Tile& tile = tiles[t];
    std::vector<GroundTruthObject> local;
    for (std::size_t i = 0; i < scene.gt.size(); ++i) {
      if (!overlaps(boxes[i], tile.region())) continue;
      const auto& object = scene.gt[i];
      BinaryMask part = crop_mask(object.mask, tile.region());
      const std::int64_t area = mask_area(part);
      if (area == 0) continue;
      local.push_back({object.instance_id, std::move(part), area, size_category(area)});
    }
    auto proposals = simulate(detector, {tile.x0, tile.y0, tile.w, tile.h}, local);
    for (auto& p : proposals) p.mask = remap_mask(tile, p.mask, scene.width, scene.height);
    per_tile[t] = std::move(proposals);
  });

  std::vector<Proposal> merged;
  for (auto& chunk : per_tile) {
    for (auto& p : chunk) merged.push_back(std::move(p));
  }
  return merge_and_rank(std::move(merged), config);
}

}  // namespace

std::vector<Proposal> run_tiled(const SceneView& scene, const TileGridSpec& grid,
                                const DetectorProfile& detector, const PipelineConfig& config) {
  const auto tiles = plan_grid(scene.width, scene.height, grid);
  return run_grid(scene, tiles, detector, config);
}

std::vector<Proposal> run_whole(const SceneView& scene, const DetectorProfile& detector,
                                const PipelineConfig& config) {
  const auto tiles = whole_image_grid(scene.width, scene.height);
  return run_grid(scene, tiles, detector, config);
}

std::vector<Proposal> run_pipeline(const SceneView& scene, const DetectorProfile& detector,
                                   const PipelineConfig& config) {
  if (config.grid) return run_tiled(scene, *config.grid, detector, config);
  return run_whole(scene, detector, config);
}

std::vector<Proposal> run_exchange(int width, int height, std::span<const ProposalRecord> records,
                                   const PipelineConfig& config) {
  const auto tiles = config.grid ? plan_grid(width, height, *config.grid) : whole_image_grid(width, height);
  std::vector<Proposal> merged;
  merged.reserve(records.size());
  for (const auto& record : records) {
    if (record.tile_index) {
      const int index = *record.tile_index;
      if (index < 0 || static_cast<std::size_t>(index) >= tiles.size()) {
        throw ValidationError("record for '" + record.image_id + "' references unknown tile_index " +
                              std::to_string(index) + " (grid has " + std::to_string(tiles.size()) +
                              " tiles)");
      }
      merged.push_back({remap_mask(tiles[index], record.mask, width, height), record.objectness});
    } else {
      if (record.mask.width() != width || record.mask.height() != height) {
        throw DimensionError("whole-image record for '" + record.image_id + "' is " +
                             std::to_string(record.mask.width()) + "x" + std::to_string(record.mask.height()) +
                             ", image is " + std::to_string(width) + "x" + std::to_string(height));
      }
      merged.push_back({record.mask, record.objectness});
    }
  }
  std::erase_if(merged, [](const Proposal& p) { return p.mask.empty(); });
  return merge_and_rank(std::move(merged), config);
}

}  // namespace tileprop
