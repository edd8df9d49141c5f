#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tileprop/annotations.hpp"
#include "tileprop/detector.hpp"
#include "tileprop/exchange.hpp"
#include "tileprop/proposal.hpp"
#include "tileprop/tiling.hpp"

namespace tileprop {

struct PipelineConfig {
  /// Tile grid; empty means whole-image processing.
  std::optional<TileGridSpec> grid;
  double nms_iou = 0.7;
  std::size_t top_k = 100;
  /// Worker threads for per-tile generation. Output does not depend on it.
  unsigned jobs = 1;

  void validate() const;
};

/// Image extent plus its ground truth, which the simulated detector consumes.
struct SceneView {
  int width;
  int height;
  std::span<const GroundTruthObject> gt;
};

/// Greedy mask NMS. Proposals are ranked by objectness (descending; ties by
/// mask area descending, then input order) and each is kept iff its IoU with
/// every already-kept proposal is below `iou_threshold`. Output is in kept
/// order.
std::vector<Proposal> nms(std::vector<Proposal> proposals, double iou_threshold);

/// NMS followed by truncation to the top_k best.
std::vector<Proposal> merge_and_rank(std::vector<Proposal> proposals, const PipelineConfig& config);

/// Tiled path: simulate per tile on the tile's share of the ground truth,
/// remap to image coordinates, merge, NMS, rank, keep top_k.
std::vector<Proposal> run_tiled(const SceneView& scene, const TileGridSpec& grid,
                                const DetectorProfile& detector, const PipelineConfig& config);

/// Untiled path: the whole image is a single detector input.
std::vector<Proposal> run_whole(const SceneView& scene, const DetectorProfile& detector,
                                const PipelineConfig& config);

/// Dispatches on config.grid.
std::vector<Proposal> run_pipeline(const SceneView& scene, const DetectorProfile& detector,
                                   const PipelineConfig& config);

/// Same reduction over externally produced records for one image. Records
/// with a tile index are remapped from that tile of `grid` (or of the single
/// whole-image tile when `grid` is empty); the others must already be
/// image-sized. Throws ValidationError for a tile index not in the grid and
/// DimensionError for a mask whose size does not match its frame.
std::vector<Proposal> run_exchange(int width, int height, std::span<const ProposalRecord> records,
                                   const PipelineConfig& config);

}  // namespace tileprop
