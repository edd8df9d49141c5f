#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tileprop/annotations.hpp"
#include "tileprop/proposal.hpp"

namespace tileprop {

struct MatchPair {
  std::size_t gt_index;
  int instance_id;
  std::size_t proposal_index;
  std::int64_t intersection;
  std::int64_t union_area;
  double iou;
};

/// One-to-one pairing of ground truth objects and proposals.
struct Assignment {
  std::vector<MatchPair> pairs;

  /// Assigned IoU of gt_index, or empty when it is unmatched.
  std::optional<double> iou_of(std::size_t gt_index) const;
};

/// IoU thresholds 0.50, 0.55, …, 0.95, computed as k/20 so that each one is
/// the correctly rounded double of its decimal value.
const std::array<double, 10>& iou_thresholds();

/// Greedy one-to-one selection over candidate pairs: visits them by IoU
/// descending (exact rational comparison; ties: lower instance id, then lower
/// proposal index) and accepts a pair when both sides are still free.
Assignment assign_greedy(std::vector<MatchPair> candidates);

/// Greedy matching: all positive-IoU (gt, proposal) pairs are visited by IoU
/// descending (ties: lower instance id, then lower proposal index) and
/// accepted when both sides are still free. `proposals` is the already
/// truncated budget.
Assignment match(std::span<const GroundTruthObject> gt, std::span<const Proposal> proposals);

/// Fraction of ground truth objects whose assigned IoU is >= t; empty when
/// there is no ground truth.
std::optional<double> recall_at(std::size_t gt_count, const Assignment& assignment, double t);

/// Mean recall over iou_thresholds(); empty when there is no ground truth.
std::optional<double> average_recall(std::span<const GroundTruthObject> gt, const Assignment& assignment);

/// Ground truth and ranked proposals of one image.
struct ImageResult {
  std::span<const GroundTruthObject> gt;
  std::span<const Proposal> proposals;
};

/// Dataset-level AR at a proposal budget: every image keeps its first
/// `budget` proposals and is matched independently, then recall is pooled
/// over all ground truth of the dataset. With `category` set, only ground
/// truth of that size is kept (proposals stay unrestricted) and matching is
/// redone. Empty when the selected ground truth set is empty.
std::optional<double> dataset_average_recall(std::span<const ImageResult> images, std::size_t budget,
                                             std::optional<SizeCategory> category = std::nullopt);

/// One system's row of the AR table.
struct ARRow {
  std::string system;
  std::optional<double> ar_at_10;
  std::optional<double> ar_at_100;
  std::optional<double> ar_xs_at_100;
  std::optional<double> ar_s_at_100;
  std::optional<double> ar_m_at_100;
  std::size_t images = 0;
  std::size_t gt_xs = 0;
  std::size_t gt_s = 0;
  std::size_t gt_m = 0;

  std::size_t gt_total() const { return gt_xs + gt_s + gt_m; }
};

struct ARReport {
  std::vector<ARRow> rows;
};

ARRow evaluate_dataset(const std::string& system, std::span<const ImageResult> images);

}  // namespace tileprop
