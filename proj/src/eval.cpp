#include "tileprop/eval.hpp"

#include <algorithm>

namespace tileprop {

std::optional<double> Assignment::iou_of(std::size_t gt_index) const {
  for (const auto& p : pairs) {
    if (p.gt_index == gt_index) return p.iou;
  }
  return std::nullopt;
}

const std::array<double, 10>& iou_thresholds() {
  static const std::array<double, 10> thresholds = [] {
    std::array<double, 10> t{};
    for (int k = 0; k < 10; ++k) t[k] = static_cast<double>(10 + k) / 20.0;
    return t;
  }();
  return thresholds;
}

Assignment match(std::span<const GroundTruthObject> gt, std::span<const Proposal> proposals) {
  std::vector<std::int64_t> proposal_area(proposals.size());
  std::vector<BBox> proposal_box(proposals.size());
  for (std::size_t j = 0; j < proposals.size(); ++j) {
    proposal_area[j] = mask_area(proposals[j].mask);
    proposal_box[j] = mask_bbox(proposals[j].mask);
  }

  std::vector<MatchPair> candidates;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const BBox box = mask_bbox(gt[i].mask);
    const std::int64_t area = mask_area(gt[i].mask);
    for (std::size_t j = 0; j < proposals.size(); ++j) {
      if (!overlaps(box, proposal_box[j])) continue;
      const std::int64_t inter = mask_intersection(gt[i].mask, proposals[j].mask);
      if (inter == 0) continue;
      const std::int64_t uni = area + proposal_area[j] - inter;
      candidates.push_back({i, gt[i].instance_id, j, inter, uni,
                            static_cast<double>(inter) / static_cast<double>(uni)});
    }
  }

  return assign_greedy(std::move(candidates));
}

Assignment assign_greedy(std::vector<MatchPair> candidates) {
  std::erase_if(candidates, [](const MatchPair& c) { return c.intersection <= 0; });
  std::sort(candidates.begin(), candidates.end(), [](const MatchPair& a, const MatchPair& b) {
    const __int128 lhs = static_cast<__int128>(a.intersection) * b.union_area;
    const __int128 rhs = static_cast<__int128>(b.intersection) * a.union_area;
    if (lhs != rhs) return lhs > rhs;
    if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
    if (a.gt_index != b.gt_index) return a.gt_index < b.gt_index;
    return a.proposal_index < b.proposal_index;
  });

  std::size_t gt_count = 0;
  std::size_t proposal_count = 0;
  for (const auto& c : candidates) {
    gt_count = std::max(gt_count, c.gt_index + 1);
    proposal_count = std::max(proposal_count, c.proposal_index + 1);
  }
  std::vector<bool> gt_used(gt_count, false);
  std::vector<bool> proposal_used(proposal_count, false);
  Assignment out;
  for (const auto& c : candidates) {
    if (gt_used[c.gt_index] || proposal_used[c.proposal_index]) continue;
    gt_used[c.gt_index] = true;
    proposal_used[c.proposal_index] = true;
    out.pairs.push_back(c);
  }
  return out;
}

std::optional<double> recall_at(std::size_t gt_count, const Assignment& assignment, double t) {
  if (gt_count == 0) return std::nullopt;
  const auto hits = std::count_if(assignment.pairs.begin(), assignment.pairs.end(),
                                  [t](const MatchPair& p) { return p.iou >= t; });
  return static_cast<double>(hits) / static_cast<double>(gt_count);
}

std::optional<double> average_recall(std::span<const GroundTruthObject> gt, const Assignment& assignment) {
  if (gt.empty()) return std::nullopt;
  double sum = 0.0;
  for (double t : iou_thresholds()) sum += *recall_at(gt.size(), assignment, t);
  return sum / static_cast<double>(iou_thresholds().size());
}

std::optional<double> dataset_average_recall(std::span<const ImageResult> images, std::size_t budget,
                                             std::optional<SizeCategory> category) {
  std::array<std::size_t, 10> hits{};
  std::size_t total = 0;
  for (const auto& image : images) {
    std::vector<GroundTruthObject> selected;
    std::span<const GroundTruthObject> gt = image.gt;
    if (category) {
      for (const auto& g : image.gt) {
        if (g.category == *category) selected.push_back(g);
      }
      gt = selected;
    }
    if (gt.empty()) continue;
    const auto proposals = image.proposals.first(std::min(budget, image.proposals.size()));
    const Assignment assignment = match(gt, proposals);
    total += gt.size();
    for (const auto& p : assignment.pairs) {
      for (std::size_t k = 0; k < hits.size(); ++k) {
        if (p.iou >= iou_thresholds()[k]) ++hits[k];
      }
    }
  }
  if (total == 0) return std::nullopt;
  double sum = 0.0;
  for (auto h : hits) sum += static_cast<double>(h) / static_cast<double>(total);
  return sum / static_cast<double>(hits.size());
}

ARRow evaluate_dataset(const std::string& system, std::span<const ImageResult> images) {
  ARRow row;
  row.system = system;
  row.images = images.size();
  for (const auto& image : images) {
    for (const auto& g : image.gt) {
      switch (g.category) {
        case SizeCategory::XS: ++row.gt_xs; break;
        case SizeCategory::S: ++row.gt_s; break;
        case SizeCategory::M: ++row.gt_m; break;
      }
    }
  }
  row.ar_at_10 = dataset_average_recall(images, 10);
  row.ar_at_100 = dataset_average_recall(images, 100);
  row.ar_xs_at_100 = dataset_average_recall(images, 100, SizeCategory::XS);
  row.ar_s_at_100 = dataset_average_recall(images, 100, SizeCategory::S);
  row.ar_m_at_100 = dataset_average_recall(images, 100, SizeCategory::M);
  return row;
}

}  // namespace tileprop
