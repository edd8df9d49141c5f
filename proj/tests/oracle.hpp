#pragma once

// Brute-force reference implementations used only by tests. They work on
// decoded pixel grids and never call the run-based code paths they check
// (apart from rle_decode to obtain the grids).

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "tileprop/annotations.hpp"
#include "tileprop/mask.hpp"
#include "tileprop/proposal.hpp"
#include "tileprop/rng.hpp"

namespace oracle {

using tileprop::Bitmap;

inline Bitmap blank(int w, int h) { return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)}; }

inline Bitmap rect(int w, int h, int x0, int y0, int rw, int rh) {
  Bitmap b = blank(w, h);
  for (int y = std::max(0, y0); y < std::min(h, y0 + rh); ++y) {
    for (int x = std::max(0, x0); x < std::min(w, x0 + rw); ++x) b.pixels[y * w + x] = 1;
  }
  return b;
}

inline std::int64_t count(const Bitmap& b) {
  return std::count_if(b.pixels.begin(), b.pixels.end(), [](auto v) { return v != 0; });
}

struct Overlap {
  std::int64_t inter;
  std::int64_t uni;
};

inline Overlap overlap(const Bitmap& a, const Bitmap& b) {
  Overlap o{0, 0};
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    o.inter += (a.pixels[i] && b.pixels[i]);
    o.uni += (a.pixels[i] || b.pixels[i]);
  }
  return o;
}

inline double iou(const Bitmap& a, const Bitmap& b) {
  const auto o = overlap(a, b);
  return o.uni == 0 ? 0.0 : static_cast<double>(o.inter) / static_cast<double>(o.uni);
}

inline Bitmap shift(const Bitmap& b, int dx, int dy) {
  Bitmap out = blank(b.width, b.height);
  for (int y = 0; y < b.height; ++y) {
    for (int x = 0; x < b.width; ++x) {
      const int nx = x + dx;
      const int ny = y + dy;
      if (b.at(x, y) && nx >= 0 && ny >= 0 && nx < b.width && ny < b.height) out.pixels[ny * b.width + nx] = 1;
    }
  }
  return out;
}

/// Random bitmap of random density; blobs and noise mixed.
inline Bitmap random_bitmap(tileprop::SplitMix64& rng, int w, int h) {
  Bitmap b = blank(w, h);
  const double density = rng.uniform();
  const int mode = static_cast<int>(rng.uniform_int(0, 2));
  if (mode == 0) {
    for (auto& p : b.pixels) p = rng.uniform() < density;
  } else {
    const int blobs = static_cast<int>(rng.uniform_int(0, 4));
    for (int k = 0; k < blobs; ++k) {
      const int x0 = static_cast<int>(rng.uniform_int(0, w - 1));
      const int y0 = static_cast<int>(rng.uniform_int(0, h - 1));
      const int rw = static_cast<int>(rng.uniform_int(1, w));
      const int rh = static_cast<int>(rng.uniform_int(1, h));
      for (int y = y0; y < std::min(h, y0 + rh); ++y) {
        for (int x = x0; x < std::min(w, x0 + rw); ++x) b.pixels[y * w + x] = 1;
      }
    }
    if (mode == 2) {
      for (auto& p : b.pixels) {
        if (rng.uniform() < 0.05) p = !p;
      }
    }
  }
  return b;
}

/// Greedy one-to-one matching by exact rational IoU, on decoded grids.
/// Returns, per gt index, the assigned (inter, union) if any.
inline std::vector<std::optional<Overlap>> greedy_match(const std::vector<Bitmap>& gt,
                                                        const std::vector<int>& gt_ids,
                                                        const std::vector<Bitmap>& proposals) {
  struct Cand {
    std::size_t g;
    std::size_t p;
    Overlap o;
  };
  std::vector<Cand> cands;
  for (std::size_t g = 0; g < gt.size(); ++g) {
    for (std::size_t p = 0; p < proposals.size(); ++p) {
      const auto o = overlap(gt[g], proposals[p]);
      if (o.inter > 0) cands.push_back({g, p, o});
    }
  }
  // Selection by repeated scan for the best remaining pair.
  std::vector<std::optional<Overlap>> result(gt.size());
  std::vector<bool> used_p(proposals.size(), false);
  for (;;) {
    const Cand* best = nullptr;
    for (const auto& c : cands) {
      if (result[c.g] || used_p[c.p]) continue;
      if (!best) {
        best = &c;
        continue;
      }
      const __int128 lhs = static_cast<__int128>(c.o.inter) * best->o.uni;
      const __int128 rhs = static_cast<__int128>(best->o.inter) * c.o.uni;
      if (lhs > rhs || (lhs == rhs && (gt_ids[c.g] < gt_ids[best->g] ||
                                       (gt_ids[c.g] == gt_ids[best->g] && (c.g < best->g ||
                                                                           (c.g == best->g && c.p < best->p)))))) {
        best = &c;
      }
    }
    if (!best) break;
    result[best->g] = best->o;
    used_p[best->p] = true;
  }
  return result;
}

struct OracleImage {
  std::vector<Bitmap> gt;
  std::vector<int> gt_ids;
  std::vector<tileprop::SizeCategory> gt_cat;
  std::vector<Bitmap> proposals;  // ranked
};

/// Dataset AR by an explicit threshold loop with integer comparisons
/// inter·20 >= k·union, pooled over images.
inline std::optional<double> dataset_ar(const std::vector<OracleImage>& images, std::size_t budget,
                                        std::optional<tileprop::SizeCategory> cat) {
  std::array<std::size_t, 10> hits{};
  std::size_t total = 0;
  for (const auto& img : images) {
    std::vector<Bitmap> gt;
    std::vector<int> ids;
    for (std::size_t i = 0; i < img.gt.size(); ++i) {
      if (!cat || img.gt_cat[i] == *cat) {
        gt.push_back(img.gt[i]);
        ids.push_back(img.gt_ids[i]);
      }
    }
    if (gt.empty()) continue;
    std::vector<Bitmap> props(img.proposals.begin(),
                              img.proposals.begin() + static_cast<std::ptrdiff_t>(std::min(budget, img.proposals.size())));
    const auto assigned = greedy_match(gt, ids, props);
    total += gt.size();
    for (const auto& a : assigned) {
      if (!a) continue;
      for (int k = 0; k < 10; ++k) {
        if (a->inter * 20 >= static_cast<std::int64_t>(10 + k) * a->uni) ++hits[k];
      }
    }
  }
  if (total == 0) return std::nullopt;
  double sum = 0.0;
  for (auto h : hits) sum += static_cast<double>(h) / static_cast<double>(total);
  return sum / 10.0;
}

}  // namespace oracle

namespace oracle {

/// Random evaluation instance: both the library view and the oracle view.
struct RandomDataset {
  std::vector<std::vector<tileprop::GroundTruthObject>> gt;
  std::vector<std::vector<tileprop::Proposal>> proposals;
  std::vector<OracleImage> oracle_images;
};

inline RandomDataset random_dataset(tileprop::SplitMix64& rng, int max_images = 5, int max_gt = 10,
                                    int max_proposals = 20) {
  RandomDataset ds;
  const int n_images = static_cast<int>(rng.uniform_int(1, max_images));
  for (int im = 0; im < n_images; ++im) {
    const int w = static_cast<int>(rng.uniform_int(8, 48));
    const int h = static_cast<int>(rng.uniform_int(8, 48));
    OracleImage oi;
    std::vector<tileprop::GroundTruthObject> gt;
    const int n_gt = static_cast<int>(rng.uniform_int(0, max_gt));
    for (int g = 0; g < n_gt; ++g) {
      const int rw = static_cast<int>(rng.uniform_int(1, w));
      const int rh = static_cast<int>(rng.uniform_int(1, h));
      const Bitmap b = rect(w, h, static_cast<int>(rng.uniform_int(0, w - rw)),
                            static_cast<int>(rng.uniform_int(0, h - rh)), rw, rh);
      // ids unique but not contiguous
      const int id = 3 * g + 1;
      const std::int64_t area = count(b);
      // Category drawn at random so every stratum is exercised on small canvases.
      const auto cat = static_cast<tileprop::SizeCategory>(rng.uniform_int(0, 2));
      gt.push_back({id, tileprop::rle_encode(b), area, cat});
      oi.gt.push_back(b);
      oi.gt_ids.push_back(id);
      oi.gt_cat.push_back(cat);
    }
    std::vector<tileprop::Proposal> props;
    const int n_p = static_cast<int>(rng.uniform_int(0, max_proposals));
    for (int p = 0; p < n_p; ++p) {
      Bitmap b;
      if (!oi.gt.empty() && rng.uniform() < 0.7) {
        const auto& src = oi.gt[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(oi.gt.size()) - 1))];
        b = shift(src, static_cast<int>(rng.uniform_int(-2, 2)), static_cast<int>(rng.uniform_int(-2, 2)));
      } else {
        const int rw = static_cast<int>(rng.uniform_int(1, w));
        const int rh = static_cast<int>(rng.uniform_int(1, h));
        b = rect(w, h, static_cast<int>(rng.uniform_int(0, w - rw)), static_cast<int>(rng.uniform_int(0, h - rh)), rw, rh);
      }
      props.push_back({tileprop::rle_encode(b), static_cast<double>(n_p - p) / n_p});
      oi.proposals.push_back(b);
    }
    ds.gt.push_back(std::move(gt));
    ds.proposals.push_back(std::move(props));
    ds.oracle_images.push_back(std::move(oi));
  }
  return ds;
}

}  // namespace oracle
