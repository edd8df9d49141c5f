#include <doctest.h>

#include <algorithm>

#include "oracle.hpp"
#include "tileprop/eval.hpp"
#include "tileprop/overlay.hpp"
#include "tileprop/report.hpp"

using namespace tileprop;

namespace {

GroundTruthObject object_from(int id, const Bitmap& b) {
  auto mask = rle_encode(b);
  const auto area = mask_area(mask);
  return {id, std::move(mask), area, size_category(area)};
}

Assignment single(double iou) { return {{MatchPair{0, 1, 0, 1, 1, iou}}}; }

std::vector<ImageResult> views(const oracle::RandomDataset& ds) {
  std::vector<ImageResult> images;
  for (std::size_t i = 0; i < ds.gt.size(); ++i) images.push_back({ds.gt[i], ds.proposals[i]});
  return images;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("thresholds are the ten decimals 0.50 … 0.95") {
  const double expected[] = {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
  for (int k = 0; k < 10; ++k) CHECK(iou_thresholds()[k] == expected[k]);
}

TEST_CASE("match: identical proposal and no proposal") {
  const auto g = object_from(1, oracle::rect(20, 20, 2, 2, 6, 6));
  const std::vector<GroundTruthObject> gt{g};
  const std::vector<Proposal> same{{g.mask, 1.0}};
  const auto a = match(gt, same);
  REQUIRE(a.pairs.size() == 1);
  CHECK(a.pairs[0].iou == 1.0);
  CHECK(match(gt, {}).pairs.empty());
}

TEST_CASE("match: greedy takes (A,p1,0.8) then (B,p2,0.5)") {
  // IoU table: p1 → A 0.8, B 0.6; p2 → A 0.7, B 0.5
  const std::vector<MatchPair> cands{{0, 1, 0, 4, 5, 0.8}, {1, 2, 0, 3, 5, 0.6},
                                     {0, 1, 1, 7, 10, 0.7}, {1, 2, 1, 1, 2, 0.5}};
  const auto a = assign_greedy(cands);
  REQUIRE(a.pairs.size() == 2);
  CHECK(a.pairs[0].gt_index == 0);
  CHECK(a.pairs[0].proposal_index == 0);
  CHECK(a.pairs[0].iou == 0.8);
  CHECK(a.pairs[1].gt_index == 1);
  CHECK(a.pairs[1].proposal_index == 1);
  CHECK(a.pairs[1].iou == 0.5);
  // Enumerate every one-to-one assignment of {A,B} to {p1,p2}: the best
  // achievable cardinality is 2, which greedy reaches.
  const double iou[2][2] = {{0.8, 0.7}, {0.6, 0.5}};  // [gt][proposal]
  std::size_t best_cardinality = 0;
  for (int perm = 0; perm < 2; ++perm) {
    std::size_t card = 0;
    for (int g = 0; g < 2; ++g) card += iou[g][perm ? 1 - g : g] > 0.0;
    best_cardinality = std::max(best_cardinality, card);
  }
  CHECK(a.pairs.size() == best_cardinality);
}

TEST_CASE("match: zero-IoU pairs are never assigned") {
  const std::vector<GroundTruthObject> gt{object_from(1, oracle::rect(20, 20, 0, 0, 5, 5))};
  const std::vector<Proposal> far{{rle_encode(oracle::rect(20, 20, 10, 10, 5, 5)), 1.0}};
  CHECK(match(gt, far).pairs.empty());
}

TEST_CASE("average_recall examples") {
  const std::vector<GroundTruthObject> gt{object_from(1, oracle::rect(4, 4, 0, 0, 2, 2))};
  CHECK(*average_recall(gt, single(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(*average_recall(gt, single(0.6)) - 0.3) <= 1e-9);
  CHECK(*average_recall(gt, single(0.49)) == 0.0);
  CHECK_FALSE(average_recall({}, Assignment{}).has_value());
}

TEST_CASE("evaluate_dataset: one XS and one M object, only M found") {
  const auto xs = object_from(1, oracle::rect(100, 100, 0, 0, 10, 10));
  const auto m = object_from(2, oracle::rect(100, 100, 40, 40, 40, 40));
  REQUIRE(xs.category == SizeCategory::XS);
  REQUIRE(m.category == SizeCategory::M);
  const std::vector<GroundTruthObject> gt{xs, m};
  const std::vector<Proposal> props{{m.mask, 0.9}};
  const std::vector<ImageResult> images{{gt, props}};
  const auto row = evaluate_dataset("sys", images);
  CHECK(*row.ar_at_100 == 0.5);
  CHECK(*row.ar_at_10 == 0.5);
  CHECK(*row.ar_xs_at_100 == 0.0);
  CHECK(*row.ar_m_at_100 == 1.0);
  CHECK_FALSE(row.ar_s_at_100.has_value());
  CHECK(row.gt_xs == 1);
  CHECK(row.gt_m == 1);
}

TEST_CASE("evaluate_dataset: perfect proposals score 1 everywhere") {
  std::vector<GroundTruthObject> gt{object_from(1, oracle::rect(200, 200, 0, 0, 10, 10)),
                                    object_from(2, oracle::rect(200, 200, 50, 50, 25, 25)),
                                    object_from(3, oracle::rect(200, 200, 100, 100, 40, 40))};
  std::vector<Proposal> props;
  for (const auto& g : gt) props.push_back({g.mask, 1.0});
  const std::vector<ImageResult> images{{gt, props}};
  const auto row = evaluate_dataset("perfect", images);
  for (auto v : {row.ar_at_10, row.ar_at_100, row.ar_xs_at_100, row.ar_s_at_100, row.ar_m_at_100}) {
    REQUIRE(v.has_value());
    CHECK(*v == 1.0);
  }
}

TEST_CASE("evaluate_dataset equals the brute-force oracle") {
  SplitMix64 rng(51);
  for (int i = 0; i < 60; ++i) {
    const auto ds = oracle::random_dataset(rng);
    const auto images = views(ds);
    for (std::size_t budget : {std::size_t{1}, std::size_t{5}, std::size_t{10}, std::size_t{100}}) {
      REQUIRE(dataset_average_recall(images, budget) == oracle::dataset_ar(ds.oracle_images, budget, std::nullopt));
    }
    for (auto cat : {SizeCategory::XS, SizeCategory::S, SizeCategory::M}) {
      REQUIRE(dataset_average_recall(images, 100, cat) == oracle::dataset_ar(ds.oracle_images, 100, cat));
    }
  }
}

TEST_CASE("properties: budget monotonicity, recall(t) non-increasing, AR monotone in IoU") {
  SplitMix64 rng(52);
  for (int i = 0; i < 300; ++i) {
    const auto ds = oracle::random_dataset(rng);
    const auto images = views(ds);
    const auto row = evaluate_dataset("r", images);
    if (row.ar_at_10) REQUIRE(*row.ar_at_10 <= *row.ar_at_100);

    for (std::size_t im = 0; im < ds.gt.size(); ++im) {
      const auto a = match(ds.gt[im], ds.proposals[im]);
      double prev = 2.0;
      for (double t : iou_thresholds()) {
        const auto r = recall_at(ds.gt[im].size(), a, t);
        if (!r) break;
        REQUIRE(*r <= prev);
        prev = *r;
      }
      if (a.pairs.empty()) continue;
      Assignment better = a;
      auto& p = better.pairs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(a.pairs.size()) - 1))];
      p.iou = std::min(1.0, p.iou + rng.uniform() * 0.3);
      REQUIRE(*average_recall(ds.gt[im], better) >= *average_recall(ds.gt[im], a));
    }
  }
}

TEST_CASE("per-category matched counts add up on disjoint ground truth") {
  SplitMix64 rng(53);
  for (int i = 0; i < 200; ++i) {
    // Disjoint ground truth squares on a 10-column lattice, each with one
    // jittered proposal that cannot reach a neighbour.
    const int n = static_cast<int>(rng.uniform_int(1, 10));
    std::vector<GroundTruthObject> gt;
    std::vector<Proposal> props;
    for (int k = 0; k < n; ++k) {
      const int side = static_cast<int>(rng.uniform_int(5, 40));
      const auto box = oracle::rect(500, 100, 50 * k + 4, 4, side, side);
      gt.push_back(object_from(k + 1, box));
      if (rng.uniform() < 0.8) {
        props.push_back({rle_encode(oracle::shift(box, static_cast<int>(rng.uniform_int(-2, 2)),
                                                  static_cast<int>(rng.uniform_int(-2, 2)))),
                         rng.uniform()});
      }
    }
    const auto total = match(gt, props).pairs.size();
    std::size_t summed = 0;
    for (auto cat : {SizeCategory::XS, SizeCategory::S, SizeCategory::M}) {
      std::vector<GroundTruthObject> sub;
      for (const auto& g : gt)
        if (g.category == cat) sub.push_back(g);
      summed += match(sub, props).pairs.size();
    }
    REQUIRE(summed == total);
  }
}

TEST_CASE("report formats") {
  ARReport report;
  ARRow row;
  row.system = "tiled";
  row.ar_at_10 = 0.0731;
  row.ar_at_100 = 0.415;
  row.ar_xs_at_100 = 0.294;
  row.ar_s_at_100 = 0.5;
  row.images = 30;
  row.gt_xs = 3;
  report.rows.push_back(row);

  const auto text = report_to_text(report);
  const auto header = text.substr(0, text.find('\n'));
  std::size_t last = 0;
  for (auto col : report_columns()) {
    const auto pos = header.find(col);
    REQUIRE(pos != std::string::npos);
    CHECK(pos >= last);
    last = pos;
  }
  CHECK(text.find("0.073") != std::string::npos);
  CHECK(text.find(" -") != std::string::npos);

  const auto csv = report_to_csv(report);
  CHECK(csv.substr(0, csv.find('\n')) == "system,AR@10,AR@100,AR^XS@100,AR^S@100,AR^M@100,images,gt_xs,gt_s,gt_m");
  CHECK(csv.find("tiled,0.073100,0.415000,0.294000,0.500000,,30,3,0,0") != std::string::npos);

  const auto json = report_to_json(report);
  CHECK(json.find("\"ar_m_at_100\": null") != std::string::npos);
  CHECK(json.find("\"AR^XS@100\"") != std::string::npos);
}

TEST_CASE("overlay rendering") {
  RasterImage image(60, 40, 3, 8);
  const auto a = object_from(1, oracle::rect(60, 40, 5, 5, 10, 10));
  const auto b = object_from(2, oracle::rect(60, 40, 30, 10, 12, 12));
  const std::vector<GroundTruthObject> gt{a, b};

  auto is_red = [](const RasterImage& img, int x, int y) {
    return img.at(x, y, 0) == 255 && img.at(x, y, 1) == 0 && img.at(x, y, 2) == 0;
  };
  auto count_red = [&](const RasterImage& img) {
    int n = 0;
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x) n += is_red(img, x, y);
    return n;
  };

  SUBCASE("no proposals: red outlines only") {
    const auto out = render_overlay(image, gt, {});
    CHECK(is_red(out, 5, 5));
    CHECK(is_red(out, 14, 9));
    CHECK(out.at(10, 10, 0) == 0);  // interior untouched
    CHECK(out.at(0, 0, 0) == 0);
    CHECK(count_red(out) == 36 + 44);
  }
  SUBCASE("perfect proposals: filled, no red") {
    const std::vector<Proposal> props{{a.mask, 0.9}, {b.mask, 0.8}};
    const auto out = render_overlay(image, gt, props);
    CHECK(count_red(out) == 0);
    const bool unchanged = out.at(10, 10, 0) == image.at(10, 10, 0) && out.at(10, 10, 1) == image.at(10, 10, 1) &&
                           out.at(10, 10, 2) == image.at(10, 10, 2);
    CHECK_FALSE(unchanged);
  }
  SUBCASE("grayscale input becomes RGB") {
    RasterImage gray(60, 40, 1, 16);
    const auto out = render_overlay(gray, gt, {});
    CHECK(out.channels() == 3);
    CHECK(out.depth() == 8);
  }
}

}  // TEST_SUITE
