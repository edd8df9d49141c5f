#include "tileprop/synth.hpp"

#include <algorithm>
#include <cmath>

#include "tileprop/error.hpp"
#include "tileprop/rng.hpp"

namespace tileprop {

void SceneSpec::validate() const {
  if (width <= 0 || height <= 0) throw DimensionError("scene canvas must have positive area");
  if (n_apples < 0 || n_apples > 65535) throw ValidationError("n_apples must be in [0, 65535]");
  if (radius_min < 2) throw ValidationError("radius_min must be at least 2");
  if (radius_max < radius_min) throw ValidationError("radius_max must be >= radius_min");
  if (!(xs_fraction >= 0.0 && xs_fraction <= 1.0)) throw ValidationError("xs_fraction must be in [0, 1]");
  if (n_leaves < 0) throw ValidationError("n_leaves must be non-negative");
  if (min_visible < 0) throw ValidationError("min_visible must be non-negative");
}

std::int64_t disk_pixel_count(int radius) {
  std::int64_t count = 0;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) ++count;
    }
  }
  return count;
}

int largest_xs_radius() {
  int r = 0;
  while (size_category(disk_pixel_count(r + 1)) == SizeCategory::XS) ++r;
  return r;
}

namespace {

std::uint16_t clamp8(double v) { return static_cast<std::uint16_t>(std::clamp(std::lround(v), 0L, 255L)); }

int sample_radius(const SceneSpec& spec, int xs_max, SplitMix64& rng) {
  const bool want_xs = rng.uniform() < spec.xs_fraction;
  const int small_hi = std::min(xs_max, spec.radius_max);
  const int large_lo = std::max(xs_max + 1, spec.radius_min);
  const bool has_small = spec.radius_min <= small_hi;
  const bool has_large = large_lo <= spec.radius_max;
  if ((want_xs && has_small) || !has_large) {
    return static_cast<int>(rng.uniform_int(spec.radius_min, small_hi));
  }
  return static_cast<int>(rng.uniform_int(large_lo, spec.radius_max));
}

}  // namespace

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  const int w = spec.width;
  const int h = spec.height;
  SplitMix64 rng(spec.seed);

  RasterImage image(w, h, 3, 8);
  InstanceMap map{w, h, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h, 0)};

  // Foliage background: dark green with per-pixel texture.
  {
    SplitMix64 texture(hash_combine(spec.seed, 0x6261636bu));
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double t = texture.uniform();
        image.set(x, y, 0, clamp8(30 + 30 * t));
        image.set(x, y, 1, clamp8(70 + 50 * t));
        image.set(x, y, 2, clamp8(25 + 20 * t));
      }
    }
  }

  const int xs_max = largest_xs_radius();
  for (int k = 0; k < spec.n_apples; ++k) {
    const auto id = static_cast<std::uint16_t>(k + 1);
    const int r = sample_radius(spec, xs_max, rng);
    const int cx = static_cast<int>(rng.uniform_int(0, w - 1));
    const int cy = static_cast<int>(rng.uniform_int(0, h - 1));
    const double red = 170 + 70 * rng.uniform();
    const double green = 20 + 50 * rng.uniform();
    for (int y = std::max(0, cy - r); y <= std::min(h - 1, cy + r); ++y) {
      for (int x = std::max(0, cx - r); x <= std::min(w - 1, cx + r); ++x) {
        const int d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        if (d2 > r * r) continue;
        const double shade = 1.0 - 0.35 * std::sqrt(static_cast<double>(d2)) / (r + 1);
        map.labels[static_cast<std::size_t>(y) * w + x] = id;
        image.set(x, y, 0, clamp8(red * shade));
        image.set(x, y, 1, clamp8(green * shade));
        image.set(x, y, 2, clamp8(25 * shade));
      }
    }
  }

  for (int k = 0; k < spec.n_leaves; ++k) {
    int ax = static_cast<int>(rng.uniform_int(6, 24));
    int ay = static_cast<int>(rng.uniform_int(3, 10));
    if (rng.uniform() < 0.5) std::swap(ax, ay);
    const int cx = static_cast<int>(rng.uniform_int(0, w - 1));
    const int cy = static_cast<int>(rng.uniform_int(0, h - 1));
    // Most leaves are green; some are tinted towards apple hues.
    const bool reddish = rng.uniform() < 0.2;
    const double red = reddish ? 140 + 60 * rng.uniform() : 40 + 40 * rng.uniform();
    const double green = reddish ? 50 + 40 * rng.uniform() : 100 + 70 * rng.uniform();
    const double blue = 20 + 30 * rng.uniform();
    const double ax2 = static_cast<double>(ax) * ax;
    const double ay2 = static_cast<double>(ay) * ay;
    for (int y = std::max(0, cy - ay); y <= std::min(h - 1, cy + ay); ++y) {
      for (int x = std::max(0, cx - ax); x <= std::min(w - 1, cx + ax); ++x) {
        const double u = (x - cx) * (x - cx) / ax2 + (y - cy) * (y - cy) / ay2;
        if (u > 1.0) continue;
        map.labels[static_cast<std::size_t>(y) * w + x] = 0;
        image.set(x, y, 0, clamp8(red));
        image.set(x, y, 1, clamp8(green));
        image.set(x, y, 2, clamp8(blue));
      }
    }
  }

  if (spec.min_visible > 0 && spec.n_apples > 0) {
    std::vector<std::int64_t> visible(static_cast<std::size_t>(spec.n_apples) + 1, 0);
    for (auto id : map.labels) ++visible[id];
    for (auto& id : map.labels) {
      if (id != 0 && visible[id] < spec.min_visible) id = 0;
    }
  }

  auto objects = extract_instances(map);
  return {std::move(image), std::move(map), std::move(objects)};
}

std::uint64_t scene_seed(std::uint64_t batch_seed, int index) {
  return hash_combine(batch_seed, static_cast<std::uint64_t>(index));
}

std::string scene_stem(std::uint64_t batch_seed, int index) {
  return "scene_" + std::to_string(batch_seed) + "_" + std::to_string(index);
}

}  // namespace tileprop
