#include "tileprop/detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "tileprop/error.hpp"
#include "tileprop/rng.hpp"

namespace tileprop {

namespace {

constexpr std::array<std::string_view, 3> kPresetNames{"attentionmask", "attentionmask-4-16", "fastmask"};
constexpr std::array<int, 6> kAllowedLevels{4, 8, 16, 32, 64, 128};

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("detector option '" + key + "' expects a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("detector option '" + key + "' expects an integer, got '" + value + "'");
  }
}

}  // namespace

void DetectorProfile::validate() const {
  if (input_w <= 0 || input_h <= 0) throw ValidationError("detector input size must be positive");
  if (levels.empty()) throw ValidationError("detector needs at least one pyramid level");
  for (int d : levels) {
    if (std::find(kAllowedLevels.begin(), kAllowedLevels.end(), d) == kAllowedLevels.end()) {
      throw ValidationError("pyramid level " + std::to_string(d) + " not in {4,8,16,32,64,128}");
    }
  }
  if (window_cells != 10) throw ValidationError("window_cells is fixed at 10");
  if (!(fill_min > 0.0 && fill_max <= 1.0 && fill_min < fill_max)) {
    throw ValidationError("fill bounds must satisfy 0 < fill_min < fill_max <= 1");
  }
  if (jitter < 0) throw ValidationError("jitter must be non-negative");
  if (!(objectness_noise >= 0.0 && objectness_noise < 1.0)) {
    throw ValidationError("objectness_noise must be in [0, 1)");
  }
}

void DetectorProfile::apply(const std::map<std::string, std::string>& overrides) {
  for (const auto& [key, value] : overrides) {
    if (key == "name") {
      name = value;
    } else if (key == "input_w") {
      input_w = static_cast<int>(parse_int(key, value));
    } else if (key == "input_h") {
      input_h = static_cast<int>(parse_int(key, value));
    } else if (key == "levels") {
      std::vector<int> parsed;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) parsed.push_back(static_cast<int>(parse_int(key, item)));
      levels = std::move(parsed);
    } else if (key == "window_cells") {
      window_cells = static_cast<int>(parse_int(key, value));
    } else if (key == "fill_min") {
      fill_min = parse_double(key, value);
    } else if (key == "fill_max") {
      fill_max = parse_double(key, value);
    } else if (key == "jitter") {
      jitter = static_cast<int>(parse_int(key, value));
    } else if (key == "objectness_noise") {
      objectness_noise = parse_double(key, value);
    } else if (key == "seed") {
      seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else {
      throw ValidationError("unknown detector option '" + key + "'");
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  validate();
}

std::span<const std::string_view> preset_names() { return kPresetNames; }

DetectorProfile preset(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '_', '-');
  DetectorProfile p;
  p.name = key;
  if (key == "attentionmask") {
    p.levels = {8, 16, 32, 64, 128};
  } else if (key == "attentionmask-4-16") {
    p.levels = {4, 8, 16};
  } else if (key == "fastmask") {
    p.levels = {16, 32, 64, 128};
  } else {
    throw ValidationError("unknown detector '" + std::string(name) +
                          "' (expected attentionmask, attentionmask-4-16 or fastmask)");
  }
  return p;
}

DetectableRange detectable_range(const DetectorProfile& profile) {
  const auto [lo, hi] = std::minmax_element(profile.levels.begin(), profile.levels.end());
  return {profile.fill_min * profile.window_cells * *lo, profile.fill_max * profile.window_cells * *hi};
}

double band_score(const DetectorProfile& profile, double side) {
  if (side <= 0.0) return 0.0;
  // Log-Gaussian around each band's geometric centre, 1/2 at the band edges.
  const double half_width = 0.5 * std::log(profile.fill_max / profile.fill_min);
  const double centre_fill = std::sqrt(profile.fill_min * profile.fill_max);
  double best = 0.0;
  for (int d : profile.levels) {
    const double centre = centre_fill * profile.window_cells * d;
    const double z = std::log(side / centre) / half_width;
    best = std::max(best, std::exp(-std::log(2.0) * z * z));
  }
  return std::max(best, std::numeric_limits<double>::min());
}

std::vector<Proposal> simulate(const DetectorProfile& profile, const Region& region,
                               std::span<const GroundTruthObject> gt) {
  profile.validate();
  if (region.w <= 0 || region.h <= 0) throw DimensionError("region must have positive size");
  const double scale = std::min(static_cast<double>(profile.input_w) / region.w,
                                static_cast<double>(profile.input_h) / region.h);
  const auto range = detectable_range(profile);
  const std::uint64_t region_key =
      hash_combine(hash_combine(profile.seed, static_cast<std::uint64_t>(region.x0)),
                   static_cast<std::uint64_t>(region.y0));

  std::vector<Proposal> out;
  for (const auto& object : gt) {
    if (object.mask.width() != region.w || object.mask.height() != region.h) {
      throw DimensionError("ground truth mask does not match region size");
    }
    const BBox box = mask_bbox(object.mask);
    if (box.empty()) continue;
    const double side = std::max(box.w, box.h) * scale;
    if (side < range.s_min || side > range.s_max) continue;

    SplitMix64 rng(hash_combine(region_key, static_cast<std::uint64_t>(object.instance_id)));
    const int dx = static_cast<int>(rng.uniform_int(-profile.jitter, profile.jitter));
    const int dy = static_cast<int>(rng.uniform_int(-profile.jitter, profile.jitter));
    const double u = rng.uniform();
    BinaryMask mask = (dx == 0 && dy == 0) ? object.mask : shift_mask(object.mask, dx, dy);
    if (mask.empty()) continue;
    const double objectness = (1.0 - profile.objectness_noise * u) * band_score(profile, side);
    out.push_back({std::move(mask), std::clamp(objectness, 0.0, 1.0)});
  }
  return out;
}

}  // namespace tileprop
