#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tileprop/annotations.hpp"
#include "tileprop/proposal.hpp"

namespace tileprop {

/// Geometry of a simulated pyramid-window proposal generator.
///
/// Every processed region is rescaled to fit input_w×input_h. Level d of the
/// feature pyramid is the input downsampled by d, and fixed windows of
/// window_cells×window_cells cells are read from it, so a window at level d
/// spans window_cells·d input pixels. An object is localizable at level d
/// when its side fills between fill_min and fill_max of that window.
struct DetectorProfile {
  std::string name = "attentionmask";
  int input_w = 1280;
  int input_h = 960;
  std::vector<int> levels{8, 16, 32, 64, 128};
  int window_cells = 10;
  double fill_min = 0.4;
  double fill_max = 1.0;
  int jitter = 2;
  double objectness_noise = 0.1;
  std::uint64_t seed = 0;

  /// Throws ValidationError when a field is out of range.
  void validate() const;

  /// Applies "key=value" overrides (keys named like the fields; levels as a
  /// comma-separated list).
  void apply(const std::map<std::string, std::string>& overrides);
};

/// Names accepted by preset(): attentionmask, attentionmask-4-16, fastmask.
std::span<const std::string_view> preset_names();

/// Preset profile by name; underscores are accepted in place of dashes.
/// Throws ValidationError for an unknown name.
DetectorProfile preset(std::string_view name);

/// Smallest and largest localizable object side, in detector-input pixels.
struct DetectableRange {
  double s_min;
  double s_max;
};

DetectableRange detectable_range(const DetectorProfile& profile);

/// Ranking score in (0, 1] of an object with side `side` (input pixels):
/// 1 at the geometric centre of some level's band, 1/2 at band edges.
double band_score(const DetectorProfile& profile, double side);

/// Region of an image processed as one detector input (whole image or a tile).
struct Region {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
};

/// Simulated proposals for the objects of one region. `gt` masks are sized
/// to the region. An object is emitted iff its bbox side, rescaled to the
/// detector input, lies in detectable_range; the emitted mask is the ground
/// truth mask translated by a seeded jitter. Randomness is drawn from a
/// stream keyed by (seed, region origin, instance id) so results do not
/// depend on evaluation order.
std::vector<Proposal> simulate(const DetectorProfile& profile, const Region& region,
                               std::span<const GroundTruthObject> gt);

}  // namespace tileprop
