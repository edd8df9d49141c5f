#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tileprop/annotations.hpp"
#include "tileprop/pnm.hpp"

namespace tileprop {

/// Parameters of a synthetic orchard scene. Defaults give roughly 40
/// apples per 1280×720 frame with about half of them below the XS area
/// threshold, and no apple wider than 57 px.
struct SceneSpec {
  int width = 1280;
  int height = 720;
  int n_apples = 40;
  int radius_min = 4;
  int radius_max = 28;
  double xs_fraction = 0.51;
  int n_leaves = 60;
  int min_visible = 16;
  std::uint64_t seed = 0;

  /// Throws ValidationError when a field is out of range.
  void validate() const;
};

struct Scene {
  RasterImage image;
  InstanceMap instances;
  std::vector<GroundTruthObject> objects;
};

/// Number of pixels of a disk of integer radius r drawn as
/// {(x, y) : x² + y² ≤ r²}.
std::int64_t disk_pixel_count(int radius);

/// Largest radius whose disk falls in the XS category.
int largest_xs_radius();

/// Deterministic function of `spec`. Apples are filled disks painted in
/// order (later ones occlude earlier ones), then leaf ellipses occlude
/// apples. Instances with fewer than `min_visible` visible pixels are
/// dropped from both the map and the object list.
Scene generate_scene(const SceneSpec& spec);

/// Seed of the index-th scene of a batch generated from `batch_seed`.
std::uint64_t scene_seed(std::uint64_t batch_seed, int index);

/// "scene_<seed>_<index>"
std::string scene_stem(std::uint64_t batch_seed, int index);

}  // namespace tileprop
