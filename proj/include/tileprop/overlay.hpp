#pragma once

#include <span>

#include "tileprop/annotations.hpp"
#include "tileprop/pnm.hpp"
#include "tileprop/proposal.hpp"

namespace tileprop {

/// Localization overlay: for each ground truth object, its assigned
/// (highest-IoU) proposal is drawn as a translucent fill with a contour in
/// a per-instance colour; unmatched objects get an unfilled red contour.
/// The output is always 8-bit RGB.
RasterImage render_overlay(const RasterImage& image, std::span<const GroundTruthObject> gt,
                           std::span<const Proposal> proposals);

}  // namespace tileprop
