#pragma once

#include "tileprop/mask.hpp"

namespace tileprop {

/// A ranked object candidate: pixel mask plus objectness in [0, 1].
struct Proposal {
  BinaryMask mask;
  double objectness;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

}  // namespace tileprop
