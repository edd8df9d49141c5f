#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tileprop {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Provenance record written next to every output set. It holds only
/// inputs that influence the outputs, so equal manifests mean equal bytes.
struct RunManifest {
  std::string command;
  std::string system;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  /// FNV-1a 64 of the compact dump of `config`, as 16 hex digits.
  std::string config_hash() const;
  nlohmann::ordered_json to_json() const;
  std::string dump() const { return to_json().dump(2) + "\n"; }
};

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace tileprop
