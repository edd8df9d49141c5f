#include "tileprop/manifest.hpp"

#include <cstdio>

namespace tileprop {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string RunManifest::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json doc;
  doc["tool"] = "tileprop";
  doc["version"] = std::string(kToolVersion);
  doc["command"] = command;
  if (!system.empty()) doc["system"] = system;
  doc["config_hash"] = config_hash();
  doc["config"] = config;
  doc["seed"] = seed;
  doc["inputs"] = inputs;
  doc["outputs"] = outputs;
  return doc;
}

}  // namespace tileprop
