#include "tileprop/exchange.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tileprop/error.hpp"

namespace tileprop {

using nlohmann::json;

std::string format_record(const ProposalRecord& record) {
  if (!(record.objectness >= 0.0 && record.objectness <= 1.0)) {
    throw ValidationError("objectness " + std::to_string(record.objectness) + " outside [0, 1]");
  }
  char score[32];
  std::snprintf(score, sizeof(score), "%.6f", record.objectness);

  std::string line = "{\"image_id\":";
  line += json(record.image_id).dump();
  line += ",\"tile_index\":";
  line += record.tile_index ? std::to_string(*record.tile_index) : "null";
  line += ",\"width\":" + std::to_string(record.mask.width());
  line += ",\"height\":" + std::to_string(record.mask.height());
  line += ",\"objectness\":";
  line += score;
  line += ",\"runs\":[";
  const auto runs = record.mask.runs();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i) line += ',';
    line += std::to_string(runs[i]);
  }
  line += "]}";
  return line;
}

ProposalRecord parse_record(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("record must be a JSON object");

  auto require = [&](const char* key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end()) throw ValidationError(std::string("missing field '") + key + "'");
    return *it;
  };
  auto as_int = [](const json& v, const char* key) {
    if (!v.is_number_integer()) throw ValidationError(std::string("field '") + key + "' must be an integer");
    return v.get<long long>();
  };

  const json& id = require("image_id");
  if (!id.is_string()) throw ValidationError("field 'image_id' must be a string");

  std::optional<int> tile_index;
  if (auto it = doc.find("tile_index"); it != doc.end() && !it->is_null()) {
    const long long t = as_int(*it, "tile_index");
    if (t < 0) throw ValidationError("field 'tile_index' must be non-negative");
    tile_index = static_cast<int>(t);
  }

  const long long width = as_int(require("width"), "width");
  const long long height = as_int(require("height"), "height");
  if (width <= 0 || height <= 0 || width > 1'000'000 || height > 1'000'000) {
    throw ValidationError("width and height must be positive");
  }

  const json& score = require("objectness");
  if (!score.is_number()) throw ValidationError("field 'objectness' must be a number");
  const double objectness = score.get<double>();
  if (!(objectness >= 0.0 && objectness <= 1.0)) {
    throw ValidationError("objectness " + score.dump() + " outside [0, 1]");
  }

  const json& runs_json = require("runs");
  if (!runs_json.is_array()) throw ValidationError("field 'runs' must be an array");
  std::vector<std::uint32_t> runs;
  runs.reserve(runs_json.size());
  for (const auto& r : runs_json) {
    if (!r.is_number_unsigned() || r.get<unsigned long long>() > 0xFFFFFFFFull) {
      throw ValidationError("runs must be non-negative integers");
    }
    runs.push_back(static_cast<std::uint32_t>(r.get<unsigned long long>()));
  }

  return {id.get<std::string>(), tile_index,
          BinaryMask::from_runs(static_cast<int>(width), static_cast<int>(height), runs), objectness};
}

std::vector<ProposalRecord> parse_proposals(std::istream& in) {
  std::vector<ProposalRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_record(line));
    } catch (const CorruptionError& e) {
      throw CorruptionError("line " + std::to_string(number) + ": " + e.what());
    } catch (const Error& e) {
      throw ValidationError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return records;
}

std::vector<ProposalRecord> read_proposals(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_proposals(in);
  } catch (const CorruptionError& e) {
    throw CorruptionError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void serialize_proposals(std::ostream& out, const std::vector<ProposalRecord>& records) {
  for (const auto& r : records) out << format_record(r) << '\n';
}

void write_proposals(const std::vector<ProposalRecord>& records, const std::filesystem::path& path) {
  std::ostringstream buffer;
  serialize_proposals(buffer, records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << buffer.str();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace tileprop
