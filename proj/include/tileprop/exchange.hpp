#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tileprop/mask.hpp"

namespace tileprop {

/// One proposal as exchanged with external detectors. Without a tile index
/// the mask is in whole-image coordinates; with one, it is sized to that
/// tile of the grid the producer used.
struct ProposalRecord {
  std::string image_id;
  std::optional<int> tile_index;
  BinaryMask mask;
  double objectness;

  friend bool operator==(const ProposalRecord&, const ProposalRecord&) = default;
};

/// Canonical JSON-lines serialization of one record (no trailing newline):
///
///   {"image_id":"scene_42_0","tile_index":null,"width":4,"height":2,
///    "objectness":0.912500,"runs":[1,3,4]}
///
/// Keys are always in this order and objectness has 6 decimals.
std::string format_record(const ProposalRecord& record);

/// Parses one line. Throws ValidationError for malformed JSON, missing
/// fields or an objectness outside [0, 1], and CorruptionError when the
/// runs do not sum to width·height.
ProposalRecord parse_record(std::string_view line);

/// One record per nonempty line, in file order. Errors are rethrown with the
/// 1-based line number prefixed.
std::vector<ProposalRecord> parse_proposals(std::istream& in);
std::vector<ProposalRecord> read_proposals(const std::filesystem::path& path);

void serialize_proposals(std::ostream& out, const std::vector<ProposalRecord>& records);
void write_proposals(const std::vector<ProposalRecord>& records, const std::filesystem::path& path);

}  // namespace tileprop
