#pragma once

#include <array>
#include <string>
#include <string_view>

#include "tileprop/eval.hpp"

namespace tileprop {

/// Column headers in table order.
const std::array<std::string_view, 5>& report_columns();

/// Aligned plain-text table, values with 3 decimals, absent cells as "-".
std::string report_to_text(const ARReport& report);

/// Canonical JSON document (fixed key order, 2-space indent).
std::string report_to_json(const ARReport& report);

/// CSV with a header row; absent cells are empty.
std::string report_to_csv(const ARReport& report);

}  // namespace tileprop
