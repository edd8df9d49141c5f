#include "tileprop/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace tileprop {

namespace {

std::array<std::optional<double>, 5> cells(const ARRow& row) {
  return {row.ar_at_10, row.ar_at_100, row.ar_xs_at_100, row.ar_s_at_100, row.ar_m_at_100};
}

std::string fixed3(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

const std::array<std::string_view, 5>& report_columns() {
  static const std::array<std::string_view, 5> columns{"AR@10", "AR@100", "AR^XS@100", "AR^S@100",
                                                       "AR^M@100"};
  return columns;
}

std::string report_to_text(const ARReport& report) {
  std::size_t name_width = 6;
  for (const auto& row : report.rows) name_width = std::max(name_width, row.system.size());
  std::size_t col_width = 0;
  for (auto c : report_columns()) col_width = std::max(col_width, c.size());
  col_width += 2;

  std::string out = pad("System", name_width + 2);
  for (auto c : report_columns()) out += pad(std::string(c), col_width);
  while (!out.empty() && out.back() == ' ') out.pop_back();
  out += '\n';
  out += std::string(name_width + 2 + col_width * report_columns().size() - 2, '-');
  out += '\n';
  for (const auto& row : report.rows) {
    std::string line = pad(row.system, name_width + 2);
    for (const auto& v : cells(row)) line += pad(fixed3(v), col_width);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

std::string report_to_json(const ARReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["columns"] = ordered_json::array();
  for (auto c : report_columns()) doc["columns"].push_back(std::string(c));
  doc["iou_thresholds"] = ordered_json::array();
  for (double t : iou_thresholds()) doc["iou_thresholds"].push_back(t);
  doc["systems"] = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["system"] = row.system;
    const auto values = cells(row);
    const char* keys[] = {"ar_at_10", "ar_at_100", "ar_xs_at_100", "ar_s_at_100", "ar_m_at_100"};
    for (std::size_t i = 0; i < values.size(); ++i) {
      r[keys[i]] = values[i] ? ordered_json(*values[i]) : ordered_json(nullptr);
    }
    r["images"] = row.images;
    r["gt_counts"] = {{"XS", row.gt_xs}, {"S", row.gt_s}, {"M", row.gt_m}, {"total", row.gt_total()}};
    doc["systems"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const ARReport& report) {
  std::string out = "system";
  for (auto c : report_columns()) out += "," + std::string(c);
  out += ",images,gt_xs,gt_s,gt_m\n";
  for (const auto& row : report.rows) {
    std::string name = row.system;
    if (name.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : name) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      name = quoted + "\"";
    }
    out += name;
    for (const auto& v : cells(row)) {
      out += ',';
      if (v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", *v);
        out += buf;
      }
    }
    out += "," + std::to_string(row.images) + "," + std::to_string(row.gt_xs) + "," +
           std::to_string(row.gt_s) + "," + std::to_string(row.gt_m) + "\n";
  }
  return out;
}

}  // namespace tileprop
