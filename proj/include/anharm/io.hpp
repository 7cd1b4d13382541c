#pragma once

// CSV tables with round-trip number formatting, JSON documents for contours
// and metadata sidecars. Data files carry no timestamps, so identical runs
// give identical bytes; wall time and dates live in the sidecar only.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "anharm/pseudo.hpp"

namespace anharm::io {

/// %.17g, with nan / inf / -inf spelled out.
std::string num(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string csv() const;
  /// Array of objects keyed by header; numeric-looking cells become numbers.
  nlohmann::json json() const;
};

/// Parses the output of Table::csv (no quoting support: cells never contain commas).
Table parse_csv(const std::string& text);

/// Throws Error(io_error) on failure.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

Table field_table(const pseudo::PseudospectrumField& field);
nlohmann::json contours_json(const pseudo::ContourSet& set);
Table perimeter_table(const std::vector<pseudo::PerimeterResult>& results);
Table scatter_table(const std::vector<pseudo::ScatterTrial>& trials);

/// Metadata: command, echoed configuration, library versions, wall time, UTC timestamp.
nlohmann::json sidecar(const std::string& command, const nlohmann::json& config, double wall_seconds);

}  // namespace anharm::io
