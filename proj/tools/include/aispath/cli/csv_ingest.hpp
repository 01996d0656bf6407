#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aispath/cli/config.hpp"
#include "aispath/domain/types.hpp"

namespace aispath::cli {

/// Seconds since the Unix epoch for "YYYY-MM-DD[T ]hh:mm:ss[.fff][Z]".
std::optional<double> parse_iso8601(std::string_view s);
std::string format_iso8601(double tau);

/// Splits one CSV line; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line);

struct IngestStats {
  std::size_t rows = 0;
  std::size_t skipped = 0;  // unparseable rows
  std::size_t vessels = 0;
  std::size_t trajectories = 0;
  std::size_t short_dropped = 0;  // voyages below min_length
};

/// Raw rows of the input files, unsorted.
std::vector<AisMessage> read_ais_csv(const std::filesystem::path& path, const IngestConfig& cfg,
                                     IngestStats& stats);

/// Groups by MMSI, sorts by time and splits into voyages at gaps above
/// cfg.split_gap. Ids are "<mmsi>-<voyage>".
std::vector<Trajectory> group_voyages(std::vector<AisMessage> rows, const IngestConfig& cfg,
                                      IngestStats& stats);

std::vector<Trajectory> ingest(std::span<const std::filesystem::path> paths, const IngestConfig& cfg,
                               IngestStats& stats);

/// Writes messages in the input schema (default column names).
void write_ais_csv(const std::filesystem::path& path, std::span<const Trajectory> trajectories);

}  // namespace aispath::cli
