#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aispath/domain/types.hpp"
#include "aispath/featurize/dataset.hpp"
#include "aispath/featurize/features.hpp"
#include "aispath/outlier/anomaly.hpp"

namespace aispath::cli {

// Trajectory store: a directory with index.json and one text file per
// trajectory. Each file starts with
//   # aispath-trajectory 1
//   # {"id": ..., "vessel_type": ..., "length": ..., "width": ..., "draft": ...}
//   tau,mmsi,lat,lon,sog,cog,heading,cog_sine,interpolated,vessel_type,length,width,draft
// followed by one row per message. Absent optional values are empty fields;
// numbers are written in shortest round-trip form.

void write_trajectory(std::ostream& out, const Trajectory& t);
Trajectory read_trajectory(std::istream& in, const std::string& source);

void write_store(const std::filesystem::path& dir, std::span<const Trajectory> trajectories,
                 const std::string& stage);
std::vector<Trajectory> read_store(const std::filesystem::path& dir);
/// Stage name recorded in the index.
std::string store_stage(const std::filesystem::path& dir);

/// Featurized samples: samples.csv plus samples.json describing the layout.
struct SampleSet {
  SampleConfig sample;
  SideInfoConfig side_info;
  std::vector<std::string> names;
  std::vector<TrainingPair> pairs;
};

void write_samples(const std::filesystem::path& dir, const SampleSet& set);
SampleSet read_samples(const std::filesystem::path& dir);

struct AnomalyRecord {
  std::string trajectory_id;
  AnomalyMark mark;
};

void write_anomalies(const std::filesystem::path& path, std::span<const AnomalyRecord> records);

/// Quotes a CSV field when it contains a separator or quote.
std::string csv_field(const std::string& s);

}  // namespace aispath::cli
