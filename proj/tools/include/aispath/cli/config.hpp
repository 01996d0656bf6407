#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aispath/ensemble/ensemble.hpp"
#include "aispath/featurize/dataset.hpp"
#include "aispath/featurize/features.hpp"
#include "aispath/harness/kfold.hpp"
#include "aispath/harness/synth.hpp"
#include "aispath/outlier/anomaly.hpp"
#include "aispath/preprocess/filter.hpp"

namespace aispath::cli {

/// Input column names, keyed by logical field.
struct ColumnMap {
  std::string mmsi = "MMSI";
  std::string time = "BaseDateTime";
  std::string lat = "LAT";
  std::string lon = "LON";
  std::string sog = "SOG";
  std::string cog = "COG";
  std::string heading = "Heading";
  std::string vessel_type = "VesselType";
  std::string length = "Length";
  std::string width = "Width";
  std::string draft = "Draft";
};

struct IngestConfig {
  double split_gap = 7200.0;  // seconds
  std::size_t min_length = 2;
  ColumnMap columns;

  void validate() const;
};

/// Every tunable of every stage in one place.
struct AppConfig {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  IngestConfig ingest;
  PreprocessConfig preprocess;
  OutlierConfig outlier;
  SampleConfig sample;
  SideInfoConfig side_info;
  EnsembleConfig ensemble;
  EvalConfig eval;
  SynthConfig synth;

  void validate() const;
};

nlohmann::json to_json(const AppConfig& cfg);
AppConfig from_json(const nlohmann::json& j);

/// Overlays `patch` onto `base` key by key. Keys absent from `base` are
/// rejected so typos surface as config errors.
void merge_strict(nlohmann::json& base, const nlohmann::json& patch, const std::string& where = "");

/// Applies one "section.key=value" override. The value is parsed as JSON
/// when possible, otherwise taken as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// defaults < file < overrides.
AppConfig load_config(const std::filesystem::path* file, const std::vector<std::string>& overrides);

}  // namespace aispath::cli
