#pragma once

#include <filesystem>
#include <string>

#include "aispath/ensemble/ensemble.hpp"

namespace aispath {

/// Bundle file: a text preamble and JSON header, then length-prefixed
/// little-endian numeric blocks (float64 model weights, float32 store).
std::string serialize_bundle(const ModelBundle& bundle);
ModelBundle deserialize_bundle(const std::string& bytes);

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

}  // namespace aispath
