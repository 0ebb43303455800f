#pragma once

#include "mlabel/combiner.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mlabel {

/// Versioned text container for a TrainedModel. Reals are written in their
/// shortest round-trip decimal form, so save -> load -> save is
/// byte-identical.
std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(std::string_view text);

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace mlabel
