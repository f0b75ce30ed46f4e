#pragma once

#include "mvtsk/coop.hpp"

#include <string>

namespace mvtsk {

/// Versioned JSON serialization of a trained model. Matrices are stored
/// row-major as nested arrays alongside their shape; doubles round-trip
/// exactly. Training graphs are not stored — prediction rebuilds graphs on
/// the data it is given.
std::string model_to_json(const CoopModel& model);
CoopModel model_from_json(const std::string& text);

void save_model(const CoopModel& model, const std::string& path);
CoopModel load_model(const std::string& path);

} // namespace mvtsk
