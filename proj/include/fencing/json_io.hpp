#pragma once

#include <json.hpp>

#include "fencing/common.hpp"
#include "fencing/game.hpp"

namespace fencing {

using Json = nlohmann::json;

Json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j);

void to_json(Json& j, const GameConfig& config);
void from_json(const Json& j, GameConfig& config);

void to_json(Json& j, const BatState& bat);
void from_json(const Json& j, BatState& bat);

void to_json(Json& j, const ScoreEvent& event);
void from_json(const Json& j, ScoreEvent& event);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_text_file(const std::string& path);
/// Writes (truncating) a whole file, creating parent directories.
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace fencing
