#include "fencing/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fencing {

Json vec3_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("expected a 3-element array, got " + j.dump());
  }
  Vec3 v(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  if (!v.allFinite()) throw std::invalid_argument("non-finite vector " + j.dump());
  return v;
}

void to_json(Json& j, const GameConfig& c) {
  j = Json{{"dt", c.dt},
           {"horizon_ticks", c.horizon_ticks},
           {"target_center", vec3_to_json(c.target_center)},
           {"target_radius", c.target_radius},
           {"bat_length", c.bat_length},
           {"bat_radius", c.bat_radius},
           {"v_max", c.v_max},
           {"omega_max", c.omega_max},
           {"d_pos_max", c.d_pos_max},
           {"d_dir_max", c.d_dir_max},
           {"anchor_a", vec3_to_json(c.anchor_a)},
           {"anchor_p", vec3_to_json(c.anchor_p)},
           {"reach_radius", c.reach_radius},
           {"start_offset", c.start_offset},
           {"start_jitter_pos", c.start_jitter_pos},
           {"start_jitter_dir", c.start_jitter_dir},
           {"camping_ticks", c.camping_ticks},
           {"score_in_target", c.score_in_target},
           {"penalty_contact", c.penalty_contact},
           {"reward_camping", c.reward_camping}};
}

// Missing keys keep their defaults so partial config files work.
void from_json(const Json& j, GameConfig& c) {
  auto num = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  auto vec = [&](const char* key, Vec3& field) {
    if (j.contains(key)) field = vec3_from_json(j.at(key));
  };
  num("dt", c.dt);
  num("horizon_ticks", c.horizon_ticks);
  vec("target_center", c.target_center);
  num("target_radius", c.target_radius);
  num("bat_length", c.bat_length);
  num("bat_radius", c.bat_radius);
  num("v_max", c.v_max);
  num("omega_max", c.omega_max);
  num("d_pos_max", c.d_pos_max);
  num("d_dir_max", c.d_dir_max);
  vec("anchor_a", c.anchor_a);
  vec("anchor_p", c.anchor_p);
  num("reach_radius", c.reach_radius);
  num("start_offset", c.start_offset);
  num("start_jitter_pos", c.start_jitter_pos);
  num("start_jitter_dir", c.start_jitter_dir);
  num("camping_ticks", c.camping_ticks);
  num("score_in_target", c.score_in_target);
  num("penalty_contact", c.penalty_contact);
  num("reward_camping", c.reward_camping);
}

void to_json(Json& j, const BatState& bat) {
  j = Json{{"center", vec3_to_json(bat.pose.center)},
           {"dir", vec3_to_json(bat.pose.dir)},
           {"lin_vel", vec3_to_json(bat.lin_vel)},
           {"dir_vel", vec3_to_json(bat.dir_vel)}};
}

void from_json(const Json& j, BatState& bat) {
  bat.pose.center = vec3_from_json(j.at("center"));
  bat.pose.dir = vec3_from_json(j.at("dir"));
  bat.lin_vel = vec3_from_json(j.at("lin_vel"));
  bat.dir_vel = vec3_from_json(j.at("dir_vel"));
}

void to_json(Json& j, const ScoreEvent& event) {
  j = Json{{"tick", event.tick}, {"kind", score_kind_name(event.kind)}};
}

void from_json(const Json& j, ScoreEvent& event) {
  event.tick = j.at("tick").get<int>();
  event.kind = parse_score_kind(j.at("kind").get<std::string>());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

}  // namespace fencing
