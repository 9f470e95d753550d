#include "intentsim/env/spec.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace intentsim::env {

using json = nlohmann::json;

const char* to_string(RobotKind kind) {
  switch (kind) {
    case RobotKind::Lifting: return "lifting";
    case RobotKind::Pushing: return "pushing";
    case RobotKind::Throwing: return "throwing";
    case RobotKind::Rescue: return "rescue";
  }
  return "?";
}

const char* to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::Success: return "success";
    case RewardKind::ObstacleCollision: return "obstacle_collision";
    case RewardKind::AgentCollision: return "agent_collision";
    case RewardKind::DistanceShaping: return "distance_shaping";
    case RewardKind::DropOutside: return "drop_outside";
  }
  return "?";
}

const char* to_string(Layout layout) {
  switch (layout) {
    case Layout::SmallEmpty: return "SmallEmpty";
    case Layout::SmallDivider: return "SmallDivider";
    case Layout::LargeEmpty: return "LargeEmpty";
    case Layout::LargeDoors: return "LargeDoors";
    case Layout::LargeTunnels: return "LargeTunnels";
    case Layout::LargeRooms: return "LargeRooms";
  }
  return "?";
}

const char* to_string(Task task) {
  return task == Task::Foraging ? "foraging" : "search_and_rescue";
}

Layout layout_from_string(const std::string& s) {
  for (Layout l : {Layout::SmallEmpty, Layout::SmallDivider, Layout::LargeEmpty,
                   Layout::LargeDoors, Layout::LargeTunnels, Layout::LargeRooms})
    if (s == to_string(l)) return l;
  throw std::invalid_argument("unknown layout: " + s);
}

Task task_from_string(const std::string& s) {
  if (s == "foraging") return Task::Foraging;
  if (s == "search_and_rescue") return Task::SearchAndRescue;
  throw std::invalid_argument("unknown task: " + s);
}

bool is_large(Layout layout) {
  return layout == Layout::LargeEmpty || layout == Layout::LargeDoors ||
         layout == Layout::LargeTunnels || layout == Layout::LargeRooms;
}

bool opposite_side_start(Layout layout) {
  return layout == Layout::SmallDivider || layout == Layout::LargeDoors ||
         layout == Layout::LargeTunnels;
}

EnvironmentSpec EnvironmentSpec::resolved() const {
  EnvironmentSpec r = *this;
  if (r.interior_width == 0) r.interior_width = is_large(layout) ? 40 : 20;
  if (r.interior_height == 0) r.interior_height = 20;
  if (r.num_objects == 0) r.num_objects = is_large(layout) ? 20 : 10;
  return r;
}

void EnvironmentSpec::validate() const {
  EnvironmentSpec r = resolved();
  if (r.interior_width < 4 || r.interior_height < 4)
    throw std::invalid_argument("environment interior must be at least 4x4");
  if (r.num_objects < 1) throw std::invalid_argument("num_objects must be >= 1");
  if (r.team.empty()) throw std::invalid_argument("team must not be empty");
  if (!(r.shaping_kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
  if (!(r.effector_radius > 0.0)) throw std::invalid_argument("effector_radius must be > 0");
  for (RobotKind k : r.team)
    if ((k == RobotKind::Rescue) != (r.task == Task::SearchAndRescue))
      throw std::invalid_argument(
          "rescue robots are used for (and only for) the search_and_rescue task");
}

std::vector<RobotKind> parse_team(const std::string& s) {
  std::vector<RobotKind> team;
  size_t i = 0;
  while (i < s.size()) {
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i || j >= s.size()) throw std::invalid_argument("bad team string: " + s);
    int count = std::stoi(s.substr(i, j - i));
    RobotKind kind;
    switch (s[j]) {
      case 'L': kind = RobotKind::Lifting; break;
      case 'P': kind = RobotKind::Pushing; break;
      case 'T': kind = RobotKind::Throwing; break;
      case 'R': kind = RobotKind::Rescue; break;
      default: throw std::invalid_argument("bad robot kind in team string: " + s);
    }
    for (int k = 0; k < count; ++k) team.push_back(kind);
    i = j + 1;
    if (i < s.size()) {
      if (s[i] != '+') throw std::invalid_argument("bad team string: " + s);
      ++i;
    }
  }
  if (team.empty()) throw std::invalid_argument("empty team string");
  return team;
}

std::string team_to_string(const std::vector<RobotKind>& team) {
  std::string out;
  const char* letters = "LPTR";
  for (RobotKind kind : {RobotKind::Lifting, RobotKind::Pushing, RobotKind::Throwing,
                         RobotKind::Rescue}) {
    int n = 0;
    for (RobotKind k : team) n += k == kind ? 1 : 0;
    if (n > 0) {
      if (!out.empty()) out += '+';
      out += std::to_string(n);
      out += letters[size_t(kind)];
    }
  }
  return out;
}

EnvironmentSpec environment_spec_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  EnvironmentSpec spec;
  spec.layout = layout_from_string(j.at("layout").get<std::string>());
  if (j.contains("task")) spec.task = task_from_string(j["task"].get<std::string>());
  if (j.contains("dims")) {
    spec.interior_width = j["dims"].at(0).get<int>();
    spec.interior_height = j["dims"].at(1).get<int>();
  }
  if (j.contains("num_objects")) spec.num_objects = j["num_objects"].get<int>();
  if (j.contains("team")) spec.team = parse_team(j["team"].get<std::string>());
  if (j.contains("kappa")) spec.shaping_kappa = j["kappa"].get<double>();
  if (j.contains("effector_radius")) spec.effector_radius = j["effector_radius"].get<double>();
  if (j.contains("throw_range")) spec.throw_range = j["throw_range"].get<double>();
  if (j.contains("no_progress_limit"))
    spec.no_progress_limit = j["no_progress_limit"].get<int>();
  return spec;
}

std::string environment_spec_to_json(const EnvironmentSpec& spec) {
  json j;
  j["layout"] = to_string(spec.layout);
  j["task"] = to_string(spec.task);
  j["dims"] = {spec.interior_width, spec.interior_height};
  j["num_objects"] = spec.num_objects;
  j["team"] = team_to_string(spec.team);
  j["kappa"] = spec.shaping_kappa;
  j["effector_radius"] = spec.effector_radius;
  j["throw_range"] = spec.throw_range;
  j["no_progress_limit"] = spec.no_progress_limit;
  return j.dump(2);
}

}  // namespace intentsim::env
