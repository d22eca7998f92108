#include "ldmp/sim/world.hpp"

#include <cmath>
#include <set>

namespace ldmp::sim {

namespace {

Vec2 vec2_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidWorld("expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json vec2_json(const Vec2& v) { return nlohmann::json::array({v.x(), v.y()}); }

}  // namespace

Kind kind_of_type(const std::string& type) {
  if (type == "cube") return Kind::Block;
  if (type == "hook") return Kind::Hook;
  if (is_region_type(type)) return Kind::Region;
  throw InvalidWorld("unknown object type '" + type + "'");
}

bool is_region_type(const std::string& type) { return type == "surface" || type == "slot" || type == "region"; }

const Object& WorldState::object(const std::string& name) const {
  auto it = objects.find(name);
  if (it == objects.end()) throw InvalidWorld("no object named '" + name + "'");
  return it->second;
}

Object& WorldState::object(const std::string& name) {
  auto it = objects.find(name);
  if (it == objects.end()) throw InvalidWorld("no object named '" + name + "'");
  return it->second;
}

const Arm* WorldState::holder(const std::string& name) const {
  for (const auto& [n, a] : arms) {
    if (a.holding && *a.holding == name) return &a;
  }
  return nullptr;
}

std::vector<std::string> WorldState::resting_on(const std::string& support) const {
  std::vector<std::string> out;
  for (const auto& [n, o] : objects) {
    if (o.support == support) out.push_back(n);
  }
  return out;
}

std::optional<std::string> WorldState::region_of(const std::string& name) const {
  std::string cur = name;
  for (std::size_t steps = 0; steps <= objects.size(); ++steps) {
    auto it = objects.find(cur);
    if (it == objects.end()) return std::nullopt;
    if (it->second.kind == Kind::Region) return cur;
    if (it->second.support.empty()) return std::nullopt;
    cur = it->second.support;
  }
  return std::nullopt;
}

void WorldState::refresh_levels() {
  for (auto& [n, o] : objects) {
    if (o.kind == Kind::Region) {
      o.level = 0;
      continue;
    }
    if (o.support.empty()) {
      o.level = -1;
      continue;
    }
    int level = 0;
    std::string cur = n;
    for (;;) {
      const auto& c = object(cur);
      if (c.kind == Kind::Region) break;
      if (c.support.empty()) throw InvalidWorld("support chain of '" + n + "' ends at a held object");
      if (++level > static_cast<int>(objects.size())) throw InvalidWorld("cyclic support at '" + n + "'");
      cur = c.support;
    }
    o.level = level;
  }
}

Vec2 aabb_half(const Object& o) {
  const double c = std::abs(std::cos(o.pose.yaw)), s = std::abs(std::sin(o.pose.yaw));
  return {c * o.half.x() + s * o.half.y(), s * o.half.x() + c * o.half.y()};
}

bool overlaps(const Object& a, const Object& b, double margin) {
  const Vec2 ha = aabb_half(a), hb = aabb_half(b);
  return std::abs(a.pose.x - b.pose.x) < ha.x() + hb.x() + 2 * margin &&
         std::abs(a.pose.y - b.pose.y) < ha.y() + hb.y() + 2 * margin;
}

bool footprint_inside(const Object& o, const Object& region, double margin) {
  const Vec2 h = aabb_half(o), hr = aabb_half(region);
  const double tol = 1e-9;
  return o.pose.x - h.x() - margin >= region.pose.x - hr.x() - tol &&
         o.pose.x + h.x() + margin <= region.pose.x + hr.x() + tol &&
         o.pose.y - h.y() - margin >= region.pose.y - hr.y() - tol &&
         o.pose.y + h.y() + margin <= region.pose.y + hr.y() + tol;
}

bool within_reach(const Arm& arm, const Vec2& p, double extra) {
  return (p - arm.base).norm() <= arm.reach + extra + 1e-12;
}

void WorldState::validate() const {
  std::set<std::string> names;
  for (const auto& [n, o] : objects) {
    if (n != o.name) throw InvalidWorld("object key/name mismatch for '" + n + "'");
    names.insert(n);
    if (!std::isfinite(o.pose.x) || !std::isfinite(o.pose.y) || !std::isfinite(o.pose.yaw)) {
      throw InvalidWorld("non-finite pose for '" + n + "'");
    }
    if (!(o.half.x() > 0) || !(o.half.y() > 0)) throw InvalidWorld("non-positive extent for '" + n + "'");
    if (o.kind != kind_of_type(o.type)) throw InvalidWorld("kind/type mismatch for '" + n + "'");
  }
  for (const auto& [n, a] : arms) {
    if (!names.insert(n).second) throw InvalidWorld("duplicate name '" + n + "'");
    if (!(a.reach > 0)) throw InvalidWorld("arm '" + n + "' has no reach");
    if (a.holding) {
      auto it = objects.find(*a.holding);
      if (it == objects.end()) throw InvalidWorld("arm '" + n + "' holds unknown '" + *a.holding + "'");
      if (it->second.kind == Kind::Region) throw InvalidWorld("arm '" + n + "' holds a region");
      if (!it->second.support.empty()) throw InvalidWorld("held object '" + *a.holding + "' has a support");
    }
  }
  for (const auto& [n, o] : objects) {
    if (o.kind == Kind::Region) {
      if (!o.support.empty() || o.level != 0) throw InvalidWorld("region '" + n + "' must be at level 0");
      continue;
    }
    if (o.support.empty()) {
      int holders = 0;
      for (const auto& [an, a] : arms) holders += (a.holding && *a.holding == n) ? 1 : 0;
      if (holders != 1) throw InvalidWorld("object '" + n + "' has no support and is not held by one arm");
      if (o.level != -1) throw InvalidWorld("held object '" + n + "' must have level -1");
      continue;
    }
    if (holder(n)) throw InvalidWorld("object '" + n + "' is held but has a support");
    auto it = objects.find(o.support);
    if (it == objects.end()) throw InvalidWorld("'" + n + "' rests on unknown '" + o.support + "'");
    const Object& s = it->second;
    if (s.kind == Kind::Hook) throw InvalidWorld("'" + n + "' rests on a hook");
    if (o.kind == Kind::Hook && s.kind != Kind::Region) throw InvalidWorld("hook '" + n + "' must rest on a region");
    if (s.level < 0) throw InvalidWorld("'" + n + "' rests on a held object");
    if (o.level != s.level + 1) throw InvalidWorld("level of '" + n + "' is not its support's level + 1");
    if (s.kind == Kind::Region) {
      if (!footprint_inside(o, s)) throw InvalidWorld("'" + n + "' sticks out of region '" + s.name + "'");
    } else {
      const Vec2 hs = aabb_half(s);
      if (std::abs(o.pose.x - s.pose.x) > hs.x() + 1e-9 || std::abs(o.pose.y - s.pose.y) > hs.y() + 1e-9) {
        throw InvalidWorld("'" + n + "' is not balanced on '" + s.name + "'");
      }
    }
  }
  for (auto it = objects.begin(); it != objects.end(); ++it) {
    if (it->second.level < 0 || it->second.kind == Kind::Region) continue;
    for (auto jt = std::next(it); jt != objects.end(); ++jt) {
      if (jt->second.level != it->second.level) continue;
      if (overlaps(it->second, jt->second)) {
        throw InvalidWorld("'" + it->first + "' overlaps '" + jt->first + "' at level " +
                           std::to_string(it->second.level));
      }
    }
  }
  for (auto it = objects.begin(); it != objects.end(); ++it) {
    if (it->second.kind != Kind::Region) continue;
    for (auto jt = std::next(it); jt != objects.end(); ++jt) {
      if (jt->second.kind == Kind::Region && overlaps(it->second, jt->second)) {
        throw InvalidWorld("regions '" + it->first + "' and '" + jt->first + "' overlap");
      }
    }
  }
}

nlohmann::json to_json(const Object& o) {
  nlohmann::json j = {{"name", o.name},
                      {"type", o.type},
                      {"pose", {o.pose.x, o.pose.y, o.pose.yaw}},
                      {"half", vec2_json(o.half)},
                      {"level", o.level}};
  if (!o.support.empty()) j["support"] = o.support;
  if (o.length > 0) j["length"] = o.length;
  if (!o.color.empty()) j["color"] = o.color;
  return j;
}

Object object_from_json(const nlohmann::json& j) {
  Object o;
  o.name = j.at("name").get<std::string>();
  o.type = j.at("type").get<std::string>();
  o.kind = kind_of_type(o.type);
  if (j.contains("pose")) {
    const auto& p = j["pose"];
    if (!p.is_array() || p.size() < 2 || p.size() > 3) throw InvalidWorld("pose must be [x, y(, yaw)]");
    o.pose = {p[0].get<double>(), p[1].get<double>(), p.size() == 3 ? p[2].get<double>() : 0.0};
  } else if (j.contains("center")) {
    const Vec2 c = vec2_from(j["center"]);
    o.pose = {c.x(), c.y(), 0.0};
  } else {
    throw InvalidWorld("object '" + o.name + "' has no pose");
  }
  if (j.contains("half")) o.half = vec2_from(j["half"]);
  o.support = j.value("support", std::string());
  o.length = j.value("length", 0.0);
  o.color = j.value("color", std::string());
  return o;
}

WorldState world_from_json(const nlohmann::json& doc) {
  WorldState w;
  try {
    auto add = [&](const nlohmann::json& j) {
      Object o = object_from_json(j);
      const std::string n = o.name;
      if (!w.objects.emplace(n, std::move(o)).second) throw InvalidWorld("duplicate object '" + n + "'");
    };
    for (const auto& r : doc.value("regions", nlohmann::json::array())) add(r);
    for (const auto& o : doc.value("objects", nlohmann::json::array())) add(o);
    for (const auto& a : doc.value("arms", nlohmann::json::array())) {
      Arm arm;
      arm.name = a.at("name").get<std::string>();
      arm.base = vec2_from(a.at("base"));
      arm.reach = a.at("reach").get<double>();
      arm.effector = a.contains("effector") ? vec2_from(a["effector"]) : arm.base;
      if (a.contains("holding") && !a["holding"].is_null()) arm.holding = a["holding"].get<std::string>();
      if (a.contains("grasp")) arm.grasp = vec2_from(a["grasp"]);
      if (a.contains("picked_pose")) {
        const auto& p = a["picked_pose"];
        arm.picked_pose = Pose{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
        arm.picked_support = a.value("picked_support", std::string());
      }
      if (!w.arms.emplace(arm.name, arm).second) throw InvalidWorld("duplicate arm '" + arm.name + "'");
    }
    w.time = doc.value("time", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidWorld(std::string("malformed world document: ") + e.what());
  }
  w.refresh_levels();
  w.validate();
  return w;
}

nlohmann::json to_json(const WorldState& w) {
  nlohmann::json regions = nlohmann::json::array(), objects = nlohmann::json::array(),
                 arms = nlohmann::json::array();
  for (const auto& [n, o] : w.objects) {
    if (o.kind == Kind::Region) {
      regions.push_back(to_json(o));
    } else {
      objects.push_back(to_json(o));
    }
  }
  for (const auto& [n, a] : w.arms) {
    nlohmann::json j = {{"name", a.name},
                        {"base", vec2_json(a.base)},
                        {"reach", a.reach},
                        {"effector", vec2_json(a.effector)},
                        {"holding", a.holding ? nlohmann::json(*a.holding) : nlohmann::json(nullptr)}};
    if (a.holding) {
      j["grasp"] = vec2_json(a.grasp);
      if (a.picked_pose) {
        j["picked_pose"] = {a.picked_pose->x, a.picked_pose->y, a.picked_pose->yaw};
        j["picked_support"] = a.picked_support;
      }
    }
    arms.push_back(j);
  }
  return {{"regions", regions}, {"objects", objects}, {"arms", arms}, {"time", w.time}};
}

}  // namespace ldmp::sim
