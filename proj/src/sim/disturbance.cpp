#include "ldmp/sim/disturbance.hpp"

#include <functional>

#include "ldmp/sim/scene_graph.hpp"

namespace ldmp::sim {

const char* to_string(Level l) {
  switch (l) {
    case Level::L1: return "L1";
    case Level::L2: return "L2";
    case Level::L3: return "L3";
    case Level::L4: return "L4";
  }
  return "?";
}

Level level_from_string(const std::string& s) {
  if (s == "L1") return Level::L1;
  if (s == "L2") return Level::L2;
  if (s == "L3") return Level::L3;
  if (s == "L4") return Level::L4;
  throw std::invalid_argument("unknown disturbance level '" + s + "'");
}

namespace {

void collect_stack(const WorldState& w, const std::string& base, std::vector<std::string>& out) {
  for (const auto& n : w.resting_on(base)) {
    out.push_back(n);
    collect_stack(w, n, out);
  }
}

}  // namespace

WorldState apply_disturbance(const WorldState& world, const Disturbance& d) {
  WorldState w = world;
  try {
    if (d.type == DisturbanceType::AddObject) {
      if (w.objects.count(d.added.name) || w.arms.count(d.added.name)) {
        throw InvalidDisturbance("object '" + d.added.name + "' already exists");
      }
      if (d.added.kind == Kind::Region) throw InvalidDisturbance("cannot add regions");
      if (d.added.support.empty()) throw InvalidDisturbance("added object needs a support");
      w.objects.emplace(d.added.name, d.added);
    } else {
      auto it = w.objects.find(d.object);
      if (it == w.objects.end()) throw InvalidDisturbance("no object named '" + d.object + "'");
      Object& o = it->second;
      if (o.kind == Kind::Region) throw InvalidDisturbance("regions cannot be moved");
      if (o.support.empty()) throw InvalidDisturbance("'" + d.object + "' is held");
      auto st = w.objects.find(d.support);
      if (st == w.objects.end()) throw InvalidDisturbance("unknown support '" + d.support + "'");
      std::vector<std::string> riders;
      collect_stack(w, d.object, riders);
      if (d.support == d.object || std::find(riders.begin(), riders.end(), d.support) != riders.end()) {
        throw InvalidDisturbance("'" + d.object + "' cannot rest on itself");
      }
      Pose target;
      if (d.pose) {
        target = *d.pose;
      } else if (st->second.kind != Kind::Region) {
        target = {st->second.pose.x, st->second.pose.y, o.pose.yaw};
      } else {
        throw InvalidDisturbance("moving onto a region needs a pose");
      }
      const Vec2 delta = target.xy() - o.pose.xy();
      for (const auto& n : riders) {
        Object& r = w.objects.at(n);
        r.pose.x += delta.x();
        r.pose.y += delta.y();
      }
      o.pose = target;
      o.support = d.support;
    }
    w.refresh_levels();
    w.validate();
  } catch (const InvalidWorld& e) {
    throw InvalidDisturbance(e.what());
  }
  return w;
}

Level classify_level(const WorldState& before, const WorldState& after,
                     const planner::Demonstration& demo, const pddl::Domain& domain) {
  const auto sb = observe(before, domain), sa = observe(after, domain);
  if (sa.objects().size() > sb.objects().size()) return Level::L4;
  const auto preds = pddl::fluent_predicates(domain.actions);
  const auto fa = pddl::fluents_of(sa.facts(), preds);
  if (fa == pddl::fluents_of(sb.facts(), preds)) return Level::L1;
  for (const auto& s : demo.states) {
    if (fa == pddl::fluents_of(s.facts(), preds)) return Level::L2;
  }
  return Level::L3;
}

Disturbance disturbance_from_json(const nlohmann::json& j) {
  Disturbance d;
  try {
    const auto& t = j.at("trigger");
    if (t.is_string() && t.get<std::string>() == "manual") {
      d.trigger = Trigger::Manual;
    } else if (t.is_object() && t.contains("after_action")) {
      d.trigger = Trigger::AfterAction;
      d.after_action = t["after_action"].get<int>();
    } else if (t.is_object() && t.contains("at_time")) {
      d.trigger = Trigger::AtTime;
      d.at_time = t["at_time"].get<double>();
    } else {
      throw InvalidDisturbance("unknown trigger " + t.dump());
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "move_object") {
      d.type = DisturbanceType::MoveObject;
      d.object = j.at("object").get<std::string>();
      d.support = j.at("support").get<std::string>();
      if (j.contains("pose")) {
        const auto& p = j["pose"];
        d.pose = Pose{p.at(0).get<double>(), p.at(1).get<double>(), p.size() > 2 ? p[2].get<double>() : 0.0};
      }
    } else if (type == "add_object") {
      d.type = DisturbanceType::AddObject;
      d.added = object_from_json(j.at("object"));
    } else {
      throw InvalidDisturbance("unknown disturbance type '" + type + "'");
    }
    if (j.contains("level")) d.declared = level_from_string(j["level"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidDisturbance(std::string("malformed disturbance: ") + e.what());
  } catch (const InvalidWorld& e) {
    throw InvalidDisturbance(e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidDisturbance(e.what());
  }
  return d;
}

nlohmann::json to_json(const Disturbance& d) {
  nlohmann::json j;
  switch (d.trigger) {
    case Trigger::Manual: j["trigger"] = "manual"; break;
    case Trigger::AfterAction: j["trigger"] = {{"after_action", d.after_action}}; break;
    case Trigger::AtTime: j["trigger"] = {{"at_time", d.at_time}}; break;
  }
  if (d.type == DisturbanceType::MoveObject) {
    j["type"] = "move_object";
    j["object"] = d.object;
    j["support"] = d.support;
    if (d.pose) j["pose"] = {d.pose->x, d.pose->y, d.pose->yaw};
  } else {
    j["type"] = "add_object";
    j["object"] = to_json(d.added);
  }
  if (d.declared) j["level"] = to_string(*d.declared);
  return j;
}

}  // namespace ldmp::sim
