#include "ldmp/sim/feasibility.hpp"

#include <map>
#include <cmath>
#include <memory>
#include <set>

#include "ldmp/sim/motion.hpp"

namespace ldmp::sim {

namespace {

struct Frozen {
  WorldState world;
  std::string table;  // region meant by (ontable ?x)
  // (arm, region) -> number of reachable grid cells a standard block fits in
  std::map<std::pair<std::string, std::string>, int> capacity;
};

int grid_capacity(const Arm& arm, const Object& region) {
  if (region.type == "slot") return within_reach(arm, region.pose.xy()) ? 1 : 0;
  Object probe;
  probe.half = {0.025 + kInflation, 0.025 + kInflation};
  const Vec2 hr = aabb_half(region);
  int n = 0;
  for (long ix = std::lround(std::ceil((region.pose.x - hr.x()) / kGridPitch - 1e-9));
       ix * kGridPitch <= region.pose.x + hr.x() + 1e-9; ++ix) {
    for (long iy = std::lround(std::ceil((region.pose.y - hr.y()) / kGridPitch - 1e-9));
         iy * kGridPitch <= region.pose.y + hr.y() + 1e-9; ++iy) {
      probe.pose = {ix * kGridPitch, iy * kGridPitch, 0.0};
      // an inflated block spans more than one pitch, so only every other cell
      // in each direction can be used at once
      if (ix % 2 != 0 || iy % 2 != 0) continue;
      if (footprint_inside(probe, region) && within_reach(arm, probe.pose.xy())) ++n;
    }
  }
  return n;
}

// Region an object is in according to the logical state.
std::string logical_region(const Frozen& f, const pddl::SceneGraph& s, const std::string& name) {
  std::string cur = name;
  for (std::size_t steps = 0; steps <= s.size(); ++steps) {
    std::string next;
    for (const auto& fact : s.facts()) {
      const auto p = fact.predicate.str();
      if (fact.args.empty() || fact.args[0].str() != cur) continue;
      if (p == "inregion" && fact.args.size() == 2) return fact.args[1].str();
      if (p == "ontable" && fact.args.size() == 1) return f.table;
      if (p == "on" && fact.args.size() == 2) next = fact.args[1].str();
    }
    if (next.empty()) break;
    cur = next;
  }
  auto r = f.world.region_of(name);
  return r ? *r : std::string();
}

int occupancy(const Frozen& f, const pddl::SceneGraph& s, const std::string& region,
              const std::string& except) {
  std::set<std::string> in;
  for (const auto& fact : s.facts()) {
    const auto p = fact.predicate.str();
    if (p == "inregion" && fact.args.size() == 2 && fact.args[1].str() == region) in.insert(fact.args[0].str());
    if (p == "ontable" && fact.args.size() == 1 && region == f.table) in.insert(fact.args[0].str());
  }
  in.erase(except);
  return static_cast<int>(in.size());
}

}  // namespace

planner::FeasibilityFn make_feasibility(const WorldState& world) {
  auto f = std::make_shared<Frozen>();
  f->world = world;
  for (const auto& [n, o] : world.objects) {
    if (o.kind == Kind::Region && o.type != "slot" && f->table.empty()) f->table = n;
  }
  for (const auto& [an, a] : world.arms) {
    for (const auto& [n, o] : world.objects) {
      if (o.kind == Kind::Region) f->capacity[{an, n}] = grid_capacity(a, o);
    }
  }

  return [f](const pddl::SceneGraph& state, const pddl::GroundedAction& action) -> bool {
    ActionRoles r;
    try {
      r = roles_of(action);
    } catch (const std::invalid_argument&) {
      return true;
    }
    const WorldState& w = f->world;
    auto arm_it = w.arms.find(r.arm);
    if (arm_it == w.arms.end()) return true;
    const Arm& arm = arm_it->second;
    auto reaches = [&](const std::string& region) {
      auto it = f->capacity.find({r.arm, region});
      return it != f->capacity.end() && it->second > 0;
    };

    if (r.schema == "pull") {
      auto bt = w.objects.find(r.object);
      auto ht = w.objects.find(r.hook);
      if (bt == w.objects.end() || ht == w.objects.end() || bt->second.support.empty()) return false;
      if (!within_reach(arm, bt->second.pose.xy(), ht->second.length)) return false;
      const std::string ignore[] = {r.hook};
      return sample_pull_destination(w, r.object, r.target, r.arm, ignore).has_value();
    }
    if (r.schema == "pick" || r.schema == "unshelve") {
      return reaches(logical_region(*f, state, r.object));
    }
    if (r.schema == "unstack" || r.schema == "stack") {
      return reaches(logical_region(*f, state, r.target));
    }
    // place / shelve
    const std::string region = r.target.empty() ? f->table : r.target;
    if (!reaches(region)) return false;
    return occupancy(*f, state, region, r.object) < f->capacity.at({r.arm, region});
  };
}

}  // namespace ldmp::sim
