#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ldmp/planner/demonstration.hpp"
#include "ldmp/sim/world.hpp"

namespace ldmp::sim {

class InvalidDisturbance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Trigger { AfterAction, AtTime, Manual };
enum class DisturbanceType { MoveObject, AddObject };

/// L1 pose-only change, L2 back to an earlier demo state, L3 novel logical
/// state, L4 new object.
enum class Level { L1 = 1, L2 = 2, L3 = 3, L4 = 4 };
const char* to_string(Level l);
Level level_from_string(const std::string& s);

struct Disturbance {
  Trigger trigger = Trigger::Manual;
  int after_action = -1;  // index k: fires once action k has finished
  double at_time = 0.0;   // sim seconds
  DisturbanceType type = DisturbanceType::MoveObject;
  std::string object;     // move target
  std::optional<Pose> pose;  // omitted: centered on a block support
  std::string support;
  Object added;           // add_object payload
  std::optional<Level> declared;

  bool operator==(const Disturbance&) const = default;
};

/// Objects stacked on a moved block travel with it. Held objects, regions
/// and arms cannot be moved. Throws InvalidDisturbance if the result would
/// break a world invariant; the input world is never modified.
WorldState apply_disturbance(const WorldState& world, const Disturbance& d);

/// L4 if the object table grew, L1 if the fluents are unchanged, L2 if they
/// equal some demonstrated state's fluents, otherwise L3.
Level classify_level(const WorldState& before, const WorldState& after,
                     const planner::Demonstration& demo, const pddl::Domain& domain);

Disturbance disturbance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Disturbance& d);

}  // namespace ldmp::sim
