#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace ldmp::sim {

using Vec2 = Eigen::Vector2d;

constexpr double kInflation = 0.005;   // collision margin for motion checks
constexpr double kGridPitch = 0.05;    // placement sampler pitch
constexpr double kGraspTolerance = 1e-2;
constexpr double kSamplerSlack = 0.002;  // samplers stay this far inside every execution check

class InvalidWorld : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { Block, Hook, Region };

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Vec2 xy() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

struct Object {
  std::string name;
  std::string type;   // cube | hook | surface | slot | region
  Kind kind = Kind::Block;
  Pose pose;
  Vec2 half{0.025, 0.025};
  std::string support;  // empty for regions and held objects
  int level = 0;        // regions 0, resting objects support + 1, held -1
  double length = 0.0;  // hooks: reach extension
  std::string color;

  bool operator==(const Object&) const = default;
};

struct Arm {
  std::string name;
  Vec2 base{0.0, 0.0};
  double reach = 0.8;
  Vec2 effector{0.0, 0.0};
  std::optional<std::string> holding;
  Vec2 grasp{0.0, 0.0};  // held pose minus effector
  // where the held object was picked from, used to prefer returning it there
  std::optional<Pose> picked_pose;
  std::string picked_support;

  bool operator==(const Arm&) const = default;
};

/// Kinematic 2.5D block world: planar poses plus discrete stack levels.
struct WorldState {
  std::map<std::string, Object> objects;  // blocks, hooks and regions
  std::map<std::string, Arm> arms;
  double time = 0.0;

  const Object& object(const std::string& name) const;
  Object& object(const std::string& name);
  const Arm* holder(const std::string& object_name) const;
  std::vector<std::string> resting_on(const std::string& support) const;
  /// Region an object ultimately rests in (follows the support chain).
  std::optional<std::string> region_of(const std::string& name) const;

  /// Recomputes levels from supports; throws InvalidWorld on cycles.
  void refresh_levels();
  /// Throws InvalidWorld with a description of the first violated invariant.
  void validate() const;

  bool operator==(const WorldState&) const = default;
};

Kind kind_of_type(const std::string& type);
bool is_region_type(const std::string& type);

/// Yaw-expanded axis-aligned half extents.
Vec2 aabb_half(const Object& o);
bool overlaps(const Object& a, const Object& b, double margin = 0.0);
bool footprint_inside(const Object& o, const Object& region, double margin = 0.0);
bool within_reach(const Arm& arm, const Vec2& p, double extra = 0.0);

WorldState world_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const WorldState& world);
nlohmann::json to_json(const Object& o);
Object object_from_json(const nlohmann::json& doc);

}  // namespace ldmp::sim
