#include "ldmp/sim/motion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldmp/sim/scene_graph.hpp"

namespace ldmp::sim {

namespace {

bool ignored(std::span<const std::string> ignore, const std::string& name) {
  return std::find(ignore.begin(), ignore.end(), name) != ignore.end();
}

// Does `probe` at level 1 hit any other resting object?
std::string level_one_collision(const WorldState& w, const Object& probe, double margin,
                                std::span<const std::string> ignore) {
  for (const auto& [n, o] : w.objects) {
    if (n == probe.name || o.level != 1 || ignored(ignore, n)) continue;
    if (overlaps(probe, o, margin)) return n;
  }
  return {};
}

std::vector<Vec2> grid_in(const Object& region) {
  const Vec2 hr = aabb_half(region);
  std::vector<Vec2> out;
  const long ix0 = std::lround(std::ceil((region.pose.x - hr.x()) / kGridPitch - 1e-9));
  const long ix1 = std::lround(std::floor((region.pose.x + hr.x()) / kGridPitch + 1e-9));
  const long iy0 = std::lround(std::ceil((region.pose.y - hr.y()) / kGridPitch - 1e-9));
  const long iy1 = std::lround(std::floor((region.pose.y + hr.y()) / kGridPitch + 1e-9));
  for (long ix = ix0; ix <= ix1; ++ix) {
    for (long iy = iy0; iy <= iy1; ++iy) out.emplace_back(ix * kGridPitch, iy * kGridPitch);
  }
  return out;
}

void sort_by_distance(std::vector<Vec2>& pts, const Vec2& to) {
  std::stable_sort(pts.begin(), pts.end(), [&](const Vec2& a, const Vec2& b) {
    const double da = (a - to).norm(), db = (b - to).norm();
    if (std::abs(da - db) > 1e-12) return da < db;
    if (a.x() != b.x()) return a.x() < b.x();
    return a.y() < b.y();
  });
}

const Object& region_object(const WorldState& w, const std::string& region) {
  const Object& r = w.object(region);
  if (r.kind != Kind::Region) throw NoMotionTarget("'" + region + "' is not a region");
  return r;
}

std::string default_region(const WorldState& w, const Arm& arm) {
  if (!arm.picked_support.empty()) {
    auto it = w.objects.find(arm.picked_support);
    if (it != w.objects.end() && it->second.kind == Kind::Region) return it->first;
  }
  for (const auto& [n, o] : w.objects) {
    if (o.kind == Kind::Region && o.type != "slot") return n;
  }
  throw NoMotionTarget("world has no surface to place on");
}

bool is_grasp(const std::string& s) { return s == "pick" || s == "unstack" || s == "unshelve"; }
bool is_release(const std::string& s) { return s == "place" || s == "stack" || s == "shelve"; }

std::string place_support(const WorldState& w, const ActionRoles& r) {
  if (!r.target.empty()) return r.target;
  return default_region(w, w.arms.at(r.arm));
}

}  // namespace

ActionRoles roles_of(const pddl::GroundedAction& a) {
  ActionRoles r;
  r.schema = a.schema.str();
  auto arg = [&](std::size_t i) { return i < a.args.size() ? a.args[i].str() : std::string(); };
  if (a.args.size() < 2) throw std::invalid_argument("action " + a.name() + " has too few arguments");
  r.arm = arg(0);
  if (r.schema == "pull") {
    if (a.args.size() != 4) throw std::invalid_argument("pull takes (arm hook block region)");
    r.hook = arg(1);
    r.object = arg(2);
    r.target = arg(3);
  } else if (is_grasp(r.schema) || is_release(r.schema)) {
    r.object = arg(1);
    r.target = arg(2);
  } else {
    throw std::invalid_argument("no motion semantics for schema '" + r.schema + "'");
  }
  return r;
}

std::vector<PullVia> via_points_for_pull(const WorldState& world, const std::string& block) {
  const Object& b = world.object(block);
  const Vec2 h = aabb_half(b);
  return {{kPullViaFractions[0], Vec2(b.pose.x, b.pose.y + h.y())},
          {kPullViaFractions[1], Vec2(b.pose.x - h.x(), b.pose.y - h.y())}};
}

std::optional<Pose> sample_placement(const WorldState& world, const std::string& object,
                                     const std::string& region, const std::string& arm,
                                     std::span<const std::string> ignore) {
  const Object& obj = world.object(object);
  const Object& R = region_object(world, region);
  const Arm& A = world.arms.at(arm);
  Object probe = obj;
  auto fits = [&](const Vec2& p) {
    probe.pose = {p.x(), p.y(), obj.pose.yaw};
    return footprint_inside(probe, R, kSamplerSlack) && within_reach(A, p, -kSamplerSlack) &&
           level_one_collision(world, probe, kInflation + kSamplerSlack, ignore).empty();
  };
  const bool returning = A.holding && *A.holding == object && A.picked_pose && A.picked_support == region;
  if (returning && fits(A.picked_pose->xy())) return *A.picked_pose;
  auto pts = grid_in(R);
  sort_by_distance(pts, returning ? A.picked_pose->xy() : R.pose.xy());
  for (const auto& p : pts) {
    if (fits(p)) return Pose{p.x(), p.y(), obj.pose.yaw};
  }
  return std::nullopt;
}

std::optional<Pose> sample_pull_destination(const WorldState& world, const std::string& block,
                                            const std::string& region, const std::string& arm,
                                            std::span<const std::string> ignore) {
  const Object& b = world.object(block);
  const Object& R = region_object(world, region);
  const Arm& A = world.arms.at(arm);
  Object probe = b;
  auto clear_at = [&](const Vec2& p, double margin) {
    probe.pose = {p.x(), p.y(), b.pose.yaw};
    return footprint_inside(probe, R, kSamplerSlack) &&
           level_one_collision(world, probe, margin + kSamplerSlack, ignore).empty();
  };
  auto pts = grid_in(R);
  sort_by_distance(pts, b.pose.xy());
  for (const auto& p : pts) {
    if ((p - A.base).norm() > A.reach - 0.01) continue;
    if (!clear_at(p, kInflation)) continue;
    const double len = (p - b.pose.xy()).norm();
    const int n = std::max(1, static_cast<int>(std::ceil(len / 0.005)));
    bool ok = true;
    for (int i = 1; i < n && ok; ++i) ok = clear_at(b.pose.xy() + (p - b.pose.xy()) * (double(i) / n), kInflation);
    if (ok) return Pose{p.x(), p.y(), b.pose.yaw};
  }
  return std::nullopt;
}

MotionTarget motion_target(const WorldState& world, const pddl::GroundedAction& action) {
  const ActionRoles r = roles_of(action);
  const Arm& A = world.arms.at(r.arm);
  MotionTarget m;
  m.start = A.effector;
  if (is_grasp(r.schema)) {
    m.end = world.object(r.object).pose.xy();
    return m;
  }
  if (r.schema == "pull") {
    const std::string hook = r.hook;
    std::vector<std::string> ignore{hook};
    auto dest = sample_pull_destination(world, r.object, r.target, r.arm, ignore);
    if (!dest) throw NoMotionTarget("no reachable destination to pull '" + r.object + "' to");
    m.end = dest->xy() - aabb_half(world.object(r.object));
    m.via = via_points_for_pull(world, r.object);
    m.object_pose = dest;
    return m;
  }
  const Object& obj = world.object(r.object);
  if (r.schema == "stack") {
    const Object& y = world.object(r.target);
    m.object_pose = Pose{y.pose.x, y.pose.y, obj.pose.yaw};
  } else {
    m.object_pose = sample_placement(world, r.object, place_support(world, r), r.arm);
    if (!m.object_pose) throw NoMotionTarget("no free placement for '" + r.object + "'");
  }
  m.end = m.object_pose->xy() - A.grasp;
  return m;
}

const char* to_string(Outcome o) { return o == Outcome::Success ? "success" : "failed"; }

Execution execute_motion(const WorldState& world, const pddl::GroundedAction& action,
                         std::span<const lqt::Vec> trajectory, double dt, const StepHook& hook) {
  if (trajectory.empty()) throw std::invalid_argument("empty trajectory");
  for (const auto& p : trajectory) {
    if (p.size() != 2) throw std::invalid_argument("trajectory must be planar");
  }
  if (!pddl::applicable(scene_graph(world), action)) {
    throw pddl::ContractViolation("action " + action.name() + " is not applicable in the current world");
  }
  const ActionRoles r = roles_of(action);
  Execution ex{world, Outcome::Failed, {}, 0};
  WorldState& w = ex.world;

  const int T = static_cast<int>(trajectory.size()) - 1;
  for (int t = 0; t <= T; ++t) {
    Arm& A = w.arms.at(r.arm);
    A.effector = trajectory[t];
    if (A.holding) {
      Object& held = w.object(*A.holding);
      held.pose.x = A.effector.x() + A.grasp.x();
      held.pose.y = A.effector.y() + A.grasp.y();
    }
    if (t > 0) w.time += dt;
    ex.steps = t;
    if (hook && !hook(t, w)) {
      ex.reason = "interrupted";
      return ex;
    }
  }

  Arm& A = w.arms.at(r.arm);
  const Vec2 end = trajectory.back();
  auto fail = [&](std::string why) {
    ex.reason = std::move(why);
    return ex;
  };

  if (is_grasp(r.schema)) {
    if (A.holding) return fail("hand is not empty");
    Object& o = w.object(r.object);
    if (o.support.empty()) return fail("'" + r.object + "' is held");
    if (!w.resting_on(r.object).empty()) return fail("'" + r.object + "' is not clear");
    if (!within_reach(A, end)) return fail("grasp beyond reach");
    if ((end - o.pose.xy()).norm() > kGraspTolerance) return fail("grasp missed '" + r.object + "'");
    A.holding = r.object;
    A.grasp = o.pose.xy() - end;
    A.picked_pose = o.pose;
    A.picked_support = o.support;
    o.support.clear();
    o.level = -1;
    ex.outcome = Outcome::Success;
    return ex;
  }

  if (is_release(r.schema)) {
    if (!A.holding || *A.holding != r.object) return fail("'" + r.object + "' is not in hand");
    if (!within_reach(A, end)) return fail("release beyond reach");
    Object& o = w.object(r.object);
    const std::string support = r.schema == "stack" ? r.target : place_support(w, r);
    auto it = w.objects.find(support);
    if (it == w.objects.end()) return fail("unknown support '" + support + "'");
    const Object& s = it->second;
    if (s.level < 0) return fail("support '" + support + "' is held");
    Object probe = o;
    probe.pose.x = end.x() + A.grasp.x();
    probe.pose.y = end.y() + A.grasp.y();
    if (A.picked_pose && A.picked_support == support && (probe.pose.xy() - A.picked_pose->xy()).norm() < 1e-9) {
      probe.pose = *A.picked_pose;
    }
    if (s.kind == Kind::Region) {
      if (!footprint_inside(probe, s)) return fail("'" + r.object + "' would stick out of '" + support + "'");
      if (s.type == "slot" && !w.resting_on(support).empty()) return fail("slot '" + support + "' is occupied");
    } else {
      if (!w.resting_on(support).empty()) return fail("'" + support + "' is not clear");
      const Vec2 hs = aabb_half(s);
      if (std::abs(probe.pose.x - s.pose.x) > hs.x() || std::abs(probe.pose.y - s.pose.y) > hs.y()) {
        return fail("'" + r.object + "' would not balance on '" + support + "'");
      }
    }
    probe.support = support;
    probe.level = s.level + 1;
    for (const auto& [n, other] : w.objects) {
      if (n != r.object && other.level == probe.level && overlaps(probe, other, kInflation)) {
        return fail("'" + r.object + "' would collide with '" + n + "'");
      }
    }
    o = probe;
    A.holding.reset();
    A.grasp = Vec2::Zero();
    A.picked_pose.reset();
    A.picked_support.clear();
    ex.outcome = Outcome::Success;
    return ex;
  }

  // pull: the hook tip has to pass both via-points, then drags the block from
  // the corner onwards.
  if (!A.holding || *A.holding != r.hook) return fail("hook '" + r.hook + "' is not in hand");
  Object& b = w.object(r.object);
  if (b.support.empty()) return fail("'" + r.object + "' is held");
  if (!w.resting_on(r.object).empty()) return fail("'" + r.object + "' is not clear");
  const Object& R = w.object(b.support);
  if (R.kind != Kind::Region) return fail("'" + r.object + "' does not rest on a region");
  const auto via = via_points_for_pull(w, r.object);
  int corner = 0;
  for (std::size_t k = 0; k < via.size(); ++k) {
    const int idx = static_cast<int>(std::lround(via[k].fraction * T));
    if ((trajectory[idx] - via[k].point).norm() > kGraspTolerance) {
      return fail("hook missed via-point " + std::to_string(k));
    }
    corner = idx;
  }
  const Vec2 h = aabb_half(b);
  Object probe = b;
  for (int t = corner; t <= T; ++t) {
    const Vec2 c = Vec2(trajectory[t]) + h;
    probe.pose.x = c.x();
    probe.pose.y = c.y();
    if (!footprint_inside(probe, R)) return fail("pulled block would leave '" + R.name + "'");
    const std::string hit = level_one_collision(w, probe, kInflation, {});
    if (!hit.empty()) return fail("pulled block would hit '" + hit + "'");
  }
  if (!within_reach(A, probe.pose.xy())) return fail("pulled block is still out of reach");
  b.pose = probe.pose;
  ex.outcome = Outcome::Success;
  return ex;
}

}  // namespace ldmp::sim
