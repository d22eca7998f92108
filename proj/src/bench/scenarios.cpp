#include "ldmp/bench/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <functional>
#include <random>
#include <stdexcept>

#include "ldmp/lqt/serialization.hpp"
#include "ldmp/sim/scene_graph.hpp"

namespace ldmp::bench {

using sim::Vec2;

const char* to_string(Benchmark b) {
  switch (b) {
    case Benchmark::B1: return "b1";
    case Benchmark::B2: return "b2";
    case Benchmark::B3: return "b3";
  }
  return "?";
}

Benchmark benchmark_from_string(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "b1") return Benchmark::B1;
  if (s == "b2") return Benchmark::B2;
  if (s == "b3") return Benchmark::B3;
  throw std::invalid_argument("unknown benchmark '" + s + "' (expected b1, b2 or b3)");
}

std::filesystem::path data_dir() { return LDMP_DATA_DIR; }
std::filesystem::path demo_path(Benchmark b) { return data_dir() / to_string(b) / "demo.json"; }

namespace {

constexpr int kHorizon = 100;
constexpr double kDt = 0.01;
constexpr double kLift = 0.03;

double min_jerk(double s) { return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s); }

lqt::ReferenceTrajectory stroke(const Vec2& a, const Vec2& b, double lift = kLift) {
  const Vec2 d = b - a;
  const Vec2 n = Vec2(-d.y(), d.x()).normalized();
  std::vector<lqt::Vec> pts;
  for (int t = 0; t <= kHorizon; ++t) {
    const double s = double(t) / kHorizon;
    const double bump = std::sin(std::numbers::pi * s);
    pts.push_back(lqt::Vec(a + min_jerk(s) * d + lift * bump * bump * n));
  }
  return lqt::build_reference(pts, kDt, lqt::Vec(b));
}

}  // namespace

PullDemo pull_demo() { return {Vec2(0.35, -0.22), Vec2(0.72, 0.12), Vec2(0.475, 0.075), 0.025}; }

lqt::ReferenceTrajectory pull_reference(const PullDemo& p) {
  const Vec2 top(p.block.x(), p.block.y() + p.half);
  const Vec2 corner(p.block.x() - p.half, p.block.y() - p.half);
  const std::vector<std::pair<int, Vec2>> knots{{0, p.start}, {40, top}, {70, corner}, {kHorizon, p.end}};
  std::vector<lqt::Vec> pts;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const auto& [i0, a] = knots[k];
    const auto& [i1, b] = knots[k + 1];
    for (int t = i0; t < i1; ++t) pts.push_back(lqt::Vec(a + min_jerk(double(t - i0) / (i1 - i0)) * (b - a)));
  }
  pts.push_back(lqt::Vec(p.end));
  auto ref = lqt::build_reference(pts, kDt, lqt::Vec(p.end));
  ref.via = {{40, lqt::Vec(top), 1e4}, {70, lqt::Vec(corner), 1e4}};
  return ref;
}

lqt::ReferenceTrajectory hook_pick_reference() { return stroke({0.20, 0.00}, pull_demo().start); }

std::map<std::string, lqt::ReferenceTrajectory> synthesize_motions(Benchmark b) {
  std::map<std::string, lqt::ReferenceTrajectory> m;
  switch (b) {
    case Benchmark::B1:
      m["pick"] = stroke({0.30, 0.00}, {0.60, 0.10});
      m["stack"] = stroke({0.60, 0.10}, {0.65, -0.20});
      m["place"] = stroke({0.65, -0.20}, {0.45, 0.15});
      m["unstack"] = stroke({0.30, 0.00}, {0.65, -0.20});
      break;
    case Benchmark::B2:
      m["pick"] = stroke({0.20, 0.00}, {0.35, 0.10});
      m["shelve"] = stroke({0.35, 0.10}, {0.10, 0.45});
      m["unshelve"] = stroke({0.20, 0.00}, {0.25, 0.45});
      m["place"] = stroke({0.25, 0.45}, {0.45, -0.10});
      m["pull"] = pull_reference(pull_demo());
      break;
    case Benchmark::B3:
      m["pick"] = stroke({0.15, 0.30}, {0.40, 0.50});
      m["place"] = stroke({0.40, 0.50}, {0.30, 0.00});
      m["stack"] = stroke({0.30, 0.00}, {0.35, -0.45});
      m["unstack"] = stroke({0.15, -0.30}, {0.30, -0.45});
      break;
  }
  return m;
}

void export_motions(Benchmark b, const std::filesystem::path& root) {
  const auto dir = root / to_string(b) / "motions";
  std::filesystem::create_directories(dir);
  for (const auto& [name, ref] : synthesize_motions(b)) {
    std::ofstream out(dir / (name + ".json"));
    if (!out) throw std::runtime_error("cannot write " + (dir / (name + ".json")).string());
    out << lqt::to_json(ref).dump(1) << "\n";
  }
}

}  // namespace ldmp::bench

namespace ldmp::bench {

namespace {

using sim::Kind;
using sim::Level;
using sim::Object;
using sim::WorldState;

constexpr double kClearance = 0.01;  // extra gap around sampled poses, each side
constexpr int kTries = 5000;

std::mt19937_64 task_rng(std::uint64_t seed, int index, std::uint32_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), salt};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick_index(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

double snap(double v) { return std::round(v * 100.0) / 100.0; }

bool clear_of_others(const WorldState& w, const Object& probe) {
  for (const auto& [n, o] : w.objects) {
    if (n != probe.name && o.level == 1 && sim::overlaps(probe, o, sim::kInflation + kClearance)) return false;
  }
  return true;
}

bool reachable_by_any(const WorldState& w, const Vec2& p, double margin = 0.02) {
  for (const auto& [n, a] : w.arms) {
    if ((p - a.base).norm() <= a.reach - margin) return true;
  }
  return false;
}

using Accept = std::function<bool(const WorldState&, const Object&)>;

// Rejection-samples a pose on the 1 cm grid for `name` resting on `region`.
// The object must already be in the world (its current pose is ignored).
void place_randomly(WorldState& w, const std::string& name, const std::string& region, std::mt19937_64& rng,
                    const Accept& accept) {
  const Object& R = w.object(region);
  Object probe = w.object(name);
  probe.support = region;
  probe.level = 1;
  const Vec2 hr = sim::aabb_half(R), h = sim::aabb_half(probe);
  for (int i = 0; i < kTries; ++i) {
    probe.pose.x = snap(uniform(rng, R.pose.x - hr.x() + h.x(), R.pose.x + hr.x() - h.x()));
    probe.pose.y = snap(uniform(rng, R.pose.y - hr.y() + h.y(), R.pose.y + hr.y() - h.y()));
    if (!sim::footprint_inside(probe, R) || !clear_of_others(w, probe)) continue;
    if (accept && !accept(w, probe)) continue;
    w.object(name) = probe;
    return;
  }
  throw std::runtime_error("could not place '" + name + "' on '" + region + "'");
}

void stack_onto(WorldState& w, const std::string& name, const std::string& below) {
  Object& o = w.object(name);
  const Object& b = w.object(below);
  o.pose = {b.pose.x, b.pose.y, o.pose.yaw};
  o.support = below;
  w.refresh_levels();
}

std::vector<std::string> cubes(const WorldState& w) {
  std::vector<std::string> out;
  for (const auto& [n, o] : w.objects) {
    if (o.kind == Kind::Block) out.push_back(n);
  }
  return out;
}

// Parks every cube out of the way (held by nobody, level 1 far off) so the
// sampler can re-place them one at a time.
void lift_all(WorldState& w, const std::vector<std::string>& names) {
  double y = 100.0;
  for (const auto& n : names) {
    Object& o = w.object(n);
    o.pose = {100.0, y, 0.0};
    o.level = 1;
    y += 1.0;
  }
}

Accept reach_accept() {
  return [](const WorldState& w, const Object& o) { return reachable_by_any(w, o.pose.xy()); };
}

// Template logical state with uniformly sampled poses.
WorldState fresh_template(const exec::Setup& setup, std::mt19937_64& rng) {
  WorldState w = setup.world;
  const auto names = cubes(w);
  lift_all(w, names);
  for (const auto& n : names) place_randomly(w, n, setup.world.object(n).support, rng, reach_accept());
  w.refresh_levels();
  w.validate();
  return w;
}

pddl::FactList fluents(const exec::Setup& s, const WorldState& w) {
  return pddl::fluents_of(sim::observe(w, s.domain).facts(), s.spec.fluent_predicates);
}

bool equals_demo_state(const exec::Setup& s, const WorldState& w) {
  const auto f = fluents(s, w);
  return std::find(s.spec.goals.begin(), s.spec.goals.end(), f) != s.spec.goals.end();
}

std::vector<int> hand_empty_interior(const exec::Setup& s) {
  std::vector<int> out;
  for (int i = 1; i < static_cast<int>(s.demo.length()); ++i) {
    bool empty = true;
    for (const auto& f : s.demo.states[i].facts()) empty = empty && f.predicate.str() != "inhand";
    if (empty) out.push_back(i);
  }
  return out;
}

WorldState settle(WorldState w) {
  w.time = 0.0;
  return w;
}

Object red_cube(const std::string& support) {
  Object e;
  e.name = "E";
  e.type = "cube";
  e.kind = Kind::Block;
  e.support = support;
  e.color = "red";
  return e;
}

// Pull destinations must exist for out-of-reach cubes.
bool pullable(const WorldState& w, const std::string& name) {
  std::vector<std::string> ignore;
  for (const auto& [n, o] : w.objects) {
    if (o.kind == Kind::Hook) ignore.push_back(n);
  }
  const std::string region = *w.region_of(name);
  for (const auto& [an, a] : w.arms) {
    if (sim::sample_pull_destination(w, name, region, an, ignore)) return true;
  }
  return false;
}

Accept out_of_reach_accept(const std::string& name) {
  return [name](const WorldState& w, const Object& o) {
    const double d = o.pose.xy().norm();
    if (d < 0.65 || d > 0.85) return false;
    WorldState probe = w;
    probe.object(name) = o;
    return pullable(probe, name);
  };
}

// ---------------------------------------------------------------- random starts

WorldState novel_b1(const exec::Setup& s, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    WorldState w = s.world;
    auto names = cubes(w);
    std::shuffle(names.begin(), names.end(), rng);
    lift_all(w, names);
    // random cut points split the permutation into towers, bottom first
    std::size_t i = 0;
    while (i < names.size()) {
      const std::size_t height = 1 + pick_index(rng, static_cast<int>(names.size() - i));
      place_randomly(w, names[i], "table", rng, reach_accept());
      for (std::size_t k = 1; k < height; ++k) stack_onto(w, names[i + k], names[i + k - 1]);
      i += height;
    }
    w.refresh_levels();
    w.validate();
    if (!equals_demo_state(s, w)) return w;
  }
  throw std::runtime_error("no novel B1 state found");
}

WorldState novel_b2(const exec::Setup& s, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    WorldState w = s.world;
    const auto names = cubes(w);
    lift_all(w, names);
    std::vector<std::string> slots{"shelf1", "shelf2"};
    for (const auto& n : names) {
      const int where = pick_index(rng, 4);  // reachable, out of reach, shelf, shelf
      if (where >= 2 && !slots.empty()) {
        const auto slot = slots[pick_index(rng, static_cast<int>(slots.size()))];
        slots.erase(std::find(slots.begin(), slots.end(), slot));
        Object& o = w.object(n);
        o.pose = {w.object(slot).pose.x, w.object(slot).pose.y, 0.0};
        o.support = slot;
        o.level = 1;
      } else if (where == 1) {
        place_randomly(w, n, "table", rng, out_of_reach_accept(n));
      } else {
        place_randomly(w, n, "table", rng, reach_accept());
      }
    }
    w.refresh_levels();
    w.validate();
    if (!equals_demo_state(s, w)) return w;
  }
  throw std::runtime_error("no novel B2 state found");
}

WorldState novel_b3(const exec::Setup& s, std::mt19937_64& rng) {
  const std::vector<std::string> regions{"ltable", "mid", "rtable"};
  for (int attempt = 0; attempt < 200; ++attempt) {
    WorldState w = s.world;
    auto names = cubes(w);
    lift_all(w, names);
    if (pick_index(rng, 3) == 0) {
      std::shuffle(names.begin(), names.end(), rng);
      place_randomly(w, names[0], regions[pick_index(rng, 3)], rng, reach_accept());
      stack_onto(w, names[1], names[0]);
    } else {
      for (const auto& n : names) place_randomly(w, n, regions[pick_index(rng, 3)], rng, reach_accept());
    }
    w.refresh_levels();
    w.validate();
    if (!equals_demo_state(s, w)) return w;
  }
  throw std::runtime_error("no novel B3 state found");
}

WorldState with_intruder(Benchmark b, WorldState w, std::mt19937_64& rng) {
  sim::Disturbance d;
  d.type = sim::DisturbanceType::AddObject;
  if (b == Benchmark::B2) {
    const std::string slot = pick_index(rng, 2) == 0 ? "shelf1" : "shelf2";
    d.added = red_cube(slot);
    d.added.pose = {w.object(slot).pose.x, w.object(slot).pose.y, 0.0};
  } else {
    const auto names = cubes(w);
    const auto& target = names[pick_index(rng, static_cast<int>(names.size()))];
    d.added = red_cube(target);
    d.added.pose = {w.object(target).pose.x, w.object(target).pose.y, 0.0};
  }
  return sim::apply_disturbance(w, d);
}

WorldState random_start(const exec::Setup& s, Benchmark b, Level level, std::mt19937_64& rng) {
  switch (level) {
    case Level::L1: return fresh_template(s, rng);
    case Level::L2: {
      const auto options = hand_empty_interior(s);
      const int j = options[pick_index(rng, static_cast<int>(options.size()))];
      const auto prefix = std::span(s.demo.actions).first(j);
      return settle(ideal_replay(fresh_template(s, rng), prefix));
    }
    case Level::L3:
      switch (b) {
        case Benchmark::B1: return novel_b1(s, rng);
        case Benchmark::B2: return novel_b2(s, rng);
        case Benchmark::B3: return novel_b3(s, rng);
      }
      break;
    case Level::L4: return with_intruder(b, fresh_template(s, rng), rng);
  }
  throw std::logic_error("unhandled level");
}

// ---------------------------------------------------------------- scripts

// Index of the demo action after which each level's disturbance fires.
int firing_index(Benchmark b, Level level) {
  switch (b) {
    case Benchmark::B1: return level == Level::L1 || level == Level::L3 ? 1 : 3;
    case Benchmark::B2: return 1;
    case Benchmark::B3: return level == Level::L1 || level == Level::L3 ? 1 : 3;
  }
  return 1;
}

sim::Disturbance move_to(const std::string& name, const sim::Pose& pose, const std::string& support) {
  sim::Disturbance d;
  d.type = sim::DisturbanceType::MoveObject;
  d.object = name;
  d.pose = pose;
  d.support = support;
  return d;
}

sim::Disturbance slide(const WorldState& w, const std::string& name, std::mt19937_64& rng) {
  const Object& o = w.object(name);
  for (int i = 0; i < kTries; ++i) {
    const double angle = std::numbers::pi / 4 * pick_index(rng, 8);
    const double dist = 0.01 * (2 + pick_index(rng, 3));
    const sim::Pose p{snap(o.pose.x + dist * std::cos(angle)), snap(o.pose.y + dist * std::sin(angle)), o.pose.yaw};
    Object probe = o;
    probe.pose = p;
    if (!sim::footprint_inside(probe, w.object(o.support)) || !clear_of_others(w, probe) ||
        !reachable_by_any(w, p.xy())) {
      continue;
    }
    // stays reachable by the same arms
    bool same = true;
    for (const auto& [an, a] : w.arms) same = same && (sim::within_reach(a, o.pose.xy()) == sim::within_reach(a, p.xy()));
    if (!same) continue;
    return move_to(name, p, o.support);
  }
  throw std::runtime_error("no slide for '" + name + "'");
}

sim::Disturbance random_move(WorldState w, const std::string& name, const std::string& region, std::mt19937_64& rng,
                             const Accept& accept) {
  place_randomly(w, name, region, rng, accept);
  return move_to(name, w.object(name).pose, region);
}

sim::Disturbance scripted(Benchmark b, Level level, const WorldState& at,
                          std::mt19937_64& rng) {
  // `at` is the world right after the firing action, replayed ideally
  using sim::Disturbance;
  switch (b) {
    case Benchmark::B1:
      switch (level) {
        case Level::L1: return slide(at, "A", rng);
        case Level::L2: return random_move(at, "B", "table", rng, reach_accept());
        case Level::L3: {
          Disturbance d;
          d.object = "A";
          d.support = "B";
          return d;
        }
        case Level::L4: {
          Disturbance d;
          d.type = sim::DisturbanceType::AddObject;
          d.added = red_cube("B");
          d.added.pose = {at.object("B").pose.x, at.object("B").pose.y, 0.0};
          return d;
        }
      }
      break;
    case Benchmark::B2:
      switch (level) {
        case Level::L1: return slide(at, "B", rng);
        case Level::L2: return random_move(at, "A", "table", rng, reach_accept());
        case Level::L3: return random_move(at, "B", "table", rng, out_of_reach_accept("B"));
        case Level::L4: {
          Disturbance d;
          d.type = sim::DisturbanceType::AddObject;
          d.added = red_cube("shelf2");
          d.added.pose = {at.object("shelf2").pose.x, at.object("shelf2").pose.y, 0.0};
          return d;
        }
      }
      break;
    case Benchmark::B3:
      switch (level) {
        case Level::L1: return slide(at, "A", rng);
        case Level::L2: return random_move(at, "B", "mid", rng, reach_accept());
        case Level::L3: return random_move(at, "A", "rtable", rng, reach_accept());
        case Level::L4: {
          Disturbance d;
          d.type = sim::DisturbanceType::AddObject;
          d.added = red_cube("B");
          d.added.pose = {at.object("B").pose.x, at.object("B").pose.y, 0.0};
          return d;
        }
      }
      break;
  }
  throw std::logic_error("unhandled scripted disturbance");
}

Level parse_level(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
  return sim::level_from_string(u);
}

}  // namespace

sim::WorldState ideal_replay(sim::WorldState world, std::span<const pddl::GroundedAction> actions) {
  for (const auto& a : actions) {
    const auto m = sim::motion_target(world, a);
    std::vector<lqt::Vec> path;
    std::vector<std::pair<int, Vec2>> knots{{0, m.start}};
    for (const auto& v : m.via) knots.emplace_back(static_cast<int>(std::lround(v.fraction * kHorizon)), v.point);
    knots.emplace_back(kHorizon, m.end);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const auto& [i0, p0] = knots[k];
      const auto& [i1, p1] = knots[k + 1];
      for (int t = i0; t < i1; ++t) path.push_back(lqt::Vec(p0 + (double(t - i0) / (i1 - i0)) * (p1 - p0)));
    }
    path.push_back(lqt::Vec(m.end));
    const auto ex = sim::execute_motion(world, a, path, kDt);
    if (ex.outcome != sim::Outcome::Success) {
      throw std::runtime_error("ideal replay failed at " + a.name() + ": " + ex.reason);
    }
    world = ex.world;
  }
  return world;
}

std::vector<Scenario> generate_suite(const exec::Setup& setup, Benchmark b, const std::string& level,
                                     int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("count must be non-negative");
  const bool random = level == "random-start";
  const Level scripted_level = random ? Level::L1 : parse_level(level);
  std::vector<Scenario> out;
  for (int i = 0; i < count; ++i) {
    Scenario sc;
    sc.benchmark = b;
    sc.level = random ? level : std::string(sim::to_string(scripted_level));
    sc.seed = seed;
    sc.index = i;
    sc.id = std::string(to_string(b)) + "-" + sc.level + "-" + std::to_string(i);
    auto rng = task_rng(seed, i, random ? 0x5eed : static_cast<std::uint32_t>(scripted_level));
    if (random) {
      sc.start_level = static_cast<Level>(1 + pick_index(rng, 4));
      sc.world = random_start(setup, b, sc.start_level, rng);
    } else {
      sc.start_level = Level::L1;
      sc.world = fresh_template(setup, rng);
      const int k = firing_index(b, scripted_level);
      const auto at = ideal_replay(sc.world, std::span(setup.demo.actions).first(k + 1));
      auto d = scripted(b, scripted_level, at, rng);
      d.trigger = sim::Trigger::AfterAction;
      d.after_action = k;
      d.declared = scripted_level;
      const auto after = sim::apply_disturbance(at, d);
      const auto got = sim::classify_level(at, after, setup.demo, setup.domain);
      if (got != scripted_level) {
        throw std::logic_error(sc.id + ": scripted disturbance classifies as " + sim::to_string(got));
      }
      sc.script.push_back(d);
    }
    out.push_back(std::move(sc));
  }
  return out;
}

nlohmann::json to_json(const Scenario& s) {
  nlohmann::json script = nlohmann::json::array();
  for (const auto& d : s.script) script.push_back(sim::to_json(d));
  return {{"id", s.id},           {"benchmark", to_string(s.benchmark)}, {"level", s.level},
          {"seed", s.seed},       {"index", s.index},                    {"start_level", sim::to_string(s.start_level)},
          {"world", sim::to_json(s.world)}, {"script", script}};
}

}  // namespace ldmp::bench
