#include "ldmp/exec/motion_generator.hpp"

#include <cmath>
#include <stdexcept>

namespace ldmp::exec {

GeneratedMotion generate_motion(const sim::WorldState& world, const pddl::GroundedAction& action,
                                const MotionLibrary& library) {
  const std::string schema = action.schema.str();
  auto it = library.segments.find(schema);
  if (it == library.segments.end()) throw std::out_of_range("no motion segment for '" + schema + "'");
  const auto& ref = it->second;

  GeneratedMotion g;
  g.target = sim::motion_target(world, action);
  std::vector<lqt::ViaPoint> via;
  for (const auto& v : g.target.via) {
    via.push_back({static_cast<int>(std::lround(v.fraction * ref.horizon())), lqt::Vec(v.point),
                   library.config.weights.via_precision});
  }
  const lqt::Vec start = g.target.start, end = g.target.end;
  g.reference = lqt::generalize(ref, start, end, via);
  g.positions = lqt::track_reference(g.reference, start, library.config).trajectory.positions();
  return g;
}

}  // namespace ldmp::exec
