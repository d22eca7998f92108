#include "ldmp/sim/scene_graph.hpp"

namespace ldmp::sim {

using pddl::Fact;
using pddl::sym;

pddl::SceneGraph scene_graph(const WorldState& world) {
  pddl::ObjectTable table;
  pddl::FactList facts;
  auto fact = [&](const char* pred, std::initializer_list<std::string> args) {
    Fact f{sym(pred), {}};
    for (const auto& a : args) f.args.push_back(sym(a));
    facts.push_back(std::move(f));
  };

  for (const auto& [n, o] : world.objects) {
    table[sym(n)] = sym(o.type);
    switch (o.kind) {
      case Kind::Region: {
        fact("region", {n});
        if (world.resting_on(n).empty()) fact("free", {n});
        break;
      }
      case Kind::Block:
      case Kind::Hook: {
        fact(o.kind == Kind::Block ? "cube" : "hook", {n});
        if (!o.support.empty()) {
          const Object& s = world.object(o.support);
          if (s.kind == Kind::Region) {
            fact("ontable", {n});
            fact("inregion", {n, s.name});
          } else {
            fact("on", {n, s.name});
          }
          if (world.resting_on(n).empty()) fact("clear", {n});
        }
        break;
      }
    }
  }
  for (const auto& [an, a] : world.arms) {
    table[sym(an)] = sym("arm");
    fact("arm", {an});
    if (a.holding) {
      fact("inhand", {an, *a.holding});
    } else {
      fact("handempty", {an});
    }
    for (const auto& [n, o] : world.objects) {
      if (o.kind == Kind::Region) continue;
      const bool held = a.holding && *a.holding == n;
      if (held || (!o.support.empty() && within_reach(a, o.pose.xy()))) fact("reachable", {an, n});
    }
  }
  pddl::normalize(facts);
  return pddl::SceneGraph(std::move(facts), std::move(table));
}

pddl::SceneGraph restrict(const pddl::SceneGraph& scene, const pddl::Domain& domain) {
  const bool typed = !domain.types.declared.empty();
  const pddl::Symbol object_type = sym("object");
  pddl::ObjectTable table;
  for (const auto& [n, t] : scene.objects()) {
    if (!typed) {
      table[n] = object_type;
    } else if (domain.types.known(t)) {
      table[n] = t;
    }
  }
  pddl::FactList facts;
  for (const auto& f : scene.facts()) {
    const auto* decl = domain.predicate(f.predicate);
    if (!decl || decl->arity() != static_cast<int>(f.args.size())) continue;
    bool ok = true;
    for (std::size_t i = 0; i < f.args.size() && ok; ++i) {
      auto it = table.find(f.args[i]);
      ok = it != table.end() && (!typed || domain.types.is_subtype(it->second, decl->params[i].type));
    }
    if (ok) facts.push_back(f);
  }
  return pddl::SceneGraph(std::move(facts), std::move(table));
}

pddl::SceneGraph observe(const WorldState& world, const pddl::Domain& domain) {
  return restrict(scene_graph(world), domain);
}

}  // namespace ldmp::sim
