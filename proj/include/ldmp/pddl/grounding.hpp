#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldmp/pddl/domain.hpp"

namespace ldmp::pddl {

struct GroundedAction {
  Symbol schema;
  std::vector<Symbol> args;
  FactList pre_pos;  // sorted
  FactList pre_neg;  // sorted
  FactList add;      // sorted
  FactList del;      // sorted

  std::string name() const;  // "(pick panda C)"
  bool operator==(const GroundedAction& o) const { return schema == o.schema && args == o.args; }
  /// Lexicographic on (schema, args).
  std::strong_ordering operator<=>(const GroundedAction& o) const;
};

GroundedAction ground(const ActionSchema& schema, std::span<const Symbol> args);
/// Parses "(stack panda C D)" against the domain's schemas.
GroundedAction ground(const Domain& domain, std::string_view text);

/// All type-consistent groundings of one schema, in lexicographic argument order.
std::vector<GroundedAction> ground_schema(const ActionSchema& schema, const TypeHierarchy& types,
                                          const ObjectTable& objects);
/// All groundings of all schemas, sorted.
std::vector<GroundedAction> ground_all(const Domain& domain, const ObjectTable& objects);

bool applicable(const FactList& facts, const GroundedAction& a);
/// (facts \ del) u add; throws ContractViolation when `a` is not applicable.
FactList apply_facts(const FactList& facts, const GroundedAction& a);

bool applicable(const SceneGraph& scene, const GroundedAction& a);
SceneGraph apply(const SceneGraph& scene, const GroundedAction& a);

/// Predicates that occur in some schema's add or delete effects.
std::set<Symbol> fluent_predicates(std::span<const ActionSchema> schemas);
/// (static facts, fluents)
std::pair<FactList, FactList> split_static(const SceneGraph& scene, std::span<const ActionSchema> schemas);
FactList fluents_of(const FactList& facts, const std::set<Symbol>& fluent_preds);

}  // namespace ldmp::pddl
