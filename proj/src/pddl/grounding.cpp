#include "ldmp/pddl/grounding.hpp"

#include <algorithm>
#include <map>

namespace ldmp::pddl {

namespace {

Fact substitute(const Atom& atom, const std::map<Symbol, Symbol>& binding) {
  Fact f;
  f.predicate = atom.predicate;
  f.args.reserve(atom.args.size());
  for (const auto& a : atom.args) {
    auto it = binding.find(a);
    f.args.push_back(it == binding.end() ? a : it->second);
  }
  return f;
}

}  // namespace

std::string GroundedAction::name() const {
  std::string s = "(" + schema.str();
  for (const auto& a : args) s += " " + a.str();
  return s + ")";
}

std::strong_ordering GroundedAction::operator<=>(const GroundedAction& o) const {
  if (auto c = schema <=> o.schema; c != 0) return c;
  return std::lexicographical_compare_three_way(args.begin(), args.end(), o.args.begin(), o.args.end());
}

GroundedAction ground(const ActionSchema& schema, std::span<const Symbol> args) {
  if (args.size() != schema.params.size()) {
    throw std::invalid_argument("action " + schema.name.str() + " expects " +
                                std::to_string(schema.params.size()) + " argument(s)");
  }
  std::map<Symbol, Symbol> binding;
  for (std::size_t i = 0; i < args.size(); ++i) binding[schema.params[i].name] = args[i];
  GroundedAction g;
  g.schema = schema.name;
  g.args.assign(args.begin(), args.end());
  for (const auto& l : schema.precondition) {
    (l.negated ? g.pre_neg : g.pre_pos).push_back(substitute(l.atom, binding));
  }
  for (const auto& a : schema.add) g.add.push_back(substitute(a, binding));
  for (const auto& a : schema.del) g.del.push_back(substitute(a, binding));
  normalize(g.pre_pos);
  normalize(g.pre_neg);
  normalize(g.add);
  normalize(g.del);
  return g;
}

GroundedAction ground(const Domain& domain, std::string_view text) {
  const Fact f = parse_fact(text);
  const ActionSchema* s = domain.action(f.predicate);
  if (!s) throw std::invalid_argument("unknown action: " + std::string(text));
  return ground(*s, f.args);
}

std::vector<GroundedAction> ground_schema(const ActionSchema& schema, const TypeHierarchy& types,
                                          const ObjectTable& objects) {
  std::vector<std::vector<Symbol>> domains;
  for (const auto& p : schema.params) {
    std::vector<Symbol> cands;
    for (const auto& [o, t] : objects) {
      if (types.is_subtype(t, p.type)) cands.push_back(o);  // map order = lexicographic
    }
    domains.push_back(std::move(cands));
  }
  std::vector<GroundedAction> out;
  std::vector<Symbol> args(schema.params.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == domains.size()) {
      out.push_back(ground(schema, args));
      return;
    }
    for (const auto& o : domains[i]) {
      args[i] = o;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<GroundedAction> ground_all(const Domain& domain, const ObjectTable& objects) {
  std::vector<GroundedAction> out;
  for (const auto& s : domain.actions) {
    auto part = ground_schema(s, domain.types, objects);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool applicable(const FactList& facts, const GroundedAction& a) {
  if (!includes(facts, a.pre_pos)) return false;
  return std::none_of(a.pre_neg.begin(), a.pre_neg.end(), [&](const Fact& f) { return contains(facts, f); });
}

FactList apply_facts(const FactList& facts, const GroundedAction& a) {
  if (!applicable(facts, a)) throw ContractViolation("action " + a.name() + " is not applicable");
  FactList kept;
  kept.reserve(facts.size() + a.add.size());
  std::set_difference(facts.begin(), facts.end(), a.del.begin(), a.del.end(), std::back_inserter(kept));
  FactList out;
  out.reserve(kept.size() + a.add.size());
  std::set_union(kept.begin(), kept.end(), a.add.begin(), a.add.end(), std::back_inserter(out));
  return out;
}

bool applicable(const SceneGraph& scene, const GroundedAction& a) { return applicable(scene.facts(), a); }

SceneGraph apply(const SceneGraph& scene, const GroundedAction& a) {
  return scene.with_facts(apply_facts(scene.facts(), a));
}

std::set<Symbol> fluent_predicates(std::span<const ActionSchema> schemas) {
  std::set<Symbol> out;
  for (const auto& s : schemas) {
    for (const auto& a : s.add) out.insert(a.predicate);
    for (const auto& a : s.del) out.insert(a.predicate);
  }
  return out;
}

FactList fluents_of(const FactList& facts, const std::set<Symbol>& fluent_preds) {
  FactList out;
  for (const auto& f : facts) {
    if (fluent_preds.count(f.predicate)) out.push_back(f);
  }
  return out;
}

std::pair<FactList, FactList> split_static(const SceneGraph& scene, std::span<const ActionSchema> schemas) {
  const auto preds = fluent_predicates(schemas);
  std::pair<FactList, FactList> out;
  for (const auto& f : scene.facts()) (preds.count(f.predicate) ? out.second : out.first).push_back(f);
  return out;
}

}  // namespace ldmp::pddl
