#pragma once

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ldmp/pddl/symbol.hpp"

namespace ldmp::pddl {

struct Fact {
  Symbol predicate;
  std::vector<Symbol> args;

  Fact() = default;
  Fact(Symbol p, std::vector<Symbol> a) : predicate(p), args(std::move(a)) {}

  bool operator==(const Fact&) const = default;
  std::strong_ordering operator<=>(const Fact& o) const;
  std::string str() const;
};

/// Parses "(on C D)". Throws std::invalid_argument on malformed input.
Fact parse_fact(std::string_view text);
std::vector<Fact> parse_facts(std::span<const std::string> texts);

using FactList = std::vector<Fact>;  // always sorted + unique where used as a set
using ObjectTable = std::map<Symbol, Symbol>;  // object -> type

void normalize(FactList& facts);
bool contains(const FactList& sorted, const Fact& f);
bool includes(const FactList& sorted, const FactList& sorted_subset);

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Set of grounded facts plus the typed object table they range over.
class SceneGraph {
 public:
  SceneGraph();
  SceneGraph(FactList facts, ObjectTable objects);
  SceneGraph(FactList facts, std::shared_ptr<const ObjectTable> objects);

  const FactList& facts() const { return facts_; }
  const ObjectTable& objects() const { return *objects_; }
  const std::shared_ptr<const ObjectTable>& object_table() const { return objects_; }

  bool contains(const Fact& f) const { return pddl::contains(facts_, f); }
  bool contains_all(const FactList& sorted) const { return includes(facts_, sorted); }
  std::size_t size() const { return facts_.size(); }

  /// Same object table, different facts.
  SceneGraph with_facts(FactList facts) const;
  /// Throws ContractViolation when a fact mentions an object missing from the table.
  void validate() const;

  std::vector<std::string> to_strings() const;

  bool operator==(const SceneGraph& o) const;

 private:
  FactList facts_;
  std::shared_ptr<const ObjectTable> objects_;
};

}  // namespace ldmp::pddl
