#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldmp/pddl/fact.hpp"

namespace ldmp::pddl {

struct SourceLocation {
  int line = 0;
  int column = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, SourceLocation loc);
  SourceLocation location() const { return loc_; }
  const std::string& message() const { return msg_; }

 private:
  std::string msg_;
  SourceLocation loc_;
};

/// Declared types in declaration order; `object` is the implicit root.
struct TypeHierarchy {
  std::vector<std::pair<Symbol, Symbol>> declared;  // (type, parent)

  bool known(Symbol t) const;
  std::optional<Symbol> parent(Symbol t) const;
  /// Reflexive, transitive.
  bool is_subtype(Symbol t, Symbol of) const;

  bool operator==(const TypeHierarchy&) const = default;
};

struct Parameter {
  Symbol name;  // includes the leading '?'
  Symbol type;
  bool operator==(const Parameter&) const = default;
};

struct PredicateDecl {
  Symbol name;
  std::vector<Parameter> params;
  int arity() const { return static_cast<int>(params.size()); }
  bool operator==(const PredicateDecl&) const = default;
};

/// Atom over parameters and constants; variables start with '?'.
struct Atom {
  Symbol predicate;
  std::vector<Symbol> args;
  SourceLocation loc{};
  bool operator==(const Atom& o) const { return predicate == o.predicate && args == o.args; }
};

struct Literal {
  Atom atom;
  bool negated = false;
  bool operator==(const Literal&) const = default;
};

struct ActionSchema {
  Symbol name;
  std::vector<Parameter> params;
  std::vector<Literal> precondition;
  std::vector<Atom> add;
  std::vector<Atom> del;
  bool operator==(const ActionSchema&) const = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  TypeHierarchy types;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  const PredicateDecl* predicate(Symbol name) const;
  const ActionSchema* action(Symbol name) const;
  bool operator==(const Domain&) const = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  ObjectTable objects;
  std::vector<Symbol> object_order;  // declaration order, for printing
  SceneGraph init;
  FactList goal;  // sorted

  bool operator==(const Problem& o) const {
    return name == o.name && domain_name == o.domain_name && objects == o.objects &&
           init == o.init && goal == o.goal;
  }
};

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain& domain);

std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem);

}  // namespace ldmp::pddl
