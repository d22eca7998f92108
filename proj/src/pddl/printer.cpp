#include <sstream>

#include "ldmp/pddl/domain.hpp"

namespace ldmp::pddl {

namespace {

std::string params_str(const std::vector<Parameter>& ps) {
  std::string s;
  for (const auto& p : ps) {
    if (!s.empty()) s += ' ';
    s += p.name.str() + " - " + p.type.str();
  }
  return s;
}

std::string atom_str(const Atom& a) {
  std::string s = "(" + a.predicate.str();
  for (const auto& x : a.args) s += " " + x.str();
  return s + ")";
}

std::string conj(const std::vector<std::string>& parts) {
  if (parts.size() == 1) return parts[0];
  std::string s = "(and";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

}  // namespace

std::string print_domain(const Domain& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.declared.empty()) {
    os << "  (:types";
    for (const auto& [t, p] : d.types.declared) os << ' ' << t.str() << " - " << p.str();
    os << ")\n";
  }
  os << "  (:predicates";
  for (const auto& p : d.predicates) {
    os << "\n    (" << p.name.str();
    if (!p.params.empty()) os << ' ' << params_str(p.params);
    os << ')';
  }
  os << ")\n";
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name.str() << "\n";
    os << "    :parameters (" << params_str(a.params) << ")\n";
    std::vector<std::string> pre;
    for (const auto& l : a.precondition) pre.push_back(l.negated ? "(not " + atom_str(l.atom) + ")" : atom_str(l.atom));
    os << "    :precondition " << (pre.empty() ? "()" : conj(pre)) << "\n";
    std::vector<std::string> eff;
    for (const auto& x : a.add) eff.push_back(atom_str(x));
    for (const auto& x : a.del) eff.push_back("(not " + atom_str(x) + ")");
    os << "    :effect " << (eff.empty() ? "()" : conj(eff)) << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string print_problem(const Problem& pr) {
  std::ostringstream os;
  os << "(define (problem " << pr.name << ")\n";
  os << "  (:domain " << pr.domain_name << ")\n";
  os << "  (:objects";
  if (pr.object_order.size() == pr.objects.size()) {
    for (const auto& o : pr.object_order) os << ' ' << o.str() << " - " << pr.objects.at(o).str();
  } else {
    for (const auto& [o, t] : pr.objects) os << ' ' << o.str() << " - " << t.str();
  }
  os << ")\n  (:init";
  for (const auto& f : pr.init.facts()) os << "\n    " << f.str();
  os << ")\n  (:goal (and";
  for (const auto& f : pr.goal) os << ' ' << f.str();
  os << ")))\n";
  return os.str();
}

}  // namespace ldmp::pddl
