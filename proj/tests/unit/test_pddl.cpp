#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ldmp/pddl/grounding.hpp"
#include "ldmp/pddl/lexer.hpp"

using namespace ldmp::pddl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string b1_domain() { return slurp(std::string(LDMP_DATA_DIR) + "/b1/domain.pddl"); }
std::string b1_problem() { return slurp(std::string(LDMP_DATA_DIR) + "/b1/problem.pddl"); }

Fact F(std::string_view s) { return parse_fact(s); }

SourceLocation error_at(const std::string& text, const Domain* d = nullptr) {
  try {
    if (d) {
      parse_problem(text, *d);
    } else {
      parse_domain(text);
    }
  } catch (const ParseError& e) {
    return e.location();
  }
  FAIL("expected a parse error");
  return {};
}

// Random well-formed domains for the print/parse round trip.
Domain random_domain(std::mt19937_64& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  Domain d;
  d.name = "dom" + std::to_string(pick(1000));
  if (pick(2)) d.requirements = {":strips", ":typing"};
  std::vector<Symbol> types{Symbol("object")};
  const int nt = pick(4);
  for (int i = 0; i < nt; ++i) {
    Symbol t("t" + std::to_string(i));
    d.types.declared.emplace_back(t, types[pick(static_cast<int>(types.size()))]);
    types.push_back(t);
  }
  const int np = 1 + pick(5);
  for (int i = 0; i < np; ++i) {
    PredicateDecl p;
    p.name = Symbol("p" + std::to_string(i));
    const int ar = pick(4);
    for (int k = 0; k < ar; ++k) {
      p.params.push_back({Symbol("?v" + std::to_string(k)), types[pick(static_cast<int>(types.size()))]});
    }
    d.predicates.push_back(p);
  }
  const int na = pick(5);
  for (int i = 0; i < na; ++i) {
    ActionSchema a;
    a.name = Symbol("act" + std::to_string(i));
    const int npar = 1 + pick(3);
    for (int k = 0; k < npar; ++k) {
      a.params.push_back({Symbol("?x" + std::to_string(k)), types[pick(static_cast<int>(types.size()))]});
    }
    auto atom = [&] {
      const auto& p = d.predicates[pick(np)];
      Atom at{p.name, {}, {}};
      for (int k = 0; k < p.arity(); ++k) at.args.push_back(a.params[pick(npar)].name);
      return at;
    };
    for (int k = pick(4); k > 0; --k) a.precondition.push_back({atom(), pick(3) == 0});
    for (int k = pick(3); k > 0; --k) a.add.push_back(atom());
    for (int k = pick(3); k > 0; --k) a.del.push_back(atom());
    d.actions.push_back(a);
  }
  return d;
}

}  // namespace

TEST_CASE("symbols compare by identity and order by value") {
  Symbol a("alpha"), b("beta"), a2(std::string("al") + "pha");
  CHECK(a == a2);
  CHECK(a != b);
  CHECK(a < b);
  CHECK(Symbol() == Symbol(""));
  CHECK(Symbol("?x").is_variable());
}

TEST_CASE("facts parse and print") {
  Fact f = F("(on C D)");
  CHECK(f.predicate.str() == "on");
  CHECK(f.args.size() == 2);
  CHECK(f.str() == "(on C D)");
  CHECK(F("  ( clear   A ) ").str() == "(clear A)");
  CHECK_THROWS_AS(F("on C D"), std::invalid_argument);
  CHECK_THROWS_AS(F("(on C D"), std::invalid_argument);
  CHECK_THROWS_AS(F("()"), std::invalid_argument);
  CHECK(F("(clear A)") < F("(on A B)"));
}

TEST_CASE("scene graph has set semantics and sorted output") {
  ObjectTable objs{{Symbol("A"), Symbol("cube")}, {Symbol("B"), Symbol("cube")}};
  SceneGraph s({F("(on A B)"), F("(clear A)"), F("(on A B)")}, objs);
  CHECK(s.size() == 2);
  CHECK(s.to_strings() == std::vector<std::string>{"(clear A)", "(on A B)"});
  s.validate();
  SceneGraph bad({F("(on A Z)")}, objs);
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("parse B1 domain") {
  Domain d = parse_domain(b1_domain());
  CHECK(d.name == "blocks");
  CHECK(d.actions.size() == 4);
  const ActionSchema* pick = d.action(Symbol("pick"));
  REQUIRE(pick);
  const bool needs_clear = std::any_of(pick->precondition.begin(), pick->precondition.end(), [](const Literal& l) {
    return !l.negated && l.atom.predicate == Symbol("clear") && l.atom.args == std::vector<Symbol>{Symbol("?x")};
  });
  CHECK(needs_clear);
  const bool adds_inhand = std::any_of(pick->add.begin(), pick->add.end(), [](const Atom& a) {
    return a.predicate == Symbol("inhand") && a.args == std::vector<Symbol>{Symbol("?a"), Symbol("?x")};
  });
  CHECK(adds_inhand);
}

TEST_CASE("predicates-only domain is valid") {
  Domain d = parse_domain("(define (domain tiny) (:predicates (p ?x) (q)))");
  CHECK(d.actions.empty());
  CHECK(d.predicates.size() == 2);
  CHECK(d.predicates[0].params[0].type == Symbol("object"));
}

TEST_CASE("type hierarchy") {
  Domain d = parse_domain("(define (domain t) (:types cube hook - movable slot - region arm) (:predicates))");
  CHECK(d.types.is_subtype(Symbol("cube"), Symbol("movable")));
  CHECK(d.types.is_subtype(Symbol("cube"), Symbol("object")));
  CHECK_FALSE(d.types.is_subtype(Symbol("movable"), Symbol("cube")));
  CHECK_FALSE(d.types.is_subtype(Symbol("arm"), Symbol("region")));
  CHECK(d.types.known(Symbol("region")));
  CHECK_THROWS_AS(parse_domain("(define (domain t) (:types a - b b - a) (:predicates))"), ParseError);
}

TEST_CASE("domain errors carry source locations") {
  // unknown predicate
  auto loc = error_at(
      "(define (domain d)\n  (:predicates (p ?x))\n  (:action a :parameters (?x)\n    :precondition (q ?x)))");
  CHECK(loc.line == 4);
  CHECK(loc.column == 20);
  // arity mismatch
  loc = error_at("(define (domain d) (:predicates (p ?x))\n(:action a :parameters (?x) :effect (p ?x ?x)))");
  CHECK(loc.line == 2);
  // unbound variable
  loc = error_at("(define (domain d) (:predicates (p ?x))\n(:action a :parameters (?x)\n :effect (p ?y)))");
  CHECK(loc.line == 3);
  CHECK(loc.column == 13);
  // lexical error
  loc = error_at("(define (domain d)\n (:predicates (p ?x) #))");
  CHECK(loc.line == 2);
  CHECK(loc.column == 22);
  // unsupported connectives
  CHECK_THROWS_AS(parse_domain("(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) "
                               ":precondition (and (or (p ?x) (p ?x)))))"),
                  ParseError);
  CHECK_THROWS_AS(parse_domain("(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x - nosuch)))"),
                  ParseError);
}

TEST_CASE("parse B1 problem") {
  Domain d = parse_domain(b1_domain());
  Problem p = parse_problem(b1_problem(), d);
  CHECK(p.init.contains(F("(ontable A)")));
  CHECK(p.init.contains(F("(handempty panda)")));
  CHECK(p.goal == FactList{F("(on A B)"), F("(on B C)"), F("(on C D)")});
  CHECK(p.objects.at(Symbol("panda")) == Symbol("arm"));
  p.init.validate();
}

TEST_CASE("goal contained in init") {
  Domain d = parse_domain(b1_domain());
  Problem p = parse_problem(
      "(define (problem p) (:domain blocks) (:objects A - cube) (:init (ontable A) (clear A)) (:goal (clear A)))", d);
  CHECK(p.init.contains_all(p.goal));
}

TEST_CASE("problem errors carry source locations") {
  Domain d = parse_domain(b1_domain());
  auto loc = error_at("(define (problem p) (:domain blocks)\n (:objects A - cube)\n (:init (ontable Z)) (:goal (and)))", &d);
  CHECK(loc.line == 3);
  CHECK(loc.column == 18);
  loc = error_at("(define (problem p) (:domain blocks) (:objects A - cube)\n (:init (floating A)) (:goal (and)))", &d);
  CHECK(loc.line == 2);
  loc = error_at("(define (problem p) (:domain blocks) (:objects A - cube panda - arm)\n (:init (ontable panda)) (:goal (and)))", &d);
  CHECK(loc.line == 2);
  loc = error_at("(define (problem p) (:domain other) (:objects) (:init) (:goal (and)))", &d);
  CHECK(loc.line == 1);
}

TEST_CASE("print/parse round trip on random domains") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    Domain d = random_domain(rng);
    const std::string text = print_domain(d);
    Domain back = parse_domain(text);
    CHECK_MESSAGE(back == d, text);
    CHECK(print_domain(back) == text);
  }
  Domain b1 = parse_domain(b1_domain());
  CHECK(parse_domain(print_domain(b1)) == b1);
  Problem p = parse_problem(b1_problem(), b1);
  CHECK(parse_problem(print_problem(p), b1) == p);
}

TEST_CASE("mutation fuzz: parser fails with a located error or succeeds") {
  Domain d = parse_domain(b1_domain());
  const std::string base = b1_problem();
  const std::string alphabet = "()?- ;\n\tABCXabcxyz0189:#{}\"\x01\xff";
  std::mt19937_64 rng(23);
  int errors = 0;
  for (int i = 0; i < 100; ++i) {
    std::string s = base;
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      const std::size_t pos = rng() % (s.size() + 1);
      switch (rng() % 4) {
        case 0: if (pos < s.size()) s.erase(pos, 1); break;
        case 1: s.insert(s.begin() + pos, alphabet[rng() % alphabet.size()]); break;
        case 2: if (pos < s.size()) s[pos] = alphabet[rng() % alphabet.size()]; break;
        default: {
          const std::size_t len = rng() % 20;
          if (pos + len <= s.size()) s.insert(pos, s.substr(pos, len));
        }
      }
    }
    try {
      parse_problem(s, d);
    } catch (const ParseError& e) {
      ++errors;
      CHECK(e.location().line >= 1);
      CHECK(e.location().column >= 1);
    } catch (const std::exception& e) {
      FAIL("unlocated failure: " << e.what());
    }
  }
  CHECK(errors > 50);
}

TEST_CASE("split_static") {
  Domain d = parse_domain(b1_domain());
  SceneGraph s({F("(cube C)"), F("(on C D)"), F("(arm panda)")}, ObjectTable{});
  auto [stat, flu] = split_static(s, d.actions);
  CHECK(stat == FactList{F("(arm panda)"), F("(cube C)")});
  CHECK(flu == FactList{F("(on C D)")});
  auto [e1, e2] = split_static(SceneGraph(), d.actions);
  CHECK(e1.empty());
  CHECK(e2.empty());
}

TEST_CASE("applicable and apply") {
  Domain d = parse_domain(b1_domain());
  Problem p = parse_problem(b1_problem(), d);
  auto pick = ground(d, "(pick panda C)");
  CHECK(pick.name() == "(pick panda C)");
  CHECK(applicable(p.init, pick));
  SceneGraph held = apply(p.init, pick);
  CHECK(held.contains(F("(inhand panda C)")));
  CHECK_FALSE(held.contains(F("(clear C)")));
  CHECK_THROWS_AS(apply(held, pick), ContractViolation);
  SceneGraph back = apply(held, ground(d, "(place panda C)"));
  CHECK(back == p.init);
  auto stack = ground(d, "(stack panda C D)");
  SceneGraph on = apply(held, stack);
  CHECK(on.contains(F("(on C D)")));
  CHECK(apply(on, ground(d, "(unstack panda C D)")) == held);
}

TEST_CASE("set-algebra oracle over random scenes and actions") {
  Domain d = parse_domain(b1_domain());
  Problem p = parse_problem(b1_problem(), d);
  auto actions = ground_all(d, p.objects);
  // every grounded atom over the problem's objects
  std::vector<Fact> universe;
  for (const auto& a : actions) {
    for (const auto* set : {&a.pre_pos, &a.pre_neg, &a.add, &a.del}) universe.insert(universe.end(), set->begin(), set->end());
  }
  normalize(universe);
  const auto fluent = fluent_predicates(d.actions);
  std::mt19937_64 rng(31);
  int applied = 0;
  for (int i = 0; i < 1000; ++i) {
    FactList facts;
    for (const auto& f : universe) {
      if (rng() % 3 == 0) facts.push_back(f);
    }
    facts.push_back(F("(cube A)"));
    normalize(facts);
    const auto& a = actions[rng() % actions.size()];
    std::set<Fact> S(facts.begin(), facts.end());
    bool expect = std::all_of(a.pre_pos.begin(), a.pre_pos.end(), [&](const Fact& f) { return S.count(f) > 0; }) &&
                  std::none_of(a.pre_neg.begin(), a.pre_neg.end(), [&](const Fact& f) { return S.count(f) > 0; });
    CHECK(applicable(facts, a) == expect);
    if (!expect) continue;
    ++applied;
    FactList out = apply_facts(facts, a);
    std::set<Fact> O = S;
    for (const auto& f : a.del) O.erase(f);
    for (const auto& f : a.add) O.insert(f);
    CHECK(out == FactList(O.begin(), O.end()));
    CHECK(std::adjacent_find(out.begin(), out.end()) == out.end());
    CHECK(fluents_of(facts, {}) == fluents_of(out, {}));
    // static part untouched
    FactList s_in, s_out;
    for (const auto& f : facts) if (!fluent.count(f.predicate)) s_in.push_back(f);
    for (const auto& f : out) if (!fluent.count(f.predicate)) s_out.push_back(f);
    CHECK(s_in == s_out);
  }
  CHECK(applied > 20);
}

TEST_CASE("grounding enumerates exactly the type-consistent tuples") {
  Domain d = parse_domain(
      "(define (domain g) (:types cube hook - movable arm)"
      " (:predicates (p ?x - movable) (q ?a - arm ?x - cube))"
      " (:action m :parameters (?a - arm ?x - movable ?y - cube) :effect (p ?x))"
      " (:action n :parameters (?x ?y) :effect (not (p ?x))))");
  for (int arms = 1; arms <= 2; ++arms) {
    for (int cubes = 0; cubes <= 3; ++cubes) {
      for (int hooks = 0; hooks <= 2; ++hooks) {
        ObjectTable objs;
        for (int i = 0; i < arms; ++i) objs[Symbol("arm" + std::to_string(i))] = Symbol("arm");
        for (int i = 0; i < cubes; ++i) objs[Symbol("c" + std::to_string(i))] = Symbol("cube");
        for (int i = 0; i < hooks; ++i) objs[Symbol("h" + std::to_string(i))] = Symbol("hook");
        const int total = arms + cubes + hooks;
        auto m = ground_schema(d.actions[0], d.types, objs);
        auto n = ground_schema(d.actions[1], d.types, objs);
        CHECK(m.size() == static_cast<std::size_t>(arms * (cubes + hooks) * cubes));
        CHECK(n.size() == static_cast<std::size_t>(total * total));
        CHECK(std::is_sorted(m.begin(), m.end()));
      }
    }
  }
}

TEST_CASE("ground_all is sorted lexicographically") {
  Domain d = parse_domain(b1_domain());
  Problem p = parse_problem(b1_problem(), d);
  auto all = ground_all(d, p.objects);
  CHECK(all.size() == 4 + 4 + 16 + 16);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(all.front().name() == "(pick panda A)");
}
