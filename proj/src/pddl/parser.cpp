#include <algorithm>
#include <set>

#include "ldmp/pddl/domain.hpp"
#include "ldmp/pddl/lexer.hpp"

namespace ldmp::pddl {

namespace {

const Symbol kObject("object");

[[noreturn]] void fail(const std::string& msg, SourceLocation loc) { throw ParseError(msg, loc); }

const SExpr& expect_list(const SExpr& e, const std::string& what) {
  if (!e.list) fail("expected " + what + ", got '" + e.word + "'", e.loc);
  return e;
}

const std::string& expect_word(const SExpr& e, const std::string& what) {
  if (e.list) fail("expected " + what + ", got a list", e.loc);
  return e.word;
}

bool is_keyword(const SExpr& e, std::string_view kw) { return !e.list && e.word == kw; }

// "a b - t c" style lists; untyped names default to `object`.
struct TypedName {
  std::string name;
  std::string type;
  SourceLocation loc;
  SourceLocation type_loc;
};

std::vector<TypedName> typed_list(const std::vector<SExpr>& items, std::size_t from) {
  std::vector<TypedName> out;
  std::size_t pending = 0;
  for (std::size_t i = from; i < items.size(); ++i) {
    const auto& w = expect_word(items[i], "a name");
    if (w == "-") {
      if (pending == 0) fail("'-' without preceding names", items[i].loc);
      if (i + 1 >= items.size()) fail("missing type after '-'", items[i].loc);
      const auto& t = expect_word(items[i + 1], "a type name");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) {
        out[k].type = t;
        out[k].type_loc = items[i + 1].loc;
      }
      pending = 0;
      ++i;
      continue;
    }
    out.push_back({w, "object", items[i].loc, items[i].loc});
    ++pending;
  }
  return out;
}

void check_type(const TypeHierarchy& types, const std::string& t, SourceLocation loc) {
  if (!types.known(Symbol(t))) fail("unknown type '" + t + "'", loc);
}

std::vector<Parameter> parse_params(const SExpr& e, const TypeHierarchy& types, bool variables) {
  expect_list(e, "a parameter list");
  std::vector<Parameter> out;
  std::set<std::string> seen;
  for (const auto& tn : typed_list(e.items, 0)) {
    if (variables && tn.name[0] != '?') fail("parameter '" + tn.name + "' must start with '?'", tn.loc);
    if (!seen.insert(tn.name).second) fail("duplicate parameter '" + tn.name + "'", tn.loc);
    check_type(types, tn.type, tn.type_loc);
    out.push_back({Symbol(tn.name), Symbol(tn.type)});
  }
  return out;
}

Atom parse_atom(const SExpr& e, const Domain& d, const std::vector<Parameter>* params) {
  expect_list(e, "an atom");
  if (e.items.empty()) fail("empty atom", e.loc);
  const auto& name = expect_word(e.items[0], "a predicate name");
  const PredicateDecl* decl = d.predicate(Symbol(name));
  if (!decl) fail("unknown predicate '" + name + "'", e.items[0].loc);
  if (static_cast<int>(e.items.size()) - 1 != decl->arity()) {
    fail("predicate '" + name + "' expects " + std::to_string(decl->arity()) + " argument(s), got " +
             std::to_string(e.items.size() - 1),
         e.loc);
  }
  Atom a{decl->name, {}, e.loc};
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const auto& w = expect_word(e.items[i], "an argument");
    if (params) {
      if (w[0] != '?') fail("expected a variable, got '" + w + "'", e.items[i].loc);
      const bool bound = std::any_of(params->begin(), params->end(),
                                     [&](const Parameter& p) { return p.name.str() == w; });
      if (!bound) fail("unbound variable '" + w + "'", e.items[i].loc);
    }
    a.args.emplace_back(w);
  }
  return a;
}

// (and x y ...) | x | ()
std::vector<const SExpr*> conjuncts(const SExpr& e) {
  expect_list(e, "a formula");
  std::vector<const SExpr*> out;
  if (e.items.empty()) return out;
  if (is_keyword(e.items[0], "and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) out.push_back(&e.items[i]);
  } else {
    out.push_back(&e);
  }
  return out;
}

Literal parse_literal(const SExpr& e, const Domain& d, const std::vector<Parameter>* params) {
  expect_list(e, "a literal");
  if (!e.items.empty() && is_keyword(e.items[0], "not")) {
    if (e.items.size() != 2) fail("'not' takes exactly one atom", e.loc);
    return {parse_atom(e.items[1], d, params), true};
  }
  if (!e.items.empty() && !e.items[0].list && (e.items[0].word == "or" || e.items[0].word == "forall" ||
                                              e.items[0].word == "exists" || e.items[0].word == "when" ||
                                              e.items[0].word == "and")) {
    fail("unsupported connective '" + e.items[0].word + "'", e.items[0].loc);
  }
  return {parse_atom(e, d, params), false};
}

void parse_types(const SExpr& sec, TypeHierarchy& types) {
  std::set<std::string> declared;
  std::vector<std::pair<std::string, SourceLocation>> parents;
  for (const auto& tn : typed_list(sec.items, 1)) {
    if (tn.name == "object") fail("'object' is built in", tn.loc);
    if (tn.name[0] == '?') fail("type names cannot start with '?'", tn.loc);
    if (!declared.insert(tn.name).second) fail("duplicate type '" + tn.name + "'", tn.loc);
    if (tn.name == tn.type) fail("type '" + tn.name + "' is its own parent", tn.type_loc);
    types.declared.emplace_back(Symbol(tn.name), Symbol(tn.type));
    parents.emplace_back(tn.type, tn.type_loc);
  }
  // parents mentioned only after '-' become children of object
  for (const auto& [p, loc] : parents) {
    if (p != "object" && declared.insert(p).second) types.declared.emplace_back(Symbol(p), kObject);
  }
  for (const auto& [t, parent] : types.declared) {
    Symbol cur = t;
    for (std::size_t steps = 0; cur != kObject; ++steps) {
      if (steps > types.declared.size()) fail("cyclic type hierarchy at '" + t.str() + "'", sec.loc);
      cur = *types.parent(cur);
    }
  }
}

}  // namespace

bool TypeHierarchy::known(Symbol t) const {
  if (t == kObject) return true;
  return std::any_of(declared.begin(), declared.end(), [&](const auto& p) { return p.first == t; });
}

std::optional<Symbol> TypeHierarchy::parent(Symbol t) const {
  for (const auto& [c, p] : declared) {
    if (c == t) return p;
  }
  return std::nullopt;
}

bool TypeHierarchy::is_subtype(Symbol t, Symbol of) const {
  if (of == kObject) return true;
  for (std::size_t steps = 0; steps <= declared.size() + 1; ++steps) {
    if (t == of) return true;
    auto p = parent(t);
    if (!p) return false;
    t = *p;
  }
  return false;
}

const PredicateDecl* Domain::predicate(Symbol n) const {
  for (const auto& p : predicates) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

const ActionSchema* Domain::action(Symbol n) const {
  for (const auto& a : actions) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

Domain parse_domain(std::string_view text) {
  const SExpr root = read_sexpr(text);
  expect_list(root, "(define ...)");
  if (root.items.size() < 2 || !is_keyword(root.items[0], "define")) fail("expected (define ...)", root.loc);
  const auto& header = expect_list(root.items[1], "(domain NAME)");
  if (header.items.size() != 2 || !is_keyword(header.items[0], "domain")) {
    fail("expected (domain NAME)", header.loc);
  }
  Domain d;
  d.name = expect_word(header.items[1], "a domain name");

  bool saw_predicates = false;
  std::set<std::string> action_names;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const auto& sec = expect_list(root.items[i], "a domain section");
    if (sec.items.empty()) fail("empty section", sec.loc);
    const auto& kw = expect_word(sec.items[0], "a section keyword");
    if (kw == ":requirements") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        d.requirements.push_back(expect_word(sec.items[k], "a requirement"));
      }
    } else if (kw == ":types") {
      if (saw_predicates || !d.types.declared.empty()) fail(":types must appear once, before :predicates", sec.loc);
      parse_types(sec, d.types);
    } else if (kw == ":predicates") {
      if (saw_predicates) fail("duplicate :predicates section", sec.loc);
      saw_predicates = true;
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const auto& p = expect_list(sec.items[k], "a predicate declaration");
        if (p.items.empty()) fail("empty predicate declaration", p.loc);
        PredicateDecl decl;
        decl.name = Symbol(expect_word(p.items[0], "a predicate name"));
        if (d.predicate(decl.name)) fail("duplicate predicate '" + decl.name.str() + "'", p.loc);
        SExpr rest{true, "", {p.items.begin() + 1, p.items.end()}, p.loc};
        decl.params = parse_params(rest, d.types, true);
        d.predicates.push_back(std::move(decl));
      }
    } else if (kw == ":action") {
      if (sec.items.size() < 2) fail("action without a name", sec.loc);
      ActionSchema a;
      a.name = Symbol(expect_word(sec.items[1], "an action name"));
      if (!action_names.insert(a.name.str()).second) fail("duplicate action '" + a.name.str() + "'", sec.items[1].loc);
      const SExpr* pre = nullptr;
      const SExpr* eff = nullptr;
      bool saw_params = false;
      for (std::size_t k = 2; k < sec.items.size(); k += 2) {
        const auto& key = expect_word(sec.items[k], "an action keyword");
        if (k + 1 >= sec.items.size()) fail("missing value for " + key, sec.items[k].loc);
        const auto& val = sec.items[k + 1];
        if (key == ":parameters") {
          if (saw_params) fail("duplicate :parameters", sec.items[k].loc);
          saw_params = true;
          a.params = parse_params(val, d.types, true);
        } else if (key == ":precondition") {
          if (pre) fail("duplicate :precondition", sec.items[k].loc);
          pre = &val;
        } else if (key == ":effect") {
          if (eff) fail("duplicate :effect", sec.items[k].loc);
          eff = &val;
        } else {
          fail("unknown action keyword '" + key + "'", sec.items[k].loc);
        }
      }
      if (pre) {
        for (const SExpr* c : conjuncts(*pre)) a.precondition.push_back(parse_literal(*c, d, &a.params));
      }
      if (eff) {
        for (const SExpr* c : conjuncts(*eff)) {
          Literal l = parse_literal(*c, d, &a.params);
          (l.negated ? a.del : a.add).push_back(std::move(l.atom));
        }
      }
      d.actions.push_back(std::move(a));
    } else {
      fail("unknown domain section '" + kw + "'", sec.items[0].loc);
    }
  }
  return d;
}

Problem parse_problem(std::string_view text, const Domain& domain) {
  const SExpr root = read_sexpr(text);
  expect_list(root, "(define ...)");
  if (root.items.size() < 2 || !is_keyword(root.items[0], "define")) fail("expected (define ...)", root.loc);
  const auto& header = expect_list(root.items[1], "(problem NAME)");
  if (header.items.size() != 2 || !is_keyword(header.items[0], "problem")) {
    fail("expected (problem NAME)", header.loc);
  }
  Problem pr;
  pr.name = expect_word(header.items[1], "a problem name");

  auto ground = [&](const SExpr& e) {
    expect_list(e, "a fact");
    if (e.items.empty()) fail("empty fact", e.loc);
    if (is_keyword(e.items[0], "not")) fail("negative facts are not allowed here", e.items[0].loc);
    const auto& name = expect_word(e.items[0], "a predicate name");
    const PredicateDecl* decl = domain.predicate(Symbol(name));
    if (!decl) fail("undeclared predicate '" + name + "'", e.items[0].loc);
    if (static_cast<int>(e.items.size()) - 1 != decl->arity()) {
      fail("predicate '" + name + "' expects " + std::to_string(decl->arity()) + " argument(s)", e.loc);
    }
    Fact f;
    f.predicate = decl->name;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      Symbol o(expect_word(e.items[i], "an object"));
      auto it = pr.objects.find(o);
      if (it == pr.objects.end()) fail("undeclared object '" + o.str() + "'", e.items[i].loc);
      const Symbol want = decl->params[i - 1].type;
      if (!domain.types.is_subtype(it->second, want)) {
        fail("object '" + o.str() + "' of type '" + it->second.str() + "' where '" + want.str() + "' expected",
             e.items[i].loc);
      }
      f.args.push_back(o);
    }
    return f;
  };

  bool saw_objects = false, saw_init = false, saw_goal = false;
  FactList init;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const auto& sec = expect_list(root.items[i], "a problem section");
    if (sec.items.empty()) fail("empty section", sec.loc);
    const auto& kw = expect_word(sec.items[0], "a section keyword");
    if (kw == ":domain") {
      if (sec.items.size() != 2) fail("expected (:domain NAME)", sec.loc);
      pr.domain_name = expect_word(sec.items[1], "a domain name");
      if (pr.domain_name != domain.name) {
        fail("problem is for domain '" + pr.domain_name + "', not '" + domain.name + "'", sec.items[1].loc);
      }
    } else if (kw == ":objects") {
      if (saw_objects || saw_init || saw_goal) fail(":objects must appear once, before :init", sec.loc);
      saw_objects = true;
      for (const auto& tn : typed_list(sec.items, 1)) {
        if (tn.name[0] == '?') fail("object names cannot start with '?'", tn.loc);
        check_type(domain.types, tn.type, tn.type_loc);
        Symbol o(tn.name);
        if (!pr.objects.emplace(o, Symbol(tn.type)).second) fail("duplicate object '" + tn.name + "'", tn.loc);
        pr.object_order.push_back(o);
      }
    } else if (kw == ":init") {
      if (saw_init) fail("duplicate :init", sec.loc);
      saw_init = true;
      for (std::size_t k = 1; k < sec.items.size(); ++k) init.push_back(ground(sec.items[k]));
    } else if (kw == ":goal") {
      if (saw_goal) fail("duplicate :goal", sec.loc);
      if (sec.items.size() != 2) fail("expected (:goal FORMULA)", sec.loc);
      saw_goal = true;
      for (const SExpr* c : conjuncts(sec.items[1])) pr.goal.push_back(ground(*c));
    } else {
      fail("unknown problem section '" + kw + "'", sec.items[0].loc);
    }
  }
  if (pr.domain_name.empty()) fail("missing (:domain NAME)", root.loc);
  if (!saw_init) fail("missing :init", root.loc);
  if (!saw_goal) fail("missing :goal", root.loc);
  normalize(pr.goal);
  pr.init = SceneGraph(std::move(init), pr.objects);
  return pr;
}

}  // namespace ldmp::pddl
