#include "ldmp/pddl/fact.hpp"

#include <algorithm>
#include <cctype>

namespace ldmp::pddl {

std::strong_ordering Fact::operator<=>(const Fact& o) const {
  if (auto c = predicate <=> o.predicate; c != 0) return c;
  return std::lexicographical_compare_three_way(args.begin(), args.end(), o.args.begin(),
                                                o.args.end());
}

std::string Fact::str() const {
  std::string s = "(" + predicate.str();
  for (const auto& a : args) s += " " + a.str();
  return s + ")";
}

Fact parse_fact(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("malformed fact: " + std::string(text)); };
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (i >= text.size() || text[i] != '(') fail();
  ++i;
  std::vector<Symbol> words;
  for (;;) {
    skip();
    if (i >= text.size()) fail();
    if (text[i] == ')') {
      ++i;
      break;
    }
    std::size_t b = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '(' && text[i] != ')')
      ++i;
    if (b == i) fail();
    words.emplace_back(text.substr(b, i - b));
  }
  skip();
  if (i != text.size() || words.empty()) fail();
  return Fact(words.front(), std::vector<Symbol>(words.begin() + 1, words.end()));
}

std::vector<Fact> parse_facts(std::span<const std::string> texts) {
  std::vector<Fact> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_fact(t));
  return out;
}

void normalize(FactList& facts) {
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
}

bool contains(const FactList& sorted, const Fact& f) {
  return std::binary_search(sorted.begin(), sorted.end(), f);
}

bool includes(const FactList& sorted, const FactList& sorted_subset) {
  return std::includes(sorted.begin(), sorted.end(), sorted_subset.begin(), sorted_subset.end());
}

SceneGraph::SceneGraph() : objects_(std::make_shared<const ObjectTable>()) {}

SceneGraph::SceneGraph(FactList facts, ObjectTable objects)
    : SceneGraph(std::move(facts), std::make_shared<const ObjectTable>(std::move(objects))) {}

SceneGraph::SceneGraph(FactList facts, std::shared_ptr<const ObjectTable> objects)
    : facts_(std::move(facts)), objects_(std::move(objects)) {
  if (!objects_) objects_ = std::make_shared<const ObjectTable>();
  normalize(facts_);
}

SceneGraph SceneGraph::with_facts(FactList facts) const { return SceneGraph(std::move(facts), objects_); }

void SceneGraph::validate() const {
  for (const auto& f : facts_) {
    for (const auto& a : f.args) {
      if (!objects_->count(a)) {
        throw ContractViolation("fact " + f.str() + " mentions unknown object " + a.str());
      }
    }
  }
}

std::vector<std::string> SceneGraph::to_strings() const {
  std::vector<std::string> out;
  out.reserve(facts_.size());
  for (const auto& f : facts_) out.push_back(f.str());
  return out;
}

bool SceneGraph::operator==(const SceneGraph& o) const {
  return facts_ == o.facts_ && (objects_ == o.objects_ || *objects_ == *o.objects_);
}

}  // namespace ldmp::pddl
