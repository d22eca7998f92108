#include "ldmp/pddl/symbol.hpp"

#include <mutex>
#include <unordered_set>

namespace ldmp::pddl {

namespace {

const std::string* intern(std::string_view name) {
  static std::mutex mu;
  static std::unordered_set<std::string> pool;
  std::lock_guard lock(mu);
  return &*pool.emplace(name).first;
}

}  // namespace

Symbol::Symbol() {
  static const std::string* const empty = intern("");
  p_ = empty;
}

Symbol::Symbol(std::string_view name) : p_(intern(name)) {}

}  // namespace ldmp::pddl
