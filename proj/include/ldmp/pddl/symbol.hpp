#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace ldmp::pddl {

/// Interned name. Equality is pointer identity; ordering is by string value
/// so sorted containers are independent of interning order.
class Symbol {
 public:
  Symbol();
  explicit Symbol(std::string_view name);

  const std::string& str() const { return *p_; }
  bool empty() const { return p_->empty(); }
  bool is_variable() const { return !p_->empty() && (*p_)[0] == '?'; }

  bool operator==(const Symbol& o) const { return p_ == o.p_; }
  std::strong_ordering operator<=>(const Symbol& o) const {
    if (p_ == o.p_) return std::strong_ordering::equal;
    return p_->compare(*o.p_) <=> 0;
  }
  std::size_t hash() const { return std::hash<const void*>{}(p_); }

 private:
  const std::string* p_;
};

inline Symbol sym(std::string_view s) { return Symbol(s); }

}  // namespace ldmp::pddl

template <>
struct std::hash<ldmp::pddl::Symbol> {
  std::size_t operator()(const ldmp::pddl::Symbol& s) const noexcept { return s.hash(); }
};
