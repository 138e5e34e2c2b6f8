#pragma once

// Finite models with a plural domain. Entities are non-empty sets of atoms
// encoded as bitmasks, so join is bitwise or and atoms are the singletons.

#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "udrs/error.hpp"
#include "udrs/types.hpp"

namespace udrs {

using Entity = std::uint32_t;

inline constexpr std::size_t kMaxAtoms = 20;

struct Model {
  std::vector<std::string> atoms;
  /// (predicate, sense) -> tuples; sense "" is the unambiguous reading
  std::map<std::pair<std::string, std::string>, std::set<std::vector<Entity>>> ext;

  std::size_t size() const { return atoms.size(); }
  Entity all() const { return atoms.empty() ? 0 : static_cast<Entity>((1ull << atoms.size()) - 1); }

  static bool is_atom(Entity e) { return std::has_single_bit(e); }
  static Entity join(Entity a, Entity b) { return a | b; }
  /// a is an atomic part of X
  static bool member(Entity a, Entity x) { return is_atom(a) && (a & x) == a; }

  Entity atom(const std::string& name) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] == name) return Entity{1} << i;
    throw Error(ErrorCode::UnknownSort, "no atom named " + name);
  }

  /// Entities a referent of the given sort can denote.
  std::vector<Entity> entities(Sort s) const {
    std::vector<Entity> out;
    if (s == Sort::Individual) {
      for (std::size_t i = 0; i < atoms.size(); ++i) out.push_back(Entity{1} << i);
      return out;
    }
    for (Entity e = 1; e <= all() && e != 0; ++e) out.push_back(e);
    return out;
  }

  bool holds(const std::string& pred, const std::string& sense, const std::vector<Entity>& args) const {
    auto it = ext.find({pred, sense});
    return it != ext.end() && it->second.count(args) != 0;
  }

  void add(const std::string& pred, const std::string& sense, std::vector<Entity> args) {
    ext[{pred, sense}].insert(std::move(args));
  }

  std::string name(Entity e) const {
    if (is_atom(e)) return atoms.at(static_cast<std::size_t>(std::countr_zero(e)));
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (e & (Entity{1} << i)) {
        if (!first) out += ",";
        out += atoms[i];
        first = false;
      }
    return out + "}";
  }

  friend bool operator==(const Model&, const Model&) = default;
};

}  // namespace udrs
