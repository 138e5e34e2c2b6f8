#pragma once

// Fully specified DRSs: the boxes a reading of a UDRS unfolds into.

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "udrs/types.hpp"

namespace udrs {

struct Drs;

/// Immutable shared handle to a sub-DRS. Compares by value.
class Box {
 public:
  Box();
  Box(Drs d);  // NOLINT(google-explicit-constructor)

  const Drs& operator*() const { return *p_; }
  const Drs* operator->() const { return p_.get(); }

  friend bool operator==(const Box& a, const Box& b);

 private:
  std::shared_ptr<const Drs> p_;
};

struct DNeg {
  Box inner;
  friend bool operator==(const DNeg&, const DNeg&) = default;
};
struct DImpl {
  Box res, scope;
  friend bool operator==(const DImpl&, const DImpl&) = default;
};
struct DQuant {
  std::string q;
  Referent var;
  Box res, scope;
  friend bool operator==(const DQuant&, const DQuant&) = default;
};
struct DCum {
  Box res1, res2;
  Referent var1, var2;
  Box scope;
  friend bool operator==(const DCum&, const DCum&) = default;
};
/// target = Sigma var : body
struct DSum {
  Referent target, var;
  Box body;
  friend bool operator==(const DSum&, const DSum&) = default;
};

using DCond = std::variant<Atom, Eq, DNeg, DImpl, DQuant, DCum, DSum>;

struct Drs {
  std::vector<Referent> universe;
  std::vector<DCond> conds;

  bool declares(const std::string& n) const {
    for (const auto& r : universe)
      if (r.name == n) return true;
    return false;
  }
  friend bool operator==(const Drs&, const Drs&) = default;
};

inline Box::Box() : p_(std::make_shared<const Drs>()) {}
inline Box::Box(Drs d) : p_(std::make_shared<const Drs>(std::move(d))) {}
inline bool operator==(const Box& a, const Box& b) { return a.p_ == b.p_ || *a.p_ == *b.p_; }

/// The sense an atom is read in once disambiguated; "" when it has none.
inline const std::string& sense_of(const Atom& a) {
  static const std::string none;
  return a.senses.empty() ? none : a.senses.front();
}

namespace detail {

inline void term_keys(const Term& t, std::set<std::string>& out) {
  if (t.ref.is_hole()) return;
  out.insert(t.is_slot() ? t.str() : t.ref.name);
}

inline void free_in(const Drs& d, std::set<std::string> bound, std::set<std::string>& out);

inline void free_in_box(const Box& b, const std::set<std::string>& bound, std::set<std::string>& out) {
  free_in(*b, bound, out);
}

inline void free_in(const Drs& d, std::set<std::string> bound, std::set<std::string>& out) {
  for (const auto& r : d.universe) bound.insert(r.name);
  auto use = [&](const Term& t) {
    std::set<std::string> ks;
    term_keys(t, ks);
    for (const auto& k : ks)
      if (!bound.count(k)) out.insert(k);
  };
  for (const auto& c : d.conds) {
    if (auto* a = std::get_if<Atom>(&c)) {
      for (const auto& t : a->args) use(t);
    } else if (auto* e = std::get_if<Eq>(&c)) {
      use(e->lhs);
      use(e->rhs);
    } else if (auto* n = std::get_if<DNeg>(&c)) {
      free_in_box(n->inner, bound, out);
    } else if (auto* i = std::get_if<DImpl>(&c)) {
      // referents of the antecedent are visible in the consequent
      auto inner = bound;
      for (const auto& r : i->res->universe) inner.insert(r.name);
      free_in_box(i->res, bound, out);
      free_in_box(i->scope, inner, out);
    } else if (auto* q = std::get_if<DQuant>(&c)) {
      auto inner = bound;
      inner.insert(q->var.name);
      for (const auto& r : q->res->universe) inner.insert(r.name);
      free_in_box(q->res, bound, out);
      free_in_box(q->scope, inner, out);
    } else if (auto* cd = std::get_if<DCum>(&c)) {
      auto inner = bound;
      inner.insert(cd->var1.name);
      inner.insert(cd->var2.name);
      for (const auto& r : cd->res1->universe) inner.insert(r.name);
      for (const auto& r : cd->res2->universe) inner.insert(r.name);
      free_in_box(cd->res1, bound, out);
      free_in_box(cd->res2, bound, out);
      free_in_box(cd->scope, inner, out);
    } else if (auto* s = std::get_if<DSum>(&c)) {
      use(Term(s->target));
      auto inner = bound;
      inner.insert(s->var.name);
      free_in_box(s->body, inner, out);
    }
  }
}

}  // namespace detail

/// Referents (and unresolved slot terms, keyed by their printed form) that
/// occur free in d. Slot terms count as free constants.
inline std::set<std::string> free_referents(const Drs& d) {
  std::set<std::string> out;
  detail::free_in(d, {}, out);
  return out;
}

/// True if some atom or equation anywhere in d still mentions `?`.
inline bool has_hole(const Drs& d) {
  bool hole = false;
  auto check = [&](const Term& t) { hole = hole || t.ref.is_hole(); };
  std::vector<const Drs*> todo{&d};
  while (!todo.empty()) {
    const Drs* k = todo.back();
    todo.pop_back();
    for (const auto& c : k->conds) {
      if (auto* a = std::get_if<Atom>(&c)) for (const auto& t : a->args) check(t);
      else if (auto* e = std::get_if<Eq>(&c)) { check(e->lhs); check(e->rhs); }
      else if (auto* n = std::get_if<DNeg>(&c)) todo.push_back(&*n->inner);
      else if (auto* i = std::get_if<DImpl>(&c)) { todo.push_back(&*i->res); todo.push_back(&*i->scope); }
      else if (auto* q = std::get_if<DQuant>(&c)) { todo.push_back(&*q->res); todo.push_back(&*q->scope); }
      else if (auto* cd = std::get_if<DCum>(&c)) {
        todo.push_back(&*cd->res1);
        todo.push_back(&*cd->res2);
        todo.push_back(&*cd->scope);
      } else if (auto* s = std::get_if<DSum>(&c)) todo.push_back(&*s->body);
    }
  }
  return hole;
}

}  // namespace udrs
