#pragma once

// The UDRS intermediate representation: labelled DRS fragments, the clauses
// that group them, and the databases of sentences built from those.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "udrs/error.hpp"

namespace udrs {

using Label = std::string;

enum class Sort { Individual, Group, Neutral };

/// Sort from the naming convention of the concrete syntax: `zeta`-prefixed
/// names are neutral, an uppercase initial marks a group, anything else is an
/// individual. The unresolved pronoun marker `?` is neutral.
inline Sort sort_for_name(const std::string& name) {
  if (name == "?" || name.rfind("zeta", 0) == 0) return Sort::Neutral;
  if (!name.empty() && std::isupper(static_cast<unsigned char>(name[0]))) return Sort::Group;
  return Sort::Individual;
}

struct Referent {
  std::string name;
  Sort sort = Sort::Individual;

  Referent() = default;
  explicit Referent(std::string n) : name(std::move(n)), sort(sort_for_name(name)) {}
  Referent(std::string n, Sort s) : name(std::move(n)), sort(s) {}

  bool is_hole() const { return name == "?"; }
  friend bool operator==(const Referent& a, const Referent& b) { return a.name == b.name; }
  friend bool operator<(const Referent& a, const Referent& b) { return a.name < b.name; }
};

/// A plain referent, or a slot term such as alpha(X) that stays open until a
/// slot equation alpha(X) = X / alpha(X) = x fixes which entity fills it.
struct Term {
  std::string slot;  // empty for a plain referent
  Referent ref;

  Term() = default;
  explicit Term(Referent r) : ref(std::move(r)) {}
  Term(std::string s, Referent r) : slot(std::move(s)), ref(std::move(r)) {}

  static Term of(const std::string& name) { return Term(Referent(name)); }
  static Term slot_of(const std::string& s, const std::string& name) {
    return Term(s, Referent(name));
  }

  bool is_slot() const { return !slot.empty(); }
  std::string str() const { return is_slot() ? slot + "(" + ref.name + ")" : ref.name; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.slot == b.slot && a.ref == b.ref;
  }
  friend bool operator<(const Term& a, const Term& b) {
    return std::tie(a.slot, a.ref.name) < std::tie(b.slot, b.ref.name);
  }
};

// ---------------------------------------------------------------------------
// Conditions

/// P(t1..tn), optionally negated (`not P(..)`, a standard negated literal).
/// More than one sense encodes lexical ambiguity.
struct Atom {
  std::string pred;
  std::vector<Term> args;
  std::vector<std::string> senses;
  bool negated = false;

  bool ambiguous() const { return senses.size() > 1; }
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Eq {
  Term lhs, rhs;
  friend bool operator==(const Eq&, const Eq&) = default;
};

/// zeta = Sigma z : licensing
struct Sum {
  Referent target;
  Referent var;
  Label licensing;
  friend bool operator==(const Sum&, const Sum&) = default;
};

/// An embedded UDRS-clause k:gamma.
struct Subclause {
  Label clause;
  friend bool operator==(const Subclause&, const Subclause&) = default;
};

using Condition = std::variant<Atom, Eq, Sum, Subclause>;

struct Neg {
  Label inner;
  friend bool operator==(const Neg&, const Neg&) = default;
};

struct Impl {
  Label res, scope;
  friend bool operator==(const Impl&, const Impl&) = default;
};

struct Quant {
  std::string q;
  Referent var;
  Label res, scope;
  friend bool operator==(const Quant&, const Quant&) = default;
};

/// Polyadic duplex with cumulative force over a pair of restrictors.
struct CumDuplex {
  Label res1, res2;
  Referent var1, var2;
  Label scope;
  friend bool operator==(const CumDuplex&, const CumDuplex&) = default;
};

using Distinguished = std::variant<Neg, Impl, Quant, CumDuplex>;

// ---------------------------------------------------------------------------
// Components

enum class PluralKind { Collective, Distributive, Generic, Cumulative };

inline char plural_letter(PluralKind k) {
  switch (k) {
    case PluralKind::Collective: return 'c';
    case PluralKind::Distributive: return 'd';
    case PluralKind::Generic: return 'g';
    case PluralKind::Cumulative: return 'u';
  }
  return '?';
}

inline std::string plural_name(PluralKind k) {
  switch (k) {
    case PluralKind::Collective: return "c";
    case PluralKind::Distributive: return "d";
    case PluralKind::Generic: return "gen";
    case PluralKind::Cumulative: return "cum";
  }
  return "?";
}

/// Plural bookkeeping of an NP component. `potential` means res/scope are
/// still undefined; `options` lists the choices enumeration may take for it.
/// `status` records the choice once an operator has made it.
struct PluralInfo {
  bool potential = false;
  std::set<PluralKind> options;
  std::optional<PluralKind> status;
  std::optional<Label> cum_partner;  // object node merged into this one by cumulate

  friend bool operator==(const PluralInfo&, const PluralInfo&) = default;
};

/// k0^dep(l0) with the referent/term mapping pi : FV(k0) -> FV(l0).
struct Dependency {
  Label target;
  std::vector<std::pair<Term, Term>> pi;
  friend bool operator==(const Dependency&, const Dependency&) = default;
};

struct UdrsComponent {
  Label label;
  std::vector<Referent> universe;
  std::vector<Condition> conds;
  std::optional<Distinguished> distinguished;
  PluralInfo plural;
  std::optional<Dependency> dep;

  bool potentially_scope_bearing() const { return plural.potential && !distinguished; }
  bool scope_bearing() const { return distinguished.has_value(); }

  bool declares(const std::string& ref) const {
    return std::any_of(universe.begin(), universe.end(),
                       [&](const Referent& r) { return r.name == ref; });
  }

  friend bool operator==(const UdrsComponent&, const UdrsComponent&) = default;
};

/// res(l); undefined for potentially scope-bearing components.
inline std::optional<Label> res_of(const UdrsComponent& c) {
  if (c.distinguished) {
    return std::visit(
        [](const auto& d) -> Label {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Neg>) return d.inner;
          else if constexpr (std::is_same_v<T, CumDuplex>) return d.res1;
          else return d.res;
        },
        *c.distinguished);
  }
  if (c.potentially_scope_bearing()) return std::nullopt;
  return c.label;
}

inline std::optional<Label> scope_of(const UdrsComponent& c) {
  if (c.distinguished) {
    return std::visit(
        [](const auto& d) -> Label {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, Neg>) return d.inner;
          else return d.scope;
        },
        *c.distinguished);
  }
  if (c.potentially_scope_bearing()) return std::nullopt;
  return c.label;
}

/// All restrictor boxes of a distinguished condition (two for a cum duplex).
inline std::vector<Label> restrictors_of(const UdrsComponent& c) {
  if (!c.distinguished) return {};
  return std::visit(
      [](const auto& d) -> std::vector<Label> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Neg>) return {};
        else if constexpr (std::is_same_v<T, CumDuplex>) return {d.res1, d.res2};
        else return {d.res};
      },
      *c.distinguished);
}

/// Impl, Quant and cum duplexes are generalised quantifiers (clause bounded).
inline bool is_quantificational(const UdrsComponent& c) {
  return c.distinguished && !std::holds_alternative<Neg>(*c.distinguished);
}

// ---------------------------------------------------------------------------
// Clauses, UDRSs, databases

struct UdrsClause {
  Label label;
  std::vector<Label> components;  // [0] is the lower bound; order is the canonical argument order
  std::optional<std::string> coindex;

  const Label& lower_bound() const { return components.front(); }
  std::vector<Label> nodes() const { return {components.begin() + 1, components.end()}; }
  friend bool operator==(const UdrsClause&, const UdrsClause&) = default;
};

struct Ord {
  std::set<std::pair<Label, Label>> pairs;  // (a, b) means a <= b
  friend bool operator==(const Ord&, const Ord&) = default;
};

struct Udrs {
  Label top;
  std::vector<UdrsClause> clauses;  // clauses[0] is the top clause
  std::map<Label, UdrsComponent> components;
  Ord ord;

  const UdrsClause* find_clause(const Label& l) const {
    for (const auto& c : clauses)
      if (c.label == l) return &c;
    return nullptr;
  }
  UdrsClause* find_clause(const Label& l) {
    for (auto& c : clauses)
      if (c.label == l) return &c;
    return nullptr;
  }
  const UdrsComponent* find(const Label& l) const {
    auto it = components.find(l);
    return it == components.end() ? nullptr : &it->second;
  }
  UdrsComponent* find(const Label& l) {
    auto it = components.find(l);
    return it == components.end() ? nullptr : &it->second;
  }
  const UdrsComponent& at(const Label& l) const {
    if (auto* c = find(l)) return *c;
    throw Error(ErrorCode::UnknownLabel, l);
  }
  UdrsComponent& at(const Label& l) {
    if (auto* c = find(l)) return *c;
    throw Error(ErrorCode::UnknownLabel, l);
  }

  bool has_label(const Label& l) const { return find(l) != nullptr || find_clause(l) != nullptr; }

  /// The clause listing `l` as one of its components, if any.
  const UdrsClause* clause_of(const Label& l) const {
    for (const auto& c : clauses)
      if (std::find(c.components.begin(), c.components.end(), l) != c.components.end()) return &c;
    return nullptr;
  }

  bool is_lower_bound(const Label& l) const {
    for (const auto& c : clauses)
      if (!c.components.empty() && c.components.front() == l) return true;
    return false;
  }

  /// Every label: clause upper bounds, then components (sorted).
  std::vector<Label> labels() const {
    std::vector<Label> out;
    for (const auto& c : clauses) out.push_back(c.label);
    for (const auto& [l, _] : components)
      if (!find_clause(l)) out.push_back(l);
    return out;
  }

  friend bool operator==(const Udrs&, const Udrs&) = default;
};

/// sense-specific meaning postulates: pred.sense(params) => conds
struct LexEntry {
  std::string pred, sense;
  std::vector<std::string> params;
  std::vector<Condition> conds;
  friend bool operator==(const LexEntry&, const LexEntry&) = default;
};

struct UdrsDatabase {
  std::vector<Udrs> sentences;
  std::optional<Udrs> goal;
  std::vector<LexEntry> lexicon;

  /// sentences followed by the goal, if any
  std::vector<const Udrs*> all() const {
    std::vector<const Udrs*> out;
    for (const auto& s : sentences) out.push_back(&s);
    if (goal) out.push_back(&*goal);
    return out;
  }
  std::vector<Udrs*> all_mut() {
    std::vector<Udrs*> out;
    for (auto& s : sentences) out.push_back(&s);
    if (goal) out.push_back(&*goal);
    return out;
  }

  /// The UDRS containing label l (component or clause).
  const Udrs* owner(const Label& l) const {
    for (auto* u : all())
      if (u->has_label(l)) return u;
    return nullptr;
  }
  Udrs* owner_mut(const Label& l) {
    for (auto* u : all_mut())
      if (u->has_label(l)) return u;
    return nullptr;
  }

  const LexEntry* lex(const std::string& pred, const std::string& sense) const {
    for (const auto& e : lexicon)
      if (e.pred == pred && e.sense == sense) return &e;
    return nullptr;
  }

  friend bool operator==(const UdrsDatabase&, const UdrsDatabase&) = default;
};

// ---------------------------------------------------------------------------
// Small helpers shared by the modules

template <class F>
void for_each_term(const Condition& c, F&& f) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Atom>) {
          for (const auto& t : x.args) f(t);
        } else if constexpr (std::is_same_v<T, Eq>) {
          f(x.lhs);
          f(x.rhs);
        } else if constexpr (std::is_same_v<T, Sum>) {
          f(Term(x.target));
        }
      },
      c);
}

/// Referents occurring in the component's own conditions (not its sub-boxes).
inline std::set<std::string> occurring_refs(const UdrsComponent& c) {
  std::set<std::string> out;
  for (const auto& cond : c.conds)
    for_each_term(cond, [&](const Term& t) {
      if (!t.ref.is_hole()) out.insert(t.ref.name);
    });
  return out;
}

/// Labels of boxes hanging off a component's distinguished condition.
inline std::vector<Label> sub_boxes(const UdrsComponent& c) {
  std::vector<Label> out = restrictors_of(c);
  if (auto s = scope_of(c); s && c.distinguished &&
                            !std::holds_alternative<Neg>(*c.distinguished))
    out.push_back(*s);
  if (c.distinguished)
    if (auto* n = std::get_if<Neg>(&*c.distinguished)) out.push_back(n->inner);
  return out;
}

inline std::vector<Label> subclauses_of(const UdrsComponent& c) {
  std::vector<Label> out;
  for (const auto& cond : c.conds)
    if (auto* s = std::get_if<Subclause>(&cond)) out.push_back(s->clause);
  return out;
}

}  // namespace udrs
