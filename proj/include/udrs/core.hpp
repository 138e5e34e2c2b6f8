#pragma once

// Well-formedness of UDRS databases, free variables of labels and
// (weak/strong) accessibility between labelled boxes.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "udrs/order.hpp"
#include "udrs/types.hpp"

namespace udrs {

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const {
    for (const auto& v : violations)
      if (v.code == code) return true;
    return false;
  }
};

namespace detail {

inline void validate_udrs(const UdrsDatabase& db, const Udrs& u, std::vector<Violation>& out) {
  const auto c = closure(u);
  auto add = [&](std::string code, const Label& l, std::string msg) {
    out.push_back({std::move(code), l, std::move(msg)});
  };

  for (const auto& [l, comp] : u.components)
    if (comp.label != l) add("label.mismatch", l, "component stored under a different name");

  for (const auto& [a, b] : u.ord.pairs)
    for (const auto& x : {a, b})
      if (!u.has_label(x)) add("label.unknown", x, "ORD mentions an unknown label");

  // clause membership
  std::map<Label, int> member_count;
  for (const auto& cl : u.clauses) {
    if (cl.components.empty()) {
      add("clause.no-lower-bound", cl.label, "clause without a lower bound");
      continue;
    }
    for (const auto& l : cl.components) {
      ++member_count[l];
      if (!u.find(l)) add("label.unknown", l, "clause " + cl.label + " lists an unknown component");
    }
    const Label& l0 = cl.lower_bound();
    if (auto* lb = u.find(l0)) {
      if (lb->distinguished) add("lower-bound.shape", l0, "lower bound carries a distinguished condition");
      for (const auto& k : c.labels())
        if (c.lt(k, l0)) add("lower-bound.shape", l0, k + " is strictly below the lower bound");
    }
    for (const auto& n : cl.nodes()) {
      const auto* comp = u.find(n);
      if (!comp) continue;
      if (auto s = scope_of(*comp)) {
        if (!c.leq(l0, *s)) add("lower-bound.scope", n, l0 + " is not below scope(" + n + ")");
      } else if (!c.leq(l0, n)) {
        add("lower-bound.node", n, l0 + " is not below " + n);
      }
    }
  }
  for (const auto& [l, k] : member_count)
    if (k > 1) add("component.shared", l, "component belongs to more than one clause");

  // sub-boxes and embedded clauses
  std::set<Label> referenced_boxes;
  std::map<Label, int> embedded;
  for (const auto& [l, comp] : u.components) {
    for (const auto& b : sub_boxes(comp)) {
      referenced_boxes.insert(b);
      if (!u.find(b)) add("label.unknown", b, "box of " + l + " is undefined");
      else if (member_count.count(b)) add("box.placement", b, "a clause node used as a sub-box");
    }
    for (const auto& k : subclauses_of(comp)) {
      ++embedded[k];
      if (!u.find_clause(k) || k == u.top)
        add("subclause.unknown", l, "embedded clause " + k + " is not a clause of this UDRS");
    }
    if (comp.plural.potential && !comp.distinguished) {
      bool has_plural = std::any_of(comp.universe.begin(), comp.universe.end(),
                                    [](const Referent& r) { return r.sort != Sort::Individual; });
      if (!has_plural) add("def4.referent", l, "potentially scope-bearing node without a group referent");
    }
  }
  for (const auto& [l, comp] : u.components)
    if (!member_count.count(l) && !referenced_boxes.count(l))
      add("orphan", l, "component is neither a clause node nor a sub-box");
  for (const auto& cl : u.clauses)
    if (cl.label != u.top && embedded[cl.label] != 1)
      add("orphan", cl.label, "clause must be embedded exactly once");
  if (u.clauses.empty() || u.clauses.front().label != u.top)
    add("top.first-clause", u.top, "the first clause must be labelled by the top");

  // terms, sums, dependencies
  for (const auto& [l, comp] : u.components) {
    for (const auto& cond : comp.conds) {
      for_each_term(cond, [&](const Term& t) {
        if (t.is_slot() && t.ref.sort == Sort::Individual)
          add("term.slot", l, "slot term " + t.str() + " over an individual referent");
      });
      if (auto* s = std::get_if<Sum>(&cond)) {
        const Udrs* owner = db.owner(s->licensing);
        const UdrsComponent* lic = owner ? owner->find(s->licensing) : nullptr;
        if (!lic || !lic->distinguished ||
            !(std::holds_alternative<Impl>(*lic->distinguished) ||
              std::holds_alternative<Quant>(*lic->distinguished)))
          add("sum.licensing", l, s->licensing + " is not a duplex condition");
      }
    }
    for (const auto& r : comp.universe) {
      if (r.sort != Sort::Neutral) continue;
      bool introduced = std::any_of(comp.conds.begin(), comp.conds.end(), [&](const Condition& cond) {
        if (auto* e = std::get_if<Eq>(&cond)) return e->lhs.ref == r && !e->lhs.is_slot();
        if (auto* s = std::get_if<Sum>(&cond)) return s->target == r;
        return false;
      });
      if (!introduced) add("ref.neutral", l, "neutral referent " + r.name + " outside a pronoun");
    }
    if (comp.dep) {
      const Udrs* owner = db.owner(comp.dep->target);
      const UdrsClause* mine = u.clause_of(l);
      const UdrsClause* theirs = owner ? owner->clause_of(comp.dep->target) : nullptr;
      if (!u.is_lower_bound(l) || !owner || !owner->is_lower_bound(comp.dep->target) ||
          (mine && theirs && mine->label == theirs->label))
        add("label.dep", l, "dependency must link lower bounds of different clauses");
    }
  }

  for (auto& v : order_violations(u, c)) out.push_back(std::move(v));
}

}  // namespace detail

/// Checks every well-formedness condition on UDRS-components, clauses,
/// UDRSs and databases. Violations are data; the function never throws.
inline ValidationReport validate(const UdrsDatabase& db) {
  ValidationReport rep;
  std::map<Label, int> seen;
  std::set<Label> tops;
  for (const Udrs* u : db.all()) {
    if (!tops.insert(u->top).second)
      rep.violations.push_back({"database.shared-top", u->top, "two UDRSs share a top"});
    for (const auto& l : u->labels()) ++seen[l];
    detail::validate_udrs(db, *u, rep.violations);
  }
  for (const auto& [l, k] : seen)
    if (k > 1) rep.violations.push_back({"database.shared-label", l, "label used in more than one UDRS"});
  std::sort(rep.violations.begin(), rep.violations.end());
  rep.violations.erase(std::unique(rep.violations.begin(), rep.violations.end()),
                       rep.violations.end());
  return rep;
}

inline ValidationReport validate(const Udrs& u) {
  UdrsDatabase db;
  db.sentences.push_back(u);
  return validate(db);
}

// ---------------------------------------------------------------------------
// Accessibility

enum class AccessMode { Weak, Strong };

namespace detail {

/// DRS accessibility read off a closed order: the universe of `to` is
/// visible from `from` if `from` is nested in `to`, or `to` restricts a
/// duplex whose scope contains `from`.
inline bool weakly_accessible(const Udrs& u, const ClosedOrder& c, const Label& from, const Label& to) {
  if (c.leq(from, to)) return true;
  for (const auto& [l, comp] : u.components) {
    if (!is_quantificational(comp)) continue;
    auto rs = restrictors_of(comp);
    if (std::find(rs.begin(), rs.end(), to) == rs.end()) continue;
    if (c.leq(from, *scope_of(comp))) return true;
  }
  return false;
}

inline bool addable(const Udrs& u, const Label& a, const Label& b) {
  try {
    add_constraint(u, a, b);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace detail

/// Is the universe of `to` accessible from `from`? Weak mode applies DRS
/// accessibility to the order as it stands; strong mode also accepts pairs
/// that some consistent refinement of the order makes accessible.
inline bool accessible(const Udrs& u, const Label& from, const Label& to, AccessMode mode) {
  if (!u.has_label(from)) throw Error(ErrorCode::UnknownLabel, from);
  if (!u.has_label(to)) throw Error(ErrorCode::UnknownLabel, to);
  const auto c = closure(u);
  if (detail::weakly_accessible(u, c, from, to)) return true;
  if (mode == AccessMode::Weak) return false;
  if (detail::addable(u, from, to)) return true;
  for (const auto& [l, comp] : u.components) {
    if (!is_quantificational(comp)) continue;
    auto rs = restrictors_of(comp);
    if (std::find(rs.begin(), rs.end(), to) != rs.end() &&
        detail::addable(u, from, *scope_of(comp)))
      return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Free variables

/// FV(l): referents free in some box k <= l that no box k' <= l accessible
/// from k declares. The box l itself counts, so a lower bound's own free
/// referents are part of its domain.
inline std::set<std::string> free_vars(const Udrs& u, const Label& l) {
  if (!u.has_label(l)) throw Error(ErrorCode::UnknownLabel, l);
  const auto c = closure(u);
  std::set<std::string> out;
  for (const auto& [k, comp] : u.components) {
    if (!c.leq(k, l)) continue;
    for (const auto& x : occurring_refs(comp)) {
      if (comp.declares(x)) continue;
      bool bound = false;
      for (const auto& [k2, comp2] : u.components) {
        if (!comp2.declares(x) || !c.leq(k2, l)) continue;
        if (detail::weakly_accessible(u, c, k, k2)) {
          bound = true;
          break;
        }
      }
      if (!bound) out.insert(x);
    }
  }
  return out;
}

/// Terms occurring in the lower bound `l0` that it does not declare itself.
/// This is the domain a dependency mapping must cover.
inline std::set<Term> dependency_domain(const Udrs& u, const Label& l0) {
  const auto& comp = u.at(l0);
  std::set<Term> out;
  for (const auto& cond : comp.conds)
    for_each_term(cond, [&](const Term& t) {
      if (t.ref.is_hole()) return;
      if (!t.is_slot() && comp.declares(t.ref.name)) return;
      out.insert(t);
    });
  return out;
}

}  // namespace udrs
