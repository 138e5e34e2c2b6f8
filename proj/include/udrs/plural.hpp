#pragma once

// Monotonic disambiguation steps for plural NPs and pronouns: distribution,
// collectivity, generic and cumulative readings, pronoun resolution,
// abstraction over duplex conditions, and dependency marking.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "udrs/core.hpp"
#include "udrs/order.hpp"
#include "udrs/types.hpp"

namespace udrs {

/// The per-lower-bound record r of which plural disjunct a reading took:
/// one letter per plural argument slot (c, d, <c,d>, ...) or cum(l) for the
/// polyadic duplex whose scope is l.
struct PluralTag {
  std::string letters;  // empty when the verb has no plural argument
  std::optional<Label> cum_scope;

  bool empty() const { return letters.empty() && !cum_scope; }
  bool finite() const { return !cum_scope; }

  std::string str() const {
    if (cum_scope) return "cum(" + *cum_scope + ")";
    if (letters.size() <= 1) return letters;
    std::string s = "<";
    for (std::size_t i = 0; i < letters.size(); ++i) s += (i ? "," : "") + std::string(1, letters[i]);
    return s + ">";
  }

  friend bool operator==(const PluralTag&, const PluralTag&) = default;
  friend auto operator<=>(const PluralTag&, const PluralTag&) = default;
};

namespace detail {

inline void collect_names(const UdrsComponent& c, std::set<std::string>& out) {
  for (const auto& r : c.universe) out.insert(r.name);
  for (const auto& cond : c.conds) {
    for_each_term(cond, [&](const Term& t) { out.insert(t.ref.name); });
    if (auto* s = std::get_if<Sum>(&cond)) out.insert(s->var.name);
  }
  if (c.distinguished) {
    if (auto* q = std::get_if<Quant>(&*c.distinguished)) out.insert(q->var.name);
    if (auto* cd = std::get_if<CumDuplex>(&*c.distinguished)) {
      out.insert(cd->var1.name);
      out.insert(cd->var2.name);
    }
  }
}

inline std::set<std::string> referent_names(const Udrs& u) {
  std::set<std::string> out;
  for (const auto& [_, c] : u.components) collect_names(c, out);
  return out;
}

inline std::set<std::string> referent_names(const UdrsDatabase& db) {
  std::set<std::string> out;
  for (const auto* u : db.all())
    for (const auto& [_, c] : u->components) collect_names(c, out);
  return out;
}

/// Names in use: shared by the operators so that fresh names stay unique
/// across a whole database when one is available.
struct Taken {
  std::set<std::string> refs;
  std::set<Label> labels;

  static Taken of(const Udrs& u) {
    Taken t;
    t.refs = referent_names(u);
    for (const auto& l : u.labels()) t.labels.insert(l);
    return t;
  }
  static Taken of(const UdrsDatabase& db) {
    Taken t;
    t.refs = referent_names(db);
    for (const auto* u : db.all())
      for (const auto& l : u->labels()) t.labels.insert(l);
    return t;
  }

  Label label(const std::string& base) {
    Label l = base;
    for (int i = 1; labels.count(l); ++i) l = base + std::to_string(i);
    labels.insert(l);
    return l;
  }

  /// x for X, w for zeta, w2 for zeta2; numbered on collision. Deriving
  /// the name from the referent keeps it independent of the order in which
  /// nodes are disambiguated.
  std::string var_for(const Referent& group) {
    std::string base;
    if (group.sort == Sort::Neutral) {
      base = "w" + (group.name.rfind("zeta", 0) == 0 ? group.name.substr(4) : std::string());
    } else {
      base = group.name;
      for (auto& ch : base) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    std::string v = base;
    for (int i = 1; refs.count(v) || sort_for_name(v) != Sort::Individual; ++i) v = base + std::to_string(i);
    refs.insert(v);
    return v;
  }
};

inline const Referent* group_referent(const UdrsComponent& c) {
  for (const auto& r : c.universe)
    if (r.sort != Sort::Individual) return &r;
  return nullptr;
}

inline UdrsComponent& potential_node(Udrs& u, const Label& l, PluralKind kind) {
  UdrsComponent& c = u.at(l);
  if (!c.potentially_scope_bearing()) throw Error(ErrorCode::NotPotentiallyScopeBearing, l);
  if (!c.plural.options.empty() && !c.plural.options.count(kind))
    throw Error(ErrorCode::NotPotentiallyScopeBearing, l + " does not admit the " + plural_name(kind) + " reading");
  return c;
}

/// Adds slot(X) = value to the lower bound for every slot over X it mentions.
inline void fill_argument_slots(Udrs& u, const Label& node, const Referent& group, const Term& value) {
  const UdrsClause* cl = u.clause_of(node);
  if (!cl) throw Error(ErrorCode::InvalidArgument, node + " is not a clause node");
  UdrsComponent& lb = u.at(cl->lower_bound());
  std::set<std::string> slots;
  for (const auto& cond : lb.conds) {
    if (auto* e = std::get_if<Eq>(&cond); e && e->lhs.is_slot()) continue;
    for_each_term(cond, [&](const Term& t) {
      if (t.is_slot() && t.ref == group) slots.insert(t.slot);
    });
  }
  for (const auto& s : slots) {
    Term lhs(s, group);
    bool present = std::any_of(lb.conds.begin(), lb.conds.end(), [&](const Condition& c) {
      auto* e = std::get_if<Eq>(&c);
      return e && e->lhs == lhs;
    });
    if (!present) lb.conds.push_back(Eq{lhs, value});
  }
}

inline void add_order(Udrs& u, const Label& a, const Label& b) { u = add_constraint(u, a, b); }

inline Udrs quantify(const Udrs& u0, const Label& l, PluralKind kind, Taken& taken) {
  Udrs u = u0;
  UdrsComponent& c = potential_node(u, l, kind);
  const Referent* g = group_referent(c);
  if (!g) throw Error(ErrorCode::NoGroupReferent, l);
  Referent group = *g;
  Referent x(taken.var_for(group), Sort::Individual);
  Label lr = taken.label(l + "_r");
  Label ls = taken.label(l + "_s");
  UdrsComponent res;
  res.label = lr;
  res.universe = {x};
  res.conds = {Atom{"in", {Term(x), Term(group)}, {}, false}};
  UdrsComponent scope;
  scope.label = ls;
  if (kind == PluralKind::Generic) c.distinguished = Quant{"GEN", x, lr, ls};
  else c.distinguished = Impl{lr, ls};
  c.plural.potential = false;
  c.plural.status = kind;
  u.components.emplace(lr, std::move(res));
  u.components.emplace(ls, std::move(scope));
  fill_argument_slots(u, l, group, Term(x));
  add_order(u, u.clause_of(l)->lower_bound(), ls);
  return u;
}

}  // namespace detail

/// Distributive choice: l quantifies over the members of its group referent.
inline Udrs distribute(const Udrs& u, const Label& l) {
  auto taken = detail::Taken::of(u);
  return detail::quantify(u, l, PluralKind::Distributive, taken);
}

/// Generic choice: like distribute, with the generic quantifier GEN.
inline Udrs genericize(const Udrs& u, const Label& l) {
  auto taken = detail::Taken::of(u);
  return detail::quantify(u, l, PluralKind::Generic, taken);
}

/// Collective choice: l becomes inert for scope and its group fills the slot.
inline Udrs collectivize(const Udrs& u0, const Label& l) {
  Udrs u = u0;
  UdrsComponent& c = detail::potential_node(u, l, PluralKind::Collective);
  const Referent* g = detail::group_referent(c);
  if (!g) throw Error(ErrorCode::NoGroupReferent, l);
  Referent group = *g;
  c.plural.potential = false;
  c.plural.status = PluralKind::Collective;
  detail::fill_argument_slots(u, l, group, Term(group));
  return u;
}

namespace detail {

inline Udrs cumulate(const Udrs& u0, const Label& ls, const Label& lo, Taken& taken) {
  Udrs u = u0;
  detail::potential_node(u, ls, PluralKind::Cumulative);
  detail::potential_node(u, lo, PluralKind::Cumulative);
  const UdrsClause* c1 = u.clause_of(ls);
  const UdrsClause* c2 = u.clause_of(lo);
  if (!c1 || !c2 || c1->label != c2->label || ls == lo) throw Error(ErrorCode::NotSameClause, ls + ", " + lo);
  const Referent* gx = group_referent(u.at(ls));
  const Referent* gy = group_referent(u.at(lo));
  if (!gx) throw Error(ErrorCode::NoGroupReferent, ls);
  if (!gy) throw Error(ErrorCode::NoGroupReferent, lo);
  Referent X = *gx, Y = *gy;
  Referent x(taken.var_for(X), Sort::Individual);
  Referent y(taken.var_for(Y), Sort::Individual);
  Label r1 = taken.label(ls + "_r");
  Label r2 = taken.label(lo + "_r");
  Label sc = taken.label(ls + "_s");
  UdrsComponent b1, b2, b3;
  b1.label = r1;
  b1.universe = {x};
  b1.conds = {Atom{"in", {Term(x), Term(X)}, {}, false}};
  b2.label = r2;
  b2.universe = {y};
  b2.conds = {Atom{"in", {Term(y), Term(Y)}, {}, false}};
  b3.label = sc;
  UdrsComponent& subj = u.at(ls);
  subj.distinguished = CumDuplex{r1, r2, x, y, sc};
  subj.plural.potential = false;
  subj.plural.status = PluralKind::Cumulative;
  UdrsComponent& obj = u.at(lo);
  obj.plural.potential = false;
  obj.plural.status = PluralKind::Cumulative;
  obj.plural.cum_partner = ls;
  u.components.emplace(r1, std::move(b1));
  u.components.emplace(r2, std::move(b2));
  u.components.emplace(sc, std::move(b3));
  fill_argument_slots(u, ls, X, Term(x));
  fill_argument_slots(u, lo, Y, Term(y));
  Label lb = u.clause_of(ls)->lower_bound();
  add_order(u, lb, sc);
  add_order(u, lo, ls);
  add_order(u, ls, lo);
  return u;
}

}  // namespace detail

/// Cumulative choice for a subject/object pair of the same clause: both
/// potentials become one polyadic duplex over their members.
inline Udrs cumulate(const Udrs& u, const Label& subj, const Label& obj) {
  auto taken = detail::Taken::of(u);
  return detail::cumulate(u, subj, obj, taken);
}

/// Shared-responsibility readings have no lexical theory behind them here.
[[noreturn]] inline void share_responsibility(const Udrs&, const Label& l) {
  throw Error(ErrorCode::NotImplemented,
              "shared-responsibility reading for " + l +
                  ": specifying it is the task of lexical theory, which this engine does not model");
}

// ---------------------------------------------------------------------------
// Pronouns

namespace detail {

/// The equation `y = ?` or `zeta = alpha(?)` of a pronoun component.
inline Eq* pronoun_equation(UdrsComponent& c) {
  for (auto& cond : c.conds)
    if (auto* e = std::get_if<Eq>(&cond); e && !e->lhs.is_slot() && e->rhs.ref.is_hole()) return e;
  return nullptr;
}

inline const Label* declaring_label(const Udrs& u, const std::string& ref) {
  for (const auto& [l, c] : u.components)
    if (c.declares(ref)) return &l;
  return nullptr;
}

}  // namespace detail

/// True while some pronoun of u still has `?` as its antecedent.
inline bool has_unresolved_pronoun(const Udrs& u) {
  for (const auto& [_, c] : u.components)
    for (const auto& cond : c.conds) {
      bool hole = false;
      for_each_term(cond, [&](const Term& t) { hole = hole || t.ref.is_hole(); });
      if (hole) return true;
    }
  return false;
}

/// Links pronoun `pron` to `target` and places it below the antecedent.
inline Udrs resolve_pronoun(const Udrs& u0, const Label& pron, const Referent& target) {
  Udrs u = u0;
  UdrsComponent& pc = u.at(pron);
  Eq* eq = detail::pronoun_equation(pc);
  if (!eq) throw Error(ErrorCode::NotAPronoun, pron);
  const Label* decl = detail::declaring_label(u, target.name);
  if (!decl) throw Error(ErrorCode::Inaccessible, target.name + " is not declared in this UDRS");
  Label dl = *decl;
  if (!accessible(u, pron, dl, AccessMode::Strong))
    throw Error(ErrorCode::Inaccessible, target.name + " (declared in " + dl + ") from " + pron);
  Referent tgt = u.at(dl).universe.front();
  for (const auto& r : u.at(dl).universe)
    if (r.name == target.name) tgt = r;
  const bool plural = eq->rhs.is_slot();
  eq->rhs = plural ? Term(eq->rhs.slot, tgt) : Term(tgt);
  // a variable bound by a duplex is only visible inside its scope
  for (const auto& [l, c] : u.components) {
    auto rs = restrictors_of(c);
    if (std::find(rs.begin(), rs.end(), dl) != rs.end() && is_quantificational(c))
      return add_constraint(u, pron, *scope_of(c));
  }
  if (plural) return add_constraint(u, pron, dl);
  const auto& dc = u.at(dl);
  return add_constraint(u, pron, scope_of(dc).value_or(dl));
}

/// Links plural pronoun `pron` to the sum over z licensed by the duplex
/// condition `licensing`, identifying z's component with that duplex's scope.
inline UdrsDatabase abstract_antecedent(const UdrsDatabase& db0, const Label& pron, const Referent& z,
                                        const Label& licensing) {
  UdrsDatabase db = db0;
  Udrs* lu = db.owner_mut(licensing);
  const UdrsComponent* lic = lu ? lu->find(licensing) : nullptr;
  if (!lic || !lic->distinguished ||
      !(std::holds_alternative<Impl>(*lic->distinguished) || std::holds_alternative<Quant>(*lic->distinguished)))
    throw Error(ErrorCode::NoLicensingCondition, licensing);
  const UdrsClause* cl = lu->clause_of(licensing);
  if (!cl) throw Error(ErrorCode::NoLicensingCondition, licensing + " is not a clause node");
  std::optional<Label> zl;
  for (const auto& n : cl->nodes())
    if (lu->at(n).declares(z.name)) zl = n;
  if (!zl) throw Error(ErrorCode::WrongClause, z.name + " is not introduced in the clause of " + licensing);
  Label scope = *scope_of(*lic);

  Udrs* pu = db.owner_mut(pron);
  if (!pu || !pu->find(pron)) throw Error(ErrorCode::UnknownLabel, pron);
  UdrsComponent& pc = pu->at(pron);
  std::optional<Referent> zeta;
  for (const auto& r : pc.universe)
    if (r.sort != Sort::Individual) zeta = r;
  if (!zeta) throw Error(ErrorCode::NotAPronoun, pron);
  std::erase_if(pc.conds, [&](const Condition& c) {
    auto* e = std::get_if<Eq>(&c);
    return e && e->lhs.ref == *zeta && e->rhs.ref.is_hole();
  });
  pc.conds.push_back(Sum{*zeta, z, licensing});

  Udrs refined = add_constraint(*lu, *zl, scope);
  refined = add_constraint(refined, scope, *zl);
  *db.owner_mut(licensing) = std::move(refined);
  return db;
}

/// Marks lower bound k0 as dependent on lower bound l0 through pi.
inline UdrsDatabase mark_dependent(const UdrsDatabase& db0, const Label& k0, const Label& l0,
                                   const std::vector<std::pair<Term, Term>>& pi) {
  UdrsDatabase db = db0;
  Udrs* ku = db.owner_mut(k0);
  const Udrs* lu = db.owner(l0);
  if (!ku || !ku->is_lower_bound(k0)) throw Error(ErrorCode::NotLowerBound, k0);
  if (!lu || !lu->is_lower_bound(l0)) throw Error(ErrorCode::NotLowerBound, l0);
  const UdrsClause* kc = ku->clause_of(k0);
  const UdrsClause* lc = lu->clause_of(l0);
  if (ku == lu && kc->label == lc->label) throw Error(ErrorCode::NotLowerBound, k0 + " and " + l0 + " share a clause");
  std::set<Term> covered;
  for (const auto& [a, _] : pi) covered.insert(a);
  for (const auto& t : dependency_domain(*ku, k0))
    if (!covered.count(t)) throw Error(ErrorCode::PartialMapping, "pi does not map " + t.str());
  ku->at(k0).dep = Dependency{l0, pi};
  return db;
}

}  // namespace udrs
