#pragma once

// Total disambiguations of a UDRS database and the fully specified DRSs they
// unfold into.
//
// A reading fixes, for every clause, a total order of its nodes (outermost
// first, lower bound last), a plural choice for every potentially scope-bearing
// node, a value for every slot term not filled by an argument position, and a
// sense for every ambiguous atom. Extraction nests the boxes in that order: a
// node without a distinguished condition is merged into the box that is
// current when it is reached, a scope-bearing node contributes its condition
// there and makes its scope the current box.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "udrs/core.hpp"
#include "udrs/drs.hpp"
#include "udrs/iso.hpp"
#include "udrs/order.hpp"
#include "udrs/plural.hpp"
#include "udrs/types.hpp"
#include "udrs/verify.hpp"

namespace udrs {

struct Reading {
  std::map<Label, std::vector<Label>> lin;     // clause -> nodes, outermost first, lower bound last
  std::map<Label, PluralKind> kinds;           // node -> plural choice (fixed or chosen)
  std::map<Label, PluralTag> tags;             // lower bound -> r
  std::map<std::string, std::string> slots;    // free slot term -> referent filling it
  std::map<std::string, std::string> senses;   // "label#i" -> sense of the i-th condition
  std::string key;                             // identity of the extracted DRSs

  friend bool operator==(const Reading&, const Reading&) = default;
};

inline std::string sense_key(const Label& l, std::size_t i) { return l + "#" + std::to_string(i); }

namespace detail {

inline bool is_slot_definition(const Condition& c) {
  auto* e = std::get_if<Eq>(&c);
  return e && e->lhs.is_slot();
}

inline std::map<std::string, Term> slot_map(const Udrs& u) {
  std::map<std::string, Term> m;
  for (const auto& [_, c] : u.components)
    for (const auto& cond : c.conds)
      if (auto* e = std::get_if<Eq>(&cond); e && e->lhs.is_slot()) m.emplace(e->lhs.str(), e->rhs);
  return m;
}

inline Term resolve_term(const Term& t, const std::map<std::string, Term>& m) {
  Term cur = t;
  for (int i = 0; i < 16 && cur.is_slot(); ++i) {
    auto it = m.find(cur.str());
    if (it == m.end()) break;
    cur = it->second;
  }
  return cur;
}

inline Atom resolve_atom(Atom a, const std::map<std::string, Term>& m) {
  for (auto& t : a.args) t = resolve_term(t, m);
  return a;
}

// ---------------------------------------------------------------------------
// Canonical rendering: boxes as sets, so nestings that differ only in the
// order material was merged collapse to one key.

inline std::string canon(const Drs& d);

inline std::string canon_term(const Term& t) { return t.str(); }

inline std::string canon_cond(const DCond& c) {
  auto terms = [](const std::vector<Term>& ts) {
    std::string s;
    for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? "," : "") + canon_term(ts[i]);
    return s;
  };
  if (auto* a = std::get_if<Atom>(&c))
    return std::string(a->negated ? "not " : "") + a->pred + "." + sense_of(*a) + "(" + terms(a->args) + ")";
  if (auto* e = std::get_if<Eq>(&c)) {
    auto l = canon_term(e->lhs), r = canon_term(e->rhs);
    return "eq(" + std::min(l, r) + "," + std::max(l, r) + ")";
  }
  if (auto* n = std::get_if<DNeg>(&c)) return "~" + canon(*n->inner);
  if (auto* i = std::get_if<DImpl>(&c)) return canon(*i->res) + "=>" + canon(*i->scope);
  if (auto* q = std::get_if<DQuant>(&c)) return canon(*q->res) + "<" + q->q + " " + q->var.name + ">" + canon(*q->scope);
  if (auto* cd = std::get_if<DCum>(&c))
    return "cum(" + canon(*cd->res1) + "," + canon(*cd->res2) + "," + cd->var1.name + "," + cd->var2.name + "," +
           canon(*cd->scope) + ")";
  const auto& s = std::get<DSum>(c);
  return s.target.name + "=Sigma " + s.var.name + ":" + canon(*s.body);
}

inline std::string canon(const Drs& d) {
  std::vector<std::string> us, cs;
  for (const auto& r : d.universe) us.push_back(r.name);
  for (const auto& c : d.conds) cs.push_back(canon_cond(c));
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  std::sort(cs.begin(), cs.end());
  std::string out = "[";
  for (const auto& u : us) out += u + " ";
  out += "|";
  for (const auto& c : cs) out += " " + c + ";";
  return out + "]";
}

// ---------------------------------------------------------------------------
// Resolution: a database with every non-order choice of a reading applied.

inline UdrsDatabase apply_plural(const UdrsDatabase& db, const std::map<Label, PluralKind>& kinds) {
  UdrsDatabase out = db;
  Taken taken = Taken::of(db);
  for (Udrs* u : out.all_mut()) {
    const auto clauses = u->clauses;
    for (const auto& cl : clauses) {
      std::vector<Label> cum;
      for (const auto& n : cl.nodes()) {
        auto it = kinds.find(n);
        const auto& comp = u->at(n);
        if (!comp.potentially_scope_bearing()) {
          if (it != kinds.end() && comp.plural.status != it->second)
            throw Error(ErrorCode::ReadingMismatch, "plural choice for " + n + " is already fixed");
          continue;
        }
        if (it == kinds.end()) throw Error(ErrorCode::ReadingMismatch, "no plural choice for " + n);
        switch (it->second) {
          case PluralKind::Collective: *u = collectivize(*u, n); break;
          case PluralKind::Distributive: *u = quantify(*u, n, PluralKind::Distributive, taken); break;
          case PluralKind::Generic: *u = quantify(*u, n, PluralKind::Generic, taken); break;
          case PluralKind::Cumulative: cum.push_back(n); break;
        }
      }
      if (cum.size() == 2) *u = cumulate(*u, cum[0], cum[1], taken);
      else if (!cum.empty()) throw Error(ErrorCode::ReadingMismatch, "cumulation needs exactly two nodes");
    }
  }
  return out;
}

/// A slot term that no argument position fills, e.g. gamma(X) in a pronoun.
struct FreeSlot {
  std::string key;
  std::size_t udrs = 0;  // index into db.all()
  Referent group;
  std::vector<Label> hosts;
  std::optional<std::string> var;  // member variable, when the group's node distributes
  std::optional<Label> bind_scope;  // where a host must sit to see that variable
};

inline std::optional<std::pair<std::string, Label>> member_variable(const Udrs& u, const Label& n,
                                                                     const Referent& group) {
  const auto& c = u.at(n);
  auto from = [&](const UdrsComponent& owner) -> std::optional<std::pair<std::string, Label>> {
    if (!owner.distinguished) return std::nullopt;
    if (auto* q = std::get_if<Quant>(&*owner.distinguished)) return std::pair{q->var.name, q->scope};
    if (auto* i = std::get_if<Impl>(&*owner.distinguished)) {
      const auto& r = u.at(i->res);
      if (owner.plural.status && !r.universe.empty()) return std::pair{r.universe.front().name, i->scope};
      return std::nullopt;
    }
    if (auto* cd = std::get_if<CumDuplex>(&*owner.distinguished)) {
      bool first = owner.declares(group.name) && &owner == &c;
      return std::pair{first ? cd->var1.name : cd->var2.name, cd->scope};
    }
    return std::nullopt;
  };
  if (c.plural.cum_partner) return from(u.at(*c.plural.cum_partner));
  return from(c);
}

inline std::vector<FreeSlot> free_slots(const UdrsDatabase& db) {
  std::vector<FreeSlot> out;
  auto all = db.all();
  for (std::size_t ui = 0; ui < all.size(); ++ui) {
    const Udrs& u = *all[ui];
    const auto defined = slot_map(u);
    std::map<std::string, std::size_t> index;
    for (const auto& [l, c] : u.components)
      for (const auto& cond : c.conds) {
        if (is_slot_definition(cond)) continue;
        for_each_term(cond, [&](const Term& t) {
          if (!t.is_slot() || t.ref.is_hole() || defined.count(t.str())) return;
          auto [it, fresh] = index.emplace(t.str(), out.size());
          if (fresh) {
            FreeSlot s;
            s.key = t.str();
            s.udrs = ui;
            s.group = t.ref;
            if (const Label* d = declaring_label(u, t.ref.name))
              if (auto mv = member_variable(u, *d, t.ref)) {
                s.var = mv->first;
                s.bind_scope = mv->second;
              }
            out.push_back(std::move(s));
          }
          auto& hs = out[it->second].hosts;
          if (std::find(hs.begin(), hs.end(), l) == hs.end()) hs.push_back(l);
        });
      }
  }
  return out;
}

inline UdrsDatabase apply_slots(const UdrsDatabase& db, const std::vector<FreeSlot>& slots,
                                const std::map<std::string, std::string>& choice) {
  UdrsDatabase out = db;
  auto all = out.all_mut();
  for (const auto& s : slots) {
    auto it = choice.find(s.key);
    if (it == choice.end()) throw Error(ErrorCode::ReadingMismatch, "no value for slot " + s.key);
    Udrs& u = *all[s.udrs];
    Term lhs(s.key.substr(0, s.key.find('(')), s.group);
    if (it->second == s.group.name) {
      u.at(s.hosts.front()).conds.push_back(Eq{lhs, Term(s.group)});
    } else if (s.var && it->second == *s.var) {
      u.at(s.hosts.front()).conds.push_back(Eq{lhs, Term(Referent(*s.var, Sort::Individual))});
      for (const auto& h : s.hosts) u = add_constraint(u, h, *s.bind_scope);
    } else {
      throw Error(ErrorCode::ReadingMismatch, "slot " + s.key + " cannot be " + it->second);
    }
  }
  return out;
}

/// A neutral referent equated with an individual cannot be distributed over.
inline bool neutral_groups_ok(const UdrsDatabase& db) {
  for (const Udrs* u : db.all()) {
    const auto m = slot_map(*u);
    for (const auto& [l, c] : u->components) {
      if (!c.plural.status || c.plural.status == PluralKind::Collective) continue;
      for (const auto& r : c.universe) {
        if (r.sort != Sort::Neutral) continue;
        for (const auto& cond : c.conds)
          if (auto* e = std::get_if<Eq>(&cond); e && !e->lhs.is_slot() && e->lhs.ref == r) {
            Term v = resolve_term(e->rhs, m);
            if (!v.is_slot() && !v.ref.is_hole() && v.ref.sort == Sort::Individual) return false;
          }
      }
    }
  }
  return true;
}

struct SensePoint {
  std::size_t udrs;
  Label comp;
  std::size_t index;
  std::vector<std::string> senses;
};

inline std::vector<SensePoint> sense_points(const UdrsDatabase& db) {
  std::vector<SensePoint> out;
  auto all = db.all();
  for (std::size_t ui = 0; ui < all.size(); ++ui)
    for (const auto& [l, c] : all[ui]->components)
      for (std::size_t i = 0; i < c.conds.size(); ++i)
        if (auto* a = std::get_if<Atom>(&c.conds[i]); a && a->ambiguous())
          out.push_back({ui, l, i, a->senses});
  return out;
}

inline Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (t.is_slot()) {
    auto it = sub.find(t.ref.name);
    if (it != sub.end() && !it->second.is_slot()) return Term(t.slot, it->second.ref);
    return t;
  }
  auto it = sub.find(t.ref.name);
  return it == sub.end() ? t : it->second;
}

inline Condition substitute(const Condition& c, const std::map<std::string, Term>& sub) {
  if (auto* a = std::get_if<Atom>(&c)) {
    Atom b = *a;
    for (auto& t : b.args) t = substitute(t, sub);
    return b;
  }
  if (auto* e = std::get_if<Eq>(&c)) return Eq{substitute(e->lhs, sub), substitute(e->rhs, sub)};
  return c;
}

/// Appends the meaning postulates of every disambiguated atom.
inline void expand_lexicon(const UdrsDatabase& lexdb, UdrsComponent& c) {
  const std::size_t n = c.conds.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto* a = std::get_if<Atom>(&c.conds[i]);
    if (!a || a->senses.size() != 1) continue;
    const LexEntry* e = lexdb.lex(a->pred, a->senses.front());
    if (!e || e->params.size() != a->args.size()) continue;
    std::map<std::string, Term> sub;
    for (std::size_t j = 0; j < e->params.size(); ++j) sub.emplace(e->params[j], a->args[j]);
    const auto extra = e->conds;
    for (const auto& x : extra) c.conds.push_back(substitute(x, sub));
  }
}

inline UdrsDatabase apply_senses(const UdrsDatabase& db, const std::map<std::string, std::string>& senses) {
  UdrsDatabase out = db;
  for (Udrs* u : out.all_mut())
    for (auto& [l, c] : u->components) {
      for (std::size_t i = 0; i < c.conds.size(); ++i) {
        auto* a = std::get_if<Atom>(&c.conds[i]);
        if (!a || !a->ambiguous()) continue;
        auto it = senses.find(sense_key(l, i));
        if (it == senses.end()) throw Error(ErrorCode::ReadingMismatch, "no sense for " + sense_key(l, i));
        if (std::find(a->senses.begin(), a->senses.end(), it->second) == a->senses.end())
          throw Error(ErrorCode::ReadingMismatch, it->second + " is not a sense of " + a->pred);
        a->senses = {it->second};
      }
      expand_lexicon(db, c);
    }
  return out;
}

/// The tag r of every lower bound: one letter per plural argument slot in
/// clause order, or cum(scope) when the clause has a cumulative duplex.
inline std::map<Label, PluralTag> tags_of(const UdrsDatabase& rdb) {
  std::map<Label, PluralTag> out;
  for (const Udrs* u : rdb.all())
    for (const auto& cl : u->clauses) {
      const auto& lb = u->at(cl.lower_bound());
      PluralTag t;
      for (const auto& n : cl.nodes()) {
        const auto& c = u->at(n);
        if (!c.plural.status) continue;
        const Referent* g = group_referent(c);
        if (!g) continue;
        bool argument = false;
        for (const auto& cond : lb.conds)
          for_each_term(cond, [&](const Term& x) { argument = argument || (x.is_slot() && x.ref == *g); });
        if (!argument) continue;
        if (*c.plural.status == PluralKind::Cumulative) {
          const auto& owner = c.plural.cum_partner ? u->at(*c.plural.cum_partner) : c;
          t.cum_scope = std::get<CumDuplex>(*owner.distinguished).scope;
        }
        t.letters += *c.plural.status == PluralKind::Collective ? 'c' : 'd';
      }
      if (t.cum_scope) t.letters.clear();
      if (!t.empty()) out.emplace(cl.lower_bound(), t);
    }
  return out;
}

inline std::map<Label, PluralKind> kinds_of(const UdrsDatabase& rdb) {
  std::map<Label, PluralKind> out;
  for (const Udrs* u : rdb.all())
    for (const auto& [l, c] : u->components)
      if (c.plural.status) out.emplace(l, *c.plural.status);
  return out;
}

/// Everything a reading fixes except the orders, applied to db.
inline UdrsDatabase resolve(const UdrsDatabase& db, const std::map<Label, PluralKind>& kinds,
                            const std::map<std::string, std::string>& slots,
                            const std::map<std::string, std::string>& senses) {
  UdrsDatabase r = apply_plural(db, kinds);
  r = apply_slots(r, free_slots(r), slots);
  if (!neutral_groups_ok(r)) throw Error(ErrorCode::ReadingMismatch, "distribution over an individual");
  return apply_senses(r, senses);
}

// ---------------------------------------------------------------------------
// Box trees

/// The nesting a set of clause orders induces on one UDRS. Nodes are boxes
/// of the extracted DRS, plus one position per scope-bearing component that
/// sits between its host box and its own boxes.
class Tree {
 public:
  struct BDist {
    Label owner;
    std::vector<int> boxes;
  };
  struct BDep {
    Label k0;
  };
  using BCond = std::variant<Atom, Eq, BDist, Sum, BDep>;
  struct Node {
    int parent = -1;
    bool real = true;
    std::vector<Referent> universe;
    std::vector<BCond> conds;
  };

  Tree(const Udrs& u, const std::map<Label, std::vector<Label>>& lin) : u_(&u), lin_(&lin), slots_(slot_map(u)) {
    nodes.push_back({});
  }

  const Udrs& udrs() const { return *u_; }

  void build() { place_clause(u_->top, 0, 0); }

  /// Places lin[from..] of the clause with `host` as its outermost box.
  void place_clause(const Label& clause, int host, std::size_t from) {
    const UdrsClause* cl = u_->find_clause(clause);
    if (!cl) throw Error(ErrorCode::NotAClause, clause);
    auto it = lin_->find(clause);
    if (it == lin_->end()) throw Error(ErrorCode::ReadingMismatch, "no order for clause " + clause);
    const auto& lin = it->second;
    pos[clause] = host;
    int cur = host;
    for (std::size_t i = from; i < lin.size(); ++i) {
      const auto& c = u_->at(lin[i]);
      if (c.distinguished) {
        emit(c, cur, false);
        int v = add(cur, false);
        pos[lin[i]] = v;
        auto boxes = make_boxes(c, v);
        nodes[cur].conds.push_back(BDist{c.label, boxes});
        cur = boxes.back();
      } else {
        pos[lin[i]] = cur;
        emit(c, cur, false);
      }
    }
    for (const auto& n : cl->nodes()) {
      const auto& c = u_->at(n);
      if (!c.plural.cum_partner) continue;
      auto p = pos.find(*c.plural.cum_partner);
      if (p == pos.end()) continue;
      pos[n] = p->second;
      emit(c, nodes[p->second].parent, false);
    }
  }

  bool inside(int a, int b) const {
    for (int x = a; x != -1; x = nodes[x].parent)
      if (x == b) return true;
    return false;
  }

  /// Does the nesting realize every fact of the (closed) order?
  bool realizes(const ClosedOrder& c) const {
    for (const auto& [a, b] : c.all_pairs()) {
      auto pa = pos.find(a), pb = pos.find(b);
      if (pa == pos.end() || pb == pos.end()) return false;
      if (!inside(pa->second, pb->second)) return false;
    }
    return true;
  }

  std::vector<Node> nodes;
  std::map<Label, int> pos;

 private:
  int add(int parent, bool real) {
    Node n;
    n.parent = parent;
    n.real = real;
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  void emit(const UdrsComponent& c, int box, bool with_distinguished) {
    for (const auto& r : c.universe) nodes[box].universe.push_back(r);
    for (const auto& cond : c.conds) {
      if (auto* a = std::get_if<Atom>(&cond)) {
        nodes[box].conds.push_back(resolve_atom(*a, slots_));
      } else if (auto* e = std::get_if<Eq>(&cond)) {
        if (e->lhs.is_slot()) continue;
        nodes[box].conds.push_back(Eq{resolve_term(e->lhs, slots_), resolve_term(e->rhs, slots_)});
      } else if (auto* s = std::get_if<Sum>(&cond)) {
        nodes[box].conds.push_back(*s);
      } else if (auto* k = std::get_if<Subclause>(&cond)) {
        place_clause(k->clause, box, 0);
      }
    }
    if (c.dep) nodes[box].conds.push_back(BDep{c.label});
    if (with_distinguished && c.distinguished) {
      int v = add(box, false);
      pos[c.label + "#condition"] = v;
      nodes[box].conds.push_back(BDist{c.label, make_boxes(c, v)});
    }
  }

  std::vector<int> make_boxes(const UdrsComponent& c, int v) {
    std::vector<int> out;
    for (const auto& b : sub_boxes(c)) {
      int id = add(v, true);
      pos[b] = id;
      emit(u_->at(b), id, true);
      out.push_back(id);
    }
    return out;
  }

  const Udrs* u_;
  const std::map<Label, std::vector<Label>>* lin_;
  std::map<std::string, Term> slots_;
};

/// Turns the box trees of a resolved database into DRSs. Sums and
/// dependency markings are resolved across trees.
class Extractor {
 public:
  Extractor(const UdrsDatabase& rdb, const std::map<Label, std::vector<Label>>& lin) : rdb_(rdb) {
    for (const Udrs* u : rdb.all()) trees_.emplace_back(*u, lin);
    for (auto& t : trees_) t.build();
    taken_ = referent_names(rdb);
  }

  bool realizes() const {
    for (const auto& t : trees_)
      if (!t.realizes(closure(t.udrs()))) return false;
    return true;
  }

  const std::vector<Tree>& trees() const { return trees_; }

  Drs drs(std::size_t tree) const { return of(trees_[tree], tree, 0); }

  /// The DRS made of lin[from..] of a clause alone, nested as in the
  /// reading: what the nodes at and below position `from` contribute.
  Drs partial(std::size_t ti, const Label& clause, std::size_t from,
              const std::map<Label, std::vector<Label>>& lin) const {
    Tree t(trees_[ti].udrs(), lin);
    t.place_clause(clause, 0, from);
    return of(t, ti, 0);
  }

  Drs of(const Tree& t, std::size_t ti, int id) const {
    const auto& node = t.nodes[static_cast<std::size_t>(id)];
    Drs out;
    out.universe = node.universe;
    for (const auto& c : node.conds) {
      if (auto* a = std::get_if<Atom>(&c)) out.conds.push_back(*a);
      else if (auto* e = std::get_if<Eq>(&c)) out.conds.push_back(*e);
      else if (auto* d = std::get_if<Tree::BDist>(&c)) out.conds.push_back(distinguished(t, ti, *d));
      else if (auto* s = std::get_if<Sum>(&c)) out.conds.push_back(sum(*s));
      else if (auto* k = std::get_if<Tree::BDep>(&c)) out.conds.push_back(dependency(ti, k->k0));
    }
    return out;
  }

  std::size_t owner_index(const Label& l) const {
    for (std::size_t i = 0; i < trees_.size(); ++i)
      if (trees_[i].udrs().has_label(l)) return i;
    throw Error(ErrorCode::UnknownLabel, l);
  }

  /// The body of Sigma z : l, i.e. the merge of l's restrictor and scope.
  Drs sum_body(const Label& licensing) const {
    std::size_t ti = owner_index(licensing);
    const Tree& t = trees_[ti];
    const auto& c = t.udrs().at(licensing);
    Drs body;
    for (const auto& b : sub_boxes(c)) {
      auto p = t.pos.find(b);
      if (p == t.pos.end()) throw Error(ErrorCode::NoLicensingCondition, licensing + " has no boxes in this reading");
      Drs part = of(t, ti, p->second);
      body.universe.insert(body.universe.end(), part.universe.begin(), part.universe.end());
      body.conds.insert(body.conds.end(), part.conds.begin(), part.conds.end());
    }
    return body;
  }

 private:
  DCond distinguished(const Tree& t, std::size_t ti, const Tree::BDist& d) const {
    const auto& c = t.udrs().at(d.owner);
    auto box = [&](std::size_t i) { return Box(of(t, ti, d.boxes.at(i))); };
    const auto& dist = *c.distinguished;
    if (std::holds_alternative<Neg>(dist)) return DNeg{box(0)};
    if (std::holds_alternative<Impl>(dist)) return DImpl{box(0), box(1)};
    if (auto* q = std::get_if<Quant>(&dist)) return DQuant{q->q, q->var, box(0), box(1)};
    const auto& cd = std::get<CumDuplex>(dist);
    return DCum{box(0), box(1), cd.var1, cd.var2, box(2)};
  }

  DCond sum(const Sum& s) const { return DSum{s.target, s.var, Box(sum_body(s.licensing))}; }

  std::string fresh(const std::string& n) const {
    std::string v = n + "'";
    while (taken_.count(v)) v += "'";
    return v;
  }

  /// f verifies k0^dep(l0) only if some copy of l0's conditions agrees with
  /// f through pi: a doubly negated box over a renamed copy of l0.
  DCond dependency(std::size_t ti, const Label& k0) const {
    const Udrs& ku = trees_[ti].udrs();
    const auto& dep = *ku.at(k0).dep;
    std::size_t li = owner_index(dep.target);
    const Udrs& lu = trees_[li].udrs();
    const auto lslots = slot_map(lu);
    const auto kslots = slot_map(ku);
    const auto& l0 = lu.at(dep.target);
    std::map<std::string, Term> ren;
    auto rename = [&](const Term& t) {
      Term r = resolve_term(t, lslots);
      std::string k = key_of(r);
      auto it = ren.find(k);
      if (it == ren.end()) {
        Referent fr(fresh(r.is_slot() ? r.slot + "_" + r.ref.name : r.ref.name),
                    r.is_slot() ? Sort::Neutral : r.ref.sort);
        it = ren.emplace(k, Term(fr)).first;
      }
      return it->second;
    };
    Drs copy;
    for (const auto& cond : l0.conds) {
      if (auto* a = std::get_if<Atom>(&cond)) {
        Atom b = *a;
        for (auto& t : b.args) t = rename(t);
        copy.conds.push_back(b);
      } else if (auto* e = std::get_if<Eq>(&cond); e && !e->lhs.is_slot()) {
        copy.conds.push_back(Eq{rename(e->lhs), rename(e->rhs)});
      }
    }
    for (const auto& r : l0.universe) rename(Term(r));
    for (const auto& [tk, tl] : dep.pi) copy.conds.push_back(Eq{resolve_term(tk, kslots), rename(tl)});
    for (const auto& [_, t] : ren) copy.universe.push_back(t.ref);
    Drs outer;
    outer.conds.push_back(DNeg{Box(std::move(copy))});
    return DNeg{Box(std::move(outer))};
  }

  const UdrsDatabase& rdb_;
  std::vector<Tree> trees_;
  std::set<std::string> taken_;
};

// ---------------------------------------------------------------------------
// Enumeration

inline std::vector<std::map<Label, PluralKind>> plural_assignments(const UdrsDatabase& db) {
  std::vector<std::map<Label, PluralKind>> acc{{}};
  for (const Udrs* u : db.all())
    for (const auto& cl : u->clauses) {
      std::vector<Label> pot;
      for (const auto& n : cl.nodes())
        if (u->at(n).potentially_scope_bearing()) pot.push_back(n);
      if (pot.empty()) continue;
      auto opts = [&](const Label& n) {
        std::vector<PluralKind> ks;
        for (auto k : u->at(n).plural.options)
          if (k != PluralKind::Cumulative) ks.push_back(k);
        return ks;
      };
      std::vector<std::map<Label, PluralKind>> local{{}};
      auto extend = [&](std::vector<std::map<Label, PluralKind>> base, const Label& n,
                        const std::vector<PluralKind>& ks) {
        std::vector<std::map<Label, PluralKind>> out;
        for (const auto& b : base)
          for (auto k : ks) {
            auto c = b;
            c[n] = k;
            out.push_back(std::move(c));
          }
        return out;
      };
      for (const auto& n : pot) local = extend(local, n, opts(n));
      auto has_cum = [&](const Label& n) { return u->at(n).plural.options.count(PluralKind::Cumulative) != 0; };
      for (std::size_t i = 0; i < pot.size(); ++i)
        for (std::size_t j = i + 1; j < pot.size(); ++j) {
          if (!has_cum(pot[i]) || !has_cum(pot[j])) continue;
          std::vector<std::map<Label, PluralKind>> pair{{{pot[i], PluralKind::Cumulative}, {pot[j], PluralKind::Cumulative}}};
          for (std::size_t k = 0; k < pot.size(); ++k)
            if (k != i && k != j) pair = extend(pair, pot[k], opts(pot[k]));
          local.insert(local.end(), pair.begin(), pair.end());
        }
      std::vector<std::map<Label, PluralKind>> next;
      for (const auto& a : acc)
        for (const auto& l : local) {
          auto c = a;
          c.insert(l.begin(), l.end());
          next.push_back(std::move(c));
        }
      acc = std::move(next);
    }
  return acc;
}

template <class T>
std::vector<std::vector<T>> cartesian(const std::vector<std::vector<T>>& sets) {
  std::vector<std::vector<T>> out{{}};
  for (const auto& s : sets) {
    std::vector<std::vector<T>> next;
    for (const auto& o : out)
      for (const auto& x : s) {
        auto c = o;
        c.push_back(x);
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  return out;
}

/// Coindexed clause pairs with their isomorphisms (pivot -> member).
struct CoindexPlan {
  std::vector<ClauseIso> isos;
  bool broken = false;
};

inline CoindexPlan coindex_plan(const UdrsDatabase& db) {
  CoindexPlan p;
  std::map<std::string, Label> pivot;
  for (const Udrs* u : db.all())
    for (const auto& cl : u->clauses) {
      if (!cl.coindex) continue;
      auto [it, fresh] = pivot.emplace(*cl.coindex, cl.label);
      if (fresh) continue;
      auto iso = clause_isomorphism(db, it->second, cl.label);
      if (!iso) p.broken = true;
      else p.isos.push_back(std::move(*iso));
    }
  return p;
}

inline bool coindex_choices_ok(const CoindexPlan& p, const std::map<Label, PluralKind>& kinds,
                               const std::map<std::string, std::string>& senses) {
  for (const auto& iso : p.isos)
    for (const auto& [a, b] : iso.map) {
      auto ka = kinds.find(a), kb = kinds.find(b);
      if ((ka == kinds.end()) != (kb == kinds.end())) return false;
      if (ka != kinds.end() && ka->second != kb->second) return false;
      for (const auto& [key, s] : senses) {
        auto hash = key.rfind('#');
        if (key.substr(0, hash) != a) continue;
        auto other = senses.find(b + key.substr(hash));
        if (other != senses.end() && other->second != s) return false;
      }
    }
  return true;
}

inline bool coindex_lins_ok(const CoindexPlan& p, const std::map<Label, std::vector<Label>>& lin) {
  for (const auto& iso : p.isos)
    for (const auto& [a, b] : iso.map) {
      auto la = lin.find(a), lb = lin.find(b);
      if (la == lin.end() || lb == lin.end()) continue;  // not a clause label
      if (la->second.size() != lb->second.size()) return false;
      for (std::size_t i = 0; i < la->second.size(); ++i)
        if (!iso.covers(la->second[i]) || iso(la->second[i]) != lb->second[i]) return false;
    }
  return true;
}

inline bool dependency_tags_ok(const UdrsDatabase& rdb, const std::map<Label, PluralTag>& tags) {
  for (const Udrs* u : rdb.all())
    for (const auto& [l, c] : u->components) {
      if (!c.dep) continue;
      auto tk = tags.find(l), tl = tags.find(c.dep->target);
      if (tk == tags.end() || tl == tags.end()) continue;
      if (tk->second.finite() ? tk->second != tl->second : tl->second.finite()) return false;
    }
  return true;
}

inline bool clause_tags_coindexed(const CoindexPlan& p, const UdrsDatabase& rdb,
                                  const std::map<Label, PluralTag>& tags) {
  for (const auto& iso : p.isos)
    for (const auto& [a, b] : iso.map) {
      if (!rdb.owner(a) || !rdb.owner(a)->is_lower_bound(a)) continue;
      auto ta = tags.find(a), tb = tags.find(b);
      if ((ta == tags.end()) != (tb == tags.end())) return false;
      if (ta != tags.end() && (ta->second.letters != tb->second.letters ||
                               ta->second.finite() != tb->second.finite()))
        return false;
    }
  return true;
}

}  // namespace detail

/// The discourse as one DRS: the sentence boxes merged in order.
inline Drs merge_drs(const std::vector<Drs>& ds) {
  Drs out;
  for (const auto& d : ds) {
    out.universe.insert(out.universe.end(), d.universe.begin(), d.universe.end());
    out.conds.insert(out.conds.end(), d.conds.begin(), d.conds.end());
  }
  return out;
}

/// Calls visit for each reading of db in a deterministic order until it
/// returns false. Nestings whose extracted DRSs coincide (they differ only in
/// where inert material was merged) are reported once.
inline void for_each_reading(const UdrsDatabase& db, const std::function<bool(const Reading&)>& visit) {
  using namespace detail;
  const auto plan = coindex_plan(db);
  if (plan.broken) return;
  const auto points = sense_points(db);
  std::set<std::string> seen;

  for (const auto& kinds0 : plural_assignments(db)) {
    UdrsDatabase pdb;
    try {
      pdb = apply_plural(db, kinds0);
    } catch (const Error&) {
      continue;
    }
    const auto slots = free_slots(pdb);
    std::vector<std::vector<std::string>> slot_opts;
    for (const auto& s : slots) {
      std::vector<std::string> o{s.group.name};
      if (s.var) o.push_back(*s.var);
      slot_opts.push_back(o);
    }
    for (const auto& sc : cartesian(slot_opts)) {
      std::map<std::string, std::string> slot_choice;
      for (std::size_t i = 0; i < slots.size(); ++i) slot_choice[slots[i].key] = sc[i];
      UdrsDatabase sdb;
      try {
        sdb = apply_slots(pdb, slots, slot_choice);
      } catch (const Error&) {
        continue;
      }
      if (!neutral_groups_ok(sdb)) continue;
      const auto kinds = kinds_of(sdb);
      const auto tags = tags_of(sdb);
      if (!dependency_tags_ok(sdb, tags) || !clause_tags_coindexed(plan, sdb, tags)) continue;

      // orders per clause (independent of senses)
      std::vector<Label> clause_labels;
      std::vector<std::vector<std::vector<Label>>> per_clause;
      for (const Udrs* u : sdb.all())
        for (const auto& cl : u->clauses) {
          clause_labels.push_back(cl.label);
          per_clause.push_back(linear_extensions(*u, cl.label));
        }

      std::vector<std::vector<std::string>> sense_opts;
      for (const auto& p : points) sense_opts.push_back(p.senses);
      for (const auto& ss : cartesian(sense_opts)) {
        std::map<std::string, std::string> senses;
        for (std::size_t i = 0; i < points.size(); ++i) senses[sense_key(points[i].comp, points[i].index)] = ss[i];
        if (!coindex_choices_ok(plan, kinds, senses)) continue;
        UdrsDatabase rdb = apply_senses(sdb, senses);
        for (const auto& combo : cartesian(per_clause)) {
          std::map<Label, std::vector<Label>> lin;
          for (std::size_t i = 0; i < combo.size(); ++i) lin[clause_labels[i]] = combo[i];
          if (!coindex_lins_ok(plan, lin)) continue;
          Extractor ex(rdb, lin);
          if (!ex.realizes()) continue;
          std::vector<Drs> ds;
          for (std::size_t i = 0; i < ex.trees().size(); ++i) ds.push_back(ex.drs(i));
          // an antecedent buried in a box the anaphor cannot see
          if (!free_referents(merge_drs(ds)).empty()) continue;
          std::string key;
          for (const auto& [n, k] : kinds) key += n + ":" + plural_letter(k) + " ";
          for (const auto& [s, v] : slot_choice) key += s + "=" + v + " ";
          for (const auto& [s, v] : senses) key += s + "=" + v + " ";
          for (const auto& d : ds) key += "\n" + canon(d);
          if (!seen.insert(key).second) continue;
          Reading r{lin, kinds, tags, slot_choice, senses, key};
          if (!visit(r)) return;
        }
      }
    }
  }
}

inline std::vector<Reading> enumerate_readings(const UdrsDatabase& db) {
  std::vector<Reading> out;
  for_each_reading(db, [&](const Reading& r) {
    out.push_back(r);
    return true;
  });
  return out;
}

inline std::vector<Reading> enumerate_readings(const Udrs& u) {
  UdrsDatabase db;
  db.sentences.push_back(u);
  return enumerate_readings(db);
}

/// The database with every choice of r applied, checked against r's orders.
inline UdrsDatabase resolved_database(const UdrsDatabase& db, const Reading& r) {
  UdrsDatabase rdb;
  try {
    rdb = detail::resolve(db, r.kinds, r.slots, r.senses);
  } catch (const Error& e) {
    throw Error(ErrorCode::ReadingMismatch, e.what());
  }
  for (const Udrs* u : rdb.all())
    for (const auto& cl : u->clauses) {
      auto it = r.lin.find(cl.label);
      if (it == r.lin.end()) throw Error(ErrorCode::ReadingMismatch, "no order for clause " + cl.label);
      auto lins = linear_extensions(*u, cl.label);
      if (std::find(lins.begin(), lins.end(), it->second) == lins.end())
        throw Error(ErrorCode::ReadingMismatch, "order of " + cl.label + " is not admissible");
    }
  return rdb;
}

/// One DRS per UDRS of db (sentences, then the goal).
inline std::vector<Drs> apply_reading(const UdrsDatabase& db, const Reading& r) {
  UdrsDatabase rdb = resolved_database(db, r);
  detail::Extractor ex(rdb, r.lin);
  if (!ex.realizes()) throw Error(ErrorCode::ReadingMismatch, "the orders do not nest consistently");
  std::vector<Drs> out;
  for (std::size_t i = 0; i < ex.trees().size(); ++i) {
    out.push_back(ex.drs(i));
    if (has_hole(out.back())) throw Error(ErrorCode::UnresolvedPronoun, "reading leaves a pronoun unresolved");
  }
  return out;
}

inline std::vector<Drs> apply_reading(const Udrs& u, const Reading& r) {
  UdrsDatabase db;
  db.sentences.push_back(u);
  return apply_reading(db, r);
}

/// The flat DRS that k0^dep(l0) must satisfy once its ambiguous atoms take
/// `sense`: l0's conditions seen through the inverse of pi next to k0's own,
/// with meaning postulates expanded. Needs no scope decisions.
inline Drs dependent_drs(const UdrsDatabase& db, const Label& k0, const std::string& sense) {
  const Udrs* ku = db.owner(k0);
  if (!ku || !ku->is_lower_bound(k0)) throw Error(ErrorCode::NotLowerBound, k0);
  const auto& kc = ku->at(k0);
  if (!kc.dep) throw Error(ErrorCode::InvalidArgument, k0 + " is not marked dependent");
  const Udrs* lu = db.owner(kc.dep->target);
  if (!lu) throw Error(ErrorCode::UnknownLabel, kc.dep->target);
  const auto& lc = lu->at(kc.dep->target);

  std::map<std::string, Term> inverse;
  for (const auto& [tk, tl] : kc.dep->pi) inverse.emplace(key_of(tl), tk);
  auto back = [&](const Term& t) {
    auto it = inverse.find(key_of(t));
    return it == inverse.end() ? t : it->second;
  };

  UdrsComponent flat;
  flat.label = k0;
  flat.universe = lc.universe;
  for (const auto& cond : lc.conds) {
    if (detail::is_slot_definition(cond)) continue;
    if (auto* a = std::get_if<Atom>(&cond)) {
      Atom b = *a;
      for (auto& t : b.args) t = back(t);
      if (b.ambiguous()) b.senses = {b.senses.front()};
      flat.conds.push_back(b);
    } else if (auto* e = std::get_if<Eq>(&cond)) {
      flat.conds.push_back(Eq{back(e->lhs), back(e->rhs)});
    }
  }
  for (const auto& r : kc.universe) flat.universe.push_back(r);
  for (const auto& cond : kc.conds) {
    if (detail::is_slot_definition(cond)) continue;
    if (auto* a = std::get_if<Atom>(&cond)) {
      Atom b = *a;
      if (b.ambiguous()) {
        if (std::find(b.senses.begin(), b.senses.end(), sense) == b.senses.end())
          throw Error(ErrorCode::InvalidArgument, sense + " is not a sense of " + b.pred);
        b.senses = {sense};
      }
      flat.conds.push_back(b);
    } else if (auto* e = std::get_if<Eq>(&cond)) {
      flat.conds.push_back(*e);
    }
  }
  detail::expand_lexicon(db, flat);
  Drs out;
  out.universe = flat.universe;
  for (const auto& c : flat.conds) {
    if (auto* a = std::get_if<Atom>(&c)) out.conds.push_back(*a);
    else if (auto* e = std::get_if<Eq>(&c)) out.conds.push_back(*e);
  }
  return out;
}

}  // namespace udrs
