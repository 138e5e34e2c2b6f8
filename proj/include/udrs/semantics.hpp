#pragma once

// Denotations of labels, computed the compositional way: a lower bound
// denotes a set of embeddings, every other node of a clause maps the set
// computed below it to a new one, and a clause denotes the composition of
// its nodes in the order a reading chooses. Truth of a database threads the
// embeddings sentence by sentence.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "udrs/order.hpp"
#include "udrs/readings.hpp"
#include "udrs/types.hpp"
#include "udrs/verify.hpp"

namespace udrs {

using EmbeddingSet = std::vector<Embedding>;

/// A lower-bound denotation <e, r>.
struct TaggedSet {
  EmbeddingSet e;
  PluralTag r;
};

/// Either a set of tagged embedding sets (lower bounds, clauses, boxes) or a
/// function on embedding sets (every other label).
struct Denotation {
  std::variant<std::vector<TaggedSet>, std::function<EmbeddingSet(const EmbeddingSet&)>> value;

  bool is_set() const { return value.index() == 0; }
  const std::vector<TaggedSet>& sets() const { return std::get<0>(value); }
  EmbeddingSet operator()(const EmbeddingSet& e) const {
    if (is_set()) throw Error(ErrorCode::InvalidArgument, "denotation is a set, not a function");
    return std::get<1>(value)(e);
  }
};

namespace detail {

inline bool compatible(const Embedding& a, const Embedding& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) ++i;
    else if (j->first < i->first) ++j;
    else {
      if (i->second != j->second) return false;
      ++i;
      ++j;
    }
  }
  return true;
}

inline Embedding project(const Embedding& g, const std::set<std::string>& dom) {
  Embedding out;
  for (const auto& [k, v] : g)
    if (dom.count(k)) out.emplace(k, v);
  return out;
}

inline void dedupe(EmbeddingSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline std::vector<std::string> missing_keys(const Embedding& g, const std::set<std::string>& dom) {
  std::vector<std::string> out;
  for (const auto& k : dom)
    if (!g.count(k)) out.push_back(k);
  return out;
}

inline std::set<std::string> domain_of(const Drs& d) {
  std::set<std::string> out = free_referents(d);
  for (const auto& r : d.universe) out.insert(r.name);
  return out;
}

/// Evaluates one reading of a database label by label.
class Denoter {
 public:
  Denoter(const UdrsDatabase& db, const Reading& r, const Model& m, EvalOptions opt = {})
      : rdb_(resolved_database(db, r)), reading_(r), ex_(rdb_, r.lin), m_(m), opt_(opt) {
    if (!ex_.realizes()) throw Error(ErrorCode::ReadingMismatch, "the orders do not nest consistently");
    for (const Udrs* u : rdb_.all()) slots_.push_back(slot_map(*u));
  }

  const UdrsDatabase& resolved() const { return rdb_; }
  const Extractor& extractor() const { return ex_; }

  std::size_t owner(const Label& l) const { return ex_.owner_index(l); }
  const Udrs& udrs(std::size_t i) const { return *rdb_.all()[i]; }

  /// The clause as composition of its nodes, innermost first.
  EmbeddingSet clause(const Label& cl, const Embedding& f) const {
    const auto& lin = reading_.lin.at(cl);
    EmbeddingSet e = lower(lin.back(), f);
    for (std::size_t r = lin.size() - 1; r-- > 0;) e = node(cl, r, f, e);
    return e;
  }

  /// A lower bound, restricted through its dependency mark.
  EmbeddingSet lower(const Label& l0, const Embedding& f) const {
    std::size_t ui = owner(l0);
    const Udrs& u = udrs(ui);
    const UdrsClause* cl = u.clause_of(l0);
    const auto& lin = reading_.lin.at(cl->label);
    const auto dom = domain(ui, cl->label, lin.size() - 1, f);
    EmbeddingSet out;
    for (const auto& g : extensions(m_, f, missing_keys(f, dom)))
      for (auto& h : update(ui, u.at(l0), {g})) out.push_back(project(h, dom));
    dedupe(out);
    if (const auto& dep = u.at(l0).dep) out = restrict_through(ui, *dep, out);
    return out;
  }

  /// The node at position r of the clause's order.
  EmbeddingSet node(const Label& cl, std::size_t r, const Embedding& f, const EmbeddingSet& e) const {
    std::size_t ui = owner(cl);
    const Udrs& u = udrs(ui);
    const auto& lin = reading_.lin.at(cl);
    const auto& c = u.at(lin[r]);
    const auto dom = domain(ui, cl, r, f);
    EmbeddingSet out;
    if (!c.distinguished) {
      // (a): g is in e and verifies the node's own conditions
      for (const auto& m : e) {
        std::set<std::string> need = dom;
        for (const auto& k : occurring_keys(ui, c)) need.insert(k);
        for (const auto& g : extensions(m_, m, missing_keys(m, need)))
          for (auto& h : update(ui, c, {g})) out.push_back(project(h, dom));
      }
      dedupe(out);
      return out;
    }
    // (b)-(c): own conditions plus the distinguished condition relative to e
    std::vector<const UdrsComponent*> parts{&c};
    for (const auto& n : u.clause_of(lin[r])->nodes())
      if (u.at(n).plural.cum_partner == c.label) parts.push_back(&u.at(n));
    EmbeddingSet cands;
    for (const auto& g : extensions(m_, f, missing_keys(f, dom))) {
      EmbeddingSet gs{g};
      for (const auto* p : parts) gs = update(ui, *p, gs);
      for (auto& h : gs) cands.push_back(project(h, dom));
    }
    dedupe(cands);
    for (const auto& g : cands)
      if (distinguished(ui, c, g, e)) out.push_back(g);
    return out;
  }

  /// A box hanging off a distinguished condition.
  EmbeddingSet box(std::size_t ui, const Label& b, const Embedding& g) const {
    const Udrs& u = udrs(ui);
    const auto& c = u.at(b);
    auto pos = ex_.trees()[ui].pos.find(b);
    if (pos == ex_.trees()[ui].pos.end()) throw Error(ErrorCode::ReadingMismatch, b + " is not placed");
    const Drs d = ex_.of(ex_.trees()[ui], ui, pos->second);
    std::vector<std::string> keys;
    for (const auto& x : c.universe) keys.push_back(x.name);
    for (const auto& k : free_referents(d))
      if (!g.count(k) && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    EmbeddingSet out;
    for (const auto& h : extensions(m_, g, keys)) {
      auto hs = update(ui, c, {h});
      if (c.distinguished) {
        EmbeddingSet kept;
        for (auto& x : hs)
          if (distinguished(ui, c, x, {Embedding{}})) kept.push_back(std::move(x));
        hs = std::move(kept);
      }
      out.insert(out.end(), hs.begin(), hs.end());
    }
    dedupe(out);
    return out;
  }

  /// The Sigma condition under this reading: f(zeta) must be the join of all
  /// b such that f + (z -> b) reaches the licensing duplex's scope.
  bool sum(const Sum& s, const Embedding& f) const {
    auto w = sum_witness(s, f);
    return w && value_of(Term(s.target), f) == *w;
  }

  /// Fails with EmptyAbstraction when the abstraction has no witness under any
  /// outer embedding, so the verdict does not hinge on evaluation order.
  void check_abstraction(const Sum& s) const {
    if (!sum_witness(s, {}))
      throw Error(ErrorCode::EmptyAbstraction, s.target.name + " = Sigma " + s.var.name + ": no witnesses");
  }

  std::optional<Entity> sum_witness(const Sum& s, const Embedding& f) const {
    std::size_t li = owner(s.licensing);
    const Udrs& lu = udrs(li);
    const auto& lic = lu.at(s.licensing);
    if (!lic.distinguished) throw Error(ErrorCode::NoLicensingCondition, s.licensing);
    const UdrsClause* cl = lu.clause_of(s.licensing);
    if (!cl) throw Error(ErrorCode::NoLicensingCondition, s.licensing);
    const auto& lin = reading_.lin.at(cl->label);
    auto at = std::find(lin.begin(), lin.end(), s.licensing);
    const std::size_t r = static_cast<std::size_t>(at - lin.begin());
    // e below the licensing condition, for an arbitrary outer embedding
    EmbeddingSet e = lower(lin.back(), {});
    for (std::size_t j = lin.size() - 1; j-- > r + 1;) e = node(cl->label, j, {}, e);
    const auto dom = domain(li, cl->label, r, {});
    Entity w = 0;
    for (const auto& g : extensions(m_, {}, missing_keys({}, dom))) {
      if (!compatible(g, f)) continue;
      for (const auto& h : res_embeddings(li, lic, g))
        for (const auto& k : box(li, *scope_of(lic), h))
          for (const auto& x : e)
            if (compatible(k, x)) {
              Embedding kx = k;
              kx.insert(x.begin(), x.end());
              auto it = kx.find(s.var.name);
              if (it != kx.end() && compatible(kx, f)) w = Model::join(w, it->second);
            }
    }
    if (w == 0) return std::nullopt;
    return w;
  }

 private:
  /// dom(f) + the universe and free referents of what the nodes at and
  /// below position r contribute. Keeps every referent declared in the box
  /// a node sits in, so later material can still pick it up.
  std::set<std::string> domain(std::size_t ui, const Label& cl, std::size_t r, const Embedding& f) const {
    auto key = std::make_pair(cl, r);
    auto it = dom_cache_.find(key);
    if (it == dom_cache_.end())
      it = dom_cache_.emplace(key, domain_of(ex_.partial(ui, cl, r, reading_.lin))).first;
    std::set<std::string> out = it->second;
    for (const auto& [k, _] : f) out.insert(k);
    return out;
  }

  std::set<std::string> occurring_keys(std::size_t ui, const UdrsComponent& c) const {
    std::set<std::string> out;
    for (const auto& r : c.universe) out.insert(r.name);
    for (const auto& cond : c.conds) {
      if (is_slot_definition(cond) || std::holds_alternative<Subclause>(cond)) continue;
      for_each_term(cond, [&](const Term& t) {
        if (!t.ref.is_hole()) out.insert(key_of(resolve_term(t, slots_[ui])));
      });
    }
    return out;
  }

  /// Runs a component's own conditions over a set of embeddings. Embedded
  /// clauses extend the embeddings with what they introduce.
  EmbeddingSet update(std::size_t ui, const UdrsComponent& c, EmbeddingSet gs) const {
    const auto& sm = slots_[ui];
    for (const auto& cond : c.conds) {
      EmbeddingSet next;
      if (auto* a = std::get_if<Atom>(&cond)) {
        Atom b = resolve_atom(*a, sm);
        for (auto& g : gs)
          if (atom_holds(m_, b, g)) next.push_back(std::move(g));
      } else if (auto* e = std::get_if<Eq>(&cond)) {
        if (e->lhs.is_slot()) continue;
        Term l = resolve_term(e->lhs, sm), r = resolve_term(e->rhs, sm);
        if (l.ref.is_hole() || r.ref.is_hole()) throw Error(ErrorCode::UnresolvedPronoun, "pronoun in " + c.label);
        for (auto& g : gs)
          if (value_of(l, g) == value_of(r, g)) next.push_back(std::move(g));
      } else if (auto* s = std::get_if<Sum>(&cond)) {
        for (auto& g : gs)
          if (sum(*s, g)) next.push_back(std::move(g));
      } else if (auto* k = std::get_if<Subclause>(&cond)) {
        for (const auto& g : gs) {
          auto more = clause(k->clause, g);
          next.insert(next.end(), more.begin(), more.end());
        }
        dedupe(next);
      }
      gs = std::move(next);
    }
    return gs;
  }

  EmbeddingSet res_embeddings(std::size_t ui, const UdrsComponent& c, const Embedding& g) const {
    const auto& d = *c.distinguished;
    if (auto* i = std::get_if<Impl>(&d)) return box(ui, i->res, g);
    if (auto* q = std::get_if<Quant>(&d)) {
      EmbeddingSet out;
      const auto& rb = udrs(ui).at(q->res);
      if (rb.declares(q->var.name)) return box(ui, q->res, g);
      for (const auto& h : extensions(m_, g, {q->var.name})) {
        auto more = box(ui, q->res, h);
        out.insert(out.end(), more.begin(), more.end());
      }
      return out;
    }
    throw Error(ErrorCode::NoLicensingCondition, c.label);
  }

  bool reaches(std::size_t ui, const Label& scope, const Embedding& h, const EmbeddingSet& e) const {
    for (const auto& k : box(ui, scope, h))
      for (const auto& x : e)
        if (compatible(k, x)) return true;
    return false;
  }

  bool distinguished(std::size_t ui, const UdrsComponent& c, const Embedding& g, const EmbeddingSet& e) const {
    const auto& d = *c.distinguished;
    if (auto* n = std::get_if<Neg>(&d)) return !reaches(ui, n->inner, g, e);
    if (auto* i = std::get_if<Impl>(&d)) {
      for (const auto& h : box(ui, i->res, g))
        if (!reaches(ui, i->scope, h, e)) return false;
      return true;
    }
    if (auto* q = std::get_if<Quant>(&d)) {
      std::map<Entity, bool> verdict;
      for (const auto& h : res_embeddings(ui, c, g)) {
        bool ok = reaches(ui, q->scope, h, e);
        auto [it, fresh] = verdict.emplace(h.at(q->var.name), ok);
        if (!fresh) it->second = it->second && ok;
      }
      std::size_t b = 0;
      for (const auto& [_, ok] : verdict) b += ok;
      return quantifier_holds(q->q, verdict.size(), b, opt_);
    }
    const auto& cd = std::get<CumDuplex>(d);
    auto r1 = box(ui, cd.res1, g);
    auto r2 = box(ui, cd.res2, g);
    std::vector<char> left(r1.size(), 0), right(r2.size(), 0);
    for (std::size_t i = 0; i < r1.size(); ++i)
      for (std::size_t j = 0; j < r2.size(); ++j) {
        if (left[i] && right[j]) continue;
        if (!compatible(r1[i], r2[j])) continue;
        Embedding h = r1[i];
        h.insert(r2[j].begin(), r2[j].end());
        if (reaches(ui, cd.scope, h, e)) left[i] = right[j] = 1;
      }
    return std::all_of(left.begin(), left.end(), [](char x) { return x; }) &&
           std::all_of(right.begin(), right.end(), [](char x) { return x; });
  }

  /// The dependent restriction, intersected with k0's own denotation.
  EmbeddingSet restrict_through(std::size_t ui, const Dependency& dep, const EmbeddingSet& ek) const {
    std::size_t li = owner(dep.target);
    const EmbeddingSet el = lower(dep.target, {});
    EmbeddingSet out;
    for (const auto& f : ek) {
      bool ok = std::any_of(el.begin(), el.end(), [&](const Embedding& g) {
        for (const auto& [tk, tl] : dep.pi) {
          auto a = f.find(key_of(resolve_term(tk, slots_[ui])));
          auto b = g.find(key_of(resolve_term(tl, slots_[li])));
          if (a == f.end() || b == g.end() || a->second != b->second) return false;
        }
        return true;
      });
      if (ok) out.push_back(f);
    }
    return out;
  }

  UdrsDatabase rdb_;
  Reading reading_;
  Extractor ex_;
  const Model& m_;
  EvalOptions opt_;
  std::vector<std::map<std::string, Term>> slots_;
  mutable std::map<std::pair<Label, std::size_t>, std::set<std::string>> dom_cache_;
};

inline UdrsDatabase single(const Udrs& u) {
  UdrsDatabase db;
  db.sentences.push_back(u);
  return db;
}

}  // namespace detail

/// The denotation of label l under reading c, relative to embedding f.
inline Denotation denote(const UdrsDatabase& db, const Label& l, const Embedding& f, const Model& m,
                         const Reading& c, const EvalOptions& opt = {}) {
  const Udrs* u = db.owner(l);
  if (!u) throw Error(ErrorCode::UnknownLabel, l);
  auto d = std::make_shared<detail::Denoter>(db, c, m, opt);
  std::size_t ui = d->owner(l);
  const Udrs& ru = d->udrs(ui);
  if (ru.find_clause(l)) return {std::vector<TaggedSet>{{d->clause(l, f), {}}}};
  if (ru.is_lower_bound(l)) {
    auto it = c.tags.find(l);
    return {std::vector<TaggedSet>{{d->lower(l, f), it == c.tags.end() ? PluralTag{} : it->second}}};
  }
  if (const UdrsClause* cl = ru.clause_of(l)) {
    const auto& lin = c.lin.at(cl->label);
    auto at = std::find(lin.begin(), lin.end(), l);
    if (at == lin.end()) throw Error(ErrorCode::ReadingMismatch, l + " is not ordered by the reading");
    std::size_t r = static_cast<std::size_t>(at - lin.begin());
    Label cll = cl->label;
    return {[d, cll, r, f](const EmbeddingSet& e) { return d->node(cll, r, f, e); }};
  }
  return {[d, ui, l, f](const EmbeddingSet& e) {
    EmbeddingSet out;
    for (const auto& k : d->box(ui, l, f))
      if (std::any_of(e.begin(), e.end(), [&](const Embedding& x) { return detail::compatible(k, x); }))
        out.push_back(k);
    return out;
  }};
}

inline Denotation denote(const Udrs& u, const Label& l, const Embedding& f, const Model& m, const Reading& c,
                         const EvalOptions& opt = {}) {
  return denote(detail::single(u), l, f, m, c, opt);
}

/// Dependent restriction on tagged lower-bound denotations: keep the
/// embeddings of k0 that some embedding of l0 matches through pi. Tags must
/// pair up: equal finite tags, two cumulative tags, or an untagged side.
inline Denotation restrict_dependent(const Denotation& dk, const Denotation& dl,
                                     const std::vector<std::pair<Term, Term>>& pi) {
  if (!dk.is_set() || !dl.is_set()) throw Error(ErrorCode::InvalidArgument, "lower-bound denotations expected");
  std::vector<TaggedSet> out;
  bool any_l = std::any_of(dl.sets().begin(), dl.sets().end(), [](const TaggedSet& t) { return !t.e.empty(); });
  if (!any_l) return {out};
  for (const auto& k : dk.sets()) {
    for (const auto& l : dl.sets()) {
      bool tags_ok = k.r.empty() || l.r.empty() || (k.r.finite() ? k.r == l.r : !l.r.finite());
      if (!tags_ok) continue;
      TaggedSet r{{}, k.r};
      for (const auto& f : k.e) {
        bool ok = std::any_of(l.e.begin(), l.e.end(), [&](const Embedding& g) {
          for (const auto& [tk, tl] : pi) {
            auto a = f.find(key_of(tk));
            auto b = g.find(key_of(tl));
            if (a == f.end() || b == g.end() || a->second != b->second) return false;
          }
          return true;
        });
        if (ok) r.e.push_back(f);
      }
      out.push_back(std::move(r));
    }
  }
  if (out.empty() && !dk.sets().empty()) throw Error(ErrorCode::TagMismatch, "no tag of l0 pairs with k0");
  return {out};
}

/// Sigma verification under reading c through the compositional route.
inline bool verify_sum(const Model& m, const Embedding& f, const Sum& s, const UdrsDatabase& db, const Reading& c,
                       const EvalOptions& opt = {}) {
  const Udrs* lu = db.owner(s.licensing);
  const UdrsComponent* lic = lu ? lu->find(s.licensing) : nullptr;
  if (!lic || !lic->distinguished ||
      !(std::holds_alternative<Impl>(*lic->distinguished) || std::holds_alternative<Quant>(*lic->distinguished)))
    throw Error(ErrorCode::NoLicensingCondition, s.licensing);
  detail::Denoter d(db, c, m, opt);
  d.check_abstraction(s);
  return d.sum(s, f);
}

inline bool verify_sum(const Model& m, const Embedding& f, const Sum& s, const Udrs& u, const Reading& c,
                       const EvalOptions& opt = {}) {
  return verify_sum(m, f, s, detail::single(u), c, opt);
}

/// Joins readings given one per UDRS into one reading of the database.
inline Reading combine_readings(const std::vector<Reading>& cs) {
  Reading r;
  for (const auto& c : cs) {
    r.lin.insert(c.lin.begin(), c.lin.end());
    r.kinds.insert(c.kinds.begin(), c.kinds.end());
    r.tags.insert(c.tags.begin(), c.tags.end());
    r.slots.insert(c.slots.begin(), c.slots.end());
    r.senses.insert(c.senses.begin(), c.senses.end());
    r.key += c.key;
  }
  return r;
}

/// The embeddings of each sentence's top denotation feed the
/// next sentence; the database is true if some embedding survives.
inline bool truth(const UdrsDatabase& db, const Model& m, const Reading& c, const EvalOptions& opt = {}) {
  const auto plan = detail::coindex_plan(db);
  if (plan.broken || !detail::coindex_lins_ok(plan, c.lin) || !detail::coindex_choices_ok(plan, c.kinds, c.senses))
    throw Error(ErrorCode::CoindexViolation, "reading differs on coindexed clauses");
  detail::Denoter d(db, c, m, opt);
  for (const Udrs* u : d.resolved().all())
    for (const auto& [_, comp] : u->components)
      for (const auto& cond : comp.conds)
        if (auto* s = std::get_if<Sum>(&cond)) d.check_abstraction(*s);
  EmbeddingSet fs{Embedding{}};
  for (const Udrs* u : d.resolved().all()) {
    EmbeddingSet next;
    for (const auto& f : fs) {
      auto more = d.clause(u->top, f);
      next.insert(next.end(), more.begin(), more.end());
    }
    detail::dedupe(next);
    fs = std::move(next);
    if (fs.empty()) return false;
  }
  return true;
}

inline bool truth(const UdrsDatabase& db, const Model& m, const std::vector<Reading>& cs, const EvalOptions& opt = {}) {
  return truth(db, m, combine_readings(cs), opt);
}

/// The same verdict through the extracted DRSs.
inline bool truth_by_drs(const UdrsDatabase& db, const Model& m, const Reading& c, const EvalOptions& opt = {}) {
  return verify_drs(m, merge_drs(apply_reading(db, c)), {}, opt);
}

// ---------------------------------------------------------------------------
// Consistency

struct ConsistentWitness {
  Model model;
  Embedding f;
};
struct NoModelUpTo {
  std::size_t bound;
  bool exhaustive = true;
};
struct SyntacticClash {
  Atom positive, negative;
};
using Consistency = std::variant<ConsistentWitness, NoModelUpTo, SyntacticClash>;

namespace detail {

struct UnionFind {
  std::map<std::string, std::string> parent;
  std::string find(const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end()) return parent[x] = x;
    if (it->second == x) return x;
    return it->second = find(it->second);
  }
  void unite(const std::string& a, const std::string& b) {
    auto x = find(a), y = find(b);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
};

/// Literals of a conjunctive DRS: atoms, equations, and negations of boxes
/// holding one atom. nullopt when d has other conditions.
struct Literals {
  std::vector<Atom> pos, neg;
  std::vector<Eq> eqs;
};

inline std::optional<Literals> literals(const Drs& d) {
  Literals l;
  for (const auto& c : d.conds) {
    if (auto* a = std::get_if<Atom>(&c)) {
      Atom b = *a;
      if (b.negated) {
        b.negated = false;
        l.neg.push_back(b);
      } else {
        l.pos.push_back(b);
      }
    } else if (auto* e = std::get_if<Eq>(&c)) {
      l.eqs.push_back(*e);
    } else if (auto* n = std::get_if<DNeg>(&c);
               n && n->inner->universe.empty() && n->inner->conds.size() == 1 &&
               std::holds_alternative<Atom>(n->inner->conds[0])) {
      Atom b = std::get<Atom>(n->inner->conds[0]);
      b.negated = !b.negated;
      (b.negated ? l.neg : l.pos).push_back(Atom{b.pred, b.args, b.senses, false});
    } else {
      return std::nullopt;
    }
  }
  return l;
}

inline std::optional<SyntacticClash> find_clash(const Drs& d) {
  auto lits = literals(d);
  if (!lits) return std::nullopt;
  UnionFind uf;
  for (const auto& e : lits->eqs) uf.unite(key_of(e.lhs), key_of(e.rhs));
  for (const auto& p : lits->pos)
    for (const auto& n : lits->neg) {
      if (p.pred != n.pred || sense_of(p) != sense_of(n) || p.args.size() != n.args.size()) continue;
      bool same = true;
      for (std::size_t i = 0; i < p.args.size() && same; ++i)
        same = uf.find(key_of(p.args[i])) == uf.find(key_of(n.args[i]));
      if (same) {
        Atom neg = n;
        neg.negated = true;
        return SyntacticClash{p, neg};
      }
    }
  return std::nullopt;
}

/// Smallest models of a conjunctive DRS: map each equality class of terms
/// to an entity and make exactly the positive atoms true.
inline std::optional<ConsistentWitness> minimal_model(const Literals& l, const Drs& d, std::size_t bound) {
  UnionFind uf;
  std::set<std::string> terms;
  auto note = [&](const Term& t) { terms.insert(key_of(t)); };
  for (const auto& r : d.universe) terms.insert(r.name);
  for (const auto& a : l.pos) for (const auto& t : a.args) note(t);
  for (const auto& a : l.neg) for (const auto& t : a.args) note(t);
  for (const auto& e : l.eqs) { note(e.lhs); note(e.rhs); uf.unite(key_of(e.lhs), key_of(e.rhs)); }
  std::map<std::string, bool> individual;  // class -> must be an atom
  for (const auto& t : terms) {
    auto c = uf.find(t);
    individual[c] = individual[c] || sort_of_key(t) == Sort::Individual;
  }
  std::vector<std::string> classes;
  for (const auto& [c, _] : individual) classes.push_back(c);
  for (std::size_t n = 1; n <= bound; ++n) {
    Model base;
    base.atoms = atom_names(n);
    std::vector<std::vector<Entity>> choices;
    for (const auto& c : classes) choices.push_back(base.entities(individual[c] ? Sort::Individual : Sort::Group));
    std::vector<std::size_t> idx(classes.size(), 0);
    while (true) {
      Embedding f;
      for (const auto& t : terms) {
        auto c = uf.find(t);
        auto at = std::find(classes.begin(), classes.end(), c) - classes.begin();
        f[t] = choices[static_cast<std::size_t>(at)][idx[static_cast<std::size_t>(at)]];
      }
      Model m = base;
      for (const auto& a : l.pos) {
        if (a.pred == "in" && a.args.size() == 2) continue;
        std::vector<Entity> v;
        for (const auto& t : a.args) v.push_back(f.at(key_of(t)));
        m.add(a.pred, sense_of(a), v);
      }
      bool ok = true;
      for (const auto& a : l.pos) ok = ok && atom_holds(m, a, f);
      for (const auto& a : l.neg) ok = ok && !atom_holds(m, a, f);
      if (ok) return ConsistentWitness{m, f};
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Is d verifiable in some model with at most `bound` atoms? A clash between
/// an atom and its negation over equated terms is reported without search.
/// Free referents and slot terms are read existentially.
inline Consistency check_consistency(const Drs& d, std::size_t bound, bool fast_path = true,
                                     const SweepOptions& so = {}) {
  if (fast_path)
    if (auto c = detail::find_clash(d)) return *c;
  if (auto lits = detail::literals(d)) {
    if (auto w = detail::minimal_model(*lits, d, bound)) return *w;
    return NoModelUpTo{bound, true};
  }
  auto fr = free_referents(d);
  std::vector<std::string> keys(fr.begin(), fr.end());
  std::optional<ConsistentWitness> found;
  auto sweep = sweep_models(signature_of({d}), bound, [&](const Model& m) {
    for (const auto& f : detail::extensions(m, {}, keys))
      if (verify_drs(m, d, f)) {
        found = ConsistentWitness{m, f};
        return false;
      }
    return true;
  }, so);
  if (found) return *found;
  return NoModelUpTo{bound, sweep.exhaustive};
}

}  // namespace udrs
