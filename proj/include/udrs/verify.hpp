#pragma once

// Standard truth conditions for fully specified DRSs, plus finite model
// families to sweep over. Everything here works on Drs values and knows
// nothing about labels or readings.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "udrs/drs.hpp"
#include "udrs/error.hpp"
#include "udrs/model.hpp"

namespace udrs {

/// How GEN is verified. The default reads it as a strict majority.
enum class GenMode { StrictMajority, Universal, Existential };

struct EvalOptions {
  GenMode gen = GenMode::StrictMajority;
};

/// Partial map from referents (and slot terms, keyed "alpha(X)") to entities.
using Embedding = std::map<std::string, Entity>;

inline std::string key_of(const Term& t) { return t.is_slot() ? t.str() : t.ref.name; }

/// Can an entity be the value of a referent of sort s? Groups may be
/// singletons, so only individuals are restricted.
inline bool sort_admits(Sort s, Entity e) { return s != Sort::Individual || Model::is_atom(e); }

inline Sort sort_of_key(const std::string& key) {
  if (key.find('(') != std::string::npos) return Sort::Neutral;
  return sort_for_name(key);
}

/// Counts a generalized quantifier: a restrictor witnesses, b of them also
/// verify the scope.
inline bool quantifier_holds(const std::string& q, std::size_t a, std::size_t b, const EvalOptions& opt = {}) {
  if (q == "every" || q == "all") return a == b;
  if (q == "some" || q == "a") return b >= 1;
  if (q == "no") return b == 0;
  if (q == "most") return 2 * b > a;
  if (q == "few") return 2 * b < a;
  if (q == "GEN") {
    switch (opt.gen) {
      case GenMode::StrictMajority: return 2 * b > a;
      case GenMode::Universal: return a == b;
      case GenMode::Existential: return b >= 1;
    }
  }
  if (q.rfind("geq", 0) == 0 && q.size() > 3 &&
      std::all_of(q.begin() + 3, q.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return b >= std::stoul(q.substr(3));
  throw Error(ErrorCode::InvalidArgument, "unknown quantifier " + q);
}

namespace detail {

inline Entity value_of(const Term& t, const Embedding& f) {
  auto it = f.find(key_of(t));
  if (it == f.end()) throw Error(ErrorCode::UnboundReferent, key_of(t));
  return it->second;
}

/// All ways of extending f to the given keys, respecting sorts. Keys already
/// in f are re-assigned: an inner universe shadows an outer one.
inline std::vector<Embedding> extensions(const Model& m, const Embedding& f, const std::vector<std::string>& keys) {
  std::vector<Embedding> out{f};
  for (const auto& k : keys) {
    std::vector<Embedding> next;
    for (Entity e : m.entities(sort_of_key(k)))
      for (const auto& g : out) {
        Embedding h = g;
        h[k] = e;
        next.push_back(std::move(h));
      }
    out = std::move(next);
  }
  return out;
}

inline bool atom_holds(const Model& m, const Atom& a, const Embedding& f) {
  std::vector<Entity> args;
  args.reserve(a.args.size());
  for (const auto& t : a.args) args.push_back(value_of(t, f));
  bool v;
  if (a.pred == "in" && args.size() == 2) v = Model::member(args[0], args[1]);
  else v = m.holds(a.pred, sense_of(a), args);
  return v != a.negated;
}

struct Verifier {
  const Model& m;
  EvalOptions opt;

  struct Schedule {
    std::vector<std::string> keys;
    std::vector<std::vector<const DCond*>> at;  // conditions testable after i keys
  };
  mutable std::map<std::pair<const Drs*, std::string>, Schedule> schedules{};

  /// `extra` is a referent quantified over together with d's universe,
  /// placed first (quantifiers) or last (abstractions) when d lacks it.
  const Schedule& schedule(const Drs& d, const std::string& extra, bool first) const {
    auto it = schedules.find({&d, extra});
    if (it != schedules.end()) return it->second;
    Schedule s;
    if (!extra.empty() && first && !d.declares(extra)) s.keys.push_back(extra);
    for (const auto& r : d.universe)
      if (std::find(s.keys.begin(), s.keys.end(), r.name) == s.keys.end()) s.keys.push_back(r.name);
    if (!extra.empty() && !first && !d.declares(extra)) s.keys.push_back(extra);
    s.at.resize(s.keys.size() + 1);
    for (const auto& c : d.conds) {
      Drs probe;
      probe.conds.push_back(c);
      std::size_t level = 0;
      for (const auto& k : free_referents(probe)) {
        auto at = std::find(s.keys.begin(), s.keys.end(), k);
        if (at != s.keys.end()) level = std::max(level, static_cast<std::size_t>(at - s.keys.begin()) + 1);
      }
      s.at[level].push_back(&c);
    }
    return schedules.emplace(std::make_pair(&d, extra), std::move(s)).first->second;
  }

  /// Extends f over d's universe one referent at a time, testing each
  /// condition as soon as the referents it mentions are assigned. `leaf`
  /// sees every verifying extension and returns true to stop the search.
  template <class Leaf>
  bool search(const Drs& d, const Embedding& f, Leaf&& leaf, const std::string& extra = {},
              bool first = true) const {
    const Schedule& sc = schedule(d, extra, first);
    const auto& keys = sc.keys;
    const auto& at = sc.at;
    Embedding g = f;
    auto step = [&](auto&& self, std::size_t i) -> bool {
      for (const auto* c : at[i])
        if (!holds(*c, g)) return false;
      if (i == keys.size()) return leaf(g);
      for (Entity e : m.entities(sort_of_key(keys[i]))) {
        g[keys[i]] = e;
        if (self(self, i + 1)) return true;
      }
      return false;
    };
    return step(step, 0);
  }

  std::vector<Embedding> satisfy(const Drs& d, const Embedding& f, const std::string& extra = {},
                                 bool first = true) const {
    std::vector<Embedding> out;
    search(d, f, [&](const Embedding& g) {
      out.push_back(g);
      return false;
    }, extra, first);
    return out;
  }

  bool some(const Drs& d, const Embedding& f) const {
    return search(d, f, [](const Embedding&) { return true; });
  }

  bool conds_hold(const std::vector<DCond>& cs, const Embedding& g) const {
    for (const auto& c : cs)
      if (!holds(c, g)) return false;
    return true;
  }

  bool holds(const DCond& c, const Embedding& g) const {
    if (auto* a = std::get_if<Atom>(&c)) return atom_holds(m, *a, g);
    if (auto* e = std::get_if<Eq>(&c)) return value_of(e->lhs, g) == value_of(e->rhs, g);
    if (auto* n = std::get_if<DNeg>(&c)) return !some(*n->inner, g);
    if (auto* i = std::get_if<DImpl>(&c)) {
      for (const auto& h : satisfy(*i->res, g))
        if (!some(*i->scope, h)) return false;
      return true;
    }
    if (auto* q = std::get_if<DQuant>(&c)) return quant(*q, g);
    if (auto* cd = std::get_if<DCum>(&c)) return cumulative(*cd, g);
    if (auto* s = std::get_if<DSum>(&c)) return sum(*s, g);
    return false;
  }

  bool quant(const DQuant& q, const Embedding& g) const {
    std::map<Entity, bool> verdict;  // witness -> every restrictor embedding reaches the scope
    for (const auto& h : satisfy(*q.res, g, q.var.name, true)) {
      Entity b = h.at(q.var.name);
      bool ok = some(*q.scope, h);
      auto [it, fresh] = verdict.emplace(b, ok);
      if (!fresh) it->second = it->second && ok;
    }
    std::size_t b = 0;
    for (const auto& [_, ok] : verdict) b += ok;
    return quantifier_holds(q.q, verdict.size(), b, opt);
  }

  bool cumulative(const DCum& cd, const Embedding& g) const {
    auto r1 = satisfy(*cd.res1, g);
    auto r2 = satisfy(*cd.res2, g);
    std::vector<char> left(r1.size(), 0), right(r2.size(), 0);
    for (std::size_t i = 0; i < r1.size(); ++i)
      for (std::size_t j = 0; j < r2.size(); ++j) {
        if (left[i] && right[j]) continue;
        Embedding h = r1[i];
        for (const auto& [k, v] : r2[j]) h[k] = v;
        if (some(*cd.scope, h)) left[i] = right[j] = 1;
      }
    return std::all_of(left.begin(), left.end(), [](char c) { return c; }) &&
           std::all_of(right.begin(), right.end(), [](char c) { return c; });
  }

  /// The witnesses b of a sum condition, as a join.
  std::optional<Entity> sum_witness(const DSum& s, const Embedding& g) const {
    Entity w = 0;
    for (const auto& h : satisfy(*s.body, g, s.var.name, false)) w = Model::join(w, h.at(s.var.name));
    if (w == 0) return std::nullopt;
    return w;
  }

  // Witnesses missing under this particular g only make the condition false;
  // an abstraction with no witness at all is caught up front by check_abstractions.
  bool sum(const DSum& s, const Embedding& g) const {
    auto w = sum_witness(s, g);
    return w && value_of(Term(s.target), g) == *w;
  }

  /// Does some assignment to the body's free referents give s a witness?
  bool has_witness(const DSum& s, const Embedding& f) const {
    std::vector<std::string> keys;
    for (const auto& k : free_referents(*s.body))
      if (k != s.var.name && !f.count(k)) keys.push_back(k);
    for (const auto& g : extensions(m, f, keys))
      if (sum_witness(s, g)) return true;
    return false;
  }

  void check_abstractions(const Drs& d, const Embedding& f) const {
    auto sub = [&](const Box& b) { check_abstractions(*b, f); };
    for (const auto& c : d.conds) {
      if (auto* n = std::get_if<DNeg>(&c)) sub(n->inner);
      else if (auto* i = std::get_if<DImpl>(&c)) sub(i->res), sub(i->scope);
      else if (auto* q = std::get_if<DQuant>(&c)) sub(q->res), sub(q->scope);
      else if (auto* cd = std::get_if<DCum>(&c)) sub(cd->res1), sub(cd->res2), sub(cd->scope);
      else if (auto* s = std::get_if<DSum>(&c)) {
        sub(s->body);
        if (!has_witness(*s, f))
          throw Error(ErrorCode::EmptyAbstraction, s->target.name + " = Sigma " + s->var.name + ": no witnesses");
      }
    }
  }
};

inline void require_bound(const Drs& d, const Embedding& f) {
  for (const auto& k : free_referents(d))
    if (!f.count(k)) throw Error(ErrorCode::UnboundReferent, k);
}

}  // namespace detail

/// Can f be extended to verify d in m? Free referents of d must be in dom(f).
inline bool verify_drs(const Model& m, const Drs& d, const Embedding& f = {}, const EvalOptions& opt = {}) {
  detail::require_bound(d, f);
  detail::Verifier v{m, opt};
  v.check_abstractions(d, f);
  return v.some(d, f);
}

/// All extensions of f to d's universe that verify d's conditions.
inline std::vector<Embedding> satisfying_embeddings(const Model& m, const Drs& d, const Embedding& f = {},
                                                    const EvalOptions& opt = {}) {
  detail::require_bound(d, f);
  detail::Verifier v{m, opt};
  v.check_abstractions(d, f);
  return v.satisfy(d, f);
}

/// Cumulative verification: every member of the first restrictor pairs with
/// some member of the second satisfying the scope, and vice versa.
inline bool verify_cumulative(const Model& m, const Embedding& f, const DCum& cd, const EvalOptions& opt = {}) {
  Drs host;
  host.conds.push_back(cd);
  detail::require_bound(host, f);
  return detail::Verifier{m, opt}.cumulative(cd, f);
}

// ---------------------------------------------------------------------------
// Model families

/// Predicates (with sense) a DRS mentions and the sorts of their argument
/// positions. A position is individual only if every occurrence is.
struct Signature {
  std::map<std::pair<std::string, std::string>, std::vector<Sort>> preds;

  void add(const Atom& a) {
    if (a.pred == "in" && a.args.size() == 2) return;
    auto& s = preds[{a.pred, sense_of(a)}];
    if (s.empty()) {
      for (const auto& t : a.args) s.push_back(t.is_slot() ? Sort::Neutral : t.ref.sort);
      return;
    }
    if (s.size() != a.args.size()) throw Error(ErrorCode::InvalidArgument, "arity clash for " + a.pred);
    for (std::size_t i = 0; i < s.size(); ++i) {
      Sort t = a.args[i].is_slot() ? Sort::Neutral : a.args[i].ref.sort;
      if (t != Sort::Individual) s[i] = Sort::Neutral;
    }
  }
  void add(const Drs& d) {
    for (const auto& c : d.conds) {
      if (auto* a = std::get_if<Atom>(&c)) add(*a);
      else if (auto* n = std::get_if<DNeg>(&c)) add(*n->inner);
      else if (auto* i = std::get_if<DImpl>(&c)) { add(*i->res); add(*i->scope); }
      else if (auto* q = std::get_if<DQuant>(&c)) { add(*q->res); add(*q->scope); }
      else if (auto* cd = std::get_if<DCum>(&c)) { add(*cd->res1); add(*cd->res2); add(*cd->scope); }
      else if (auto* s = std::get_if<DSum>(&c)) add(*s->body);
    }
  }
};

inline Signature signature_of(const std::vector<Drs>& ds) {
  Signature s;
  for (const auto& d : ds) s.add(d);
  return s;
}

/// Visits models until the visitor returns false.
using ModelVisitor = std::function<bool(const Model&)>;
using ModelFamily = std::function<void(const ModelVisitor&)>;

struct SweepOptions {
  std::size_t exhaustive_bits = 21;  // above this many tuple slots, sample
  // Visit one model per orbit under permutations of the atoms. Sound for
  // every check here, since no formula names a particular atom.
  bool symmetry = true;
  std::size_t samples = 4096;
  unsigned seed = 20261014;
};

namespace detail {

inline std::vector<std::string> atom_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("a" + std::to_string(i + 1));
  return out;
}

struct TupleSpace {
  std::vector<std::pair<std::pair<std::string, std::string>, std::vector<Entity>>> slots;

  TupleSpace(const Model& base, const Signature& sig) {
    for (const auto& [p, sorts] : sig.preds) {
      std::vector<std::vector<Entity>> tuples{{}};
      for (Sort s : sorts) {
        std::vector<std::vector<Entity>> next;
        for (const auto& t : tuples)
          for (Entity e : base.entities(s)) {
            auto u = t;
            u.push_back(e);
            next.push_back(std::move(u));
          }
        tuples = std::move(next);
      }
      for (auto& t : tuples) slots.emplace_back(p, std::move(t));
    }
  }

  /// perms[p][i]: the slot that slot i moves to under the p-th
  /// permutation of the atoms (identity excluded).
  std::vector<std::vector<std::size_t>> permutations(std::size_t n) const {
    std::map<std::pair<std::pair<std::string, std::string>, std::vector<Entity>>, std::size_t> index;
    for (std::size_t i = 0; i < slots.size(); ++i) index.emplace(slots[i], i);
    std::vector<std::size_t> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = i;
    std::vector<std::vector<std::size_t>> out;
    while (std::next_permutation(sigma.begin(), sigma.end())) {
      auto move = [&](Entity e) {
        Entity r = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (e & (Entity{1} << i)) r |= Entity{1} << sigma[i];
        return r;
      };
      std::vector<std::size_t> p(slots.size());
      for (std::size_t i = 0; i < slots.size(); ++i) {
        auto t = slots[i];
        for (auto& e : t.second) e = move(e);
        p[i] = index.at(t);
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  Model build(const Model& base, const std::vector<bool>& bits) const {
    Model m = base;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (bits[i]) m.add(slots[i].first.first, slots[i].first.second, slots[i].second);
    return m;
  }
};

}  // namespace detail

/// Every model over 1..bound atoms for the signature, or a seeded sample
/// for sizes whose extension space exceeds the exhaustive cap.
struct Sweep {
  bool exhaustive = true;
  std::size_t visited = 0;
};

inline Sweep sweep_models(const Signature& sig, std::size_t bound, const ModelVisitor& visit,
                          const SweepOptions& so = {}) {
  Sweep out;
  std::mt19937_64 rng(so.seed);
  for (std::size_t n = 1; n <= bound; ++n) {
    Model base;
    base.atoms = detail::atom_names(n);
    detail::TupleSpace space(base, sig);
    const std::size_t k = space.slots.size();
    std::vector<bool> bits(k, false);
    if (k <= so.exhaustive_bits) {
      const auto perms = so.symmetry ? space.permutations(n) : std::vector<std::vector<std::size_t>>{};
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        bool least = true;
        for (std::size_t p = 0; p < perms.size() && least; ++p) {
          std::uint64_t image = 0;
          for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1u) image |= std::uint64_t{1} << perms[p][i];
          least = image >= mask;
        }
        if (!least) continue;
        for (std::size_t i = 0; i < k; ++i) bits[i] = (mask >> i) & 1u;
        ++out.visited;
        if (!visit(space.build(base, bits))) return out;
      }
    } else {
      out.exhaustive = false;
      std::bernoulli_distribution coin(0.5);
      // the two extreme models first, then random ones
      for (std::size_t s = 0; s < so.samples + 2; ++s) {
        for (std::size_t i = 0; i < k; ++i) bits[i] = s == 0 ? false : s == 1 ? true : coin(rng);
        ++out.visited;
        if (!visit(space.build(base, bits))) return out;
      }
    }
  }
  return out;
}

inline ModelFamily models_up_to(const Signature& sig, std::size_t bound, const SweepOptions& so = {}) {
  return [=](const ModelVisitor& v) { sweep_models(sig, bound, v, so); };
}

// ---------------------------------------------------------------------------
// Equivalence

struct Equivalence {
  bool equivalent = true;
  bool exhaustive = true;
  std::size_t models = 0;
  std::optional<Model> witness;
  std::optional<Embedding> witness_embedding;

  explicit operator bool() const { return equivalent; }
};

namespace detail {

inline bool same_on(const Model& m, const Drs& a, const Drs& b, Equivalence& out, const EvalOptions& opt) {
  std::set<std::string> fr = free_referents(a);
  for (const auto& k : free_referents(b)) fr.insert(k);
  std::vector<std::string> keys(fr.begin(), fr.end());
  ++out.models;
  for (const auto& f : extensions(m, {}, keys)) {
    if (verify_drs(m, a, f, opt) != verify_drs(m, b, f, opt)) {
      out.equivalent = false;
      out.witness = m;
      out.witness_embedding = f;
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Do a and b hold under the same (model, embedding) pairs, for every model
/// of the family?
inline Equivalence drs_equivalent(const Drs& a, const Drs& b, const ModelFamily& family, const EvalOptions& opt = {}) {
  Equivalence out;
  family([&](const Model& m) { return detail::same_on(m, a, b, out, opt); });
  return out;
}

/// Sweep over all models with 1..bound atoms for the joint signature.
inline Equivalence drs_equivalent(const Drs& a, const Drs& b, std::size_t bound, const EvalOptions& opt = {},
                                  const SweepOptions& so = {}) {
  Equivalence out;
  auto sweep = sweep_models(signature_of({a, b}), bound,
                            [&](const Model& m) { return detail::same_on(m, a, b, out, opt); }, so);
  out.exhaustive = sweep.exhaustive;
  return out;
}

}  // namespace udrs
