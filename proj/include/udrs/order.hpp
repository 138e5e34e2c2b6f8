#pragma once

// Partial orders over labels: closure, the structural facts every UDRS
// carries implicitly, monotonic constraint addition and enumeration of the
// linear extensions of a clause.

#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "udrs/types.hpp"

namespace udrs {

/// Reflexive-transitive closure over a fixed label set.
class ClosedOrder {
 public:
  ClosedOrder() = default;

  ClosedOrder(std::vector<Label> labels, const std::vector<std::pair<Label, Label>>& pairs)
      : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    for (std::size_t i = 0; i < labels_.size(); ++i) index_[labels_[i]] = i;
    for (const auto& [a, b] : pairs) {
      intern(a);
      intern(b);
    }
    const std::size_t n = labels_.size();
    leq_.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) leq_[i][i] = 1;
    for (const auto& [a, b] : pairs) leq_[index_.at(a)][index_.at(b)] = 1;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (leq_[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (leq_[k][j]) leq_[i][j] = 1;
  }

  const std::vector<Label>& labels() const { return labels_; }
  bool contains(const Label& l) const { return index_.count(l) != 0; }

  bool leq(const Label& a, const Label& b) const {
    auto ia = index_.find(a), ib = index_.find(b);
    if (ia == index_.end() || ib == index_.end()) return a == b;
    return leq_[ia->second][ib->second] != 0;
  }
  bool lt(const Label& a, const Label& b) const { return leq(a, b) && !leq(b, a); }
  bool equiv(const Label& a, const Label& b) const { return leq(a, b) && leq(b, a); }

  /// Canonical representative of the ~-class: the lexicographically least label.
  const Label& representative(const Label& l) const {
    for (const auto& m : labels_)
      if (equiv(m, l)) return m;
    return l;
  }

  std::vector<std::pair<Label, Label>> all_pairs() const {
    std::vector<std::pair<Label, Label>> out;
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = 0; j < labels_.size(); ++j)
        if (leq_[i][j]) out.emplace_back(labels_[i], labels_[j]);
    return out;
  }

 private:
  void intern(const Label& l) {
    if (index_.count(l)) return;
    index_[l] = labels_.size();
    labels_.push_back(l);
  }

  std::vector<Label> labels_;
  std::map<Label, std::size_t> index_;
  std::vector<std::vector<char>> leq_;
};

/// Reflexive-transitive closure of an order, as an order. Idempotent.
inline Ord close(const Ord& o) {
  std::vector<Label> labels;
  for (const auto& [a, b] : o.pairs) {
    labels.push_back(a);
    labels.push_back(b);
  }
  ClosedOrder c(labels, {o.pairs.begin(), o.pairs.end()});
  Ord out;
  for (auto& p : c.all_pairs()) out.pairs.insert(std::move(p));
  return out;
}

/// Facts every UDRS contains without listing them in ORD: restrictor and
/// scope below their component, embedded clauses identified with the box
/// holding them, clause nodes below their clause, everything below the top.
inline std::vector<std::pair<Label, Label>> structural_facts(const Udrs& u) {
  std::vector<std::pair<Label, Label>> out;
  for (const auto& [l, c] : u.components) {
    for (const auto& b : sub_boxes(c)) out.emplace_back(b, l);
    for (const auto& k : subclauses_of(c)) {
      out.emplace_back(k, l);
      out.emplace_back(l, k);
    }
    out.emplace_back(l, u.top);
  }
  for (const auto& cl : u.clauses) {
    out.emplace_back(cl.label, u.top);
    for (const auto& n : cl.components) out.emplace_back(n, cl.label);
  }
  return out;
}

inline ClosedOrder closure(const Udrs& u) {
  auto pairs = structural_facts(u);
  pairs.insert(pairs.end(), u.ord.pairs.begin(), u.ord.pairs.end());
  return ClosedOrder(u.labels(), pairs);
}

// ---------------------------------------------------------------------------
// Well-formedness of the order

/// One breach of a well-formedness condition. `code` names the condition
/// that fails, e.g. "box.placement".
struct Violation {
  std::string code;
  Label label;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
  friend bool operator<(const Violation& a, const Violation& b) {
    return std::tie(a.code, a.label, a.message) < std::tie(b.code, b.label, b.message);
  }
};

/// The order-sensitive part of well-formedness: the conditions that adding a
/// constraint can break.
inline std::vector<Violation> order_violations(const Udrs& u, const ClosedOrder& c) {
  std::vector<Violation> out;
  const auto labels = c.labels();
  for (const auto& [l, comp] : u.components) {
    if (!comp.distinguished) continue;
    if (auto* n = std::get_if<Neg>(&*comp.distinguished)) {
      if (!c.lt(n->inner, l))
        out.push_back({"box.negation", l, "negated box " + n->inner + " is not strictly below " + l});
      continue;
    }
    std::vector<Label> boxes = restrictors_of(comp);
    boxes.push_back(*scope_of(comp));
    for (const auto& b : boxes)
      if (!c.lt(b, l))
        out.push_back({"box.strict", l, b + " is not strictly below " + l});
    for (std::size_t i = 0; i < boxes.size(); ++i)
      for (std::size_t j = i + 1; j < boxes.size(); ++j) {
        if (boxes[i] == boxes[j]) {
          out.push_back({"box.placement", l, "restrictor and scope coincide"});
          continue;
        }
        for (const auto& k : labels)
          if (c.leq(k, boxes[i]) && c.leq(k, boxes[j])) {
            out.push_back({"box.placement", l,
                           k + " is below both " + boxes[i] + " and " + boxes[j]});
            break;
          }
      }
  }
  for (const auto& cl : u.clauses)
    for (const auto& n : cl.nodes())
      if (auto* comp = u.find(n); comp && is_quantificational(*comp) && c.leq(cl.label, n))
        out.push_back({"quantifier.clause", n, "quantifier reaches above its clause " + cl.label});
  // one-element top
  for (const auto& l : labels)
    if (!c.leq(l, u.top)) out.push_back({"top.reach", l, l + " is not below the top"});
  for (const auto& l : labels)
    if (l != u.top && c.leq(u.top, l))
      out.push_back({"top.reach", l, "top is identified with " + l});
  // Pairwise least upper bounds are not demanded here: a partial order on
  // the way to a reading may leave two upper bounds unordered that every
  // reading orders. Readings are trees, where they exist by construction.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

/// First violation in `after` whose (code, label) does not occur in `before`.
/// Messages are ignored because they name an arbitrary witness.
inline const Violation* first_new_violation(const std::vector<Violation>& before,
                                            const std::vector<Violation>& after) {
  for (const auto& v : after) {
    bool old = std::any_of(before.begin(), before.end(),
                           [&](const Violation& w) { return w.code == v.code && w.label == v.label; });
    if (!old) return &v;
  }
  return nullptr;
}

}  // namespace detail

inline ErrorCode error_for(const Violation& v) {
  if (v.code == "box.placement") return ErrorCode::LowerBoundViolation;
  if (v.code.rfind("top.", 0) == 0) return ErrorCode::SemilatticeViolation;
  return ErrorCode::ClauseEscape;
}

/// Adds a <= b and re-closes. Rejection is atomic: the input is untouched and
/// the error names the first condition the new fact breaks.
inline Udrs add_constraint(const Udrs& u, const Label& a, const Label& b) {
  if (!u.has_label(a)) throw Error(ErrorCode::UnknownLabel, a);
  if (!u.has_label(b)) throw Error(ErrorCode::UnknownLabel, b);
  auto before = order_violations(u, closure(u));
  Udrs out = u;
  out.ord.pairs.emplace(a, b);
  auto after = order_violations(out, closure(out));
  if (const auto* v = detail::first_new_violation(before, after))
    throw Error(error_for(*v), v->label + ": " + v->message + " (after adding " + a + " <= " + b + ")");
  return out;
}

/// Resolves "scope(l)" / "res(l)" style references.
inline Label scope_label(const Udrs& u, const Label& l) {
  auto s = scope_of(u.at(l));
  if (!s) throw Error(ErrorCode::InvalidArgument, "scope(" + l + ") is undefined");
  return *s;
}
inline Label res_label(const Udrs& u, const Label& l) {
  auto r = res_of(u.at(l));
  if (!r) throw Error(ErrorCode::InvalidArgument, "res(" + l + ") is undefined");
  return *r;
}

// ---------------------------------------------------------------------------
// Linear extensions

namespace detail {
inline std::atomic<unsigned long> linear_extension_calls{0};
}

/// Number of times linear_extensions ran; lets callers assert that a verdict
/// was reached without scope enumeration.
inline unsigned long linear_extension_calls() { return detail::linear_extension_calls.load(); }

/// The ORD facts a total order of clause nodes contributes: every node sits
/// in the scope of its predecessor, the lower bound in the scope of the last.
inline std::vector<std::pair<Label, Label>> linearization_pairs(const Udrs& u,
                                                                const std::vector<Label>& lin) {
  std::vector<std::pair<Label, Label>> out;
  for (std::size_t i = 0; i + 1 < lin.size(); ++i) {
    const auto& c = u.at(lin[i]);
    out.emplace_back(lin[i + 1], scope_of(c).value_or(lin[i]));
  }
  return out;
}

/// All total orders of the clause's nodes that extend the UDRS order and keep
/// it well formed, lexicographic by label. Each order lists nodes outermost
/// first and ends with the lower bound.
inline std::vector<std::vector<Label>> linear_extensions(const Udrs& u, const Label& clause) {
  ++detail::linear_extension_calls;
  const UdrsClause* cl = u.find_clause(clause);
  if (!cl) throw Error(ErrorCode::NotAClause, clause);
  const auto c = closure(u);
  // a cumulated object node travels with its partner and is not ordered itself
  std::vector<Label> nodes;
  for (const auto& n : cl->nodes())
    if (!u.at(n).plural.cum_partner) nodes.push_back(n);
  std::sort(nodes.begin(), nodes.end());
  const auto base = order_violations(u, c);

  std::vector<std::vector<Label>> out;
  std::vector<Label> cur;
  std::vector<char> used(nodes.size(), 0);
  std::function<void()> rec = [&]() {
    if (cur.size() == nodes.size()) {
      std::vector<Label> lin = cur;
      lin.push_back(cl->lower_bound());
      Udrs tmp = u;
      for (auto& p : linearization_pairs(u, lin)) tmp.ord.pairs.insert(p);
      if (detail::first_new_violation(base, order_violations(tmp, closure(tmp)))) return;
      out.push_back(std::move(lin));
      return;
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (used[i]) continue;
      // every node strictly above nodes[i] must already be placed
      bool ok = true;
      for (std::size_t j = 0; j < nodes.size() && ok; ++j)
        if (!used[j] && j != i && c.lt(nodes[i], nodes[j])) ok = false;
      if (!ok) continue;
      used[i] = 1;
      cur.push_back(nodes[i]);
      rec();
      cur.pop_back();
      used[i] = 0;
    }
  };
  rec();
  return out;
}

}  // namespace udrs
