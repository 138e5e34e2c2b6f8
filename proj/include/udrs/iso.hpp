#pragma once

// Isomorphisms between UDRS-clauses, the precondition for coindexing them.

#include <map>
#include <optional>
#include <string>

#include "udrs/order.hpp"
#include "udrs/types.hpp"

namespace udrs {

/// Bijection from the labels of one clause (its components, their boxes and
/// embedded clauses) onto another's.
struct ClauseIso {
  std::map<Label, Label> map;

  const Label& operator()(const Label& l) const {
    auto it = map.find(l);
    if (it == map.end()) throw Error(ErrorCode::UnknownLabel, l + " is outside the isomorphism");
    return it->second;
  }
  bool covers(const Label& l) const { return map.count(l) != 0; }
  friend bool operator==(const ClauseIso&, const ClauseIso&) = default;
};

namespace detail {

struct IsoBuilder {
  const Udrs& ua;
  const Udrs& ub;
  ClauseIso iso;
  std::set<Label> image;
  std::set<Label> clause_labels;

  bool bind(const Label& a, const Label& b) {
    if (auto it = iso.map.find(a); it != iso.map.end()) return it->second == b;
    if (image.count(b)) return false;
    iso.map.emplace(a, b);
    image.insert(b);
    return true;
  }

  static int cond_kind(const Condition& c) { return static_cast<int>(c.index()); }

  bool component(const Label& a, const Label& b) {
    if (!bind(a, b)) return false;
    const auto* ca = ua.find(a);
    const auto* cb = ub.find(b);
    if (!ca || !cb) return false;
    if (ca->universe.size() != cb->universe.size() || ca->conds.size() != cb->conds.size()) return false;
    if (ca->plural.potential != cb->plural.potential || ca->plural.options != cb->plural.options ||
        ca->plural.status != cb->plural.status)
      return false;
    if (ca->distinguished.has_value() != cb->distinguished.has_value()) return false;
    if (ca->distinguished) {
      if (ca->distinguished->index() != cb->distinguished->index()) return false;
      if (auto* qa = std::get_if<Quant>(&*ca->distinguished))
        if (qa->q != std::get<Quant>(*cb->distinguished).q) return false;
    }
    for (std::size_t i = 0; i < ca->conds.size(); ++i) {
      if (cond_kind(ca->conds[i]) != cond_kind(cb->conds[i])) return false;
      if (auto* x = std::get_if<Atom>(&ca->conds[i]))
        if (x->senses != std::get<Atom>(cb->conds[i]).senses) return false;
    }
    auto ba = sub_boxes(*ca), bb = sub_boxes(*cb);
    if (ba.size() != bb.size()) return false;
    for (std::size_t i = 0; i < ba.size(); ++i)
      if (!component(ba[i], bb[i])) return false;
    auto ka = subclauses_of(*ca), kb = subclauses_of(*cb);
    if (ka.size() != kb.size()) return false;
    for (std::size_t i = 0; i < ka.size(); ++i)
      if (!clause(ka[i], kb[i])) return false;
    return true;
  }

  bool clause(const Label& a, const Label& b) {
    const auto* ka = ua.find_clause(a);
    const auto* kb = ub.find_clause(b);
    if (!ka || !kb || ka->components.size() != kb->components.size()) return false;
    if (!bind(a, b)) return false;
    clause_labels.insert(a);
    for (std::size_t i = 0; i < ka->components.size(); ++i)
      if (!component(ka->components[i], kb->components[i])) return false;
    return true;
  }
};

}  // namespace detail

/// The isomorphism between clause l and clause k, if their component
/// structure matches and the orders agree on the mapped components.
/// Clause labels themselves are mapped but their order relations are not
/// compared: where a clause sits in its UDRS is not part of its shape.
inline std::optional<ClauseIso> clause_isomorphism(const UdrsDatabase& db, const Label& l, const Label& k) {
  const Udrs* ua = db.owner(l);
  const Udrs* ub = db.owner(k);
  if (!ua || !ub) throw Error(ErrorCode::UnknownLabel, ua ? k : l);
  if (!ua->find_clause(l)) throw Error(ErrorCode::NotAClause, l);
  if (!ub->find_clause(k)) throw Error(ErrorCode::NotAClause, k);
  detail::IsoBuilder b{*ua, *ub, {}, {}, {}};
  if (!b.clause(l, k)) return std::nullopt;
  const auto ca = closure(*ua);
  const auto cb = closure(*ub);
  for (const auto& [x, x2] : b.iso.map) {
    if (b.clause_labels.count(x)) continue;
    for (const auto& [y, y2] : b.iso.map) {
      if (b.clause_labels.count(y)) continue;
      if (ca.leq(x, y) != cb.leq(x2, y2)) return std::nullopt;
    }
  }
  return b.iso;
}

}  // namespace udrs
