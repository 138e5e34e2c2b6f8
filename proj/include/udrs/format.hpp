#pragma once

// Line-oriented text for readings and verdicts. One block per reading:
//
//   reading 2
//   lin lt: l2 l1 l0
//   kind l1 d
//   tag l0 d
//   slot gamma(X) X
//   sense k0#0 lend
//   drs [| ...]
//   end
//
// Every line starts with its field name, so the output greps and diffs well.

#include <sstream>
#include <string>
#include <vector>

#include "udrs/entail.hpp"
#include "udrs/readings.hpp"
#include "udrs/semantics.hpp"
#include "udrs/textio.hpp"

namespace udrs {

inline std::string format_reading(const Reading& r, std::size_t number, const std::vector<Drs>& drss) {
  std::ostringstream os;
  os << "reading " << number << "\n";
  for (const auto& [cl, lin] : r.lin) {
    os << "lin " << cl << ":";
    for (const auto& l : lin) os << " " << l;
    os << "\n";
  }
  for (const auto& [l, k] : r.kinds) os << "kind " << l << " " << plural_letter(k) << "\n";
  for (const auto& [l, t] : r.tags) os << "tag " << l << " " << t.str() << "\n";
  for (const auto& [s, v] : r.slots) os << "slot " << s << " " << v << "\n";
  for (const auto& [k, s] : r.senses) os << "sense " << k << " " << s << "\n";
  for (const auto& d : drss) os << "drs " << print_drs(d) << "\n";
  os << "end\n";
  return os.str();
}

/// Count line followed by every reading; readings that leave a pronoun
/// open are listed without DRSs.
inline std::string format_readings(const UdrsDatabase& db, const std::vector<Reading>& rs) {
  std::ostringstream os;
  os << "readings " << rs.size() << "\n";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    std::vector<Drs> ds;
    try {
      ds = apply_reading(db, rs[i]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnresolvedPronoun) throw;
    }
    os << format_reading(rs[i], i + 1, ds);
  }
  return os.str();
}

inline std::string format_report(const ConsequenceReport& r) {
  std::ostringstream os;
  os << "verdict " << (r.holds ? "true" : "false") << "\n";
  os << "bound " << r.bound << (r.exhaustive ? " exhaustive" : " sampled") << "\n";
  os << "families " << r.families << "\n";
  os << "models " << r.models << "\n";
  if (r.reading) {
    os << "counterexample\n" << format_reading(*r.reading, 0, r.drss);
    os << "model\n" << print_model(*r.model);
  }
  return os.str();
}

inline std::string format_consistency(const Consistency& c) {
  std::ostringstream os;
  if (auto* w = std::get_if<ConsistentWitness>(&c)) {
    os << "consistent\nmodel\n" << print_model(w->model);
  } else if (auto* n = std::get_if<NoModelUpTo>(&c)) {
    os << "no model up to " << n->bound << (n->exhaustive ? " exhaustive" : " sampled") << "\n";
  } else {
    const auto& k = std::get<SyntacticClash>(c);
    Drs a, b;
    a.conds.push_back(k.positive);
    b.conds.push_back(k.negative);
    os << "clash " << print_drs(a) << " " << print_drs(b) << "\n";
  }
  return os.str();
}

}  // namespace udrs
