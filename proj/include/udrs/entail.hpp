#pragma once

// Bounded consequence over index-respecting families of readings.

#include <algorithm>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "udrs/iso.hpp"
#include "udrs/readings.hpp"
#include "udrs/semantics.hpp"
#include "udrs/verify.hpp"

namespace udrs {

/// Tags clauses l and k with index i, and every pair of embedded clauses
/// the isomorphism matches with an index derived from i.
inline UdrsDatabase coindex(const UdrsDatabase& db, const Label& l, const Label& k, const std::string& i) {
  auto iso = clause_isomorphism(db, l, k);
  if (!iso) throw Error(ErrorCode::NoIsomorphism, "clauses " + l + " and " + k + " are not isomorphic");
  UdrsDatabase out = db;
  const Udrs* ua = db.owner(l);
  for (const auto& [a, b] : iso->map) {
    if (!ua->find_clause(a)) continue;
    std::string idx = a == l ? i : i + "/" + a;
    for (Udrs* u : out.all_mut())
      for (auto& cl : u->clauses)
        if (cl.label == a || cl.label == b) cl.coindex = idx;
  }
  return out;
}

struct ConsequenceReport {
  bool holds = true;
  bool exhaustive = true;  // every model up to the bound was visited
  std::size_t bound = 0;
  std::size_t families = 0;  // admissible readings of the whole database
  std::size_t models = 0;
  std::optional<Reading> reading;  // counterexample family
  std::optional<Model> model;      // and model
  std::vector<Drs> drss;           // the counterexample's extracted DRSs

  explicit operator bool() const { return holds; }
};

namespace detail {

struct Probe {
  bool failed = false;
  bool exhaustive = true;
  std::size_t models = 0;
  std::optional<Model> model;
};

/// Searches the models of the signature for one where premises hold and
/// the whole does not.
inline Probe probe(const Signature& sig, const Drs& premises, const Drs& whole, std::size_t bound,
                   const EvalOptions& opt, const SweepOptions& so) {
  Probe p;
  auto sw = sweep_models(sig, bound, [&](const Model& m) {
    if (verify_drs(m, premises, {}, opt) && !verify_drs(m, whole, {}, opt)) {
      p.failed = true;
      p.model = m;
      return false;
    }
    return true;
  }, so);
  p.exhaustive = sw.exhaustive;
  p.models = sw.visited;
  return p;
}

/// Checks every reading in parallel chunks; the lowest-numbered
/// counterexample is reported so the verdict does not depend on timing.
inline ConsequenceReport consequence(const UdrsDatabase& whole, std::size_t premise_count, std::size_t bound,
                                     const EvalOptions& opt, const SweepOptions& so) {
  ConsequenceReport rep;
  rep.bound = bound;
  auto readings = enumerate_readings(whole);
  rep.families = readings.size();
  std::vector<std::vector<Drs>> parts;
  std::vector<Drs> flat;
  for (const auto& r : readings) {
    parts.push_back(apply_reading(whole, r));
    flat.insert(flat.end(), parts.back().begin(), parts.back().end());
  }
  const Signature sig = signature_of(flat);
  auto check = [&](std::size_t i) {
    const auto& ds = parts[i];
    Drs prem = merge_drs({ds.begin(), ds.begin() + static_cast<std::ptrdiff_t>(premise_count)});
    return probe(sig, prem, merge_drs(ds), bound, opt, so);
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
  std::vector<Probe> results(readings.size());
  for (std::size_t start = 0; start < readings.size(); start += workers) {
    std::vector<std::future<Probe>> fs;
    const std::size_t end = std::min(readings.size(), start + workers);
    for (std::size_t i = start; i < end; ++i) fs.push_back(std::async(std::launch::async, check, i));
    for (std::size_t i = start; i < end; ++i) results[i] = fs[i - start].get();
    for (std::size_t i = start; i < end; ++i) {
      rep.models += results[i].models;
      rep.exhaustive = rep.exhaustive && results[i].exhaustive;
      if (results[i].failed) {
        rep.holds = false;
        rep.reading = readings[i];
        rep.model = results[i].model;
        rep.drss = parts[i];
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace detail

/// db entails goal if, for every admissible reading of db followed by goal
/// and every model with at most `bound` atoms, truth of db carries over to
/// the whole discourse. The verdict is relative to the bound.
inline ConsequenceReport entails(const UdrsDatabase& db, const Udrs& goal, std::size_t bound,
                                 const EvalOptions& opt = {}, const SweepOptions& so = {}) {
  UdrsDatabase whole = db;
  if (whole.goal) {
    whole.sentences.push_back(*whole.goal);
    whole.goal.reset();
  }
  const std::size_t n = whole.sentences.size();
  whole.goal = goal;
  return detail::consequence(whole, n, bound, opt, so);
}

/// Uses the database's own goal.
inline ConsequenceReport entails(const UdrsDatabase& db, std::size_t bound, const EvalOptions& opt = {},
                                 const SweepOptions& so = {}) {
  if (!db.goal) throw Error(ErrorCode::InvalidArgument, "database has no goal");
  UdrsDatabase premises = db;
  premises.goal.reset();
  return entails(premises, *db.goal, bound, opt, so);
}

/// Every reading of goal is true in every model up to the bound.
inline ConsequenceReport tautology(const Udrs& goal, std::size_t bound, const EvalOptions& opt = {},
                                   const SweepOptions& so = {}) {
  return entails(UdrsDatabase{}, goal, bound, opt, so);
}

inline ConsequenceReport tautology(const UdrsDatabase& db, const Udrs& goal, std::size_t bound,
                                   const EvalOptions& opt = {}, const SweepOptions& so = {}) {
  UdrsDatabase lex;
  lex.lexicon = db.lexicon;
  return entails(lex, goal, bound, opt, so);
}

}  // namespace udrs
