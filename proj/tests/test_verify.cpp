#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "support.hpp"

using namespace udrs;

namespace {

Signature sig(std::initializer_list<std::pair<std::string, std::vector<Sort>>> preds) {
  Signature s;
  for (const auto& [p, sorts] : preds) s.preds[{p, ""}] = sorts;
  return s;
}

// Canonical form of a model: the smallest rendering of its extensions over
// every renaming of the atoms.
std::string canonical(const Model& m) {
  const std::size_t n = m.atoms.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  bool first = true;
  do {
    auto move = [&](Entity e) {
      Entity r = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (e & (Entity{1} << i)) r |= Entity{1} << perm[i];
      return r;
    };
    std::set<std::string> lines;
    for (const auto& [key, tuples] : m.ext)
      for (const auto& t : tuples) {
        std::string s = key.first + ":";
        for (Entity e : t) s += std::to_string(move(e)) + ",";
        lines.insert(s);
      }
    std::string out = std::to_string(n) + "|";
    for (const auto& l : lines) out += l + ";";
    if (first || out < best) best = out;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<Model> collect(const Signature& s, std::size_t bound, const SweepOptions& so) {
  std::vector<Model> out;
  sweep_models(s, bound, [&](const Model& m) {
    out.push_back(m);
    return true;
  }, so);
  return out;
}

}  // namespace

TEST(Signature, SortsOfThirteen) {
  auto s = signature_of({testing_support::load_drs("13.drs")});
  ASSERT_EQ(s.preds.size(), 2u);
  EXPECT_EQ(s.preds.at({"human", ""}), (std::vector<Sort>{Sort::Individual}));
  EXPECT_EQ(s.preds.at({"pay", ""}), (std::vector<Sort>{Sort::Individual}));
}

TEST(Signature, MixedPositionsWidenAndMembershipIsBuiltIn) {
  auto s = signature_of({parse_drs("[X y | p(y, y), p(X, y), q(alpha(X)), [x | in(x, X)] => [ | r.s(x)]]")});
  EXPECT_EQ(s.preds.at({"p", ""}), (std::vector<Sort>{Sort::Neutral, Sort::Individual}));
  EXPECT_EQ(s.preds.at({"q", ""}), (std::vector<Sort>{Sort::Neutral}));
  EXPECT_EQ(s.preds.at({"r", "s"}), (std::vector<Sort>{Sort::Individual}));
  EXPECT_FALSE(s.preds.count({"in", ""}));
}

TEST(Signature, ArityClash) {
  try {
    signature_of({parse_drs("[x | p(x), p(x, x)]")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Sweep, WithoutSymmetryVisitsEveryModel) {
  SweepOptions so;
  so.symmetry = false;
  // one unary predicate: 2^n extensions for each size
  auto ms = collect(sig({{"p", {Sort::Individual}}}), 3, so);
  EXPECT_EQ(ms.size(), 2u + 4u + 8u);
  std::set<std::string> distinct;
  for (const auto& m : ms) distinct.insert(print_model(m));
  EXPECT_EQ(distinct.size(), ms.size());
}

TEST(Sweep, SymmetryKeepsOneModelPerOrbit) {
  // unary: orbits are counted by the size of the extension, n + 1 per size
  EXPECT_EQ(collect(sig({{"p", {Sort::Individual}}}), 3, {}).size(), 2u + 3u + 4u);
  // binary over two atoms: Burnside gives (16 + 4) / 2 orbits
  EXPECT_EQ(collect(sig({{"r", {Sort::Individual, Sort::Individual}}}), 2, {}).size(), 2u + 10u);
}

TEST(Sweep, SymmetryCoversTheSameOrbits) {
  const auto s = sig({{"r", {Sort::Individual, Sort::Individual}}, {"g", {Sort::Neutral}}});
  SweepOptions all;
  all.symmetry = false;
  std::set<std::string> full, reduced;
  for (const auto& m : collect(s, 2, all)) full.insert(canonical(m));
  std::vector<Model> rs = collect(s, 2, {});
  for (const auto& m : rs) reduced.insert(canonical(m));
  EXPECT_EQ(full, reduced);
  EXPECT_EQ(reduced.size(), rs.size());
}

TEST(Sweep, SamplesAboveTheCap) {
  SweepOptions so;
  so.exhaustive_bits = 3;
  so.samples = 10;
  const auto s = sig({{"r", {Sort::Individual, Sort::Individual}}});
  auto sw = sweep_models(s, 2, [](const Model&) { return true; }, so);
  EXPECT_FALSE(sw.exhaustive);
  // one atom has a single slot and is swept in full, two atoms are sampled
  EXPECT_EQ(sw.visited, 2u + 12u);
  auto a = collect(s, 2, so), b = collect(s, 2, so);
  EXPECT_EQ(a, b);
  // the extremes come first
  EXPECT_TRUE(a[2].ext.empty() || a[2].ext.begin()->second.empty());
  EXPECT_EQ(a[3].ext.at({"r", ""}).size(), 4u);
}

TEST(Sweep, StopsWhenAsked) {
  std::size_t seen = 0;
  auto sw = sweep_models(sig({{"p", {Sort::Individual}}}), 3, [&](const Model&) { return ++seen < 4; });
  EXPECT_EQ(seen, 4u);
  EXPECT_EQ(sw.visited, 4u);
}

TEST(Sweep, ModelsUpToMatchesSweep) {
  const auto s = sig({{"p", {Sort::Individual}}});
  std::vector<Model> via;
  models_up_to(s, 3)([&](const Model& m) {
    via.push_back(m);
    return true;
  });
  EXPECT_EQ(via, collect(s, 3, {}));
}

TEST(Quantifier, CountingTable) {
  for (std::size_t a = 0; a <= 5; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      EXPECT_EQ(quantifier_holds("every", a, b), a == b);
      EXPECT_EQ(quantifier_holds("all", a, b), a == b);
      EXPECT_EQ(quantifier_holds("some", a, b), b > 0);
      EXPECT_EQ(quantifier_holds("a", a, b), b > 0);
      EXPECT_EQ(quantifier_holds("no", a, b), b == 0);
      EXPECT_EQ(quantifier_holds("most", a, b), b > a - b);
      EXPECT_EQ(quantifier_holds("few", a, b), b < a - b);
      EXPECT_EQ(quantifier_holds("geq2", a, b), b >= 2);
    }
}

TEST(Quantifier, GenModes) {
  EvalOptions strict, universal{GenMode::Universal}, existential{GenMode::Existential};
  EXPECT_TRUE(quantifier_holds("GEN", 3, 2, strict));
  EXPECT_FALSE(quantifier_holds("GEN", 4, 2, strict));
  EXPECT_FALSE(quantifier_holds("GEN", 3, 2, universal));
  EXPECT_TRUE(quantifier_holds("GEN", 3, 3, universal));
  EXPECT_TRUE(quantifier_holds("GEN", 3, 1, existential));
  EXPECT_FALSE(quantifier_holds("GEN", 3, 0, existential));
}

TEST(Quantifier, Unknown) {
  for (const char* q : {"many", "geq", "geqx", ""}) EXPECT_THROW(quantifier_holds(q, 1, 1), Error) << q;
}

TEST(VerifyDrs, GenericQuantifierFollowsTheMode) {
  auto d = parse_drs("[ | [x | dog(x)] <GEN x> [ | bark(x)]]");
  Model m;
  m.atoms = {"d1", "d2", "d3"};
  for (Entity e : {1u, 2u, 4u}) m.add("dog", "", {e});
  m.add("bark", "", {1});
  m.add("bark", "", {2});
  EXPECT_TRUE(verify_drs(m, d));
  EXPECT_FALSE(verify_drs(m, d, {}, {GenMode::Universal}));
  EXPECT_TRUE(verify_drs(m, d, {}, {GenMode::Existential}));
  Model one = m;
  one.ext.at({"bark", ""}).erase({2});
  EXPECT_FALSE(verify_drs(one, d));
  EXPECT_TRUE(verify_drs(one, d, {}, {GenMode::Existential}));
}

TEST(VerifyDrs, GroupReferentsRangeOverPluralities) {
  // a group referent may be any non-empty sum, an individual only an atom
  auto d = parse_drs("[X | p(X), [x | in(x, X)] => [ | q(x)]]");
  Model m;
  m.atoms = {"a", "b"};
  m.add("p", "", {3});
  m.add("q", "", {1});
  EXPECT_FALSE(verify_drs(m, d));
  m.add("q", "", {2});
  EXPECT_TRUE(verify_drs(m, d));
  auto w = satisfying_embeddings(m, d);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].at("X"), 3u);
  EXPECT_FALSE(verify_drs(m, parse_drs("[x | p(x)]")));
}

TEST(Equivalence, OverAFamily) {
  auto a = parse_drs("[ | ~[x | p(x)]]");
  auto b = parse_drs("[ | [x | p(x)] => [ | ~[ | p(x)]]]");
  auto family = models_up_to(signature_of({a, b}), 3);
  auto e = drs_equivalent(a, b, family);
  EXPECT_TRUE(e.equivalent);
  EXPECT_GT(e.models, 0u);
  auto c = parse_drs("[x | p(x)]");
  auto f = drs_equivalent(a, c, models_up_to(signature_of({a, c}), 2));
  EXPECT_FALSE(f.equivalent);
  ASSERT_TRUE(f.witness);
}
