#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace udrs;
using testing_support::load;
using testing_support::load_drs;
using testing_support::load_model;

namespace {

Model humans(bool h1_pays, bool h2_pays) {
  Model m;
  m.atoms = {"h1", "h2"};
  m.add("human", "", {m.atom("h1")});
  m.add("human", "", {m.atom("h2")});
  if (h1_pays) m.add("pay", "", {m.atom("h1")});
  if (h2_pays) m.add("pay", "", {m.atom("h2")});
  return m;
}

Reading with_first(const UdrsDatabase& db, const Label& clause, const Label& first) {
  for (const auto& r : enumerate_readings(db))
    if (r.lin.at(clause).front() == first) return r;
  throw std::runtime_error("no reading puts " + first + " first");
}

std::set<Embedding> as_set(const EmbeddingSet& e) { return {e.begin(), e.end()}; }

// By brute force: the join of every child some teacher shows some
// picture to.
Entity shown_children(const Model& m) {
  Entity out = 0;
  for (std::size_t b = 0; b < m.atoms.size(); ++b)
    for (std::size_t x = 0; x < m.atoms.size(); ++x)
      for (std::size_t y = 0; y < m.atoms.size(); ++y) {
        Entity eb = Entity{1} << b, ex = Entity{1} << x, ey = Entity{1} << y;
        if (m.holds("teacher", "", {ex}) && m.holds("picture", "", {ey}) && m.holds("child", "", {eb}) &&
            m.holds("show", "", {ex, ey, eb}))
          out |= eb;
      }
  return out;
}

const Sum& sum_of(const UdrsDatabase& db, const Label& l) {
  for (const auto& c : db.owner(l)->at(l).conds)
    if (auto* s = std::get_if<Sum>(&c)) return *s;
  throw std::runtime_error("no sum at " + l);
}

DCum cum_condition() {
  auto d = parse_drs("[X Y | cum([x | in(x, X)], [y | in(y, Y)], x, y, [ | supply(x, y)])]");
  return std::get<DCum>(d.conds.at(0));
}

}  // namespace

TEST(VerifyDrs, ThirteenNobodyPays) { EXPECT_TRUE(verify_drs(humans(false, false), load_drs("13.drs"))); }

TEST(VerifyDrs, ThirteenFailsWhenH1Pays) { EXPECT_FALSE(verify_drs(humans(true, false), load_drs("13.drs"))); }

TEST(VerifyDrs, EmptyDrsIsTrue) {
  EXPECT_TRUE(verify_drs(humans(false, false), Drs{}));
  EXPECT_TRUE(verify_drs(humans(true, true), Drs{}, {{"x", 1}}));
}

TEST(VerifyDrs, FreeReferentNeedsAValue) {
  auto d = parse_drs("[ | pay(x)]");
  try {
    verify_drs(humans(true, false), d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundReferent);
  }
  EXPECT_TRUE(verify_drs(humans(true, false), d, {{"x", 1}}));
  EXPECT_FALSE(verify_drs(humans(true, false), d, {{"x", 2}}));
}

TEST(Denote, U17LowerBound) {
  const auto db = load("u17.udrs");
  const auto m = humans(true, false);
  auto d = denote(db, "l0", {}, m, enumerate_readings(db)[0]);
  ASSERT_TRUE(d.is_set());
  ASSERT_EQ(d.sets().size(), 1u);
  EXPECT_EQ(as_set(d.sets()[0].e), (std::set<Embedding>{{{"x", m.atom("h1")}}}));
}

TEST(Denote, U17RestrictorIsConstrainedByItsArgument) {
  const auto db = load("u17.udrs");
  Model m = humans(false, false);
  m.atoms.push_back("rock");
  auto d = denote(db, "l11", {}, m, enumerate_readings(db)[0]);
  ASSERT_FALSE(d.is_set());
  // no constraint: every human
  EXPECT_EQ(as_set(d(EmbeddingSet{Embedding{}})), (std::set<Embedding>{{{"x", 1}}, {{"x", 2}}}));
  // only the humans compatible with e survive
  EXPECT_EQ(as_set(d(EmbeddingSet{{{"x", 2}}})), (std::set<Embedding>{{{"x", 2}}}));
  EXPECT_TRUE(d(EmbeddingSet{{{"x", 4}}}).empty());
  EXPECT_TRUE(d(EmbeddingSet{}).empty());
}

TEST(Denote, TopAgreesWithExtractedDrs) {
  const auto db = load("u17.udrs");
  auto rs = enumerate_readings(db);
  std::vector<Drs> ds;
  for (const auto& r : rs) ds.push_back(apply_reading(db, r).at(0));
  SweepOptions so;
  so.symmetry = false;
  std::size_t seen = 0;
  sweep_models(signature_of(ds), 3, [&](const Model& m) {
    for (std::size_t i = 0; i < rs.size(); ++i) {
      auto d = denote(db, "lt", {}, m, rs[i]);
      EXPECT_EQ(!d.sets().at(0).e.empty(), verify_drs(m, ds[i])) << print_model(m);
    }
    ++seen;
    return true;
  }, so);
  EXPECT_GT(seen, 20u);
}

TEST(Denote, UnknownLabel) {
  const auto db = load("u17.udrs");
  try {
    denote(db, "nope", {}, humans(false, false), enumerate_readings(db)[0]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownLabel);
  }
}

TEST(VerifyCumulative, BrewOneCoversBothSides) {
  auto m = load_model("m-brew1.model");
  Embedding f{{"X", m.atom("b1") | m.atom("b2") | m.atom("b3")},
              {"Y", m.atom("i1") | m.atom("i2") | m.atom("i3") | m.atom("i4") | m.atom("i5")}};
  EXPECT_TRUE(verify_cumulative(m, f, cum_condition()));
}

TEST(VerifyCumulative, BrewTwoLeavesAnInnUnsupplied) {
  auto m = load_model("m-brew2.model");
  Embedding f{{"X", m.atom("b1") | m.atom("b2") | m.atom("b3")},
              {"Y", m.atom("i1") | m.atom("i2") | m.atom("i3") | m.atom("i4") | m.atom("i5")}};
  EXPECT_FALSE(verify_cumulative(m, f, cum_condition()));
  // dropping the idle brewery and the dry inn restores the cover
  Embedding g{{"X", m.atom("b1") | m.atom("b3")}, {"Y", m.atom("i1") | m.atom("i2") | m.atom("i3") | m.atom("i4")}};
  EXPECT_TRUE(verify_cumulative(m, g, cum_condition()));
}

TEST(VerifyCumulative, Singletons) {
  Model m;
  m.atoms = {"b", "i"};
  m.add("supply", "", {1, 2});
  EXPECT_TRUE(verify_cumulative(m, {{"X", 1}, {"Y", 2}}, cum_condition()));
  EXPECT_FALSE(verify_cumulative(m, {{"X", 2}, {"Y", 1}}, cum_condition()));
}

TEST(VerifyCumulative, NeedsBothGroups) {
  auto m = load_model("m-brew1.model");
  try {
    verify_cumulative(m, {{"X", 1}}, cum_condition());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundReferent);
  }
}

class VerifySumTest : public ::testing::Test {
 protected:
  void SetUp() override {
    db = abstract_antecedent(load("u45.udrs"), "k1", Referent("z"), "l1");
    reading = with_first(db, "lt", "l1");
  }
  UdrsDatabase db;
  Reading reading;
};

TEST_F(VerifySumTest, ClassModelJoinsBothChildren) {
  const auto m = load_model("m-class.model");
  const auto& s = sum_of(db, "k1");
  EXPECT_TRUE(verify_sum(m, {{"zeta", m.atom("c1") | m.atom("c2")}}, s, db, reading));
  EXPECT_FALSE(verify_sum(m, {{"zeta", m.atom("c1")}}, s, db, reading));
}

TEST_F(VerifySumTest, MatchesBruteForceOnEveryValue) {
  const auto m = load_model("m-class.model");
  const auto& s = sum_of(db, "k1");
  const Entity join = shown_children(m);
  ASSERT_EQ(join, m.atom("c1") | m.atom("c2"));
  for (Entity z = 1; z <= m.all(); ++z) EXPECT_EQ(verify_sum(m, {{"zeta", z}}, s, db, reading), z == join) << z;
}

TEST_F(VerifySumTest, SingleTeacher) {
  Model m;
  m.atoms = {"t1", "p1", "c1", "c2"};
  m.add("teacher", "", {m.atom("t1")});
  m.add("picture", "", {m.atom("p1")});
  m.add("child", "", {m.atom("c1")});
  m.add("child", "", {m.atom("c2")});
  m.add("show", "", {m.atom("t1"), m.atom("p1"), m.atom("c1")});
  const auto& s = sum_of(db, "k1");
  EXPECT_EQ(shown_children(m), m.atom("c1"));
  EXPECT_TRUE(verify_sum(m, {{"zeta", m.atom("c1")}}, s, db, reading));
  EXPECT_FALSE(verify_sum(m, {{"zeta", m.atom("c1") | m.atom("c2")}}, s, db, reading));
}

TEST_F(VerifySumTest, NoWitnesses) {
  Model m;
  m.atoms = {"t1", "c1"};
  m.add("teacher", "", {1});
  m.add("child", "", {2});
  try {
    verify_sum(m, {{"zeta", 2}}, sum_of(db, "k1"), db, reading);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyAbstraction);
  }
}

// Both routes raise the error whatever else in the database already fails:
// here nothing is bored and nobody shows anything.
TEST_F(VerifySumTest, NoWitnessesIsSignaledByBothRoutes) {
  Model m;
  m.atoms = {"a1"};
  m.add("child", "", {1});
  for (auto route : {truth_by_drs, static_cast<bool (*)(const UdrsDatabase&, const Model&, const Reading&,
                                                        const EvalOptions&)>(truth)}) {
    try {
      route(db, m, reading, {});
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EmptyAbstraction);
    }
  }
}

TEST_F(VerifySumTest, LicensingLabelMustBeAQuantifier) {
  Sum bad = sum_of(db, "k1");
  bad.licensing = "l2";
  try {
    verify_sum(load_model("m-class.model"), {{"zeta", 4}}, bad, db, reading);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoLicensingCondition);
  }
}

class RestrictTest : public ::testing::Test {
 protected:
  void SetUp() override {
    u53 = load("u53.udrs");
    m = load_model("m-brew1.model");
    for (const auto& r : enumerate_readings(u53))
      if (r.kinds.at("l1") == PluralKind::Collective && r.kinds.at("l2") == PluralKind::Collective) cc = r;
    ASSERT_FALSE(cc.lin.empty());
    // every brewery and inn pairing, tagged collective on both sides
    TaggedSet all{{}, cc.tags.at("k0")};
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t i = 3; i < 8; ++i) all.e.push_back({{"zeta1", Entity{1} << b}, {"zeta2", Entity{1} << i}});
    dk = Denotation{std::vector<TaggedSet>{all}};
  }
  UdrsDatabase u53;
  Model m;
  Reading cc;
  Denotation dk;
  const std::vector<std::pair<Term, Term>> pi{{Term(Referent("zeta1")), Term(Referent("X"))},
                                              {Term(Referent("zeta2")), Term(Referent("Y"))}};
};

TEST_F(RestrictTest, KeepsExactlyTheSuppliedPairs) {
  auto dl = denote(u53, "l0", {}, m, cc);
  auto out = restrict_dependent(dk, dl, pi);
  ASSERT_EQ(out.sets().size(), 1u);
  std::set<Embedding> expect;
  for (const auto& f : dk.sets()[0].e)
    if (m.holds("supply", "", {f.at("zeta1"), f.at("zeta2")})) expect.insert(f);
  EXPECT_EQ(as_set(out.sets()[0].e), expect);
  EXPECT_EQ(expect.size(), 5u);
  EXPECT_EQ(out.sets()[0].r, cc.tags.at("k0"));
}

TEST_F(RestrictTest, OutputIsASubset) {
  auto dl = denote(u53, "l0", {}, m, cc);
  auto in = as_set(dk.sets()[0].e);
  const auto out = restrict_dependent(dk, dl, pi);
  for (const auto& ts : out.sets())
    for (const auto& f : ts.e) EXPECT_TRUE(in.count(f));
}

TEST_F(RestrictTest, EmptyTargetGivesEmpty) {
  Denotation empty{std::vector<TaggedSet>{{{}, cc.tags.at("l0")}}};
  EXPECT_TRUE(restrict_dependent(dk, empty, pi).sets().empty());
  EXPECT_TRUE(restrict_dependent(dk, Denotation{std::vector<TaggedSet>{}}, pi).sets().empty());
}

TEST_F(RestrictTest, DifferentFiniteTagsDoNotPair) {
  auto dl = denote(u53, "l0", {}, m, cc);
  auto other = dl;
  auto sets = other.sets();
  for (auto& ts : sets) ts.r.letters = "cd";
  other.value = sets;
  try {
    restrict_dependent(dk, other, pi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TagMismatch);
  }
}

TEST_F(RestrictTest, FunctionsAreRejected) {
  auto f = denote(load("u17.udrs"), "l11", {}, m, enumerate_readings(load("u17.udrs"))[0]);
  EXPECT_THROW(restrict_dependent(f, dk, pi), Error);
}

TEST(Dependency, U51CollectiveBuyingForcesCollectiveLending) {
  auto db = load("u51.udrs");
  auto dep = mark_dependent(db, "k0", "l0",
                            {{Term("nu", Referent("zeta1")), Term("alpha", Referent("X"))},
                             {Term("mu", Referent("zeta2")), Term("beta", Referent("Y"))},
                             {Term(Referent("sr1")), Term(Referent("sr1"))}});
  auto rs = enumerate_readings(dep);
  ASSERT_FALSE(rs.empty());
  for (const auto& r : rs) EXPECT_EQ(r.tags.at("k0"), r.tags.at("l0")) << r.key;
}

TEST(Truth, U17Examples) {
  const auto db = load("u17.udrs");
  const auto every_not = with_first(db, "lt", "l1");
  const auto not_every = with_first(db, "lt", "l2");
  EXPECT_TRUE(truth(db, humans(false, false), every_not));
  EXPECT_TRUE(truth(db, humans(false, false), not_every));
  EXPECT_FALSE(truth(db, humans(true, true), every_not));
  EXPECT_FALSE(truth(db, humans(true, true), not_every));
  // one pays: only the negated universal survives
  EXPECT_FALSE(truth(db, humans(true, false), every_not));
  EXPECT_TRUE(truth(db, humans(true, false), not_every));
}

TEST(Truth, SharedReferentWithIncompatibleAtoms) {
  auto db = parse_udrs(R"(
udrs lt { clause lt { node l0 { universe: [x] conds: [man(x)] } } ord: [] }
udrs kt { clause kt { node k0 { universe: [] conds: [not man(x)] } } ord: [] }
)");
  Model m;
  m.atoms = {"a", "b"};
  m.add("man", "", {1});
  auto rs = enumerate_readings(db);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_FALSE(truth(db, m, rs[0]));
  EXPECT_FALSE(truth_by_drs(db, m, rs[0]));
}

TEST(Truth, AgreesWithDrsRouteOnU41) {
  const auto db = load("u41.udrs");
  auto rs = enumerate_readings(db);
  std::vector<Drs> ds;
  for (const auto& r : rs) {
    auto part = apply_reading(db, r);
    ds.insert(ds.end(), part.begin(), part.end());
  }
  // the full two-atom space is large; a seeded sample keeps this quick
  SweepOptions so;
  so.exhaustive_bits = 8;
  so.samples = 300;
  sweep_models(signature_of(ds), 2, [&](const Model& m) {
    for (const auto& r : rs) EXPECT_EQ(truth(db, m, r), truth_by_drs(db, m, r)) << r.key << print_model(m);
    return true;
  }, so);
}

TEST(Truth, CoindexedClausesMustAgree) {
  auto db = load("everybody-didnt-sleep.udrs");
  db.goal = load("everybody-didnt-sleep-goal.udrs").sentences[0];
  auto c = coindex(db, "lt", "gt", "i");
  Model m;
  m.atoms = {"a"};
  m.add("human", "", {1});
  std::size_t mismatched = 0;
  for (const auto& r : enumerate_readings(db)) {
    std::vector<Label> a = r.lin.at("lt"), b = r.lin.at("gt");
    auto iso = *clause_isomorphism(c, "lt", "gt");
    for (auto& l : a) l = iso(l);
    if (a == b) {
      EXPECT_NO_THROW(truth(c, m, r));
      continue;
    }
    ++mismatched;
    try {
      truth(c, m, r);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::CoindexViolation);
    }
  }
  EXPECT_EQ(mismatched, 2u);
}

TEST(Consistency, BorrowClashes) {
  auto c = check_consistency(load_drs("56-borrow.drs"), 3);
  ASSERT_TRUE(std::holds_alternative<SyntacticClash>(c));
  EXPECT_EQ(std::get<SyntacticClash>(c).positive.pred, "Have");
  EXPECT_EQ(std::get<SyntacticClash>(c).negative.pred, "Have");
}

TEST(Consistency, LendHasAWitness) {
  auto d = parse_drs(
      "[e1 sr1 e2 sp2 | kaufen(e1, nu(zeta1), mu(zeta2)), Have(sr1, nu(zeta1), mu(zeta2)), abut(e1, sr1), "
      "ausleihen.lend(e2, nu(zeta1), mu(zeta2), sp2), abut(sp2, e2), sp2 = sr1, Have(sp2, nu(zeta1), mu(zeta2))]");
  auto c = check_consistency(d, 3);
  ASSERT_TRUE(std::holds_alternative<ConsistentWitness>(c));
  const auto& w = std::get<ConsistentWitness>(c);
  EXPECT_TRUE(verify_drs(w.model, d, w.f));
}

TEST(Consistency, SinglePositiveAtom) {
  auto d = parse_drs("[x | p(x)]");
  auto c = check_consistency(d, 3);
  ASSERT_TRUE(std::holds_alternative<ConsistentWitness>(c));
  const auto& w = std::get<ConsistentWitness>(c);
  EXPECT_EQ(w.model.atoms.size(), 1u);
  EXPECT_TRUE(verify_drs(w.model, d, w.f));
}

TEST(Consistency, ClashMeansNoModel) {
  for (const auto& text : {std::string("[x | p(x), not p(x)]"), std::string("[x y | p(x), x = y, not p(y)]"),
                           testing_support::read_file("56-borrow.drs")}) {
    auto d = parse_drs(text);
    ASSERT_TRUE(std::holds_alternative<SyntacticClash>(check_consistency(d, 2))) << text;
    for (std::size_t n = 1; n <= 2; ++n) {
      auto slow = check_consistency(d, n, false);
      ASSERT_TRUE(std::holds_alternative<NoModelUpTo>(slow)) << text << " " << n;
      EXPECT_EQ(std::get<NoModelUpTo>(slow).bound, n);
    }
  }
}

TEST(Consistency, ContradictionUnderNegationNeedsTheSweep) {
  auto d = parse_drs("[x | p(x), ~[ | p(x)]]");
  auto c = check_consistency(d, 3);
  EXPECT_TRUE(std::holds_alternative<NoModelUpTo>(c) || std::holds_alternative<SyntacticClash>(c));
  auto ok = parse_drs("[x | p(x), ~[ y | q(y)]]");
  EXPECT_TRUE(std::holds_alternative<ConsistentWitness>(check_consistency(ok, 2)));
}
