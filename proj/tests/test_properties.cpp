#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "support.hpp"

using namespace udrs;
using testing_support::load;

namespace {

enum class Kind { Impl, Neg, Indef, Group };

struct Spec {
  std::vector<Kind> nodes;                          // l1 .. ln
  std::vector<std::pair<int, int>> outer_before;    // (i, j): li takes scope over lj
  std::vector<int> senses;                          // sense counts of ambiguous atoms in l0
};

std::string node_label(int i) { return "l" + std::to_string(i); }

std::string render(const Spec& s) {
  std::string nodes, boxes, ord, l0;
  std::vector<std::string> l0_conds;
  auto scope = [&](int i) {
    const Kind k = s.nodes[static_cast<std::size_t>(i - 1)];
    return k == Kind::Impl || k == Kind::Neg ? "scope(" + node_label(i) + ")" : node_label(i);
  };
  for (int i = 1; i <= static_cast<int>(s.nodes.size()); ++i) {
    const std::string l = node_label(i), n = std::to_string(i);
    switch (s.nodes[static_cast<std::size_t>(i - 1)]) {
      case Kind::Impl:
        nodes += "    node " + l + " { universe: [] conds: [] dist: impl(" + l + "1, " + l + "2) }\n";
        boxes += "  box " + l + "1 { universe: [x" + n + "] conds: [p" + n + "(x" + n + ")] }\n";
        boxes += "  box " + l + "2 { universe: [] conds: [] }\n";
        l0_conds.push_back("s" + n + "(x" + n + ")");
        break;
      case Kind::Neg:
        nodes += "    node " + l + " { universe: [] conds: [] dist: neg(" + l + "1) }\n";
        boxes += "  box " + l + "1 { universe: [] conds: [] }\n";
        break;
      case Kind::Indef:
        nodes += "    node " + l + " { universe: [y" + n + "] conds: [q" + n + "(y" + n + ")] }\n";
        l0_conds.push_back("s" + n + "(y" + n + ")");
        break;
      case Kind::Group:
        nodes += "    node " + l + " potential(c d gen cum) { universe: [Y" + n + "] conds: [g" + n + "(Y" + n + ")] }\n";
        l0_conds.push_back("s" + n + "(alpha" + n + "(Y" + n + "))");
        break;
    }
    ord += std::string(ord.empty() ? "" : ", ") + "l0 <= " + scope(i);
  }
  for (std::size_t k = 0; k < s.senses.size(); ++k) {
    std::string ss;
    for (int j = 0; j < s.senses[k]; ++j) ss += std::string(j ? " " : "") + "m" + std::to_string(j);
    l0_conds.push_back("amb" + std::to_string(k) + "(c) senses [" + ss + "]");
  }
  for (std::size_t k = 0; k < l0_conds.size(); ++k) l0 += (k ? ", " : "") + l0_conds[k];
  for (const auto& [i, j] : s.outer_before) ord += ", " + node_label(j) + " <= " + scope(i);
  return "udrs lt {\n  clause lt {\n    node l0 { universe: [c] conds: [" + l0 + "] }\n" + nodes + "  }\n" + boxes +
         "  ord: [" + ord + "]\n}\n";
}

Spec random_spec(std::mt19937& rng, int max_nodes, bool distinct_drs) {
  Spec s;
  std::uniform_int_distribution<int> count(1, max_nodes), kind(0, 3);
  const int n = count(rng);
  bool neg = false, indef = false;
  for (int i = 0; i < n; ++i) {
    Kind k = static_cast<Kind>(kind(rng));
    if (distinct_drs) {
      // orders that commute would print the same DRS
      if (k == Kind::Group) k = Kind::Impl;
      if (k == Kind::Neg && neg) k = Kind::Impl;
      if (k == Kind::Indef && indef) k = Kind::Impl;
      neg = neg || k == Kind::Neg;
      indef = indef || k == Kind::Indef;
    }
    s.nodes.push_back(k);
  }
  std::bernoulli_distribution coin(0.3);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (coin(rng)) s.outer_before.push_back({i, j});
  std::uniform_int_distribution<int> amb(0, 2), width(2, 3);
  for (int k = amb(rng); k > 0; --k) s.senses.push_back(width(rng));
  return s;
}

// every order of the nodes respecting the required precedences
std::vector<std::vector<Label>> brute_orders(const Spec& s) {
  std::vector<int> p(s.nodes.size());
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<Label>> out;
  do {
    auto pos = [&](int x) { return std::find(p.begin(), p.end(), x) - p.begin(); };
    bool ok = std::all_of(s.outer_before.begin(), s.outer_before.end(),
                          [&](const std::pair<int, int>& e) { return pos(e.first) < pos(e.second); });
    if (!ok) continue;
    std::vector<Label> lin;
    for (int x : p) lin.push_back(node_label(x));
    lin.push_back("l0");
    out.push_back(lin);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::set<std::string> keys(const UdrsDatabase& db) {
  std::set<std::string> out;
  for (const auto& r : enumerate_readings(db)) out.insert(r.key);
  return out;
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// ---- random DRS text

std::string random_term(std::mt19937& rng) {
  static const char* names[] = {"x", "y", "X", "alpha(X)", "z"};
  return names[std::uniform_int_distribution<int>(0, 4)(rng)];
}

std::string random_drs(std::mt19937& rng, int depth);

std::string random_condition(std::mt19937& rng, int depth) {
  int k = std::uniform_int_distribution<int>(0, depth > 0 ? 8 : 3)(rng);
  switch (k) {
    case 0: return "p(" + random_term(rng) + ")";
    case 1: return "q(" + random_term(rng) + ", " + random_term(rng) + ")";
    case 2: return "not r.s(" + random_term(rng) + ")";
    case 3: return "x = y";
    case 4: return "~" + random_drs(rng, depth - 1);
    case 5: return random_drs(rng, depth - 1) + " => " + random_drs(rng, depth - 1);
    case 6: return random_drs(rng, depth - 1) + " <most x> " + random_drs(rng, depth - 1);
    case 7: return "cum(" + random_drs(rng, depth - 1) + ", " + random_drs(rng, depth - 1) + ", x, y, " +
                   random_drs(rng, depth - 1) + ")";
    default: return "Z = Sigma z : " + random_drs(rng, depth - 1);
  }
}

std::string random_drs(std::mt19937& rng, int depth) {
  std::string u;
  std::bernoulli_distribution coin(0.4);
  for (const char* r : {"x", "y", "X"})
    if (coin(rng)) u += std::string(u.empty() ? "" : " ") + r;
  std::string c;
  for (int n = std::uniform_int_distribution<int>(0, 3)(rng); n > 0; --n)
    c += (c.empty() ? "" : ", ") + random_condition(rng, depth);
  return "[" + u + " | " + c + "]";
}

// double coverage by brute force
bool covers(Entity xs, Entity ys, const std::set<std::pair<Entity, Entity>>& rel) {
  for (Entity x = 1; x <= xs; x <<= 1) {
    if (!(x & xs)) continue;
    bool any = false;
    for (Entity y = 1; y <= ys; y <<= 1)
      if ((y & ys) && rel.count({x, y})) any = true;
    if (!any) return false;
  }
  for (Entity y = 1; y <= ys; y <<= 1) {
    if (!(y & ys)) continue;
    bool any = false;
    for (Entity x = 1; x <= xs; x <<= 1)
      if ((x & xs) && rel.count({x, y})) any = true;
    if (!any) return false;
  }
  return true;
}

// a verdict, or the error code when a sum has no witnesses
int outcome(const std::function<bool()>& f) {
  try {
    return f() ? 1 : 0;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyAbstraction) throw;
    return -1;
  }
}

}  // namespace

TEST(Properties, LinearExtensionsMatchPermutationFilter) {
  std::mt19937 rng(11);
  for (int t = 0; t < 250; ++t) {
    Spec s = random_spec(rng, 6, false);
    for (auto& k : s.nodes)
      if (k == Kind::Indef || k == Kind::Group) k = Kind::Neg;
    const auto text = render(s);
    const auto db = parse_udrs(text);
    ASSERT_TRUE(validate(db).ok()) << text;
    EXPECT_EQ(linear_extensions(db.sentences[0], "lt"), brute_orders(s)) << text;
  }
}

TEST(Properties, ReadingCountIsOrdersTimesSenses) {
  std::mt19937 rng(12);
  for (int t = 0; t < 200; ++t) {
    Spec s = random_spec(rng, 4, true);
    const auto db = parse_udrs(render(s));
    std::size_t product = 1;
    for (int w : s.senses) product *= static_cast<std::size_t>(w);
    EXPECT_EQ(enumerate_readings(db).size(), brute_orders(s).size() * product) << render(s);
  }
}

TEST(Properties, AddConstraintOnlyRemovesReadings) {
  std::mt19937 rng(13);
  std::size_t accepted = 0;
  for (int t = 0; t < 200; ++t) {
    Spec s = random_spec(rng, 4, false);
    s.senses.clear();
    const auto db = parse_udrs(render(s));
    const auto& u = db.sentences[0];
    const auto before = keys(db);
    auto labels = u.labels();
    std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
    const Label a = labels[pick(rng)], b = labels[pick(rng)];
    UdrsDatabase after = db;
    try {
      after.sentences[0] = add_constraint(u, a, b);
    } catch (const Error&) {
      continue;
    }
    ++accepted;
    EXPECT_TRUE(subset(keys(after), before)) << render(s) << a << " <= " << b;
    for (const auto& p : u.ord.pairs) EXPECT_TRUE(after.sentences[0].ord.pairs.count(p));
  }
  EXPECT_GT(accepted, 50u);
}

TEST(Properties, PluralOperatorsOnlyRemoveReadings) {
  std::mt19937 rng(14);
  std::size_t applied = 0;
  for (int t = 0; t < 200; ++t) {
    Spec s = random_spec(rng, 3, false);
    s.senses.clear();
    s.nodes[0] = Kind::Group;
    const auto db = parse_udrs(render(s));
    const auto before = keys(db);
    for (int i = 1; i <= static_cast<int>(s.nodes.size()); ++i) {
      if (s.nodes[static_cast<std::size_t>(i - 1)] != Kind::Group) continue;
      for (int op = 0; op < 3; ++op) {
        UdrsDatabase after = db;
        const auto& u = db.sentences[0];
        after.sentences[0] = op == 0 ? distribute(u, node_label(i)) : op == 1 ? collectivize(u, node_label(i))
                                                                              : genericize(u, node_label(i));
        ++applied;
        EXPECT_TRUE(subset(keys(after), before)) << render(s) << " op " << op << " on " << node_label(i);
      }
    }
  }
  EXPECT_GT(applied, 200u);
}

TEST(Properties, UdrsTextRoundTrips) {
  std::mt19937 rng(15);
  for (int t = 0; t < 200; ++t) {
    auto db = parse_udrs(render(random_spec(rng, 5, false)));
    const auto text = print_udrs(db);
    EXPECT_EQ(parse_udrs(text), db) << text;
    EXPECT_EQ(print_udrs(parse_udrs(text)), text);
  }
}

TEST(Properties, DrsTextRoundTrips) {
  std::mt19937 rng(16);
  for (int t = 0; t < 300; ++t) {
    const auto src = random_drs(rng, 3);
    Drs d;
    ASSERT_NO_THROW(d = parse_drs(src)) << src;
    const auto text = print_drs(d);
    EXPECT_EQ(parse_drs(text), d) << src << " -> " << text;
    EXPECT_EQ(print_drs(parse_drs(text)), text);
  }
}

TEST(Properties, ModelTextRoundTrips) {
  std::mt19937 rng(17);
  for (int t = 0; t < 200; ++t) {
    Model m;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    for (std::size_t i = 0; i < n; ++i) m.atoms.push_back("e" + std::to_string(i));
    std::uniform_int_distribution<Entity> ent(1, m.all());
    for (int k = std::uniform_int_distribution<int>(0, 6)(rng); k > 0; --k) {
      const std::string pred = std::string(1, static_cast<char>('a' + k % 3));
      const std::string sense = k % 2 ? "" : "s";
      const std::size_t arity = 1 + static_cast<std::size_t>(k % 3);
      for (int r = 0; r < 3; ++r) {
        std::vector<Entity> tuple;
        for (std::size_t i = 0; i < arity; ++i) tuple.push_back(ent(rng));
        m.add(pred, sense, tuple);
      }
    }
    EXPECT_EQ(parse_model(print_model(m)), m) << print_model(m);
  }
}

TEST(Properties, JoinLaws) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const Entity top = static_cast<Entity>((1u << n) - 1);
    for (Entity a = 1; a <= top; ++a) {
      EXPECT_EQ(Model::join(a, a), a);
      for (Entity b = 1; b <= top; ++b) {
        EXPECT_EQ(Model::join(a, b), Model::join(b, a));
        for (Entity c = 1; c <= top; ++c) EXPECT_EQ(Model::join(Model::join(a, b), c), Model::join(a, Model::join(b, c)));
        // membership is inclusion of an atom in the sum
        if (Model::is_atom(a)) {
          EXPECT_TRUE(Model::member(a, Model::join(a, b)));
        }
      }
    }
  }
}

TEST(Properties, CumulativeAgreesWithDoubleCoverage) {
  auto cd = std::get<DCum>(parse_drs("[X Y | cum([x | in(x, X)], [y | in(y, Y)], x, y, [ | supply(x, y)])]").conds[0]);
  // three row atoms and three column atoms: every one of the 512 relations
  const Entity xs_all = 0b000111, ys_all = 0b111000;
  std::size_t checked = 0;
  for (unsigned bits = 0; bits < 512; ++bits) {
    Model m;
    m.atoms = {"x1", "x2", "x3", "y1", "y2", "y3"};
    std::set<std::pair<Entity, Entity>> rel;
    for (unsigned i = 0; i < 3; ++i)
      for (unsigned j = 0; j < 3; ++j)
        if (bits & (1u << (3 * i + j))) {
          rel.insert({Entity{1} << i, Entity{1} << (3 + j)});
          m.add("supply", "", {Entity{1} << i, Entity{1} << (3 + j)});
        }
    for (Entity xs = 1; xs <= xs_all; ++xs)
      for (Entity ys = 8; ys <= ys_all; ys += 8) {
        EXPECT_EQ(verify_cumulative(m, {{"X", xs}, {"Y", ys}}, cd), covers(xs, ys, rel)) << bits << " " << xs << " " << ys;
        ++checked;
      }
  }
  EXPECT_EQ(checked, 512u * 7u * 7u);
}

TEST(Properties, RestrictionIsASubsetAndMatchesDefinition) {
  std::mt19937 rng(18);
  std::uniform_int_distribution<Entity> ent(1, 7);
  const std::vector<std::pair<Term, Term>> pi{{Term(Referent("u")), Term(Referent("x"))}};
  for (int t = 0; t < 200; ++t) {
    TaggedSet k{{}, {"c", std::nullopt}}, l{{}, {"c", std::nullopt}};
    for (int i = 0; i < 6; ++i) k.e.push_back({{"u", ent(rng)}, {"w", ent(rng)}});
    for (int i = 0; i < 3; ++i) l.e.push_back({{"x", ent(rng)}});
    auto out = restrict_dependent(Denotation{std::vector<TaggedSet>{k}}, Denotation{std::vector<TaggedSet>{l}}, pi);
    ASSERT_EQ(out.sets().size(), 1u);
    EmbeddingSet expect;
    for (const auto& f : k.e)
      if (std::any_of(l.e.begin(), l.e.end(), [&](const Embedding& g) { return g.at("x") == f.at("u"); }))
        expect.push_back(f);
    EXPECT_EQ(out.sets()[0].e, expect);
  }
}

TEST(Properties, ClashDetectorIsSound) {
  std::mt19937 rng(19);
  const char* terms[] = {"x", "y", "z"};
  std::size_t clashes = 0;
  for (int t = 0; t < 200; ++t) {
    std::string conds;
    std::uniform_int_distribution<int> pk(0, 3), tk(0, 2), n(2, 5);
    for (int i = n(rng); i > 0; --i) {
      std::string c;
      switch (pk(rng)) {
        case 0: c = std::string("p(") + terms[tk(rng)] + ")"; break;
        case 1: c = std::string("not p(") + terms[tk(rng)] + ")"; break;
        case 2: c = std::string("~[ | q(") + terms[tk(rng)] + ")]"; break;
        default: c = std::string(terms[tk(rng)]) + " = " + terms[tk(rng)]; break;
      }
      conds += (conds.empty() ? "" : ", ") + c;
    }
    const auto d = parse_drs("[x y z | " + conds + ", q(x)]");
    // three terms need at most three atoms, so the bound decides every case
    const auto fast = check_consistency(d, 3);
    const auto slow = check_consistency(d, 3, false);
    if (std::holds_alternative<SyntacticClash>(fast)) {
      ++clashes;
      EXPECT_TRUE(std::holds_alternative<NoModelUpTo>(slow)) << print_drs(d);
    } else {
      ASSERT_TRUE(std::holds_alternative<ConsistentWitness>(fast)) << print_drs(d);
      const auto& w = std::get<ConsistentWitness>(fast);
      EXPECT_TRUE(verify_drs(w.model, d, w.f)) << print_drs(d);
    }
    // the search with the detector switched off reaches the same answer
    EXPECT_EQ(std::holds_alternative<ConsistentWitness>(slow), std::holds_alternative<ConsistentWitness>(fast));
  }
  EXPECT_GT(clashes, 20u);
}

TEST(Properties, TruthAgreesWithExtractedDrsOnFixtures) {
  // two routes to the same verdict: composing label denotations, and
  // verifying the extracted DRSs
  std::vector<std::pair<std::string, UdrsDatabase>> dbs;
  for (const char* f : testing_support::kUdrsFixtures) dbs.emplace_back(f, load(f));
  // the fixtures whose pronouns are open, once resolved
  dbs.emplace_back("u45+abstract", abstract_antecedent(load("u45.udrs"), "k1", Referent("z"), "l1"));
  dbs.emplace_back("u51+dep", mark_dependent(load("u51.udrs"), "k0", "l0",
                                             {{Term("nu", Referent("zeta1")), Term("alpha", Referent("X"))},
                                              {Term("mu", Referent("zeta2")), Term("beta", Referent("Y"))},
                                              {Term(Referent("sr1")), Term(Referent("sr1"))}}));
  SweepOptions so;
  so.exhaustive_bits = 14;  // above this, a seeded sample per domain size
  so.samples = 60;
  std::size_t compared = 0;
  for (const auto& [name, db] : dbs) {
    std::vector<Reading> rs;
    std::vector<Drs> ds;
    for (const auto& r : enumerate_readings(db)) {
      try {
        auto part = apply_reading(db, r);
        ds.insert(ds.end(), part.begin(), part.end());
        rs.push_back(r);
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::UnresolvedPronoun) << name;
      }
    }
    if (rs.empty()) continue;
    sweep_models(signature_of(ds), 3, [&](const Model& m) {
      for (const auto& r : rs) {
        EXPECT_EQ(outcome([&] { return truth(db, m, r); }), outcome([&] { return truth_by_drs(db, m, r); }))
            << name << " " << r.key << "\n" << print_model(m);
        ++compared;
      }
      return true;
    }, so);
  }
  EXPECT_GT(compared, 1000u);
}
