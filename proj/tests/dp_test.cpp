#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "trapgraph/dp.hpp"
#include "trapgraph/oracle.hpp"
#include "trapgraph/report.hpp"

namespace trapgraph {
namespace {

using testing::random_decomposition;
using testing::random_graph;

DPTable table_with(std::vector<VarId> bag_v, std::vector<CheckId> bag_c) {
  DPTable t;
  t.bag_v = std::move(bag_v);
  t.bag_c = std::move(bag_c);
  return t;
}

void put(DPTable& t, std::vector<CheckId> odd, std::vector<VarId> members, std::uint32_t d, std::uint32_t f, int g) {
  t.entries[make_key(t, odd, members, d)] = DPEntry{f, Count(g)};
}

const DPEntry& at(const DPTable& t, std::vector<CheckId> odd, std::vector<VarId> members, std::uint32_t d) {
  const auto* e = t.find(make_key(t, odd, members, d));
  if (!e) throw std::out_of_range("missing key");
  return *e;
}

// v0, v1 both adjacent to c0; v2 adjacent to c1
TannerGraph small_graph() { return TannerGraph::from_dense({{1, 1, 0}, {0, 0, 1}}); }

TEST(Bits, InsertAndErase) {
  EXPECT_EQ(bits::insert_at(0b1011, 2), 0b10011u);
  EXPECT_EQ(bits::erase_at(0b10011, 2), 0b1011u);
  EXPECT_EQ(bits::insert_at(~Mask{0} >> 1, 63), ~Mask{0} >> 1);
  EXPECT_EQ(bits::erase_at(~Mask{0}, 63), ~Mask{0} >> 1);
  EXPECT_EQ(bits::erase_at(bits::insert_at(0xdeadbeefULL, 7), 7), 0xdeadbeefULL);
}

TEST(Leaf, IsEmpty) {
  auto t = leaf_table();
  EXPECT_TRUE(t.entries.empty());
  EXPECT_EQ(t.find(DPKey{}), nullptr);
}

TEST(IntroduceVariable, FromEmptyChild) {
  auto g = small_graph();
  auto t = introduce_variable(table_with({}, {0}), 0, g);
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(at(t, {0}, {0}, 0), (DPEntry{1, 1}));
}

TEST(IntroduceVariable, KeepsAndExtends) {
  auto g = small_graph();
  auto child = table_with({0}, {0});
  put(child, {0}, {0}, 0, 4, 3);
  auto t = introduce_variable(child, 1, g);
  EXPECT_EQ(at(t, {0}, {0}, 0), (DPEntry{4, 3}));
  EXPECT_EQ(at(t, {}, {0, 1}, 0), (DPEntry{5, 3}));
  EXPECT_EQ(at(t, {0}, {1}, 0), (DPEntry{1, 1}));
  EXPECT_EQ(t.entries.size(), 3u);
}

TEST(IntroduceVariable, FullyForgottenStateIsNotExtended) {
  auto g = small_graph();
  auto child = table_with({}, {0});
  put(child, {}, {}, 0, 4, 7);
  auto t = introduce_variable(child, 0, g);
  EXPECT_EQ(at(t, {}, {}, 0), (DPEntry{4, 7}));
  EXPECT_EQ(at(t, {0}, {0}, 0), (DPEntry{1, 1}));
  EXPECT_EQ(t.entries.size(), 2u);
}

TEST(IntroduceVariable, RejectsBagMismatch) {
  auto g = small_graph();
  EXPECT_THROW(introduce_variable(table_with({0}, {}), 0, g), std::invalid_argument);
}

TEST(ForgetVariable, MergesTiesAndMinima) {
  auto child = table_with({0}, {0});
  put(child, {0}, {0}, 0, 3, 2);
  put(child, {0}, {}, 0, 3, 5);
  auto t = forget_variable(child, 0);
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(at(t, {0}, {}, 0), (DPEntry{3, 7}));

  auto child2 = table_with({0}, {0});
  put(child2, {0}, {0}, 0, 2, 1);
  put(child2, {0}, {}, 0, 5, 9);
  EXPECT_EQ(at(forget_variable(child2, 0), {0}, {}, 0), (DPEntry{2, 1}));
  EXPECT_THROW(forget_variable(table_with({}, {}), 0), std::invalid_argument);
}

TEST(IntroduceCheck, ParityOfBagMembers) {
  auto g = small_graph();
  auto child = table_with({0, 1}, {});
  put(child, {}, {0}, 0, 1, 1);
  put(child, {}, {0, 1}, 0, 2, 1);
  put(child, {}, {}, 0, 6, 2);
  auto t = introduce_check(child, 0, g);
  EXPECT_EQ(at(t, {0}, {0}, 0), (DPEntry{1, 1}));
  EXPECT_EQ(at(t, {}, {0, 1}, 0), (DPEntry{2, 1}));
  EXPECT_EQ(at(t, {}, {}, 0), (DPEntry{6, 2}));
  EXPECT_EQ(t.entries.size(), 3u);
}

TEST(ForgetCheck, DropsBeyondBudget) {
  auto child = table_with({0}, {0});
  put(child, {0}, {0}, 0, 1, 1);
  EXPECT_TRUE(forget_check(child, 0, 0).entries.empty());
  auto t = forget_check(child, 0, 1);
  EXPECT_EQ(at(t, {}, {0}, 1), (DPEntry{1, 1}));
}

TEST(ForgetCheck, MergesPredecessorsOfTheSameKey) {
  auto child = table_with({0}, {0});
  put(child, {0}, {0}, 0, 4, 2);
  put(child, {}, {0}, 1, 4, 3);
  auto t = forget_check(child, 0, 1);
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(at(t, {}, {0}, 1), (DPEntry{4, 5}));
}

TEST(Join, SharedVertexCountedOnce) {
  // v0 with check c0 in the bag; v0 is the only neighbour of c0 seen
  auto g = TannerGraph::from_dense({{1}});
  auto left = table_with({0}, {0});
  put(left, {0}, {0}, 0, 1, 1);
  auto right = left;
  auto t = join(left, right, g, 0);
  EXPECT_EQ(at(t, {0}, {0}, 0), (DPEntry{1, 1}));
}

TEST(Join, SingleSidedEntriesSurviveWhenQIsEmpty) {
  auto g = TannerGraph::from_dense({{1}});
  auto left = table_with({}, {});
  put(left, {}, {}, 0, 4, 7);
  auto t = join(left, table_with({}, {}), g, 0);
  EXPECT_EQ(at(t, {}, {}, 0), (DPEntry{4, 7}));
}

TEST(Join, CombinesForgottenBudgets) {
  auto g = TannerGraph::from_dense({{1}});
  auto left = table_with({}, {});
  put(left, {}, {}, 1, 2, 3);
  auto right = table_with({}, {});
  put(right, {}, {}, 1, 5, 2);
  auto t1 = join(left, right, g, 1);
  EXPECT_EQ(t1.entries.size(), 1u);  // pair would need d = 2
  auto t2 = join(left, right, g, 2);
  EXPECT_EQ(at(t2, {}, {}, 2), (DPEntry{7, 6}));
  EXPECT_EQ(at(t2, {}, {}, 1), (DPEntry{2, 3}));
}

TEST(Join, EmptyPartnerIsIdentity) {
  std::mt19937_64 rng(4);
  auto g = random_graph(rng, 8, 6);
  auto ntd = make_nice(g, heuristic_decomposition(g));
  auto r = run_dp(g, ntd, 1, true);
  const auto& root = r.tables->back();
  auto joined = join(root, table_with({}, {}), g, 1);
  EXPECT_EQ(joined.entries, root.entries);
  EXPECT_THROW(join(root, table_with({0}, {}), g, 1), std::invalid_argument);
}

TEST(RunDp, RepetitionCode) {
  auto g = testing::repetition2();
  auto s = min_distance(g, make_nice(g, heuristic_decomposition(g)));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->a_min, 2u);
  EXPECT_EQ(s->count, 1);
}

TEST(RunDp, HammingOnSeveralDecompositions) {
  auto g = testing::hamming74();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    auto s = min_distance(g, make_nice(g, random_decomposition(g, rng)));
    ASSERT_TRUE(s);
    EXPECT_EQ(s->a_min, 3u);
    EXPECT_EQ(s->count, 7);
  }
}

TEST(RunDp, ChainCodeAndZeroCode) {
  auto chain = TannerGraph::from_dense({{1, 1, 0}, {0, 1, 1}});
  auto s = min_distance(chain, make_nice(chain, heuristic_decomposition(chain)));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->a_min, 3u);
  EXPECT_EQ(s->count, 1);

  auto identity = TannerGraph::from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_FALSE(min_distance(identity, make_nice(identity, heuristic_decomposition(identity))));

  TannerGraph nothing(0, {});
  EXPECT_FALSE(run_dp(nothing, make_nice(nothing, heuristic_decomposition(nothing)), 2).spectrum);
}

TEST(RunDp, RejectsDecompositionOfAnotherGraph) {
  auto g = testing::hamming74();
  auto other = testing::six_cycle();
  auto ntd = make_nice(other, heuristic_decomposition(other));
  EXPECT_THROW(run_dp(g, ntd, 0), std::invalid_argument);
}

TEST(RunDp, RejectsOverwideBags) {
  std::vector<std::vector<VarId>> rows(1);
  for (VarId v = 0; v < 70; ++v) rows[0].push_back(v);
  TannerGraph g(70, rows);
  TreeDecomposition td;
  td.num_graph_nodes = 71;
  td.bags.emplace_back(71);
  std::iota(td.bags[0].begin(), td.bags[0].end(), NodeId{0});
  EXPECT_THROW(run_dp(g, make_nice(g, td), 0), std::length_error);
}

TEST(RunDp, MatchesExhaustiveSearchOnRandomGraphs) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 150; ++i) {
    auto g = random_graph(rng, 11, 8);
    auto ntd = make_nice(g, random_decomposition(g, rng));
    for (unsigned b = 0; b <= 2; ++b) {
      auto dp = run_dp(g, ntd, b).spectrum;
      auto truth = testing::sweep_spectrum(g, b);
      ASSERT_EQ(dp.has_value(), truth.has_value()) << "instance " << i << " b=" << b;
      if (truth) {
        ASSERT_EQ(dp->a_min, truth->first);
        ASSERT_EQ(dp->count, truth->second);
      }
    }
  }
}

TEST(RunDp, IndependentOfTheDecomposition) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 60; ++i) {
    auto g = random_graph(rng, 12, 9);
    for (unsigned b = 0; b <= 2; ++b) {
      auto ref = run_dp(g, make_nice(g, heuristic_decomposition(g)), b).spectrum;
      for (int k = 0; k < 3; ++k) ASSERT_EQ(run_dp(g, make_nice(g, random_decomposition(g, rng)), b).spectrum, ref);
    }
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ScLdpcParams p{2, 3, 4, 2, 2, seed};
    auto g = generate_sc_ldpc(p);
    for (unsigned b = 0; b <= 1; ++b)
      ASSERT_EQ(run_dp(g, make_nice(g, sc_path_decomposition(g, p)), b).spectrum,
                run_dp(g, make_nice(g, heuristic_decomposition(g)), b).spectrum);
  }
}

TEST(RunDp, ZeroBudgetMatchesReferenceDp) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 150; ++i) {
    auto g = random_graph(rng, 12, 9);
    auto ntd = make_nice(g, random_decomposition(g, rng));
    auto engine = min_distance(g, ntd);
    auto reference = testing::reference_min_distance(g, ntd);
    ASSERT_EQ(engine.has_value(), reference.has_value());
    if (engine) {
      ASSERT_EQ(engine->a_min, reference->first);
      ASSERT_EQ(engine->count, reference->second);
    }
  }
}

TEST(RunDp, CountsMinimumWeightCodewords) {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 60; ++i) {
    auto g = random_graph(rng, 20, 14);
    auto s = min_distance(g, make_nice(g, heuristic_decomposition(g)));
    auto truth = testing::null_space_min_weight(g);
    ASSERT_EQ(s.has_value(), truth.has_value());
    if (s) {
      ASSERT_EQ(s->a_min, truth->first);
      ASSERT_EQ(s->count, truth->second);
    }
  }
}

TEST(RunDp, TableKeysRespectBagsAndBudget) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 40; ++i) {
    auto g = random_graph(rng, 10, 8);
    auto ntd = make_nice(g, random_decomposition(g, rng));
    const unsigned b = static_cast<unsigned>(rng() % 3);
    auto r = run_dp(g, ntd, b, true);
    for (const auto& t : *r.tables)
      for (const auto& [k, e] : t.entries) {
        ASSERT_LE(k.forgotten, b);
        ASSERT_LT(k.odd, Mask{1} << t.bag_c.size());
        ASSERT_LT(k.members, Mask{1} << t.bag_v.size());
        ASSERT_GE(e.size, 1u);
        ASSERT_GE(e.count, 1);
        if (b == 0) {
          ASSERT_EQ(k.forgotten, 0u);
        }
      }
  }
}

TEST(RunDp, CountsBeyondSixtyFourBits) {
  // 70 isolated variables: every singleton is a (1,0) set, and
  // 4 disjoint copies of a two-check parity block give many minima
  TannerGraph g(70, {});
  auto s = min_distance(g, make_nice(g, heuristic_decomposition(g)));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->a_min, 1u);
  EXPECT_EQ(s->count, 70);

  // 80 independent repetition pairs with b = 80: each pair contributes a
  // single variable (2 choices), so the count is 2^80
  std::vector<std::vector<VarId>> rows;
  for (VarId p = 0; p < 80; ++p) rows.push_back({2 * p, 2 * p + 1});
  TannerGraph pairs(160, rows);
  auto r = run_dp(pairs, make_nice(pairs, heuristic_decomposition(pairs)), 80).spectrum;
  ASSERT_TRUE(r);
  EXPECT_EQ(r->a_min, 80u);
  EXPECT_EQ(r->count, Count(1) << 80);
}

TEST(DebugDump, SortedJson) {
  auto child = table_with({0, 2}, {1});
  put(child, {1}, {2}, 0, 1, 1);
  put(child, {}, {0, 2}, 1, 3, 12);
  auto j = to_json(child);
  EXPECT_EQ(j["bag_v"], nlohmann::json::parse("[0,2]"));
  ASSERT_EQ(j["entries"].size(), 2u);
  EXPECT_EQ(j["entries"][0]["I"], nlohmann::json::array());
  EXPECT_EQ(j["entries"][0]["g"], "12");
  EXPECT_EQ(j["entries"][1]["Q"], nlohmann::json::parse("[2]"));
}

}  // namespace
}  // namespace trapgraph
