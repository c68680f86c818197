#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lamcat/errors.hpp"
#include "lamcat/oracle.hpp"

namespace lamcat {
namespace {

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(LAMCAT_TEST_DATA_DIR) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Singletons {1}..{4} are ids 0..3; new blocks take ids 4, 5, 6.
MergeHistory fig1_left() { return history_from_merges(4, {{0, 1}, {4, 2}, {5, 3}}); }
MergeHistory fig1_right() { return history_from_merges(4, {{0, 1}, {2, 3}, {4, 5}}); }

TEST(CaterpillarsFromHistory, ChainOfSingletons) {
  const auto h = fig1_left();
  EXPECT_EQ(caterpillars_from_history(h, 2), 1);
  EXPECT_EQ(caterpillars_from_history(h, 3), 1);
  EXPECT_EQ(caterpillars_from_history(h, 4), 1);
}

TEST(CaterpillarsFromHistory, TwoCherriesAreNotAFourCaterpillar) {
  const auto h = fig1_right();
  EXPECT_EQ(caterpillars_from_history(h, 2), 2);
  EXPECT_EQ(caterpillars_from_history(h, 3), 0);
  EXPECT_EQ(caterpillars_from_history(h, 4), 0);
}

TEST(CaterpillarsFromHistory, TripleMergerIsNotACaterpillar) {
  const auto h = history_from_merges(4, {{0, 1, 2}, {3, 4}});
  EXPECT_EQ(caterpillars_from_history(h, 2), 0);
  EXPECT_EQ(caterpillars_from_history(h, 3), 0);
  EXPECT_EQ(caterpillars_from_history(h, 4), 0);
  EXPECT_EQ(caterpillars_from_history(h, 1), 4);
}

TEST(CaterpillarsFromHistory, LeafPaths) {
  const auto h = fig1_left();
  EXPECT_EQ(h.leaf_paths[0], (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(h.leaf_paths[3], (std::vector<int>{1, 4}));
  const auto r = fig1_right();
  EXPECT_EQ(r.leaf_paths[0], (std::vector<int>{1, 2, 4}));
}

TEST(History, GoldenFiles) {
  for (const auto& [name, h] : {std::pair{"fig1_left.history", fig1_left()}, std::pair{"fig1_right.history", fig1_right()}}) {
    std::ostringstream out;
    write_history(out, h);
    EXPECT_EQ(out.str(), read_file(name)) << name;
  }
}

TEST(History, RoundTrip) {
  const MergerKernel kernel(LambdaMeasure::beta(1.5), 20);
  RandomStream rng(3, 3);
  const auto h = run_oracle(kernel, 20, rng);
  std::stringstream s;
  write_history(s, h);
  const auto back = read_history(s);
  EXPECT_EQ(back.block_members, h.block_members);
  ASSERT_EQ(back.events.size(), h.events.size());
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    EXPECT_EQ(back.events[i].time, h.events[i].time);
    EXPECT_EQ(back.events[i].merged, h.events[i].merged);
  }
}

TEST(History, ReaderRejectsGarbage) {
  std::istringstream no_header("EVENT 1 0,1 -> 2\n");
  EXPECT_THROW(read_history(no_header), DomainError);
  std::istringstream bad_id("HISTORY n=2\nEVENT 1 0,1 -> 7\n");
  EXPECT_THROW(read_history(bad_id), DomainError);
  std::istringstream bad_members("HISTORY n=2\nEVENT 1 0,1 -> 2\nMEMBERS\n0 1\n1 2\n2 2,1,5\n");
  EXPECT_THROW(read_history(bad_members), DomainError);
}

TEST(History, RejectsInvalidMerges) {
  EXPECT_THROW(history_from_merges(3, {{0, 1}, {0, 2}}), ConsistencyError);
  EXPECT_THROW(history_from_merges(3, {{0}}), ConsistencyError);
  EXPECT_THROW(history_from_merges(3, {{0, 9}}), ConsistencyError);
}

TEST(RunOracle, SmallCases) {
  const MergerKernel kingman(LambdaMeasure::kingman());
  RandomStream rng(0, 0);
  const auto two = run_oracle(kingman, 2, rng);
  ASSERT_EQ(two.events.size(), 1u);
  EXPECT_EQ(two.events[0].merged, (std::vector<int>{0, 1}));
  const auto three = run_oracle(kingman, 3, rng);
  EXPECT_EQ(three.events.size(), 2u);
  EXPECT_EQ(three.block_members.back(), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(caterpillars_from_history(three, 2), 1);
  EXPECT_EQ(caterpillars_from_history(three, 3), 1);
}

TEST(RunOracle, BetaStructure) {
  const MergerKernel kernel(LambdaMeasure::beta(1.5), 8);
  for (std::uint64_t s = 0; s < 50; ++s) {
    RandomStream rng(11, s);
    const auto h = run_oracle(kernel, 8, rng);
    EXPECT_GE(h.events.size(), 1u);
    EXPECT_LE(h.events.size(), 7u);
    EXPECT_NO_THROW(validate_history(h));
    EXPECT_EQ(h.block_members.back(), (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}));
    for (const auto& path : h.leaf_paths) {
      EXPECT_EQ(path.front(), 1);
      EXPECT_TRUE(std::is_sorted(path.begin(), path.end()));
      EXPECT_EQ(path.back(), 8);
    }
  }
}

TEST(RunOracle, CapEnforced) {
  const MergerKernel kernel(LambdaMeasure::kingman());
  RandomStream rng(0, 0);
  EXPECT_THROW(run_oracle(kernel, 65, rng), DomainError);
  EXPECT_THROW(run_oracle(kernel, 10, rng, 8), DomainError);
  EXPECT_THROW(run_oracle(kernel, 1, rng), DomainError);
}

TEST(CensusRule, AgreesWithDefinitionOnRandomHistories) {
  for (const auto& m : {LambdaMeasure::kingman(), LambdaMeasure::beta(1.5), LambdaMeasure::beta(1.1)}) {
    const MergerKernel kernel(m, 12);
    for (std::uint64_t s = 0; s < 500; ++s) {
      RandomStream rng(21, s);
      const auto n = static_cast<int>(2 + s % 11);
      const auto h = run_oracle(kernel, n, rng);
      ASSERT_EQ(definition_flags(h), census_rule_flags(h)) << m.spec() << " stream " << s;
      const auto census = replay_census(h, n);
      for (int r = 2; r <= n; ++r) {
        ASSERT_EQ(census.cumulative[static_cast<std::size_t>(r)], caterpillars_from_history(h, r));
      }
      // Pairwise singleton merges are exactly the cherries.
      std::int64_t cherries = 0;
      for (const auto& e : h.events) {
        if (e.merged.size() == 2 && e.merged[0] < n && e.merged[1] < n) ++cherries;
      }
      EXPECT_EQ(cherries, caterpillars_from_history(h, 2));
    }
  }
}

TEST(CensusRule, ReplayWithSmallRmaxFilesLargeCaterpillarsAsOther) {
  const auto census = replay_census(fig1_left(), 2);
  EXPECT_EQ(census.cumulative[2], 1);
  EXPECT_EQ(census.other_blocks(), 1);
  EXPECT_EQ(census.block_total(), 1);
}

TEST(RescaleTimes, CountsUnchanged) {
  const MergerKernel kernel(LambdaMeasure::beta(1.5), 16);
  RandomStream rng(2, 2);
  const auto h = run_oracle(kernel, 16, rng);
  const auto scaled = rescale_times(h, 0.01);
  for (int r = 2; r <= 16; ++r) EXPECT_EQ(caterpillars_from_history(h, r), caterpillars_from_history(scaled, r));
  EXPECT_DOUBLE_EQ(scaled.events.back().time, 0.01 * h.events.back().time);
  EXPECT_THROW(rescale_times(h, 0.0), DomainError);
}

}  // namespace
}  // namespace lamcat
