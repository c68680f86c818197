#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lamcat/census.hpp"
#include "lamcat/merger_kernel.hpp"
#include "lamcat/random.hpp"

namespace lamcat {

inline constexpr int kDefaultOracleCap = 64;

struct HistoryEvent {
  double time = 0.0;
  std::vector<int> merged;  // block ids, ascending
  int new_block = 0;
};

/// Full labelled merge history of the coalescent on individuals 1..n.
///
/// Block ids 0..n-1 are the singletons {1}..{n}; each event creates the next
/// id. leaf_paths[i - 1] lists the size of the block containing individual i,
/// starting at 1 and extended at every event that involves i.
struct MergeHistory {
  int n = 0;
  std::vector<HistoryEvent> events;
  std::vector<std::vector<int>> block_members;
  std::vector<std::vector<int>> leaf_paths;
};

/// Simulates with the full partition. Draw order matches the census engine:
/// holding time, merger size, then k block positions without replacement from
/// the alive blocks ordered by least element.
MergeHistory run_oracle(const MergerKernel& kernel, int n, RandomStream& rng, int cap = kDefaultOracleCap);

// Builds a history from explicit merges, e.g. {{0, 1}, {2, 4}} for n = 3.
MergeHistory history_from_merges(int n, const std::vector<std::vector<int>>& merges,
                                 const std::vector<double>& times = {});

/// Counts r-caterpillars literally: blocks B with |B| = r that contain some i
/// whose block-size path rises by exactly one at every step up to |B|.
std::int64_t caterpillars_from_history(const MergeHistory& history, int r);

// Per block id: caterpillar size by the literal definition, 0 otherwise.
std::vector<int> definition_flags(const MergeHistory& history);

// Per block id: caterpillar size assigned by the census merge rule, 0 otherwise.
std::vector<int> census_rule_flags(const MergeHistory& history);

/// Drives the census engine's apply_merger with the history's events.
CaterpillarCensus replay_census(const MergeHistory& history, int r_max);

// Throws ConsistencyError on a malformed history.
void validate_history(const MergeHistory& history);

MergeHistory rescale_times(MergeHistory history, double factor);

/// Line format:
///   HISTORY n=<n>
///   EVENT <time> <id>,<id>,... -> <new id>
///   MEMBERS
///   <id> <member>,<member>,...
void write_history(std::ostream& out, const MergeHistory& history);
MergeHistory read_history(std::istream& in);

}  // namespace lamcat
