#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lamcat/merger_kernel.hpp"
#include "lamcat/random.hpp"

namespace lamcat {

/// Alive blocks of the coalescent restricted to n individuals, summarised by
/// category. Category l in 1..r_max holds the l-caterpillars (l = 1 are the
/// singletons); category 0 holds every other block.
///
/// cumulative[r] counts r-caterpillars that have existed up to now, for
/// r in 2..r_max; entries 0 and 1 are unused.
struct CaterpillarCensus {
  std::int64_t n = 0;
  int r_max = 0;
  std::vector<std::int64_t> alive;
  std::vector<std::int64_t> cumulative;
  double coalescent_time = 0.0;

  std::int64_t count(int l) const { return alive[static_cast<std::size_t>(l)]; }
  std::int64_t other_blocks() const { return alive[0]; }
  std::int64_t block_total() const;
};

/// One merger of the jump chain.
///
/// composition[c] is the number of merged blocks drawn from category c
/// (same layout as CaterpillarCensus::alive) and sums to k. `created` is the
/// caterpillar size produced by a binary singleton + l-caterpillar merger; it
/// may exceed r_max, in which case the new block is filed as other.
struct MergerEvent {
  double holding_time = 0.0;
  std::int64_t k = 0;
  std::vector<std::int64_t> composition;
  std::optional<int> created;
};

CaterpillarCensus new_census(std::int64_t n, int r_max);

/// Draws the next merger. Random numbers are consumed in a fixed order:
/// (1) one uniform for the Exponential(lambda_b) holding time,
/// (2) one uniform for the merger size,
/// (3) one bounded integer per merged block, drawn without replacement from
///     the alive blocks listed category by category (0, 1, ..., r_max).
/// Rescaling the measure changes only the value of draw (1).
void sample_event(const CaterpillarCensus& census, const MergerKernel& kernel, RandomStream& rng,
                  MergerEvent& event);
MergerEvent sample_event(const CaterpillarCensus& census, const MergerKernel& kernel, RandomStream& rng);

// Caterpillar size produced by merging the given composition, if any.
std::optional<int> caterpillar_created(const std::vector<std::int64_t>& composition, std::int64_t k);

/// Applies a merger: k blocks leave their categories and one new block joins
/// category `created` (or other), cumulative[created] increments when
/// created <= r_max, and time advances by the holding time.
void apply_merger(CaterpillarCensus& census, const MergerEvent& event);

struct TotalsResult {
  // xi[r] for r in 2..r_max; entries 0 and 1 unused.
  std::vector<std::int64_t> xi;
  std::int64_t events = 0;
  double final_time = 0.0;
};

TotalsResult run_totals(const MergerKernel& kernel, std::int64_t n, int r_max, RandomStream& rng);
TotalsResult run_totals(const LambdaMeasure& measure, std::int64_t n, int r_max, std::uint64_t seed,
                        std::uint64_t stream = 0);

/// Unscaled coalescent time corresponding to one unit of scaled time:
///   alpha / (A n^(alpha-1) Gamma(2-alpha))  for alpha in (1, 2), A including scale,
///   2 / (scale n)                           for Kingman.
double scaled_time_unit(const LambdaMeasure& measure, std::int64_t n);

struct Snapshot {
  double t_scaled = 0.0;
  // x[0] = blocks / n, x[l] = l-caterpillars / n for l in 1..r_max.
  std::vector<double> x;
};

/// Runs the same event loop as run_totals and records the rescaled census at
/// every grid time. The loop stops after the last grid time is recorded.
std::vector<Snapshot> run_trajectory(const MergerKernel& kernel, std::int64_t n, int r_max,
                                     const std::vector<double>& time_grid, RandomStream& rng);

}  // namespace lamcat
