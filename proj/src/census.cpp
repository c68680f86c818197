#include "lamcat/census.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lamcat/errors.hpp"
#include "lamcat/special.hpp"

namespace lamcat {

std::int64_t CaterpillarCensus::block_total() const {
  return std::accumulate(alive.begin(), alive.end(), std::int64_t{0});
}

CaterpillarCensus new_census(std::int64_t n, int r_max) {
  if (n < 2) throw DomainError("new_census: n must be >= 2");
  if (r_max < 2) throw DomainError("new_census: r_max must be >= 2");
  if (r_max > n) throw DomainError("new_census: r_max must not exceed n");
  CaterpillarCensus census;
  census.n = n;
  census.r_max = r_max;
  census.alive.assign(static_cast<std::size_t>(r_max) + 1, 0);
  census.alive[1] = n;
  census.cumulative.assign(static_cast<std::size_t>(r_max) + 1, 0);
  return census;
}

std::optional<int> caterpillar_created(const std::vector<std::int64_t>& composition, std::int64_t k) {
  if (k != 2 || composition.size() < 2 || composition[1] == 0) return std::nullopt;
  if (composition[1] == 2) return 2;
  for (std::size_t l = 2; l < composition.size(); ++l) {
    if (composition[l] == 1) return static_cast<int>(l) + 1;
  }
  return std::nullopt;
}

void sample_event(const CaterpillarCensus& census, const MergerKernel& kernel, RandomStream& rng,
                  MergerEvent& event) {
  const std::int64_t b = census.block_total();
  if (b < 2) throw TerminalStateError("sample_event: a single block remains");
  event.holding_time = rng.exponential(kernel.total_rate(b));
  event.k = kernel.sample_size(b, rng.uniform());
  event.composition.assign(census.alive.size(), 0);
  std::int64_t remaining = b;
  for (std::int64_t drawn = 0; drawn < event.k; ++drawn) {
    auto index = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(remaining)));
    std::size_t c = 0;
    while (true) {
      const std::int64_t available = census.alive[c] - event.composition[c];
      if (index < available) break;
      index -= available;
      ++c;
    }
    ++event.composition[c];
    --remaining;
  }
  event.created = caterpillar_created(event.composition, event.k);
}

MergerEvent sample_event(const CaterpillarCensus& census, const MergerKernel& kernel, RandomStream& rng) {
  MergerEvent event;
  sample_event(census, kernel, rng, event);
  return event;
}

void apply_merger(CaterpillarCensus& census, const MergerEvent& event) {
  if (event.composition.size() != census.alive.size()) {
    throw ConsistencyError("apply_merger: composition has the wrong number of categories");
  }
  std::int64_t chosen = 0;
  for (std::size_t c = 0; c < census.alive.size(); ++c) {
    if (event.composition[c] < 0 || event.composition[c] > census.alive[c]) {
      throw ConsistencyError("apply_merger: composition exceeds alive blocks in category " +
                             std::to_string(c));
    }
    chosen += event.composition[c];
  }
  if (chosen != event.k || event.k < 2) {
    throw ConsistencyError("apply_merger: composition does not sum to k >= 2");
  }
  for (std::size_t c = 0; c < census.alive.size(); ++c) census.alive[c] -= event.composition[c];
  if (event.created && *event.created <= census.r_max) {
    ++census.alive[static_cast<std::size_t>(*event.created)];
    ++census.cumulative[static_cast<std::size_t>(*event.created)];
  } else {
    ++census.alive[0];
  }
  census.coalescent_time += event.holding_time;
}

TotalsResult run_totals(const MergerKernel& kernel, std::int64_t n, int r_max, RandomStream& rng) {
  auto census = new_census(n, r_max);
  MergerEvent event;
  TotalsResult result;
  std::int64_t blocks = n;
  while (blocks > 1) {
    sample_event(census, kernel, rng, event);
    apply_merger(census, event);
    blocks -= event.k - 1;
    ++result.events;
  }
  result.xi = census.cumulative;
  result.final_time = census.coalescent_time;
  return result;
}

TotalsResult run_totals(const LambdaMeasure& measure, std::int64_t n, int r_max, std::uint64_t seed,
                        std::uint64_t stream) {
  const MergerKernel kernel(measure, n);
  RandomStream rng(seed, stream);
  return run_totals(kernel, n, r_max, rng);
}

double scaled_time_unit(const LambdaMeasure& measure, std::int64_t n) {
  if (n < 2) throw DomainError("scaled_time_unit: n must be >= 2");
  const auto nd = static_cast<double>(n);
  if (measure.kind() == MeasureKind::kingman) return 2.0 / (measure.scale() * nd);
  const double a = measure.alpha();
  return a / (measure.a_lambda() * std::pow(nd, a - 1.0) * std::exp(log_gamma(2.0 - a)));
}

std::vector<Snapshot> run_trajectory(const MergerKernel& kernel, std::int64_t n, int r_max,
                                     const std::vector<double>& time_grid, RandomStream& rng) {
  for (std::size_t i = 0; i < time_grid.size(); ++i) {
    if (!(time_grid[i] >= 0.0)) throw DomainError("run_trajectory: grid times must be nonnegative");
    if (i > 0 && !(time_grid[i] > time_grid[i - 1])) {
      throw DomainError("run_trajectory: grid must be strictly increasing");
    }
  }
  auto census = new_census(n, r_max);
  const double unit = scaled_time_unit(kernel.measure(), n);
  const auto nd = static_cast<double>(n);
  std::vector<Snapshot> out;
  out.reserve(time_grid.size());

  const auto record = [&](double t_scaled) {
    Snapshot s;
    s.t_scaled = t_scaled;
    s.x.resize(static_cast<std::size_t>(r_max) + 1);
    s.x[0] = static_cast<double>(census.block_total()) / nd;
    for (int l = 1; l <= r_max; ++l) s.x[static_cast<std::size_t>(l)] = static_cast<double>(census.count(l)) / nd;
    out.push_back(std::move(s));
  };

  std::size_t next = 0;
  MergerEvent event;
  while (next < time_grid.size() && census.block_total() > 1) {
    sample_event(census, kernel, rng, event);
    const double jump_time = census.coalescent_time + event.holding_time;
    while (next < time_grid.size() && time_grid[next] * unit < jump_time) record(time_grid[next++]);
    apply_merger(census, event);
  }
  while (next < time_grid.size()) record(time_grid[next++]);
  return out;
}

}  // namespace lamcat
