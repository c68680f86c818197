#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lamcat/census.hpp"
#include "lamcat/measure.hpp"

namespace lamcat {

enum class Mode { totals, trajectory, variance_scaling };
enum class OutputFormat { csv, jsonl };

struct ExperimentConfig {
  LambdaMeasure measure = LambdaMeasure::kingman();
  std::vector<std::int64_t> n_values;
  int r_max = 2;
  int replicas = 1;
  std::uint64_t master_seed = 0;
  Mode mode = Mode::totals;
  std::vector<double> time_grid;
  int workers = 0;  // 0: OpenMP default

  void validate() const;
};

/// Outcome of one (n, replica) task. Replica j always uses the random stream
/// (master_seed, j), so results do not depend on scheduling.
struct ReplicaResult {
  std::int64_t n = 0;
  int replica = 0;
  bool ok = true;
  std::string failure;
  TotalsResult totals;
  std::vector<Snapshot> trajectory;
};

struct EnsembleResult {
  // Ordered by position of n in config.n_values, then by replica index.
  std::vector<ReplicaResult> replicas;
};

// Serial reference.
EnsembleResult run_ensemble_serial(const ExperimentConfig& config);

// OpenMP over (n, replica) tasks; identical output to the serial path.
EnsembleResult run_ensemble(const ExperimentConfig& config);

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const RunningStats& other);
  // Sample standard deviation; 0 for a single observation.
  double sd() const;
};

struct AggregateRow {
  std::int64_t n = 0;
  int r = 0;
  double t_scaled = std::numeric_limits<double>::quiet_NaN();  // NaN in totals mode
  double mean = 0.0;
  double sd = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t count = 0;
  double target = 0.0;
  double abs_deviation = 0.0;
  bool degenerate = false;  // single replica: zero-width interval
};

/// Totals mode: xi_r / n against limit_constant. Trajectory mode: X_r(t)
/// against x_r(t). Failed replicas are skipped; an ensemble with no
/// successful replica is an error.
std::vector<AggregateRow> aggregate(const EnsembleResult& result, const ExperimentConfig& config);

struct VarianceProbe {
  double alpha = 0.0;
  std::vector<std::int64_t> n_values;
  std::vector<double> variance;         // sample variance of X_0(t1) - X_0(t0)
  std::vector<double> log_variance_se;  // delta-method standard error
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
  double reference_exponent = 0.0;  // alpha - 3
  double identity_exponent = 0.0;   // 1 - alpha, from sum k(k-1) C lambda = b(b-1) Lambda[0,1]
};

/// Least-squares slope of log Var[X_0(t1) - X_0(t0)] against log n.
/// alpha must lie in (1, 2) and the n grid must span at least two decades.
VarianceProbe variance_scaling_probe(const LambdaMeasure& measure, const std::vector<std::int64_t>& n_values,
                                     int replicas, std::uint64_t master_seed, double t0 = 0.25,
                                     double t1 = 0.5, int workers = 0);

// Output. CSV header lines start with '#'; JSON-lines emit a header object.
using HeaderFields = std::vector<std::pair<std::string, std::string>>;
inline constexpr const char* kToolVersion = "0.1.0";

void write_header(std::ostream& out, OutputFormat format, const HeaderFields& fields);
// Columns n,r,xi_r,replica,seed
void write_totals_raw(std::ostream& out, OutputFormat format, const EnsembleResult& result,
                      const ExperimentConfig& config);
// Columns t_scaled,r,X_r,replica
void write_trajectory_raw(std::ostream& out, OutputFormat format, const EnsembleResult& result);
// Columns n,r,t_scaled,mean,sd,ci_low,ci_high,replicas,theory,abs_dev
void write_aggregate(std::ostream& out, OutputFormat format, const std::vector<AggregateRow>& rows);

std::string format_double(double x, int precision = 17);

}  // namespace lamcat
