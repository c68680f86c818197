#include "lamcat/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "json.hpp"
#include "lamcat/errors.hpp"
#include "lamcat/merger_kernel.hpp"
#include "lamcat/theory.hpp"

namespace lamcat {

void ExperimentConfig::validate() const {
  if (replicas < 1) throw DomainError("replicas must be >= 1");
  if (n_values.empty()) throw DomainError("at least one n value is required");
  for (const auto n : n_values) {
    if (n < 2) throw DomainError("n values must be >= 2");
    if (r_max > n) throw DomainError("r_max must not exceed n");
  }
  if (r_max < 2) throw DomainError("r_max must be >= 2");
  if (mode != Mode::totals) {
    if (time_grid.empty()) throw DomainError("a time grid is required");
    for (std::size_t i = 0; i < time_grid.size(); ++i) {
      if (!(time_grid[i] >= 0.0) || (i > 0 && !(time_grid[i] > time_grid[i - 1]))) {
        throw DomainError("time grid must be nonnegative and strictly increasing");
      }
    }
  }
}

namespace {

ReplicaResult run_task(const ExperimentConfig& config, const MergerKernel& kernel, std::size_t task) {
  const auto replicas = static_cast<std::size_t>(config.replicas);
  ReplicaResult out;
  out.n = config.n_values[task / replicas];
  out.replica = static_cast<int>(task % replicas);
  try {
    RandomStream rng(config.master_seed, static_cast<std::uint64_t>(out.replica));
    if (config.mode == Mode::totals) {
      out.totals = run_totals(kernel, out.n, config.r_max, rng);
    } else {
      out.trajectory = run_trajectory(kernel, out.n, config.r_max, config.time_grid, rng);
    }
  } catch (const std::exception& e) {
    out.ok = false;
    out.failure = e.what();
  }
  return out;
}

MergerKernel make_kernel(const ExperimentConfig& config) {
  return MergerKernel(config.measure, *std::max_element(config.n_values.begin(), config.n_values.end()));
}

}  // namespace

EnsembleResult run_ensemble_serial(const ExperimentConfig& config) {
  config.validate();
  const auto kernel = make_kernel(config);
  const std::size_t tasks = config.n_values.size() * static_cast<std::size_t>(config.replicas);
  EnsembleResult result;
  result.replicas.reserve(tasks);
  for (std::size_t task = 0; task < tasks; ++task) result.replicas.push_back(run_task(config, kernel, task));
  return result;
}

EnsembleResult run_ensemble(const ExperimentConfig& config) {
  config.validate();
  const auto kernel = make_kernel(config);
  const auto tasks = static_cast<long>(config.n_values.size()) * config.replicas;
  EnsembleResult result;
  result.replicas.resize(static_cast<std::size_t>(tasks));
  const int workers = config.workers > 0 ? config.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long task = 0; task < tasks; ++task) {
    result.replicas[static_cast<std::size_t>(task)] = run_task(config, kernel, static_cast<std::size_t>(task));
  }
  return result;
}

void RunningStats::add(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const auto na = static_cast<double>(count);
  const auto nb = static_cast<double>(other.count);
  const double delta = other.mean - mean;
  const double total = na + nb;
  mean += delta * nb / total;
  m2 += other.m2 + delta * delta * na * nb / total;
  count += other.count;
}

double RunningStats::sd() const {
  return count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1)) : 0.0;
}

std::vector<AggregateRow> aggregate(const EnsembleResult& result, const ExperimentConfig& config) {
  if (result.replicas.empty()) throw DomainError("aggregate: no replica results");
  const double alpha = config.measure.alpha();
  // (n position, r, t index) -> stats; std::map keeps output ordering fixed.
  std::map<std::tuple<std::size_t, int, std::size_t>, RunningStats> stats;
  std::map<std::int64_t, std::size_t> n_position;
  for (std::size_t i = 0; i < config.n_values.size(); ++i) n_position.emplace(config.n_values[i], i);

  auto ordered = result.replicas;
  std::stable_sort(ordered.begin(), ordered.end(), [&](const ReplicaResult& a, const ReplicaResult& b) {
    return std::pair(n_position.at(a.n), a.replica) < std::pair(n_position.at(b.n), b.replica);
  });
  bool any = false;
  for (const auto& rep : ordered) {
    if (!rep.ok) continue;
    any = true;
    const auto pos = n_position.at(rep.n);
    const auto nd = static_cast<double>(rep.n);
    if (config.mode == Mode::totals) {
      for (int r = 2; r <= config.r_max; ++r) {
        stats[{pos, r, 0}].add(static_cast<double>(rep.totals.xi[static_cast<std::size_t>(r)]) / nd);
      }
    } else {
      for (std::size_t ti = 0; ti < rep.trajectory.size(); ++ti) {
        for (int r = 0; r <= config.r_max; ++r) {
          stats[{pos, r, ti}].add(rep.trajectory[ti].x[static_cast<std::size_t>(r)]);
        }
      }
    }
  }
  if (!any) throw DomainError("aggregate: every replica failed");

  std::vector<AggregateRow> rows;
  for (const auto& [key, s] : stats) {
    const auto& [pos, r, ti] = key;
    AggregateRow row;
    row.n = config.n_values[pos];
    row.r = r;
    row.mean = s.mean;
    row.sd = s.sd();
    row.count = s.count;
    row.degenerate = s.count < 2;
    const double half = row.degenerate ? 0.0 : 1.96 * row.sd / std::sqrt(static_cast<double>(s.count));
    row.ci_low = row.mean - half;
    row.ci_high = row.mean + half;
    if (config.mode == Mode::totals) {
      row.target = limit_constant(alpha, r);
    } else {
      row.t_scaled = config.time_grid[ti];
      row.target = x_r(alpha, r, row.t_scaled);
    }
    row.abs_deviation = std::abs(row.mean - row.target);
    rows.push_back(row);
  }
  return rows;
}

VarianceProbe variance_scaling_probe(const LambdaMeasure& measure, const std::vector<std::int64_t>& n_values,
                                     int replicas, std::uint64_t master_seed, double t0, double t1,
                                     int workers) {
  if (measure.kind() == MeasureKind::kingman || !(measure.alpha() < 2.0)) {
    throw DomainError("variance_scaling_probe: alpha must lie in (1, 2)");
  }
  if (n_values.size() < 2) throw DomainError("variance_scaling_probe: need at least two n values");
  const auto [lo, hi] = std::minmax_element(n_values.begin(), n_values.end());
  if (static_cast<double>(*hi) < 100.0 * static_cast<double>(*lo)) {
    throw DomainError("variance_scaling_probe: n grid must span at least two decades");
  }
  if (replicas < 3) throw DomainError("variance_scaling_probe: need at least three replicas");
  if (!(t0 >= 0.0 && t1 > t0)) throw DomainError("variance_scaling_probe: need 0 <= t0 < t1");

  ExperimentConfig config;
  config.measure = measure;
  config.n_values = n_values;
  config.r_max = 2;
  config.replicas = replicas;
  config.master_seed = master_seed;
  config.mode = Mode::variance_scaling;
  config.time_grid = {t0, t1};
  config.workers = workers;
  const auto ensemble = run_ensemble(config);

  VarianceProbe probe;
  probe.alpha = measure.alpha();
  probe.n_values = n_values;
  probe.reference_exponent = probe.alpha - 3.0;
  probe.identity_exponent = 1.0 - probe.alpha;
  const auto per_n = static_cast<std::size_t>(replicas);
  std::vector<double> log_n;
  std::vector<double> log_v;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    std::vector<double> inc;
    for (std::size_t j = 0; j < per_n; ++j) {
      const auto& rep = ensemble.replicas[i * per_n + j];
      if (!rep.ok) throw NumericError("variance_scaling_probe: replica failed: " + rep.failure, 0.0);
      inc.push_back(rep.trajectory[1].x[0] - rep.trajectory[0].x[0]);
    }
    RunningStats s;
    for (const double v : inc) s.add(v);
    const double var = s.m2 / static_cast<double>(s.count - 1);
    double m4 = 0.0;
    for (const double v : inc) m4 += std::pow(v - s.mean, 4);
    m4 /= static_cast<double>(s.count);
    const auto r = static_cast<double>(s.count);
    const double var_of_var = std::max(0.0, (m4 - var * var * (r - 3.0) / (r - 1.0)) / r);
    probe.variance.push_back(var);
    probe.log_variance_se.push_back(var > 0.0 ? std::sqrt(var_of_var) / var : 0.0);
    if (!(var > 0.0)) throw NumericError("variance_scaling_probe: zero increment variance", 0.0);
    log_n.push_back(std::log(static_cast<double>(n_values[i])));
    log_v.push_back(std::log(var));
  }
  const auto m = static_cast<double>(log_n.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    mx += log_n[i] / m;
    my += log_v[i] / m;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
    sxy += (log_n[i] - mx) * (log_v[i] - my);
  }
  probe.slope = sxy / sxx;
  probe.intercept = my - probe.slope * mx;
  double se2 = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    const double w = (log_n[i] - mx) / sxx;
    se2 += w * w * probe.log_variance_se[i] * probe.log_variance_se[i];
  }
  probe.slope_se = std::sqrt(se2);
  return probe;
}

std::string format_double(double x, int precision) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

void write_header(std::ostream& out, OutputFormat format, const HeaderFields& fields) {
  if (format == OutputFormat::jsonl) {
    nlohmann::ordered_json header;
    header["tool"] = "lamcat";
    header["version"] = kToolVersion;
    for (const auto& [k, v] : fields) header[k] = v;
    out << nlohmann::ordered_json{{"header", header}}.dump() << '\n';
    return;
  }
  out << "# lamcat " << kToolVersion << '\n';
  for (const auto& [k, v] : fields) out << "# " << k << ": " << v << '\n';
}

void write_totals_raw(std::ostream& out, OutputFormat format, const EnsembleResult& result,
                      const ExperimentConfig& config) {
  if (format == OutputFormat::csv) out << "n,r,xi_r,replica,seed\n";
  for (const auto& rep : result.replicas) {
    if (!rep.ok) continue;
    for (int r = 2; r <= config.r_max; ++r) {
      const auto xi = rep.totals.xi[static_cast<std::size_t>(r)];
      if (format == OutputFormat::csv) {
        out << rep.n << ',' << r << ',' << xi << ',' << rep.replica << ',' << config.master_seed << '\n';
      } else {
        out << nlohmann::ordered_json{{"n", rep.n}, {"r", r}, {"xi_r", xi}, {"replica", rep.replica},
                                      {"seed", config.master_seed}}
                   .dump()
            << '\n';
      }
    }
  }
}

void write_trajectory_raw(std::ostream& out, OutputFormat format, const EnsembleResult& result) {
  if (format == OutputFormat::csv) out << "t_scaled,r,X_r,replica\n";
  for (const auto& rep : result.replicas) {
    if (!rep.ok) continue;
    for (const auto& snap : rep.trajectory) {
      for (std::size_t r = 0; r < snap.x.size(); ++r) {
        if (format == OutputFormat::csv) {
          out << format_double(snap.t_scaled) << ',' << r << ',' << format_double(snap.x[r]) << ','
              << rep.replica << '\n';
        } else {
          out << nlohmann::ordered_json{{"t_scaled", snap.t_scaled}, {"r", r}, {"X_r", snap.x[r]},
                                        {"replica", rep.replica}}
                     .dump()
              << '\n';
        }
      }
    }
  }
}

void write_aggregate(std::ostream& out, OutputFormat format, const std::vector<AggregateRow>& rows) {
  if (format == OutputFormat::csv) out << "n,r,t_scaled,mean,sd,ci_low,ci_high,replicas,theory,abs_dev\n";
  for (const auto& row : rows) {
    if (format == OutputFormat::csv) {
      out << row.n << ',' << row.r << ',' << format_double(row.t_scaled, 10) << ',' << format_double(row.mean, 10)
          << ',' << format_double(row.sd, 10) << ',' << format_double(row.ci_low, 10) << ','
          << format_double(row.ci_high, 10) << ',' << row.count << ',' << format_double(row.target, 10) << ','
          << format_double(row.abs_deviation, 10) << '\n';
    } else {
      nlohmann::ordered_json j{{"n", row.n}, {"r", row.r}};
      if (!std::isnan(row.t_scaled)) j["t_scaled"] = row.t_scaled;
      j["mean"] = row.mean;
      j["sd"] = row.sd;
      j["ci_low"] = row.ci_low;
      j["ci_high"] = row.ci_high;
      j["replicas"] = row.count;
      j["theory"] = row.target;
      j["abs_dev"] = row.abs_deviation;
      j["degenerate"] = row.degenerate;
      out << j.dump() << '\n';
    }
  }
}

}  // namespace lamcat
