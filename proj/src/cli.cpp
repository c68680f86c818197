#include "lamcat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lamcat/errors.hpp"
#include "lamcat/measure.hpp"
#include "lamcat/montecarlo.hpp"
#include "lamcat/rates.hpp"
#include "lamcat/special.hpp"
#include "lamcat/theory.hpp"
#include "lamcat/validator.hpp"
#include "lamcat/verify.hpp"

namespace lamcat {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct SharedOptions {
  std::string measure = "kind=kingman";
  std::uint64_t seed = 0;
  int replicas = 100;
  std::string output = "-";
  std::string format = "csv";
  int workers = 0;
};

// Writes named tables either as CSV blocks introduced by "# table: <name>" or
// as JSON objects tagged with the table name.
class TableWriter {
 public:
  TableWriter(std::ostream& out, OutputFormat format) : out_(out), format_(format) {}

  void begin(const std::string& name, std::vector<std::string> columns) {
    name_ = name;
    columns_ = std::move(columns);
    if (format_ == OutputFormat::csv) {
      out_ << "# table: " << name_ << '\n';
      for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
      out_ << '\n';
    }
  }

  void row(const std::vector<Json>& cells) {
    if (format_ == OutputFormat::jsonl) {
      Json j{{"table", name_}};
      for (std::size_t i = 0; i < columns_.size(); ++i) j[columns_[i]] = cells[i];
      out_ << j.dump() << '\n';
      return;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << csv_cell(cells[i]);
    out_ << '\n';
  }

 private:
  static std::string csv_cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return format_double(v.get<double>(), 15);
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (const char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      return quoted + "\"";
    }
    return v.dump();
  }

  std::ostream& out_;
  OutputFormat format_;
  std::string name_;
  std::vector<std::string> columns_;
};

template <class T>
std::string join(const std::vector<T>& values) {
  std::ostringstream s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s << ',';
    if constexpr (std::is_floating_point_v<T>) {
      s << format_double(values[i]);
    } else {
      s << values[i];
    }
  }
  return s.str();
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

OutputFormat parse_format(const std::string& text) { return text == "jsonl" ? OutputFormat::jsonl : OutputFormat::csv; }

void add_output_options(CLI::App* sub, SharedOptions& shared) {
  sub->add_option("--output,-o", shared.output, "Output file, '-' for standard output")->capture_default_str();
  sub->add_option("--format", shared.format, "Table format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
}

void add_ensemble_options(CLI::App* sub, SharedOptions& shared, std::string& measure) {
  sub->add_option("--measure", measure, "Measure spec, e.g. \"kind=beta alpha=1.5 scale=1\"")
      ->capture_default_str();
  sub->add_option("--seed", shared.seed, "Master seed")->capture_default_str();
  sub->add_option("--replicas", shared.replicas, "Replicas per n")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--workers", shared.workers, "Worker threads, 0 for all available")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_output_options(sub, shared);
}

// Key-value config lines ("key = value", '#' comments) become long flags,
// unless the same flag is already present on the command line. List values
// are comma separated.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config requires a file path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  const auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
  };
  const auto present = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ConversionError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto flag = "--" + key;
    if (!present(flag)) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

struct OutputSink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = nullptr;
};

OutputSink open_output(const std::string& path, std::ostream& fallback) {
  OutputSink sink;
  if (path == "-") {
    sink.stream = &fallback;
    return sink;
  }
  sink.file = std::make_unique<std::ofstream>(path);
  if (!*sink.file) throw DomainError("cannot open output file " + path);
  sink.stream = sink.file.get();
  return sink;
}

int report_failures(const EnsembleResult& result, std::ostream& err) {
  int failed = 0;
  for (const auto& rep : result.replicas) {
    if (!rep.ok) {
      ++failed;
      err << "replica n=" << rep.n << " index=" << rep.replica << " failed: " << rep.failure << '\n';
    }
  }
  return failed;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Caterpillar statistics of Lambda-coalescents: rates, limits and Monte Carlo checks.", "lamcat"};
  app.set_help_flag();
  app.set_help_all_flag("-h,--help", "Print help for every subcommand and flag");
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Key-value config file; command-line flags take precedence");

  SharedOptions shared;
  std::vector<std::int64_t> dump_b{10, 100};
  std::vector<std::int64_t> b_grid{100, 1000, 10000, 100000};
  std::vector<double> x_grid{0.1, 0.25, 0.5, 1.0};
  std::vector<std::int64_t> unif_k{2};
  double tail_eps = kDefaultTailEps;
  std::vector<double> alphas{1.5, 2.0};
  int r_max = 0;
  std::vector<double> t_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<std::int64_t> n_values;
  bool raw = false;
  double tol = std::nan("");
  double t0 = 0.25;
  double t1 = 0.5;
  VerifyOptions verify;
  std::string variance_measure = "kind=beta alpha=1.5";

  auto* rates = app.add_subcommand("rates", "Rate tables for a measure and the asymptotic rate report");
  rates->add_option("--measure", shared.measure, "Measure spec")->capture_default_str();
  rates->add_option("--b", dump_b, "Block counts to dump rates for (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  rates->add_option("--validate-b", b_grid, "Increasing block counts for the asymptotic report")
      ->delimiter(',')
      ->capture_default_str();
  rates->add_option("--x", x_grid, "Fractions x in (0, 1] for the asymptotic report")
      ->delimiter(',')
      ->capture_default_str();
  rates->add_option("--k", unif_k, "Merger sizes for the single-size rate check")->delimiter(',')->capture_default_str();
  rates->add_option("--tail-eps", tail_eps, "Relative truncation of rate sums")->capture_default_str();
  add_output_options(rates, shared);

  auto* theory = app.add_subcommand("theory", "Closed-form limit curves and caterpillar constants");
  theory->add_option("--alpha", alphas, "Values of alpha in (1, 2]")->delimiter(',')->capture_default_str();
  theory->add_option("--r", r_max, "Largest caterpillar size (default 4)");
  theory->add_option("--t", t_grid, "Scaled times")->delimiter(',')->capture_default_str();
  add_output_options(theory, shared);

  auto* totals = app.add_subcommand("totals", "Monte Carlo caterpillar totals against their limits");
  add_ensemble_options(totals, shared, shared.measure);
  totals->add_option("--n", n_values, "Sample sizes (default 2000)")->delimiter(',');
  totals->add_option("--r", r_max, "Largest caterpillar size (default 2)");
  totals->add_option("--tol", tol, "Fail when any |mean - theory| exceeds this");
  totals->add_flag("--raw", raw, "Also write one row per replica");

  auto* trajectory = app.add_subcommand("trajectory", "Monte Carlo rescaled census paths against x_r(t)");
  add_ensemble_options(trajectory, shared, shared.measure);
  trajectory->add_option("--n", n_values, "Sample sizes (default 100000)")->delimiter(',');
  trajectory->add_option("--r", r_max, "Largest caterpillar size (default 3)");
  trajectory->add_option("--t", t_grid, "Scaled times")->delimiter(',')->capture_default_str();
  trajectory->add_option("--tol", tol, "Fail when any |mean - theory| exceeds this");
  trajectory->add_flag("--raw", raw, "Also write one row per replica and grid time");

  auto* verify_cmd = app.add_subcommand("verify", "Engine equivalence, exact identities and time-change checks");
  verify_cmd->add_option("--small-n", verify.small_n, "Largest n for the engine comparison")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  verify_cmd->add_option("--runs", verify.runs, "Seeded runs per n and measure")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Master seed")->capture_default_str();
  verify_cmd->add_option("--b", verify.pascal_b_max, "Largest b for the rate recursion")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  verify_cmd->add_option("--tol", verify.gamma_tol, "Relative tolerance of the gamma-sum identities")
      ->capture_default_str();
  add_output_options(verify_cmd, shared);

  auto* variance = app.add_subcommand("variance", "Fitted n-exponent of the X_0 increment variance");
  add_ensemble_options(variance, shared, variance_measure);
  variance->add_option("--n", n_values, "Sample sizes (default 1000,10000,100000)")->delimiter(',');
  variance->add_option("--t0", t0, "Increment start time")->capture_default_str();
  variance->add_option("--t1", t1, "Increment end time")->capture_default_str();
  variance->add_option("--tol", tol, "Allowed |slope - (alpha - 3)| (default 0.3)");

  std::vector<std::string> args;
  try {
    args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::Normal);
    return kExitUsage;
  }

  try {
    const auto format = parse_format(shared.format);
    auto sink = open_output(shared.output, out);
    std::ostream& os = *sink.stream;
    TableWriter table(os, format);

    if (rates->parsed()) {
      const auto measure = parse_measure(shared.measure);
      write_header(os, format,
                   {{"command", "rates"},
                    {"measure", measure.spec()},
                    {"b", join(dump_b)},
                    {"validate_b", join(b_grid)},
                    {"x", join(x_grid)},
                    {"k", join(unif_k)},
                    {"tail_eps", format_double(tail_eps)}});
      table.begin("rate_dump", {"b", "k", "lambda_bk", "log_block_rate"});
      for (const auto b : dump_b) {
        if (b < 2) throw DomainError("rates: --b values must be >= 2");
        for (std::int64_t k = 2; k <= b; ++k) {
          const double log_rate = log_lambda_bk(measure, b, k);
          table.row({b, k, std::exp(log_rate), number_or_null(log_binomial(b, k) + log_rate)});
        }
      }
      table.begin("rate_totals", {"b", "total_rate", "exact_total_rate", "first_moment", "second_factorial_moment",
                                  "k_max", "tail_mass"});
      for (const auto b : dump_b) {
        const auto t = build_rate_table(measure, b, tail_eps);
        table.row({b, t.total_rate, exact_total_rate(measure, b), t.first_moment, t.second_factorial_moment,
                   t.k_max, t.tail_mass});
      }
      const auto report = asymptotic_validator(measure, b_grid, x_grid, unif_k);
      if (!report.applicable) {
        table.begin("asymptotic", {"note"});
        table.row({report.note});
        return 0;
      }
      table.begin("asymptotic", {"lemma", "target_form", "authoritative", "b", "deviation", "strictly_decreasing",
                                 "discrepancy_factor", "note"});
      for (const auto& lemma : report.lemmas) {
        for (std::size_t i = 0; i < lemma.b.size(); ++i) {
          table.row({lemma.lemma, lemma.target_form, lemma.authoritative, lemma.b[i], number_or_null(lemma.deviation[i]),
                     lemma.strictly_decreasing, lemma.discrepancy_factor, lemma.note});
        }
      }
      const bool pass = report.authoritative_checks_pass();
      err << "asymptotic report: " << (pass ? "PASS" : "FAIL") << '\n';
      return pass ? 0 : kExitCheckFailed;
    }

    if (theory->parsed()) {
      if (r_max == 0) r_max = 4;
      write_header(os, format,
                   {{"command", "theory"}, {"alpha", join(alphas)}, {"r", std::to_string(r_max)}, {"t", join(t_grid)}});
      table.begin("trajectories", {"alpha", "r", "t", "x_r", "x_up_r"});
      for (const double a : alphas) {
        for (int r = 0; r <= r_max; ++r) {
          for (const double t : t_grid) {
            table.row({a, r, t, x_r(a, r, t), r >= 2 ? Json(x_up(a, r, t)) : Json(nullptr)});
          }
        }
      }
      table.begin("limits", {"alpha", "r", "limit_constant"});
      for (const double a : alphas) {
        for (int r = 2; r <= r_max; ++r) table.row({a, r, limit_constant(a, r)});
      }
      return 0;
    }

    if (totals->parsed() || trajectory->parsed()) {
      const bool is_totals = totals->parsed();
      ExperimentConfig config;
      config.measure = parse_measure(shared.measure);
      config.n_values = n_values.empty() ? std::vector<std::int64_t>{is_totals ? 2000 : 100000} : n_values;
      config.r_max = r_max == 0 ? (is_totals ? 2 : 3) : r_max;
      config.replicas = shared.replicas;
      config.master_seed = shared.seed;
      config.mode = is_totals ? Mode::totals : Mode::trajectory;
      if (!is_totals) config.time_grid = t_grid;
      config.workers = shared.workers;
      config.validate();

      HeaderFields fields{{"command", is_totals ? "totals" : "trajectory"},
                          {"measure", config.measure.spec()},
                          {"seed", std::to_string(config.master_seed)},
                          {"replicas", std::to_string(config.replicas)},
                          {"n", join(config.n_values)},
                          {"r", std::to_string(config.r_max)}};
      if (!is_totals) fields.emplace_back("t", join(config.time_grid));
      fields.emplace_back("workers", std::to_string(config.workers));
      if (!std::isnan(tol)) fields.emplace_back("tol", format_double(tol));
      write_header(os, format, fields);

      const auto result = run_ensemble(config);
      const int failed = report_failures(result, err);
      const auto rows = aggregate(result, config);
      if (format == OutputFormat::csv) os << "# table: aggregate\n";
      write_aggregate(os, format, rows);
      if (raw) {
        if (format == OutputFormat::csv) os << "# table: raw\n";
        if (is_totals) {
          write_totals_raw(os, format, result, config);
        } else {
          write_trajectory_raw(os, format, result);
        }
      }
      if (failed > 0) return kExitNumeric;
      if (!std::isnan(tol)) {
        for (const auto& row : rows) {
          if (!(row.abs_deviation <= tol)) {
            err << "check failed: n=" << row.n << " r=" << row.r << " |mean - theory| = " << row.abs_deviation
                << " > " << tol << '\n';
            return kExitCheckFailed;
          }
        }
      }
      return 0;
    }

    if (verify_cmd->parsed()) {
      write_header(os, format,
                   {{"command", "verify"},
                    {"seed", std::to_string(verify.seed)},
                    {"small_n", std::to_string(verify.small_n)},
                    {"runs", std::to_string(verify.runs)},
                    {"b", std::to_string(verify.pascal_b_max)},
                    {"tol", format_double(verify.gamma_tol)}});
      const auto checks = run_verify_suite(verify);
      table.begin("checks", {"check", "result", "cases", "failures", "worst", "detail"});
      int passed = 0;
      for (const auto& c : checks) {
        passed += c.passed ? 1 : 0;
        table.row({c.name, c.passed ? "PASS" : "FAIL", c.cases, c.failures, c.worst, c.detail});
      }
      err << "verify: " << passed << "/" << checks.size() << " checks passed\n";
      return passed == static_cast<int>(checks.size()) ? 0 : kExitCheckFailed;
    }

    if (variance->parsed()) {
      const auto measure = parse_measure(variance_measure);
      if (n_values.empty()) n_values = {1000, 10000, 100000};
      if (std::isnan(tol)) tol = 0.3;
      write_header(os, format,
                   {{"command", "variance"},
                    {"measure", measure.spec()},
                    {"seed", std::to_string(shared.seed)},
                    {"replicas", std::to_string(shared.replicas)},
                    {"n", join(n_values)},
                    {"t0", format_double(t0)},
                    {"t1", format_double(t1)},
                    {"workers", std::to_string(shared.workers)},
                    {"tol", format_double(tol)}});
      const auto probe = variance_scaling_probe(measure, n_values, shared.replicas, shared.seed, t0, t1, shared.workers);
      table.begin("variance", {"n", "variance", "log_variance_se"});
      for (std::size_t i = 0; i < probe.n_values.size(); ++i) {
        table.row({probe.n_values[i], probe.variance[i], probe.log_variance_se[i]});
      }
      const bool pass = std::abs(probe.slope - probe.reference_exponent) <= tol;
      table.begin("fit", {"slope", "slope_se", "intercept", "reference_exponent", "identity_exponent", "result"});
      table.row({probe.slope, probe.slope_se, probe.intercept, probe.reference_exponent, probe.identity_exponent,
                 pass ? "PASS" : "FAIL"});
      return pass ? 0 : kExitCheckFailed;
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace lamcat
