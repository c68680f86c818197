#include "lamcat/measure.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "lamcat/errors.hpp"
#include "lamcat/quadrature.hpp"
#include "lamcat/special.hpp"

namespace lamcat {

namespace {

std::uint64_t next_shape_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

void require_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("measure scale must be positive");
}

void require_open_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("alpha must lie in (1, 2) for density measures");
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  std::string s = os.str();
  // Prefer the shortest representation that round-trips.
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream t;
    t.precision(p);
    t << x;
    if (std::stod(t.str()) == x) return t.str();
  }
  return s;
}

}  // namespace

LambdaMeasure LambdaMeasure::kingman(double scale) {
  require_scale(scale);
  LambdaMeasure m;
  m.kind_ = MeasureKind::kingman;
  m.alpha_ = 2.0;
  m.scale_ = scale;
  m.unit_a_lambda_ = 1.0;
  m.unit_total_mass_ = 1.0;
  m.shape_id_ = next_shape_id();
  return m;
}

LambdaMeasure LambdaMeasure::beta(double alpha, double scale) {
  require_open_alpha(alpha);
  require_scale(scale);
  LambdaMeasure m;
  m.kind_ = MeasureKind::beta;
  m.alpha_ = alpha;
  m.scale_ = scale;
  const double log_norm = log_beta(2.0 - alpha, alpha);
  m.unit_a_lambda_ = std::exp(-log_gamma(2.0 - alpha) - log_gamma(alpha));
  m.unit_total_mass_ = 1.0;
  m.unit_density_ = [alpha, log_norm](double p) {
    return std::exp((1.0 - alpha) * std::log(p) + (alpha - 1.0) * std::log1p(-p) - log_norm);
  };
  m.density_name_ = "beta_density";
  m.shape_id_ = next_shape_id();
  return m;
}

LambdaMeasure LambdaMeasure::density(double alpha, Density f, double a_lambda, double scale,
                                     std::string name) {
  require_open_alpha(alpha);
  require_scale(scale);
  if (!f) throw DomainError("density measure needs a density function");
  if (!(a_lambda > 0.0)) throw DomainError("A_Lambda must be positive");
  LambdaMeasure m;
  m.kind_ = MeasureKind::density;
  m.alpha_ = alpha;
  m.scale_ = scale;
  m.unit_a_lambda_ = a_lambda;
  m.unit_density_ = std::move(f);
  m.density_name_ = std::move(name);
  m.shape_id_ = next_shape_id();
  m.unit_total_mass_ = integrate_unit_density(m, [](double) { return 1.0; });
  return m;
}

LambdaMeasure LambdaMeasure::builtin_density(double alpha, std::string_view name, double scale) {
  require_open_alpha(alpha);
  if (name == "pure_power") {
    return density(alpha, [alpha](double p) { return std::pow(p, 1.0 - alpha); }, 1.0, scale,
                   "pure_power");
  }
  if (name == "beta_density") {
    const double log_norm = log_beta(2.0 - alpha, alpha);
    return density(
        alpha,
        [alpha, log_norm](double p) {
          return std::exp((1.0 - alpha) * std::log(p) + (alpha - 1.0) * std::log1p(-p) - log_norm);
        },
        std::exp(-log_norm), scale, "beta_density");
  }
  throw DomainError("unknown builtin density '" + std::string(name) + "'");
}

LambdaMeasure LambdaMeasure::with_scale(double scale) const {
  require_scale(scale);
  LambdaMeasure m = *this;
  m.scale_ = scale;
  return m;
}

std::string LambdaMeasure::spec() const {
  std::string s;
  switch (kind_) {
    case MeasureKind::kingman:
      s = "kind=kingman";
      break;
    case MeasureKind::beta:
      s = "kind=beta alpha=" + format_number(alpha_);
      break;
    case MeasureKind::density:
      s = "kind=density alpha=" + format_number(alpha_) + " density=" + density_name_;
      break;
  }
  return s + " scale=" + format_number(scale_);
}

LambdaMeasure parse_measure(std::string_view text) {
  std::map<std::string, std::string> fields;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
      throw DomainError("measure spec: expected key=value, got '" + token + "'");
    }
    auto key = token.substr(0, eq);
    if (key != "kind" && key != "alpha" && key != "scale" && key != "density") {
      throw DomainError("measure spec: unknown key '" + key + "'");
    }
    if (!fields.emplace(key, token.substr(eq + 1)).second) {
      throw DomainError("measure spec: duplicate key '" + key + "'");
    }
  }
  const auto number = [&](const std::string& key, double fallback) {
    const auto it = fields.find(key);
    if (it == fields.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != it->second.size()) throw DomainError("measure spec: bad number for " + key);
    return v;
  };
  const auto kind = fields.count("kind") ? fields["kind"] : std::string{};
  const double scale = number("scale", 1.0);
  if (kind == "kingman") {
    if (fields.count("density")) throw DomainError("measure spec: kingman takes no density");
    if (fields.count("alpha") && number("alpha", 2.0) != 2.0) {
      throw DomainError("measure spec: kingman requires alpha=2");
    }
    return LambdaMeasure::kingman(scale);
  }
  if (!fields.count("alpha")) throw DomainError("measure spec: alpha is required for kind=" + kind);
  const double alpha = number("alpha", 0.0);
  if (kind == "beta") {
    if (fields.count("density")) throw DomainError("measure spec: beta takes no density");
    return LambdaMeasure::beta(alpha, scale);
  }
  if (kind == "density") {
    if (!fields.count("density")) throw DomainError("measure spec: density=<builtin> is required");
    return LambdaMeasure::builtin_density(alpha, fields["density"], scale);
  }
  throw DomainError("measure spec: kind must be kingman, beta or density");
}

double integrate_unit_density(const LambdaMeasure& measure, const std::function<double(double)>& g,
                              double rel_tol) {
  if (!measure.has_density()) throw DomainError("integrate_unit_density: measure has no density");
  const double alpha = measure.alpha();
  const double gap = 2.0 - alpha;
  const double u_max = std::pow(0.5, gap);
  // p = u^(1/gap), dp = p / (gap * u) du
  const auto lower = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double p = std::pow(u, 1.0 / gap);
    if (p <= 0.0) return 0.0;
    return g(p) * measure.unit_density_at(p) * p / (gap * u);
  };
  // 1 - p = w^2, dp = -2 w dw
  const auto upper = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double p = 1.0 - w * w;
    return g(p) * measure.unit_density_at(p) * 2.0 * w;
  };
  const double inner_tol = 0.1 * rel_tol;
  const auto lo = integrate_unchecked(lower, 0.0, u_max, inner_tol);
  const auto hi = integrate_unchecked(upper, 0.0, std::sqrt(0.5), inner_tol);
  const double value = lo.value + hi.value;
  const double error = lo.error_estimate + hi.error_estimate;
  if (!std::isfinite(value) || error > rel_tol * std::abs(value)) {
    throw NumericError("density quadrature did not converge (relative error " +
                           std::to_string(error / std::abs(value)) + ")",
                       error / std::abs(value));
  }
  return value;
}

}  // namespace lamcat
