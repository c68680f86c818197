#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace lamcat {

enum class MeasureKind { kingman, beta, density };

/// The driving measure of a Lambda-coalescent.
///
/// Three families are supported: the Kingman point mass at zero (alpha = 2),
/// the Beta(2 - alpha, alpha) probability measure, and a general density f
/// with f(p) / p^(1 - alpha) -> A_Lambda as p -> 0. Every measure carries a
/// multiplicative scale c; all reported quantities (A_Lambda, total mass,
/// density values, rates) include it.
///
/// Instances are immutable. Measures that differ only in scale share a shape
/// identity, which keys the rate-table cache.
class LambdaMeasure {
 public:
  using Density = std::function<double(double)>;

  static LambdaMeasure kingman(double scale = 1.0);
  static LambdaMeasure beta(double alpha, double scale = 1.0);

  // Caller supplies the unit-scale density and its regular-variation constant.
  static LambdaMeasure density(double alpha, Density f, double a_lambda, double scale = 1.0,
                               std::string name = "custom");

  // Named builtins: "pure_power" (f(p) = p^(1-alpha)) and "beta_density"
  // (the Beta(2-alpha, alpha) density, evaluated pointwise).
  static LambdaMeasure builtin_density(double alpha, std::string_view name, double scale = 1.0);

  LambdaMeasure with_scale(double scale) const;

  MeasureKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  double a_lambda() const { return scale_ * unit_a_lambda_; }
  double total_mass() const { return scale_ * unit_total_mass_; }
  double unit_a_lambda() const { return unit_a_lambda_; }
  double unit_total_mass() const { return unit_total_mass_; }
  const std::string& density_name() const { return density_name_; }
  std::uint64_t shape_id() const { return shape_id_; }

  bool has_density() const { return kind_ != MeasureKind::kingman; }
  // Scaled density value at p in (0, 1).
  double density_at(double p) const { return scale_ * unit_density_(p); }
  double unit_density_at(double p) const { return unit_density_(p); }

  // Canonical key=value form, e.g. "kind=beta alpha=1.5 scale=1".
  std::string spec() const;

 private:
  LambdaMeasure() = default;

  MeasureKind kind_ = MeasureKind::kingman;
  double alpha_ = 2.0;
  double scale_ = 1.0;
  double unit_a_lambda_ = 1.0;
  double unit_total_mass_ = 1.0;
  Density unit_density_;
  std::string density_name_;
  std::uint64_t shape_id_ = 0;
};

/// Parses "kind=beta alpha=1.5 scale=1.0", "kind=kingman", or
/// "kind=density alpha=1.5 density=pure_power". Unknown keys are rejected.
LambdaMeasure parse_measure(std::string_view text);

/// Integral of g(p) against the unit-scale density on (0, 1).
///
/// The lower half is mapped through p = u^(1/(2-alpha)), which cancels the
/// p^(1-alpha) behaviour at zero when g is bounded there; the upper half uses
/// 1 - p = w^2 to smooth square-root type behaviour at one.
double integrate_unit_density(const LambdaMeasure& measure, const std::function<double(double)>& g,
                              double rel_tol = 1e-10);

}  // namespace lamcat
