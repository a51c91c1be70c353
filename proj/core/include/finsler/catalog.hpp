#pragma once

// Registry of exact solutions with built-in expected curvature, and the
// seeded sampler that verifies them.

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsler/fields.hpp"
#include "finsler/navigation.hpp"

namespace finsler {

struct ParamSpec {
  std::string name;
  double default_value = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool integer = false;
  std::string description;
};

using ParamMap = std::map<std::string, double>;

/// Axis-aligned box plus a rejection predicate on x.
struct SamplerRegion {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  PointPredicate accept;  // empty: whole box
  std::string description;
};

/// Curvature of h and factor of w for entries built by navigation.
struct NavigationHint {
  double mu = 0.0;
  double c = 0.0;  // classification constant, K = mu - c^2 / 4
  CurvatureKind h_kind = CurvatureKind::sectional;
};

struct SolutionEntry {
  std::string name;
  std::string description;
  int dim = 0;
  std::vector<ParamSpec> param_specs;
  ParamMap params;  // resolved values

  FinslerMetric metric;
  std::optional<RandersData> randers;
  std::optional<NavigationData> navigation;
  std::optional<NavigationHint> hint;
  /// Lorentz metric verified as F = sqrt(h(y, y)) on timelike y.
  std::optional<PseudoRiemannMetric> lorentz;

  CurvatureKind kind = CurvatureKind::flag;
  double K = 0.0;
  std::string K_formula;

  PointPredicate domain;
  SamplerRegion sampler;
  Eigen::VectorXd anchor;

  bool contains(std::span<const double> x) const { return !domain || domain(x); }
};

struct CatalogInfo {
  std::string name;
  std::string description;
  int dim = 0;
  std::vector<ParamSpec> params;
  CurvatureKind kind = CurvatureKind::flag;
  std::string K_formula;
  double K_default = 0.0;
  std::vector<std::string> aliases;
};

/// Canonical entries in registry order.
std::vector<CatalogInfo> catalog_list();
/// NotFound for unknown names (aliases accepted); InvalidParams for unknown
/// keys, out-of-range values, or entry-specific constraint violations.
SolutionEntry catalog_get(const std::string& name, const ParamMap& params = {});

/// Kerr-Schild radius: positive root of r^4 - (rho^2 - a^2) r^2 - a^2 z^2 = 0.
double kerr_radius(double x, double y, double z, double a);

struct VerifyOptions {
  int samples = 100;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int jobs = 1;
  /// Characterization residuals above this fail the characterization check.
  double characterization_tol = 1e-5;
  /// Cross-point spread allowed for c when b != 1.
  double c_spread_tol = 1e-8;
  /// Directions with F < min_F_ratio * alpha are discarded.
  double min_F_ratio = 0.05;
  int probe_trials = 10000;
};

struct SampleRecord {
  int index = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double F = 0.0;
  double alpha = 0.0;  // reference norm; F itself for Lorentz entries
  double b = 0.0;      // ||beta||_alpha, 0 without Randers data
  double residual = 0.0;
  double K_estimate = 0.0;
  std::optional<double> characterization;  // max characterization residual
  std::optional<double> c;                 // fitted c(x)
  std::optional<std::string> indicatrix;
};

struct VerificationReport {
  std::string solution;
  ParamMap params;
  std::string kind;
  std::string K_formula;
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  double K_expected = 0.0;
  double K_mean = 0.0;
  double K_spread = 0.0;  // max |K_estimate - K_mean|
  double max_residual = 0.0;
  bool pass = false;  // max_residual <= tol

  std::optional<double> b_min;
  std::optional<double> b_max;
  std::vector<std::string> indicatrix_kinds;

  std::optional<double> max_characterization_residual;
  std::optional<double> c_mean;
  std::optional<double> c_spread;
  std::optional<bool> characterization_pass;

  double wall_time_seconds = 0.0;
  std::string timestamp;
  std::vector<SampleRecord> records;
};

/// Samples `samples` points by seeded rejection inside the entry's domain and
/// evaluates the flag or Einstein residual.  EmptyDomain when a probe of
/// `probe_trials` box points finds none inside the domain.
VerificationReport verify_solution(const SolutionEntry& entry, const VerifyOptions& options);

/// The admissible (x, y) pairs drawn by the first `count` sample streams,
/// without curvature evaluation.
std::vector<ClassificationSample> sample_points(const SolutionEntry& entry, int count, std::uint64_t seed = 0,
                                                double min_F_ratio = 0.05);

}  // namespace finsler
