#pragma once

// Zermelo navigation between (h, w) data and Randers (alpha, beta) data.
// The wind is stored as its dual one-form w = h(W, .).

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "finsler/fields.hpp"

namespace finsler {

enum class NavigationBranch { riemann_sub_unit, lorentz_super_unit };

std::string to_string(NavigationBranch b);

struct NavigationData {
  PseudoRiemannMetric h;
  OneForm w;
  NavigationBranch branch = NavigationBranch::riemann_sub_unit;
};

/// Signed h^{ij} w_i w_j at x.
double wind_norm_squared(const NavigationData& nav, std::span<const double> x);
/// W^i = h^{ij} w_j
Eigen::VectorXd wind_vector(const NavigationData& nav, std::span<const double> x);

/// Throws BranchViolation when the signature of h or the size of w
/// contradicts the branch at x.
void check_branch(const NavigationData& nav, std::span<const double> x);

struct ForwardValue {
  double F = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double bbar = 0.0;  // ||w||_h
  double b = 0.0;     // ||beta||_alpha of the extracted data
};

ForwardValue navigation_forward(const NavigationData& nav, std::span<const double> x, std::span<const double> y);

/// F built directly from the navigation formula of the branch.
FinslerMetric navigation_metric(const NavigationData& nav);
/// a_ij = ((1 - bbar^2) h_ij + w_i w_j) / (1 - bbar^2)^2,  b_i = -w_i / (1 - bbar^2).
RandersData navigation_randers(const NavigationData& nav);

struct InverseValue {
  /// Signed: negative for spacelike y when h is Lorentz.
  double alpha_bar_squared = 0.0;
  double beta_bar = 0.0;
  double b = 0.0;
  NavigationBranch branch = NavigationBranch::riemann_sub_unit;
};

/// alpha_bar^2 = (1 - b^2)(alpha^2 - beta^2), beta_bar = -(1 - b^2) beta.
/// SingularCase when |b - 1| < kSingularCaseTolerance.
InverseValue navigation_inverse(const RandersData& data, std::span<const double> x, std::span<const double> y);

/// Metric-level inverse: h = (1 - b^2)(a - b b), w = -(1 - b^2) b, with the
/// branch read off at x.
NavigationData navigation_inverse_data(const RandersData& data, std::span<const double> x);

inline constexpr double kSingularCaseTolerance = 1e-12;

struct HomothetyEstimate {
  /// w_{(i|j)} = factor * h_ij; the homothetic factor in the sense of the
  /// classification is c = -factor.
  double factor = 0.0;
  double c = 0.0;
  /// max |w_{(i|j)} - factor h_ij|, symmetric part only.
  double residual = 0.0;
  /// max |w_{[i|j]}|; free for homothetic forms.
  double antisymmetric = 0.0;
};

HomothetyEstimate check_homothety(const PseudoRiemannMetric& h, const OneForm& w, std::span<const double> x);

enum class CurvatureKind { flag, ricci, sectional };

std::string to_string(CurvatureKind k);

struct ClassificationSample {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

struct ClassificationReport {
  double mu = 0.0;
  double c = 0.0;
  double K_predicted = 0.0;  // mu - c^2 / 4
  double K_expected = 0.0;
  double max_space_form_residual = 0.0;
  double max_homothety_residual = 0.0;
  double max_fitted_c_error = 0.0;
  double max_curvature_residual = 0.0;  // flag: max|res|/F^2, ricci: |res|/((n-1)F^2)
  int samples = 0;
  bool pass = false;
};

/// Checks the hypotheses on (h, w), then that the navigation metric has the
/// predicted constant curvature at every sample.  PrerequisiteFailed when h
/// or w fail their checks by more than `prerequisite_tol`.
ClassificationReport verify_classification(const NavigationData& nav, double mu, double c, double K_expected,
                                           const std::vector<ClassificationSample>& samples,
                                           CurvatureKind kind = CurvatureKind::flag, double tol = 1e-6,
                                           double prerequisite_tol = 1e-6);

}  // namespace finsler
