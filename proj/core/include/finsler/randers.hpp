#pragma once

// Closed-form Ricci and Riemann curvature of F = alpha + beta in terms of the
// curvature of alpha and the r/s/p/q/t bundle of beta, and the pointwise
// residuals of the Einstein and constant-flag-curvature characterizations.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finsler/fields.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

double randers_ricci_closed_form(const RandersData& data, std::span<const double> x, std::span<const double> y);
Eigen::MatrixXd randers_riemann_closed_form(const RandersData& data, std::span<const double> x,
                                            std::span<const double> y);

/// Same formulas on precomputed ingredients.
double randers_ricci_closed_form(const BetaDerivatives& d, const RiemannTensorAlpha& curv);
Eigen::MatrixXd randers_riemann_closed_form(const BetaDerivatives& d, const RiemannTensorAlpha& curv);

struct CEstimate {
  double c = 0.0;
  /// Spread of the per-direction ratios (r_00 + 2 beta s_0) / (alpha^2 - beta^2).
  double variance = 0.0;
  int directions_used = 0;
};

/// Least squares for r_00 = c (alpha^2 - beta^2) - 2 beta s_0 over the given
/// directions (at least 3).  IllConditioned when alpha^2 - beta^2 is
/// negligible for every direction.
CEstimate estimate_c(const RandersData& data, std::span<const double> x,
                     const std::vector<Eigen::VectorXd>& directions);

/// Tolerance for treating b as identically 1.
inline constexpr double kUnitNormTolerance = 1e-12;

struct CharacterizationResidual {
  std::string name;
  double residual = 0.0;  // |lhs - rhs| / scale
  bool trivial = false;   // identity vanishes identically (factor n - 3 with n = 3)
};

struct CharacterizationReport {
  bool unit_branch = false;  // b == 1 within tolerance
  double b = 0.0;
  double c = 0.0;
  std::vector<CharacterizationResidual> residuals;
  double max_residual = 0.0;
  /// Residual of the closed form for s^i_{|k}; reported, never enforced.
  std::optional<double> diagnostic;
};

/// Einstein characterization with Ricci constant K.  With c omitted, the
/// pointwise tensor fit of the basic equation is used (and its gradient for
/// c_0, c_b in the unit branch).
CharacterizationReport check_einstein_characterization(const RandersData& data, double K, std::optional<double> c,
                                                       std::span<const double> x, std::span<const double> y,
                                                       double unit_tol = kUnitNormTolerance);

/// Constant flag curvature characterization: curvature equation, basic
/// equation, and in the unit branch the extra condition on s_{i|j}.
CharacterizationReport check_cfc_characterization(const RandersData& data, double K, std::optional<double> c,
                                                  std::span<const double> x, std::span<const double> y,
                                                  double unit_tol = kUnitNormTolerance);

}  // namespace finsler
