#pragma once

// Curvature of an arbitrary Finsler metric from its spray, using jets of F
// to order (x:2, y:4); the Ricci tensor needs y-order 6.

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "finsler/fields.hpp"

namespace finsler {

struct CurvatureBundle {
  double F = 0.0;
  Eigen::VectorXd F_y;    // F_{y^k}
  Eigen::VectorXd G;      // spray coefficients G^i
  Eigen::MatrixXd R;      // R^i_k at (i, k)
  double ricci = 0.0;     // R^m_m
  std::optional<Eigen::MatrixXd> ricci_tensor;
};

CurvatureBundle curvature_bundle(const FinslerMetric& F, std::span<const double> x, std::span<const double> y,
                                 bool with_ricci_tensor = false);

Eigen::VectorXd spray_coefficients(const FinslerMetric& F, std::span<const double> x, std::span<const double> y);
Eigen::MatrixXd berwald_riemann(const FinslerMetric& F, std::span<const double> x, std::span<const double> y);
double ricci_scalar(const FinslerMetric& F, std::span<const double> x, std::span<const double> y);
/// Ric_ij = (Ric/2)_{y^i y^j}
Eigen::MatrixXd ricci_tensor(const FinslerMetric& F, std::span<const double> x, std::span<const double> y);

/// K (F^2 delta^i_k - F y^i F_{y^k})
Eigen::MatrixXd flag_form(const CurvatureBundle& c, std::span<const double> y, double K);

/// R^i_k - K (F^2 delta^i_k - F y^i F_{y^k}); DivisionByZero on a null direction.
Eigen::MatrixXd flag_residual(const FinslerMetric& F, std::span<const double> x, std::span<const double> y, double K);
/// Ric - (n-1) K F^2
double einstein_residual(const FinslerMetric& F, std::span<const double> x, std::span<const double> y, double K);
/// Ric / ((n-1) F^2)
double estimate_K(const FinslerMetric& F, std::span<const double> x, std::span<const double> y);

/// |F| below this multiple of |y| counts as a null direction.
inline constexpr double kNullDirectionTolerance = 1e-12;

}  // namespace finsler
