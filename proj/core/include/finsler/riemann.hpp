#pragma once

// Levi-Civita calculus of a (pseudo-)Riemann metric a_ij and a one-form b_i.
// Nothing here assumes definiteness: Lorentz metrics are accepted unchanged.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "finsler/fields.hpp"

namespace finsler {

/// Dense rank-3 array indexed (i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}
  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return data_[idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }

 private:
  std::size_t idx(int i, int j, int k) const { return static_cast<std::size_t>((i * n_ + j) * n_ + k); }
  int n_ = 0;
  std::vector<double> data_;
};

/// Dense rank-4 array indexed (i, j, k, l).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {}
  int dim() const { return n_; }
  double& operator()(int i, int j, int k, int l) { return data_[idx(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return data_[idx(i, j, k, l)]; }

 private:
  std::size_t idx(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }
  int n_ = 0;
  std::vector<double> data_;
};

/// Gamma^i_jk stored at (i, j, k).
Tensor3 christoffel(const PseudoRiemannMetric& metric, std::span<const double> x);

/// a_ij|k, which vanishes for the Levi-Civita connection.
Tensor3 metric_covariant_derivative(const PseudoRiemannMetric& metric, std::span<const double> x);

struct OneFormDerivatives {
  Eigen::MatrixXd first;  // b_{i|j}
  Tensor3 second;         // b_{i|j|k}
};

OneFormDerivatives covariant_derivative_oneform(const PseudoRiemannMetric& metric, const OneForm& beta,
                                                std::span<const double> x);

/// The r/s/p/q/t bundle of beta at one point, for one direction y.
///
/// Accessor naming mirrors the index notation:  a capital `I` is a raised
/// free index, a lowercase `k` a lowered free index, `0` a contraction with
/// y (or y_i = a_ij y^j), `b` a contraction with b^i (or b_i), and `_` stands
/// for the covariant-derivative bar.  Contractions are always taken after
/// differentiation, e.g. s0_k()[k] = s_{i|k} y^i with s_i = b^m s_mi.
struct BetaDerivatives {
  int n = 0;
  Eigen::VectorXd y;

  Eigen::MatrixXd a, a_inv;
  Eigen::VectorXd b, b_up;  // b_i, b^i
  double b2 = 0.0;          // a^{ij} b_i b_j (signed for indefinite a)

  Eigen::MatrixXd db;  // b_{i|j}
  Tensor3 ddb;         // b_{i|j|k}
  Eigen::MatrixXd r, s;
  Tensor3 r_cov, s_cov;  // r_{ij|k}, s_{ij|k}

  Eigen::VectorXd r_lower, s_lower;  // r_i = b^m r_mi, s_i = b^m s_mi
  Eigen::VectorXd r_upper, s_upper;  // r^i, s^i
  double r_scalar = 0.0;             // r = r_i b^i
  double t_scalar = 0.0;             // t = t_ij b^i b^j = -s_i s^i
  Eigen::MatrixXd p, q, t;           // r_im r^m_j, r_im s^m_j, s_im s^m_j
  Eigen::VectorXd q_lower;           // q_i = b^j q_ji
  Eigen::VectorXd q_star;            // q*_i = b^j q_ij
  double q_scalar = 0.0;

  Eigen::MatrixXd r1_cov, s1_cov;  // r_{i|j}, s_{i|j}
  Eigen::VectorXd r_grad;          // r_{|k}

  /// c(x) of the least-squares fit r_ij ~ c (a_ij - b_i b_j) - b_i s_j - b_j s_i
  /// and its gradient c_{|k}.
  double c_fit = 0.0;
  Eigen::VectorXd c_grad;

  // --- y contractions -----------------------------------------------------
  Eigen::VectorXd y_lower() const { return a * y; }
  double alpha2() const { return y.dot(a * y); }
  double beta() const { return b.dot(y); }

  double r00() const { return y.dot(r * y); }
  double p00() const { return y.dot(p * y); }
  double q00() const { return y.dot(q * y); }
  double t00() const { return y.dot(t * y); }
  double r0() const { return r_lower.dot(y); }
  double s0() const { return s_lower.dot(y); }
  double t0() const { return (t * b_up).dot(y); }
  double p0() const { return (p * b_up).dot(y); }
  double q0() const { return q_lower.dot(y); }
  double qstar0() const { return q_star.dot(y); }
  double tIi() const { return (a_inv * t).trace(); }
  double qIi() const { return (a_inv * q).trace(); }

  Eigen::VectorXd sk() const { return s_lower; }
  Eigen::VectorXd sI() const { return s_upper; }
  Eigen::VectorXd tk() const { return t * b_up; }
  Eigen::VectorXd tI() const { return a_inv * tk(); }
  Eigen::VectorXd sk0() const { return s * y; }
  Eigen::VectorXd sI0() const { return a_inv * sk0(); }
  Eigen::VectorXd tk0() const { return t * y; }
  Eigen::VectorXd tI0() const { return a_inv * tk0(); }
  Eigen::VectorXd qk0() const { return q * y; }
  Eigen::VectorXd q0k() const { return q.transpose() * y; }
  Eigen::MatrixXd tIk() const { return a_inv * t; }
  Eigen::MatrixXd sIk() const { return a_inv * s; }

  double r00_0() const;
  double s0_0() const;
  double sI0_i() const;
  double s0_b() const { return y.dot(s1_cov * b_up); }
  double r0_b() const { return y.dot(r1_cov * b_up); }
  double r_0() const { return r_grad.dot(y); }
  double c0() const { return c_grad.dot(y); }
  double cb() const { return c_grad.dot(b_up); }
  Eigen::VectorXd r00_k() const;
  Eigen::VectorXd rk0_0() const;
  Eigen::VectorXd s0_k() const { return s1_cov.transpose() * y; }
  Eigen::VectorXd sk_0() const { return s1_cov * y; }
  Eigen::VectorXd sI0_0() const;
  Eigen::MatrixXd sI0_k() const;  // (i, k)
  Eigen::MatrixXd sIk_0() const;  // (i, k)
  Eigen::MatrixXd sI_k() const { return a_inv * s1_cov; }
};

BetaDerivatives beta_bundle(const PseudoRiemannMetric& metric, const OneForm& beta, std::span<const double> x,
                            std::span<const double> y);

struct RiemannTensorAlpha {
  /// R_j^i_kl = d_k G^i_jl - d_l G^i_jk + G^i_km G^m_jl - G^i_lm G^m_jk,
  /// stored at (j, i, k, l).
  Tensor4 curvature;
  /// R_kmij = (1/3)(d^2 R_mi/dy^j dy^k - d^2 R_mj/dy^i dy^k), R_mi = a_ml R^l_i.
  Tensor4 fourth;
  Eigen::MatrixXd R;      // R^i_k(y) = R_j^i_kl y^j y^l
  Eigen::MatrixXd ricci;  // Ric_ij = (R^m_m / 2)_{y^i y^j}
  double ricci00 = 0.0;   // R^m_m
};

RiemannTensorAlpha riemann_alpha(const PseudoRiemannMetric& metric, std::span<const double> x,
                                 std::span<const double> y);

/// Residual of R^i_k = mu (a_00 delta^i_k - y^i y_k), relative to the size of
/// either side.
double space_form_residual(const RiemannTensorAlpha& curv, const Eigen::MatrixXd& a, std::span<const double> y,
                           double mu);

struct IdentityResidual {
  std::string name;
  double lhs_scale = 0.0;  // max |entry| of the left side
  double residual = 0.0;   // max |lhs - rhs| / max(1, lhs_scale, rhs_scale)
};

struct PrioriResiduals {
  std::vector<IdentityResidual> identities;
  double q_trace = 0.0;  // |q^i_i|
  double max_residual = 0.0;
};

/// Evaluates every identity that holds for arbitrary (a, b); the left sides
/// come from direct covariant differentiation of the named tensors, the right
/// sides from r-derivatives, curvature, and p/q/t.
PrioriResiduals check_priori_formulae(const PseudoRiemannMetric& metric, const OneForm& beta,
                                      std::span<const double> x, std::span<const double> y);

/// max |R_kmij + R_kijm + R_kjmi| over all indices (cyclic in the last three).
double first_bianchi_residual(const RiemannTensorAlpha& curv);

}  // namespace finsler
