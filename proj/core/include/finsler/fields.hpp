#pragma once

// Chart-local geometric data.  Everything is a single explicit coordinate
// patch; components are written once against jets so the same definition
// serves value evaluation and exact differentiation.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/jet_matrix.hpp"

namespace finsler {

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Sign counts of a nondegenerate symmetric form.  Lorentz means exactly one
/// positive direction, i.e. (-,...,-,+) up to coordinate order.
struct Signature {
  int positive = 0;
  int negative = 0;

  static Signature riemann(int n) { return {n, 0}; }
  static Signature lorentz(int n) { return {1, n - 1}; }

  bool is_riemann() const { return negative == 0 && positive > 0; }
  bool is_lorentz() const { return positive == 1 && negative > 0; }
  /// Signs listed in the (-,...,-,+) convention.
  std::vector<int> signs() const;
  std::string to_string() const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Eigenvalue sign count; eigenvalues with |lambda| <= threshold*max|lambda|
/// make the form degenerate and throw SingularMetric.
Signature detect_signature(const Eigen::MatrixXd& m, double threshold = 1e-10);

/// |det m| <= rel * prod_i |row_i(m)|: degeneracy judged independently of scale.
bool is_degenerate(const Eigen::MatrixXd& m, double rel = 1e-12);

using MetricComponents = std::function<JetMatrix(std::span<const Jet> x)>;
using OneFormComponents = std::function<JetVector(std::span<const Jet> x)>;
using PointPredicate = std::function<bool(std::span<const double> x)>;
using TangentPredicate = std::function<bool(std::span<const double> x, std::span<const double> y)>;

struct PseudoRiemannMetric {
  int dim = 0;
  MetricComponents components;
  Signature signature;
  PointPredicate domain;  // empty: whole chart

  JetMatrix at(std::span<const Jet> x) const { return components(x); }
  /// Component values a_ij(x).
  Eigen::MatrixXd values(std::span<const double> x) const;
  bool contains(std::span<const double> x) const { return !domain || domain(x); }
};

struct OneForm {
  int dim = 0;
  OneFormComponents components;

  JetVector at(std::span<const Jet> x) const { return components(x); }
  Eigen::VectorXd values(std::span<const double> x) const;
};

/// F(x, y), positively 1-homogeneous in y.
struct FinslerMetric {
  int dim = 0;
  ScalarField value;
  TangentPredicate domain;  // empty: wherever evaluable

  double operator()(std::span<const double> x, std::span<const double> y) const;
  bool contains(std::span<const double> x, std::span<const double> y) const {
    return !domain || domain(x, y);
  }
};

/// F = alpha + beta with alpha Riemannian.
struct RandersData {
  PseudoRiemannMetric alpha;
  OneForm beta;
};

enum class IndicatrixKind { elliptic, parabolic, hyperbolic };

/// Null directions of F = alpha + beta in one tangent space.
enum class NullSet { none, single_ray, half_cone };

struct IndicatrixClass {
  IndicatrixKind kind = IndicatrixKind::elliptic;
  double b = 0.0;
  NullSet null_directions = NullSet::none;
};

std::string to_string(IndicatrixKind kind);
std::string to_string(NullSet nulls);

/// Fundamental tensor g_ij = (F^2/2)_{y^i y^j} and its inverse.
struct FundamentalTensor {
  Eigen::MatrixXd g;
  Eigen::MatrixXd inverse;
  double determinant = 0.0;
};

// Elementary builders -------------------------------------------------------

PseudoRiemannMetric euclidean_metric(int n);
/// <y,y>_L = -(y^1)^2 - ... - (y^{n-1})^2 + (y^n)^2.
PseudoRiemannMetric minkowski_metric(int n);
OneForm constant_one_form(const Eigen::VectorXd& b);
OneForm zero_one_form(int n);
/// beta_i(x) + scale * x^i.
OneForm perturbed_one_form(const OneForm& beta, double scale);
/// F = sqrt(a_ij y^i y^j); for a Lorentz metric only timelike y are admissible.
FinslerMetric riemann_norm(const PseudoRiemannMetric& metric);

// Operations ----------------------------------------------------------------

FinslerMetric assemble_randers(const RandersData& data);

/// ||beta||_alpha = sqrt(a^{ij} b_i b_j).  For indefinite metrics, the signed
/// square a^{ij} b_i b_j is returned by beta_norm_squared.
double beta_norm(const RandersData& data, std::span<const double> x);
double beta_norm_squared(const PseudoRiemannMetric& metric, const OneForm& beta, std::span<const double> x);

IndicatrixClass classify_indicatrix(const RandersData& data, std::span<const double> x, double tol = 1e-12);

FundamentalTensor fundamental_tensor(const FinslerMetric& F, std::span<const double> x, std::span<const double> y);

/// Seeds x-only coordinate jets (n variables) at `x` with x-order `order`.
std::vector<Jet> seed_point(std::span<const double> x, int order);

}  // namespace finsler
