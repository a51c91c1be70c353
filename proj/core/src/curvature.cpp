#include "finsler/curvature.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

struct SprayJets {
  int n = 0;
  std::vector<Jet> ys;
  Jet f;
  std::vector<Jet> G;
};

void require_nondegenerate(const Eigen::MatrixXd& g) {
  if (is_degenerate(g)) throw SingularMetric("fundamental tensor is degenerate");
}

SprayJets spray_jets(const FinslerMetric& F, std::span<const double> x, std::span<const double> y, int y_order) {
  const int n = F.dim;
  bool zero = true;
  for (double v : y) zero = zero && v == 0.0;
  if (zero) throw DomainError("curvature: y must be nonzero");

  const auto space = JetSpace::get(n, n, JetOrder{2, y_order});
  SprayJets s;
  s.n = n;
  const auto xs = seed_variables(space, 0, x);
  s.ys = seed_variables(space, n, y);
  s.f = F.value(xs, s.ys);
  const Jet f2 = square(s.f);

  JetMatrix g(n, Jet());
  std::vector<Jet> f2_y;
  for (int i = 0; i < n; ++i) f2_y.push_back(f2.derivative(n + i));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = 0.5 * f2_y[static_cast<std::size_t>(i)].derivative(n + j);
      g(j, i) = g(i, j);
    }
  require_nondegenerate(g.values());
  const JetMatrix g_inv = inverse(g);

  // [F^2]_{x^k y^l} y^k - [F^2]_{x^l}
  std::vector<Jet> B;
  for (int l = 0; l < n; ++l) {
    Jet v = -f2.derivative(l);
    for (int k = 0; k < n; ++k) v += f2_y[static_cast<std::size_t>(l)].derivative(k) * s.ys[static_cast<std::size_t>(k)];
    B.push_back(std::move(v));
  }
  for (int i = 0; i < n; ++i) {
    Jet gi = g_inv(i, 0) * B[0];
    for (int l = 1; l < n; ++l) gi += g_inv(i, l) * B[static_cast<std::size_t>(l)];
    s.G.push_back(0.25 * gi);
  }
  return s;
}

// R^i_k = 2 G^i_{x^k} - G^i_{x^l y^k} y^l + 2 G^l G^i_{y^k y^l} - G^i_{y^l} G^l_{y^k}
std::vector<Jet> berwald(const SprayJets& s) {
  const int n = s.n;
  std::vector<std::vector<Jet>> Gy(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) Gy[static_cast<std::size_t>(i)].push_back(s.G[static_cast<std::size_t>(i)].derivative(n + l));
  std::vector<Jet> R;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (int k = 0; k < n; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      Jet v = 2.0 * s.G[ui].derivative(k);
      const Jet& Giyk = Gy[ui][uk];
      for (int l = 0; l < n; ++l) {
        const auto ul = static_cast<std::size_t>(l);
        v -= Giyk.derivative(l) * s.ys[ul];
        v += 2.0 * s.G[ul] * Giyk.derivative(n + l);
        v -= Gy[ui][ul] * Gy[ul][uk];
      }
      R.push_back(std::move(v));
    }
  }
  return R;
}

}  // namespace

CurvatureBundle curvature_bundle(const FinslerMetric& F, std::span<const double> x, std::span<const double> y,
                                 bool with_ricci_tensor) {
  const int n = F.dim;
  const SprayJets s = spray_jets(F, x, y, with_ricci_tensor ? 6 : 4);
  const std::vector<Jet> R = berwald(s);
  CurvatureBundle c;
  c.F = s.f.value();
  c.F_y.resize(n);
  c.G.resize(n);
  c.R.resize(n, n);
  for (int i = 0; i < n; ++i) {
    c.F_y(i) = s.f.partial(MultiIndex::of(2 * n, {n + i}));
    c.G(i) = s.G[static_cast<std::size_t>(i)].value();
    for (int k = 0; k < n; ++k) c.R(i, k) = R[static_cast<std::size_t>(i * n + k)].value();
  }
  c.ricci = c.R.trace();
  if (with_ricci_tensor) {
    Jet trace = R[0];
    for (int m = 1; m < n; ++m) trace += R[static_cast<std::size_t>(m * n + m)];
    Eigen::MatrixXd ric(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ric(i, j) = 0.5 * trace.partial(MultiIndex::of(2 * n, {n + i, n + j}));
    c.ricci_tensor = ric;
  }
  return c;
}

Eigen::VectorXd spray_coefficients(const FinslerMetric& F, std::span<const double> x, std::span<const double> y) {
  const SprayJets s = spray_jets(F, x, y, 2);
  Eigen::VectorXd G(F.dim);
  for (int i = 0; i < F.dim; ++i) G(i) = s.G[static_cast<std::size_t>(i)].value();
  return G;
}

Eigen::MatrixXd berwald_riemann(const FinslerMetric& F, std::span<const double> x, std::span<const double> y) {
  return curvature_bundle(F, x, y).R;
}

double ricci_scalar(const FinslerMetric& F, std::span<const double> x, std::span<const double> y) {
  return curvature_bundle(F, x, y).ricci;
}

Eigen::MatrixXd ricci_tensor(const FinslerMetric& F, std::span<const double> x, std::span<const double> y) {
  return *curvature_bundle(F, x, y, true).ricci_tensor;
}

namespace {

void require_non_null(double f, std::span<const double> y) {
  double norm = 0.0;
  for (double v : y) norm += v * v;
  if (std::abs(f) <= kNullDirectionTolerance * std::sqrt(norm)) {
    throw DivisionByZero("F vanishes in this direction");
  }
}

}  // namespace

Eigen::MatrixXd flag_form(const CurvatureBundle& c, std::span<const double> y, double K) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
  return K * (c.F * c.F * Eigen::MatrixXd::Identity(n, n) - c.F * yv * c.F_y.transpose());
}

Eigen::MatrixXd flag_residual(const FinslerMetric& F, std::span<const double> x, std::span<const double> y, double K) {
  const CurvatureBundle c = curvature_bundle(F, x, y);
  require_non_null(c.F, y);
  return c.R - flag_form(c, y, K);
}

double einstein_residual(const FinslerMetric& F, std::span<const double> x, std::span<const double> y, double K) {
  const CurvatureBundle c = curvature_bundle(F, x, y);
  require_non_null(c.F, y);
  return c.ricci - (F.dim - 1) * K * c.F * c.F;
}

double estimate_K(const FinslerMetric& F, std::span<const double> x, std::span<const double> y) {
  const CurvatureBundle c = curvature_bundle(F, x, y);
  require_non_null(c.F, y);
  return c.ricci / ((F.dim - 1) * c.F * c.F);
}

}  // namespace finsler
