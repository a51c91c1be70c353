#include "finsler/randers.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"

namespace finsler {

namespace {

struct Scalars {
  double al, be, A;
};

Scalars scalars(const BetaDerivatives& d) {
  const double a2 = d.alpha2();
  if (a2 <= 0.0) throw DomainError("alpha^2 <= 0");
  Scalars s{std::sqrt(a2), d.beta(), 0.0};
  s.A = s.al + s.be;
  if (std::abs(s.A) <= kNullDirectionTolerance * s.al) throw DomainError("alpha + beta vanishes");
  return s;
}

}  // namespace

double randers_ricci_closed_form(const BetaDerivatives& d, const RiemannTensorAlpha& curv) {
  const auto [al, be, A] = scalars(d);
  const double n1 = d.n - 1.0;
  const double u = d.r00() - 2.0 * al * d.s0();
  return curv.ricci00 + 0.75 * n1 * u * u / (A * A) + 2.0 * n1 * al * d.q00() / A - 2.0 * d.t00() -
         2.0 * n1 * al * al * d.t0() / A - al * al * d.tIi() + 2.0 * al * d.sI0_i() - 0.5 * n1 * d.r00_0() / A +
         n1 * al * d.s0_0() / A;
}

Eigen::MatrixXd randers_riemann_closed_form(const BetaDerivatives& d, const RiemannTensorAlpha& curv) {
  const auto [al, be, A] = scalars(d);
  const int n = d.n;
  const double r00 = d.r00(), s0 = d.s0(), t0 = d.t0(), q00 = d.q00();
  const double r00_0 = d.r00_0(), s0_0 = d.s0_0();
  const double u = r00 - 2.0 * al * s0;
  const double Q = 3.0 * u * u;
  const double A2 = A * A, A3 = A2 * A;

  const double c_delta =
      0.25 / A2 * (Q - 8.0 * al * al * A * t0 + 8.0 * al * A * q00 - 2.0 * A * r00_0 + 4.0 * al * A * s0_0);
  const double c_yy = -0.25 / (al * A3) *
                      (Q + 4.0 * A * (3.0 * al + be) * q00 - 4.0 * al * (al * al - be * be) * t0 -
                       4.0 * A * be * s0_0 - 2.0 * A * r00_0);
  const double c_yb =
      -0.25 / A3 * (Q + 8.0 * al * A * q00 - 8.0 * al * al * A * t0 - 2.0 * A * r00_0 + 4.0 * al * A * s0_0);

  const Eigen::VectorXd& y = d.y;
  const Eigen::VectorXd y_k = d.y_lower();
  const Eigen::VectorXd s_k0 = d.sk0();
  // Row vector multiplying y^i: a combination of lower-index vectors.
  const Eigen::VectorXd row = c_yy * y_k + c_yb * d.b - 3.0 / A * s0 * s_k0 +
                              al / A * (2.0 * d.qk0() - d.q0k()) + al * al / A * d.tk() +
                              (d.r00_k() - d.rk0_0()) / A - al / A * (2.0 * d.s0_k() - d.sk_0());

  Eigen::MatrixXd R = curv.R + c_delta * Eigen::MatrixXd::Identity(n, n) + y * row.transpose();
  R += d.tI0() * y_k.transpose() - d.sI0_0() * y_k.transpose() / al + 3.0 * d.sI0() * s_k0.transpose() -
       al * al * d.tIk() + al * (2.0 * d.sI0_k() - d.sIk_0());
  return R;
}

double randers_ricci_closed_form(const RandersData& data, std::span<const double> x, std::span<const double> y) {
  return randers_ricci_closed_form(beta_bundle(data.alpha, data.beta, x, y), riemann_alpha(data.alpha, x, y));
}

Eigen::MatrixXd randers_riemann_closed_form(const RandersData& data, std::span<const double> x,
                                            std::span<const double> y) {
  return randers_riemann_closed_form(beta_bundle(data.alpha, data.beta, x, y), riemann_alpha(data.alpha, x, y));
}

CEstimate estimate_c(const RandersData& data, std::span<const double> x,
                     const std::vector<Eigen::VectorXd>& directions) {
  if (directions.size() < 3) throw InvalidParams("estimate_c: needs at least 3 directions");
  const BetaDerivatives d = beta_bundle(data.alpha, data.beta, x, as_span(directions.front()));
  double sww = 0.0, swv = 0.0;
  std::vector<double> ratios;
  for (const auto& y : directions) {
    const double a2 = y.dot(d.a * y);
    const double be = d.b.dot(y);
    const double w = a2 - be * be;
    const double v = y.dot(d.r * y) + 2.0 * be * d.s_lower.dot(y);
    sww += w * w;
    swv += w * v;
    if (std::abs(w) > 1e-6 * std::abs(a2)) ratios.push_back(v / w);
  }
  double wmax = 0.0, amax = 0.0;
  for (const auto& y : directions) {
    const double a2 = y.dot(d.a * y);
    const double be = d.b.dot(y);
    wmax = std::max(wmax, std::abs(a2 - be * be));
    amax = std::max(amax, std::abs(a2));
  }
  if (wmax <= 1e-12 * amax || sww == 0.0) throw IllConditioned("estimate_c: alpha^2 - beta^2 ~ 0 on all samples");
  CEstimate e;
  e.c = swv / sww;
  e.directions_used = static_cast<int>(ratios.size());
  if (!ratios.empty()) {
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    for (double r : ratios) e.variance += (r - mean) * (r - mean);
    e.variance /= static_cast<double>(ratios.size());
  }
  return e;
}

namespace {

// |lhs - sum(terms)| relative to the size of all terms, floored.
CharacterizationResidual balance(std::string name, double lhs, std::initializer_list<double> terms, double floor) {
  double sum = 0.0, mag = std::abs(lhs);
  for (double t : terms) {
    sum += t;
    mag += std::abs(t);
  }
  return {std::move(name), std::abs(lhs - sum) / std::max(mag, floor), false};
}

CharacterizationResidual matrix_balance(std::string name, const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs,
                                        double floor) {
  const double scale = std::max({lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff(), floor});
  return {std::move(name), (lhs - rhs).cwiseAbs().maxCoeff() / scale, false};
}

void finish(CharacterizationReport& rep) {
  rep.max_residual = 0.0;
  for (const auto& r : rep.residuals) {
    if (!r.trivial) rep.max_residual = std::max(rep.max_residual, r.residual);
  }
}

}  // namespace

CharacterizationReport check_einstein_characterization(const RandersData& data, double K, std::optional<double> c_in,
                                                       std::span<const double> x, std::span<const double> y,
                                                       double unit_tol) {
  const BetaDerivatives d = beta_bundle(data.alpha, data.beta, x, y);
  const RiemannTensorAlpha curv = riemann_alpha(data.alpha, x, y);
  const double n1 = d.n - 1.0;
  CharacterizationReport rep;
  rep.b = std::sqrt(std::max(0.0, d.b2));
  rep.unit_branch = std::abs(rep.b - 1.0) <= unit_tol;
  const double c = c_in.value_or(d.c_fit);
  rep.c = c;

  const double a2 = d.alpha2(), be = d.beta(), s0 = d.s0();
  if (!rep.unit_branch) {
    rep.residuals.push_back(balance("ricci_equation", curv.ricci00,
                                    {(n1 * (K - 0.75 * c * c) + d.tIi()) * a2, n1 * (K + 0.25 * c * c) * be * be,
                                     -n1 * s0 * s0, 2.0 * d.t00(), -n1 * d.s0_0()},
                                    a2));
  } else {
    rep.residuals.push_back(balance("ricci_equation", curv.ricci00,
                                    {(n1 * (K - 0.75 * c * c) + d.tIi()) * a2, n1 * (K + 0.25 * c * c) * be * be,
                                     -0.5 * n1 * be * d.c0(), -n1 * s0 * s0, 2.0 * d.t00(), -n1 * d.s0_0()},
                                    a2));
  }
  rep.residuals.push_back(balance("basic_equation", d.r00(), {c * (a2 - be * be), -2.0 * be * s0}, a2));
  if (rep.unit_branch) {
    const double bracket_terms[] = {d.c0(), -be * d.cb(), c * s0, -d.t0(), -be * d.t_scalar, -d.s0_b()};
    double sum = 0.0, mag = 0.0;
    for (double t : bracket_terms) {
      sum += t;
      mag += std::abs(t);
    }
    CharacterizationResidual r{"unit_norm_condition", std::abs((d.n - 3.0) * sum) / std::max(mag, std::sqrt(a2)),
                               d.n == 3};
    rep.residuals.push_back(r);
  }
  finish(rep);
  return rep;
}

CharacterizationReport check_cfc_characterization(const RandersData& data, double K, std::optional<double> c_in,
                                                  std::span<const double> x, std::span<const double> y,
                                                  double unit_tol) {
  const BetaDerivatives d = beta_bundle(data.alpha, data.beta, x, y);
  const RiemannTensorAlpha curv = riemann_alpha(data.alpha, x, y);
  const int n = d.n;
  CharacterizationReport rep;
  rep.b = std::sqrt(std::max(0.0, d.b2));
  rep.unit_branch = std::abs(rep.b - 1.0) <= unit_tol;
  const double c = c_in.value_or(d.c_fit);
  rep.c = c;

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd& yv = d.y;
  const Eigen::VectorXd y_k = d.y_lower();
  const double a2 = d.alpha2();
  const double metric_scale = d.a.cwiseAbs().maxCoeff();

  const double coef = (K - 0.75 * c * c) + (K + 0.25 * c * c) * d.b2 + d.t_scalar;
  const Eigen::MatrixXd curvature_rhs = coef * (a2 * I - yv * y_k.transpose()) -
                                        3.0 * d.sI0() * d.sk0().transpose() - yv * d.tk0().transpose() -
                                        d.tI0() * y_k.transpose() + d.t00() * I + a2 * d.tIk();
  rep.residuals.push_back(matrix_balance("curvature_equation", curv.R, curvature_rhs, a2));

  const Eigen::MatrixXd basic_rhs = c * (d.a - d.b * d.b.transpose()) - d.b * d.s_lower.transpose() -
                                    d.s_lower * d.b.transpose();
  rep.residuals.push_back(matrix_balance("basic_equation", d.r, basic_rhs, metric_scale));

  if (rep.unit_branch) {
    const Eigen::MatrixXd lhs = d.s1_cov - d.s1_cov.transpose();
    rep.residuals.push_back(matrix_balance("s_curl_condition", lhs, -2.0 * c * d.s, metric_scale));
  }

  // s^i_{|k} closed form, evaluated as a diagnostic only.
  {
    const Eigen::MatrixXd rhs = -(K + 0.25 * c * c) * (d.b2 * I - d.b_up * d.b.transpose()) - d.t_scalar * I -
                                c * d.sIk() - d.s_upper * d.s_lower.transpose() - d.tIk();
    const Eigen::MatrixXd lhs = d.sI_k();
    const double scale = std::max({lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff(), 1.0});
    rep.diagnostic = (lhs - rhs).cwiseAbs().maxCoeff() / scale;
  }
  finish(rep);
  return rep;
}

}  // namespace finsler
