#include "finsler/navigation.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

std::string to_string(NavigationBranch b) {
  return b == NavigationBranch::riemann_sub_unit ? "riemann_sub_unit" : "lorentz_super_unit";
}

std::string to_string(CurvatureKind k) {
  switch (k) {
    case CurvatureKind::flag:
      return "flag";
    case CurvatureKind::ricci:
      return "ricci";
    case CurvatureKind::sectional:
      return "sectional";
  }
  return "unknown";
}

double wind_norm_squared(const NavigationData& nav, std::span<const double> x) {
  return beta_norm_squared(nav.h, nav.w, x);
}

Eigen::VectorXd wind_vector(const NavigationData& nav, std::span<const double> x) {
  return nav.h.values(x).inverse() * nav.w.values(x);
}

void check_branch(const NavigationData& nav, std::span<const double> x) {
  const Signature sig = detect_signature(nav.h.values(x));
  const double bb2 = wind_norm_squared(nav, x);
  if (nav.branch == NavigationBranch::riemann_sub_unit) {
    if (!sig.is_riemann()) throw BranchViolation("riemann branch requires positive definite h");
    if (bb2 >= 1.0) throw BranchViolation("riemann branch requires ||w||_h < 1");
  } else {
    if (!sig.is_lorentz()) throw BranchViolation("lorentz branch requires signature (-,...,-,+)");
    if (bb2 <= 1.0) throw BranchViolation("lorentz branch requires timelike w with ||w||_h > 1");
  }
}

namespace {

Jet dot(const JetVector& u, std::span<const Jet> v) {
  Jet s = u[0] * v[0];
  for (std::size_t i = 1; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

}  // namespace

FinslerMetric navigation_metric(const NavigationData& nav) {
  FinslerMetric F;
  F.dim = nav.h.dim;
  const double sign = nav.branch == NavigationBranch::riemann_sub_unit ? -1.0 : 1.0;
  F.value = [nav, sign](std::span<const Jet> x, std::span<const Jet> y) {
    const JetMatrix h = nav.h.at(x);
    const JetVector w = nav.w.at(x);
    const Jet bb2 = quadratic(inverse(h), w, w);
    const JetVector yv(y.begin(), y.end());
    const Jet ab2 = quadratic(h, yv, yv);
    const Jet bt = dot(w, y);
    const Jet rad = (1.0 - bb2) * ab2 + bt * bt;
    if (rad.value() <= 0.0) throw DomainError("navigation: radicand is not positive");
    // riemann: (sqrt - bt) / (1 - bb2); lorentz: (sqrt + bt) / (bb2 - 1)
    return (sqrt(rad) + sign * bt) / (-sign * (1.0 - bb2));
  };
  if (nav.h.domain) {
    auto dom = nav.h.domain;
    F.domain = [dom](std::span<const double> x, std::span<const double>) { return dom(x); };
  }
  return F;
}

RandersData navigation_randers(const NavigationData& nav) {
  RandersData d;
  d.alpha.dim = nav.h.dim;
  d.alpha.signature = Signature::riemann(nav.h.dim);
  d.alpha.domain = nav.h.domain;
  d.alpha.components = [nav](std::span<const Jet> x) {
    const JetMatrix h = nav.h.at(x);
    const JetVector w = nav.w.at(x);
    const Jet lam = 1.0 - quadratic(inverse(h), w, w);
    const Jet inv2 = reciprocal(lam * lam);
    const int n = h.dim();
    JetMatrix a(n, Jet());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a(i, j) = (lam * h(i, j) + w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)]) * inv2;
    return a;
  };
  d.beta.dim = nav.w.dim;
  d.beta.components = [nav](std::span<const Jet> x) {
    const JetMatrix h = nav.h.at(x);
    JetVector w = nav.w.at(x);
    const Jet inv = reciprocal(1.0 - quadratic(inverse(h), w, w));
    for (auto& wi : w) wi = -(wi * inv);
    return w;
  };
  return d;
}

ForwardValue navigation_forward(const NavigationData& nav, std::span<const double> x, std::span<const double> y) {
  check_branch(nav, x);
  const Eigen::MatrixXd h = nav.h.values(x);
  const Eigen::VectorXd w = nav.w.values(x);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const double bb2 = w.dot(h.inverse() * w);
  const double ab2 = yv.dot(h * yv);
  const double bt = w.dot(yv);
  const double rad = (1.0 - bb2) * ab2 + bt * bt;
  if (rad < 0.0) throw DomainError("navigation: radicand is negative");
  ForwardValue v;
  v.bbar = std::sqrt(bb2);
  v.alpha = std::sqrt(rad) / std::abs(1.0 - bb2);
  v.beta = -bt / (1.0 - bb2);
  v.F = v.alpha + v.beta;
  const RandersData rd = navigation_randers(nav);
  v.b = beta_norm(rd, x);
  return v;
}

InverseValue navigation_inverse(const RandersData& data, std::span<const double> x, std::span<const double> y) {
  const double b = beta_norm(data, x);
  if (std::abs(b - 1.0) < kSingularCaseTolerance) {
    throw SingularCase(
        "navigation deformation is undefined for ||beta||_alpha = 1: the indicatrix is a paraboloid, "
        "which is not a translate of any Riemann or Lorentz unit sphere");
  }
  const Eigen::MatrixXd a = data.alpha.values(x);
  const Eigen::VectorXd bv = data.beta.values(x);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const double a2 = yv.dot(a * yv);
  const double be = bv.dot(yv);
  InverseValue v;
  v.b = b;
  v.alpha_bar_squared = (1.0 - b * b) * (a2 - be * be);
  v.beta_bar = -(1.0 - b * b) * be;
  v.branch = b < 1.0 ? NavigationBranch::riemann_sub_unit : NavigationBranch::lorentz_super_unit;
  return v;
}

NavigationData navigation_inverse_data(const RandersData& data, std::span<const double> x) {
  const double b = beta_norm(data, x);
  if (std::abs(b - 1.0) < kSingularCaseTolerance) {
    throw SingularCase("navigation deformation is undefined for ||beta||_alpha = 1");
  }
  NavigationData nav;
  nav.branch = b < 1.0 ? NavigationBranch::riemann_sub_unit : NavigationBranch::lorentz_super_unit;
  const int n = data.alpha.dim;
  nav.h.dim = n;
  nav.h.signature = b < 1.0 ? Signature::riemann(n) : Signature::lorentz(n);
  nav.h.domain = data.alpha.domain;
  nav.h.components = [data](std::span<const Jet> x) {
    const JetMatrix a = data.alpha.at(x);
    const JetVector bv = data.beta.at(x);
    const Jet lam = 1.0 - quadratic(inverse(a), bv, bv);
    const int n = a.dim();
    JetMatrix h(n, Jet());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        h(i, j) = lam * (a(i, j) - bv[static_cast<std::size_t>(i)] * bv[static_cast<std::size_t>(j)]);
    return h;
  };
  nav.w.dim = n;
  nav.w.components = [data](std::span<const Jet> x) {
    const JetMatrix a = data.alpha.at(x);
    JetVector bv = data.beta.at(x);
    const Jet lam = 1.0 - quadratic(inverse(a), bv, bv);
    for (auto& bi : bv) bi = -(lam * bi);
    return bv;
  };
  return nav;
}

HomothetyEstimate check_homothety(const PseudoRiemannMetric& h, const OneForm& w, std::span<const double> x) {
  const Eigen::MatrixXd D = covariant_derivative_oneform(h, w, x).first;
  const Eigen::MatrixXd hv = h.values(x);
  const Eigen::MatrixXd sym = 0.5 * (D + D.transpose());
  HomothetyEstimate e;
  e.factor = (hv.inverse() * sym).trace() / static_cast<double>(hv.rows());
  e.c = -e.factor;
  e.residual = (sym - e.factor * hv).cwiseAbs().maxCoeff();
  e.antisymmetric = (0.5 * (D - D.transpose())).cwiseAbs().maxCoeff();
  return e;
}

ClassificationReport verify_classification(const NavigationData& nav, double mu, double c, double K_expected,
                                           const std::vector<ClassificationSample>& samples, CurvatureKind kind,
                                           double tol, double prerequisite_tol) {
  ClassificationReport rep;
  rep.mu = mu;
  rep.c = c;
  rep.K_predicted = mu - 0.25 * c * c;
  rep.K_expected = K_expected;
  const int n = nav.h.dim;
  const FinslerMetric F = navigation_metric(nav);

  for (const auto& s : samples) {
    const auto x = as_span(s.x);
    const auto y = as_span(s.y);
    check_branch(nav, x);
    const Eigen::MatrixXd hv = nav.h.values(x);
    const RiemannTensorAlpha curv = riemann_alpha(nav.h, x, y);
    double h_res = 0.0;
    if (kind == CurvatureKind::ricci) {
      const double h00 = s.y.dot(hv * s.y);
      const double expect = (n - 1) * mu * h00;
      h_res = std::abs(curv.ricci00 - expect) / std::max({1.0, std::abs(curv.ricci00), std::abs(expect)});
    } else {
      h_res = space_form_residual(curv, hv, y, mu);
    }
    rep.max_space_form_residual = std::max(rep.max_space_form_residual, h_res);

    const HomothetyEstimate he = check_homothety(nav.h, nav.w, x);
    const double scale = std::max(1.0, hv.cwiseAbs().maxCoeff());
    rep.max_homothety_residual = std::max(rep.max_homothety_residual, he.residual / scale);
    rep.max_fitted_c_error = std::max(rep.max_fitted_c_error, std::abs(he.c - c));

    const CurvatureBundle cb = curvature_bundle(F, x, y);
    const double F2 = cb.F * cb.F;
    double res = 0.0;
    if (kind == CurvatureKind::ricci) {
      res = std::abs(cb.ricci - (n - 1) * rep.K_predicted * F2) / ((n - 1) * F2);
    } else {
      res = (cb.R - flag_form(cb, y, rep.K_predicted)).cwiseAbs().maxCoeff() / F2;
    }
    rep.max_curvature_residual = std::max(rep.max_curvature_residual, res);
    ++rep.samples;
  }
  if (rep.max_space_form_residual > prerequisite_tol) {
    throw PrerequisiteFailed("h does not have constant curvature mu within tolerance");
  }
  if (rep.max_homothety_residual > prerequisite_tol || rep.max_fitted_c_error > prerequisite_tol) {
    throw PrerequisiteFailed("w is not homothetic to h with factor -c within tolerance");
  }
  rep.pass = rep.samples > 0 && rep.max_curvature_residual <= tol &&
             std::abs(rep.K_predicted - K_expected) <= tol * std::max(1.0, std::abs(K_expected));
  return rep;
}

}  // namespace finsler
