#include "finsler/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <functional>
#include <numbers>
#include <thread>

#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/randers.hpp"
#include "finsler/riemann.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

namespace {

// Coordinate order for the four-dimensional entries: (x, y, z, t).
constexpr int X = 0, Y = 1, Z = 2, T = 3;

Jet cst(std::span<const Jet> x, double v) { return Jet(x[0].space_ptr(), v); }

JetMatrix diagonal(std::span<const Jet> x, std::vector<Jet> d) {
  JetMatrix m(static_cast<int>(d.size()), cst(x, 0.0));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = std::move(d[i]);
  return m;
}

PseudoRiemannMetric make_metric(int n, Signature sig, MetricComponents f, PointPredicate domain = {}) {
  PseudoRiemannMetric m;
  m.dim = n;
  m.signature = sig;
  m.components = std::move(f);
  m.domain = std::move(domain);
  return m;
}

OneForm make_form(int n, OneFormComponents f) {
  OneForm w;
  w.dim = n;
  w.components = std::move(f);
  return w;
}

/// Lorentz sign of coordinate i (time last).
double lsign(int i, int n) { return i == n - 1 ? 1.0 : -1.0; }

Jet lorentz_square(std::span<const Jet> x) {
  const int n = static_cast<int>(x.size());
  Jet s = cst(x, 0.0);
  for (int i = 0; i < n; ++i) s += lsign(i, n) * square(x[static_cast<std::size_t>(i)]);
  return s;
}

Jet euclid_square(std::span<const Jet> x) {
  Jet s = cst(x, 0.0);
  for (const Jet& v : x) s += square(v);
  return s;
}

double lorentz_square(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += lsign(i, n) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  return s;
}

double euclid_square(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

bool branch_ok(const NavigationData& nav, std::span<const double> x) {
  try {
    check_branch(nav, x);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Parameters

struct Builder {
  CatalogInfo info;
  std::function<SolutionEntry(const ParamMap&)> build;
};

ParamSpec dim_param(double def, double lo, double hi) { return {"n", def, lo, hi, true, "dimension"}; }

double get(const ParamMap& p, const std::string& k) { return p.at(k); }
int get_dim(const ParamMap& p) { return static_cast<int>(std::lround(p.at("n"))); }

SolutionEntry base_entry(const CatalogInfo& info, const ParamMap& p, int dim) {
  SolutionEntry e;
  e.name = info.name;
  e.description = info.description;
  e.dim = dim;
  e.param_specs = info.params;
  e.params = p;
  e.kind = info.kind;
  e.K_formula = info.K_formula;
  return e;
}

/// Navigation entry: F, alpha/beta extraction and the domain predicate.
void attach_navigation(SolutionEntry& e, NavigationData nav, PointPredicate coords) {
  nav.h.domain = coords;
  const NavigationData probe = nav;
  e.domain = [coords, probe](std::span<const double> x) { return (!coords || coords(x)) && branch_ok(probe, x); };
  nav.h.domain = e.domain;
  e.metric = navigation_metric(nav);
  e.randers = navigation_randers(nav);
  e.navigation = nav;
}

SamplerRegion box(Eigen::VectorXd lo, Eigen::VectorXd hi, std::string description, PointPredicate accept = {}) {
  return {std::move(lo), std::move(hi), std::move(accept), std::move(description)};
}

Eigen::VectorXd fill(int n, double v) { return Eigen::VectorXd::Constant(n, v); }

Eigen::VectorXd vec4(double a, double b, double c, double d) {
  Eigen::VectorXd v(4);
  v << a, b, c, d;
  return v;
}

// ---------------------------------------------------------------------------
// Space forms in projective coordinates

/// h = [(1 + mu q(x)) G - mu (Gx)(Gx)^T] / (1 + mu q(x))^2 where G is the
/// identity (Riemann) or diag(-1, ..., -1, +1) (Lorentz) and q(x) = x^T G x.
MetricComponents projective_space_form(int n, double mu, bool lorentz) {
  return [n, mu, lorentz](std::span<const Jet> x) {
    auto g = [&](int i) { return lorentz ? lsign(i, n) : 1.0; };
    const Jet d = 1.0 + mu * (lorentz ? lorentz_square(x) : euclid_square(x));
    const Jet inv2 = reciprocal(square(d));
    JetMatrix h(n, cst(x, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet v = -mu * g(i) * g(j) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
        if (i == j) v += g(i) * d;
        h(i, j) = v * inv2;
        h(j, i) = h(i, j);
      }
    return h;
  };
}

/// w = (c <x, y>_G + x^T Q y + <a, y>_G) / (1 + mu q(x)).  For mu != 0
/// only c = 0 is homothetic; the denominator makes the remaining terms
/// Killing.
OneFormComponents space_form_wind(int n, double mu, double c, Eigen::VectorXd a, Eigen::MatrixXd Q, bool lorentz) {
  return [=](std::span<const Jet> x) {
    auto g = [&](int i) { return lorentz ? lsign(i, n) : 1.0; };
    const Jet inv = reciprocal(1.0 + mu * (lorentz ? lorentz_square(x) : euclid_square(x)));
    JetVector w;
    for (int j = 0; j < n; ++j) {
      Jet v = c * g(j) * x[static_cast<std::size_t>(j)] + g(j) * a(j);
      for (int i = 0; i < n; ++i)
        if (Q(i, j) != 0.0) v += Q(i, j) * x[static_cast<std::size_t>(i)];
      w.push_back(v * inv);
    }
    return w;
  };
}

Eigen::MatrixXd rotation(int n, double q) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  if (n >= 2) {
    Q(0, 1) = q;
    Q(1, 0) = -q;
  }
  return Q;
}

SolutionEntry build_riemann_form(const CatalogInfo& info, const ParamMap& p, double mu, double c, double a, double q,
                                 SamplerRegion sampler, PointPredicate extra = {}) {
  const int n = get_dim(p);
  SolutionEntry e = base_entry(info, p, n);
  NavigationData nav;
  nav.branch = NavigationBranch::riemann_sub_unit;
  nav.h = make_metric(n, Signature::riemann(n), projective_space_form(n, mu, false));
  Eigen::VectorXd av = Eigen::VectorXd::Zero(n);
  av(0) = a;
  nav.w = make_form(n, space_form_wind(n, mu, c, av, rotation(n, q), false));
  attach_navigation(e, nav, [mu, extra](std::span<const double> x) {
    return 1.0 + mu * euclid_square(x) > 0.05 && (!extra || extra(x));
  });
  e.hint = NavigationHint{mu, -c, CurvatureKind::sectional};
  e.K = mu - 0.25 * c * c;
  e.sampler = std::move(sampler);
  e.anchor = Eigen::VectorXd::Zero(n);
  return e;
}

SolutionEntry build_lorentz_form(const CatalogInfo& info, const ParamMap& p, double mu, double c, double a,
                                 double q, SamplerRegion sampler, Eigen::VectorXd anchor) {
  const int n = get_dim(p);
  SolutionEntry e = base_entry(info, p, n);
  NavigationData nav;
  nav.branch = NavigationBranch::lorentz_super_unit;
  nav.h = make_metric(n, Signature::lorentz(n), projective_space_form(n, mu, true));
  Eigen::VectorXd av = Eigen::VectorXd::Zero(n);
  av(n - 1) = a;
  nav.w = make_form(n, space_form_wind(n, mu, c, av, rotation(n, q), true));
  attach_navigation(e, nav, [mu](std::span<const double> x) { return 1.0 + mu * lorentz_square(x) > 0.05; });
  e.hint = NavigationHint{mu, -c, CurvatureKind::sectional};
  e.K = mu - 0.25 * c * c;
  e.sampler = std::move(sampler);
  e.anchor = std::move(anchor);
  return e;
}

SolutionEntry build_funk(const CatalogInfo& info, const ParamMap& p) {
  const int n = get_dim(p);
  const double eps = get(p, "perturbation");
  auto in_ball = [](std::span<const double> x) { return euclid_square(x) <= 0.81; };
  SolutionEntry e = build_riemann_form(info, p, 0.0, 1.0, 0.0, 0.0,
                                       box(fill(n, -0.9), fill(n, 0.9), "ball |x| <= 0.9", in_ball),
                                       [](std::span<const double> x) { return euclid_square(x) < 1.0; });
  if (eps != 0.0) {
    // Negative control: beta_i + eps x^i is no longer of constant curvature.
    e.randers->beta = perturbed_one_form(e.randers->beta, eps);
    e.metric = assemble_randers(*e.randers);
    e.navigation.reset();
    e.hint.reset();
  }
  e.K = -0.25;
  return e;
}

SolutionEntry build_lorentz_metric(const CatalogInfo& info, const ParamMap& p, double mu) {
  const int n = 4;
  SolutionEntry e = base_entry(info, p, n);
  const PointPredicate coords = [mu](std::span<const double> x) { return 1.0 + 0.25 * mu * lorentz_square(x) > 0.1; };
  PseudoRiemannMetric h = make_metric(
      n, Signature::lorentz(n),
      [n, mu](std::span<const Jet> x) {
        const Jet inv2 = reciprocal(square(1.0 + 0.25 * mu * lorentz_square(x)));
        std::vector<Jet> d;
        for (int i = 0; i < n; ++i) d.push_back(lsign(i, n) * inv2);
        return diagonal(x, std::move(d));
      },
      coords);
  e.lorentz = h;
  e.metric = riemann_norm(h);
  e.domain = coords;
  e.kind = CurvatureKind::sectional;
  e.K = mu;
  e.sampler = box(fill(n, -1.0), fill(n, 1.0), "box [-1, 1]^4");
  e.anchor = Eigen::VectorXd::Zero(n);
  return e;
}

// ---------------------------------------------------------------------------
// Vacuum and Einstein spacetimes, each deformed by a timelike Killing or
// homothetic field.

struct Spacetime {
  MetricComponents h;
  OneFormComponents w;
  PointPredicate coords;
};

SolutionEntry build_spacetime(const CatalogInfo& info, const ParamMap& p, Spacetime s, double K, double c_class,
                              SamplerRegion sampler, Eigen::VectorXd anchor) {
  SolutionEntry e = base_entry(info, p, 4);
  NavigationData nav;
  nav.branch = NavigationBranch::lorentz_super_unit;
  nav.h = make_metric(4, Signature::lorentz(4), std::move(s.h));
  nav.w = make_form(4, std::move(s.w));
  attach_navigation(e, nav, std::move(s.coords));
  e.hint = NavigationHint{K + 0.25 * c_class * c_class, c_class, CurvatureKind::ricci};
  e.K = K;
  e.sampler = std::move(sampler);
  e.anchor = std::move(anchor);
  return e;
}

SamplerRegion shell(double r_lo, double r_hi) {
  return box(vec4(-r_hi, -r_hi, -r_hi, -1.0), vec4(r_hi, r_hi, r_hi, 1.0),
             "spatial shell " + std::to_string(r_lo) + " <= |x| <= " + std::to_string(r_hi),
             [r_lo, r_hi](std::span<const double> x) {
               const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
               return r2 >= r_lo * r_lo && r2 <= r_hi * r_hi;
             });
}

SolutionEntry build_schwarzschild(const CatalogInfo& info, const ParamMap& p) {
  const double m = get(p, "m"), lam = get(p, "lambda");
  auto factors = [m](std::span<const Jet> x) {
    const Jet r = sqrt(square(x[X]) + square(x[Y]) + square(x[Z]));
    const Jet u = (0.5 * m) * reciprocal(r);
    return std::pair{1.0 + u, 1.0 - u};  // psi, phi
  };
  Spacetime s;
  s.h = [factors](std::span<const Jet> x) {
    const auto [psi, phi] = factors(x);
    const Jet psi4 = square(square(psi));
    return diagonal(x, {-psi4, -psi4, -psi4, square(phi) / square(psi)});
  };
  s.w = [factors, lam](std::span<const Jet> x) {
    const auto [psi, phi] = factors(x);
    return JetVector{cst(x, 0.0), cst(x, 0.0), cst(x, 0.0), lam * square(phi) / square(psi)};
  };
  s.coords = [m](std::span<const double> x) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    return r > 1e-6 && std::abs(1.0 + 0.5 * m / r) > 1e-3;
  };
  return build_spacetime(info, p, std::move(s), 0.0, 0.0, shell(1.0, 3.0), vec4(0.0, 0.0, 2.0, 0.0));
}

SolutionEntry build_kerr(const CatalogInfo& info, const ParamMap& p) {
  const double m = get(p, "m"), a = get(p, "a"), lam = get(p, "lambda");
  // f and the null form k of the Kerr-Schild decomposition h = eta - f k k.
  auto kerr_schild = [m, a](std::span<const Jet> x) {
    const Jet rho2 = square(x[X]) + square(x[Y]) + square(x[Z]);
    const Jet d = rho2 - a * a;
    const Jet r2 = 0.5 * (d + sqrt(square(d) + (4.0 * a * a) * square(x[Z])));
    const Jet r = sqrt(r2);
    const Jet f = (2.0 * m) * r2 * r / (square(r2) + (a * a) * square(x[Z]));
    const Jet den = reciprocal(r2 + a * a);
    JetVector k{(r * x[X] + a * x[Y]) * den, (r * x[Y] - a * x[X]) * den, x[Z] / r, cst(x, 1.0)};
    return std::pair{f, k};
  };
  Spacetime s;
  s.h = [kerr_schild](std::span<const Jet> x) {
    const auto [f, k] = kerr_schild(x);
    JetMatrix h(4, cst(x, 0.0));
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        Jet v = -(f * k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(j)]);
        if (i == j) v += lsign(i, 4);
        h(i, j) = v;
        h(j, i) = v;
      }
    return h;
  };
  s.w = [kerr_schild, lam](std::span<const Jet> x) {
    const auto [f, k] = kerr_schild(x);
    JetVector w;
    for (int i = 0; i < 4; ++i) {
      Jet v = -(lam * f * k[static_cast<std::size_t>(i)]);
      if (i == T) v += lam;
      w.push_back(v);
    }
    return w;
  };
  s.coords = [a](std::span<const double> x) { return kerr_radius(x[0], x[1], x[2], a) > 1e-6; };
  return build_spacetime(info, p, std::move(s), 0.0, 0.0, shell(1.0, 3.0), vec4(0.0, 2.0, 0.5, 0.0));
}

SolutionEntry build_c_metric(const CatalogInfo& info, const ParamMap& p) {
  const double ma2 = 2.0 * get(p, "m") * get(p, "a"), lam = get(p, "lambda");
  auto FG = [ma2](const auto& xv, const auto& yv) {
    return std::pair{-1.0 + yv * yv - ma2 * yv * yv * yv, 1.0 - xv * xv - ma2 * xv * xv * xv};
  };
  Spacetime s;
  s.h = [FG](std::span<const Jet> x) {
    const auto [F, G] = FG(x[X], x[Y]);
    const Jet inv = reciprocal(square(x[X] + x[Y]));
    return diagonal(x, {-(inv / G), -(inv / F), -(inv * G), inv * F});
  };
  s.w = [FG, lam](std::span<const Jet> x) {
    const auto [F, G] = FG(x[X], x[Y]);
    return JetVector{cst(x, 0.0), cst(x, 0.0), cst(x, 0.0), lam * F / square(x[X] + x[Y])};
  };
  s.coords = [FG](std::span<const double> x) {
    const auto [F, G] = FG(x[0], x[1]);
    return F > 1e-3 && G > 1e-3 && std::abs(x[0] + x[1]) > 1e-3;
  };
  return build_spacetime(info, p, std::move(s), 0.0, 0.0,
                         box(vec4(-0.9, 1.2, -1.0, -1.0), vec4(0.9, 3.0, 1.0, 1.0),
                             "x in (-0.9, 0.9), y in (1.2, 3), z, t in (-1, 1)"),
                         vec4(-0.5, 2.0, 0.0, 0.0));
}

SolutionEntry build_kasner(const CatalogInfo& info, const ParamMap& p) {
  const double pe = get(p, "p"), qe = get(p, "q"), re = get(p, "r"), lam = get(p, "lambda");
  if (std::abs(pe + qe + re - 1.0) > 1e-12 || std::abs(pe * pe + qe * qe + re * re - 1.0) > 1e-12) {
    throw InvalidParams("kasner: exponents must satisfy p+q+r = 1 and p^2+q^2+r^2 = 1");
  }
  Spacetime s;
  s.h = [pe, qe, re](std::span<const Jet> x) {
    return diagonal(x, {-pow(x[T], 2 * pe), -pow(x[T], 2 * qe), -pow(x[T], 2 * re), cst(x, 1.0)});
  };
  // Dual of lambda X_1, X_1 = t d_t + (1-p) x d_x + (1-q) y d_y + (1-r) z d_z.
  s.w = [pe, qe, re, lam](std::span<const Jet> x) {
    return JetVector{-(lam * (1 - pe)) * x[X] * pow(x[T], 2 * pe), -(lam * (1 - qe)) * x[Y] * pow(x[T], 2 * qe),
                     -(lam * (1 - re)) * x[Z] * pow(x[T], 2 * re), lam * x[T]};
  };
  s.coords = [](std::span<const double> x) { return x[3] > 1e-3; };
  return build_spacetime(info, p, std::move(s), -0.25 * lam * lam, -lam,
                         box(vec4(-0.5, -0.5, -0.5, 1.0), vec4(0.5, 0.5, 0.5, 2.0), "t in [1, 2], |x|,|y|,|z| <= 0.5"),
                         vec4(0.1, 0.1, 0.1, 1.5));
}

MetricComponents levi_civita_metric(double g) {
  return [g](std::span<const Jet> x) {
    const Jet yz = -pow(x[Z], 2 * g * (g - 1));
    return diagonal(x, {-pow(x[Z], -2 * (g - 1)), yz, yz, pow(x[Z], 2 * g)});
  };
}

SolutionEntry build_levi_civita(const CatalogInfo& info, const ParamMap& p) {
  const double g = get(p, "gamma"), lam = get(p, "lambda");
  Spacetime s;
  s.h = levi_civita_metric(g);
  s.w = [g, lam](std::span<const Jet> x) {
    return JetVector{cst(x, 0.0), cst(x, 0.0), cst(x, 0.0), lam * pow(x[Z], 2 * g)};
  };
  s.coords = [](std::span<const double> x) { return x[2] > 1e-3; };
  return build_spacetime(info, p, std::move(s), 0.0, 0.0,
                         box(vec4(-1.0, -1.0, 1.2, -1.0), vec4(1.0, 1.0, 2.0, 1.0), "z in [1.2, 2], x, y, t in [-1, 1]"),
                         vec4(0.0, 0.0, 1.5, 0.0));
}

SolutionEntry build_levi_civita_homothetic(const CatalogInfo& info, const ParamMap& p) {
  const double g = get(p, "gamma"), lam = get(p, "lambda");
  const double k = lam / (g * g - g + 1);
  Spacetime s;
  s.h = levi_civita_metric(g);
  s.w = [g, k](std::span<const Jet> x) {
    const Jet yz = pow(x[Z], 2 * g * (g - 1));
    return JetVector{-(k * g * g) * pow(x[Z], -2 * (g - 1)) * x[X], -k * yz * x[Y], -k * yz * x[Z],
                     (k * (g - 1) * (g - 1)) * pow(x[Z], 2 * g) * x[T]};
  };
  s.coords = [](std::span<const double> x) { return x[2] > 1e-3; };
  return build_spacetime(info, p, std::move(s), -0.25 * lam * lam, -lam,
                         box(vec4(-0.3, -0.3, 0.8, 2.0), vec4(0.3, 0.3, 1.2, 4.0),
                             "z in [0.8, 1.2], t in [2, 4], |x|, |y| <= 0.3"),
                         vec4(0.0, 0.0, 1.0, 3.0));
}

/// Upper end of the strip lambda^2 cos^2 u sin^(-2/3) u > 1 in u = k z.
double cartor_strip_bound(double lam) {
  const double l3 = lam * lam * lam;
  const double w = std::cbrt(108.0 * l3 + 12.0 * std::sqrt(81.0 * l3 * l3 + 12.0));
  return std::asin(std::sqrt(1.0 - w / (6.0 * l3) + 2.0 / (l3 * w)));
}

SolutionEntry build_cartor(const CatalogInfo& info, const ParamMap& p, bool hyperbolic) {
  const double lam = get(p, "lambda"), Lambda = get(p, "Lambda");
  const double k = 1.5 * std::sqrt(Lambda);
  auto sc = [k, hyperbolic](const Jet& z) {
    const Jet u = k * z;
    return hyperbolic ? std::pair{sinh(u), cosh(u)} : std::pair{sin(u), cos(u)};
  };
  Spacetime s;
  s.h = [sc](std::span<const Jet> x) {
    const auto [sn, cs] = sc(x[Z]);
    const Jet s43 = pow(sn, 4.0 / 3.0);
    return diagonal(x, {-s43, -s43, cst(x, -1.0), square(cs) * pow(sn, -2.0 / 3.0)});
  };
  s.w = [sc, lam](std::span<const Jet> x) {
    const auto [sn, cs] = sc(x[Z]);
    return JetVector{cst(x, 0.0), cst(x, 0.0), cst(x, 0.0), lam * square(cs) * pow(sn, -2.0 / 3.0)};
  };
  const double half_pi = 0.5 * std::numbers::pi;
  s.coords = [k, hyperbolic, half_pi](std::span<const double> x) {
    const double u = k * x[2];
    return u > 1e-3 && (hyperbolic || u < half_pi - 1e-3);
  };
  SamplerRegion region;
  if (hyperbolic) {
    region = box(vec4(-1.0, -1.0, 0.3 / k, -1.0), vec4(1.0, 1.0, 1.5 / k, 1.0), "k z in [0.3, 1.5]");
  } else {
    // The closed-form strip bound is only a sampling hint; the domain
    // predicate itself decides membership.
    const double hi = std::min(cartor_strip_bound(lam), half_pi) / k;
    region = box(vec4(-1.0, -1.0, 0.02 * hi, -1.0), vec4(1.0, 1.0, 0.98 * hi, 1.0), "0 < z below the strip bound");
  }
  const Eigen::VectorXd anchor = 0.5 * (region.lo + region.hi);
  return build_spacetime(info, p, std::move(s), hyperbolic ? Lambda : -Lambda, 0.0, std::move(region), anchor);
}

// ---------------------------------------------------------------------------
// b == 1 example: constant curvature -1 data with a closed conformal form.

SolutionEntry build_singular_hyperbolic(const CatalogInfo& info, const ParamMap& p) {
  const int n = get_dim(p);
  constexpr double mu = -1.0, lam = 1.0;  // lambda^2 + mu |a|^2 = 0 with a = e_1
  SolutionEntry e = base_entry(info, p, n);
  const MetricComponents hbar = projective_space_form(n, mu, false);
  const OneFormComponents wbar = [n](std::span<const Jet> x) {
    const Jet d = 1.0 + mu * euclid_square(x);
    const Jet inv = reciprocal(d * sqrt(d));
    JetVector w;
    for (int j = 0; j < n; ++j) {
      Jet v = (lam - mu * x[0]) * x[static_cast<std::size_t>(j)];
      if (j == 0) v += d;
      w.push_back(v * inv);
    }
    return w;
  };
  RandersData r;
  r.alpha = make_metric(n, Signature::riemann(n), [n, hbar, wbar](std::span<const Jet> x) {
    const JetMatrix h = hbar(x);
    const JetVector w = wbar(x);
    const Jet lam1 = 1.0 - quadratic(inverse(h), w, w);
    const Jet inv2 = reciprocal(square(lam1));
    JetMatrix a(n, cst(x, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a(i, j) = (lam1 * h(i, j) + w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)]) * inv2;
    return a;
  });
  r.beta = make_form(n, [hbar, wbar](std::span<const Jet> x) {
    const JetMatrix h = hbar(x);
    JetVector w = wbar(x);
    const Jet bb2 = quadratic(inverse(h), w, w);
    const Jet scale = reciprocal(sqrt(bb2) * (1.0 - bb2));
    for (auto& wi : w) wi = -(wi * scale);
    return w;
  });
  const PseudoRiemannMetric hm = make_metric(n, Signature::riemann(n), hbar);
  const OneForm wm = make_form(n, wbar);
  e.domain = [hm, wm](std::span<const double> x) {
    if (euclid_square(x) >= 0.99) return false;
    const double bb2 = beta_norm_squared(hm, wm, x);
    return bb2 > 0.01 && bb2 < 0.9;
  };
  r.alpha.domain = e.domain;
  e.randers = r;
  e.metric = assemble_randers(r);
  e.K = -0.25;
  Eigen::VectorXd lo = fill(n, -0.5), hi = fill(n, 0.5);
  lo(0) = -0.9;
  hi(0) = 0.0;
  e.sampler = box(lo, hi, "x^1 in [-0.9, 0], other |x^i| <= 0.5, |x| < 0.9",
                  [](std::span<const double> x) { return euclid_square(x) < 0.81; });
  e.anchor = Eigen::VectorXd::Zero(n);
  e.anchor(0) = -0.5;
  return e;
}

// ---------------------------------------------------------------------------
// Registry

const std::vector<Builder>& registry() {
  static const std::vector<Builder> entries = [] {
    std::vector<Builder> v;
    auto add = [&](CatalogInfo info, std::function<SolutionEntry(const CatalogInfo&, const ParamMap&)> f) {
      v.push_back({info, [info, f](const ParamMap& p) { return f(info, p); }});
    };
    const double inf = 1e300;

    add({"funk", "Funk metric on the unit ball: navigation of the Euclidean metric by the wind x", 0,
         {dim_param(2, 2, 4), {"perturbation", 0.0, -1.0, 1.0, false, "adds perturbation * x^i to beta (negative control)"}},
         CurvatureKind::flag, "-1/4", -0.25, {}},
        build_funk);
    add({"riemann_space_form", "Projective Riemann space form navigated by a homothetic or Killing wind", 0,
         {dim_param(3, 2, 4), {"mu", 1.0, -1.0, 1.0, false, "sectional curvature of h"},
          {"c", 0.0, -1.0, 1.0, false, "coefficient of <x,y>; requires mu = 0"},
          {"a", 0.3, -0.6, 0.6, false, "translation part <a,y> with a = a e_1"},
          {"q", 0.2, -0.6, 0.6, false, "rotation part x^T Q y with Q_12 = -Q_21 = q"}},
         CurvatureKind::flag, "mu - c^2/4", 1.0, {}},
        [](const CatalogInfo& info, const ParamMap& p) {
          const double mu = get(p, "mu"), c = get(p, "c");
          if (mu != 0.0 && c != 0.0) throw InvalidParams("riemann_space_form: homothetic c != 0 requires mu = 0");
          return build_riemann_form(info, p, mu, c, get(p, "a"), get(p, "q"),
                                    box(fill(get_dim(p), -0.5), fill(get_dim(p), 0.5), "box [-0.5, 0.5]^n"));
        });
    add({"lorentz_space_form", "Projective Lorentz space form navigated by a timelike homothetic or Killing wind",
         0,
         {dim_param(4, 2, 4), {"mu", 1.0, -1.0, 1.0, false, "sectional curvature of h"},
          {"c", 0.0, -1.0, 1.0, false, "coefficient of <x,y>_L; requires mu = 0"},
          {"a", 2.0, 1.2, 4.0, false, "timelike translation part <a,y>_L with a = a e_n"},
          {"q", 0.3, -0.6, 0.6, false, "rotation part x^T Q y with Q_12 = -Q_21 = q"}},
         CurvatureKind::flag, "mu - c^2/4", 1.0, {}},
        [](const CatalogInfo& info, const ParamMap& p) {
          const double mu = get(p, "mu"), c = get(p, "c");
          if (mu != 0.0 && c != 0.0) throw InvalidParams("lorentz_space_form: homothetic c != 0 requires mu = 0");
          const int n = get_dim(p);
          return build_lorentz_form(info, p, mu, c, get(p, "a"), get(p, "q"),
                                    box(fill(n, -0.4), fill(n, 0.4), "box [-0.4, 0.4]^n"), Eigen::VectorXd::Zero(n));
        });
    add({"minkowski_superunit", "Flat Minkowski metric navigated by the homothetic wind x on |x|_L > 1", 0,
         {dim_param(4, 2, 4)}, CurvatureKind::flag, "-1/4", -0.25, {}},
        [](const CatalogInfo& info, const ParamMap& p) {
          const int n = get_dim(p);
          Eigen::VectorXd lo = fill(n, -1.0), hi = fill(n, 1.0);
          lo(n - 1) = 1.2;
          hi(n - 1) = 3.2;
          Eigen::VectorXd anchor = Eigen::VectorXd::Zero(n);
          anchor(n - 1) = 2.0;
          SolutionEntry e = build_lorentz_form(
              info, p, 0.0, 1.0, 0.0, 0.0,
              box(lo, hi, "x^n in [1.2, 3.2], other |x^i| <= 1, 1.1 < |x|_L < 3",
                  [](std::span<const double> x) {
                    const double l2 = lorentz_square(x);
                    return l2 > 1.21 && l2 < 9.0 && x[x.size() - 1] > 0.0;
                  }),
              anchor);
          return e;
        });
    add({"minkowski", "Flat Minkowski spacetime as F = sqrt(h(y,y)) on timelike y", 4, {}, CurvatureKind::sectional,
         "0", 0.0, {}},
        [](const CatalogInfo& info, const ParamMap& p) { return build_lorentz_metric(info, p, 0.0); });
    add({"de_sitter", "Conformally flat de Sitter spacetime, curvature 1", 4, {}, CurvatureKind::sectional, "1", 1.0,
         {}},
        [](const CatalogInfo& info, const ParamMap& p) { return build_lorentz_metric(info, p, 1.0); });
    add({"anti_de_sitter", "Conformally flat anti de Sitter spacetime, curvature -1", 4, {},
         CurvatureKind::sectional, "-1", -1.0, {}},
        [](const CatalogInfo& info, const ParamMap& p) { return build_lorentz_metric(info, p, -1.0); });
    add({"schwarzschild_randers", "Isotropic Schwarzschild metric navigated by lambda d_t", 4,
         {{"m", -1.0, -inf, inf, false, "mass parameter (negative allowed)"},
          {"lambda", 1.0, -inf, inf, false, "wind scale"}},
         CurvatureKind::ricci, "0", 0.0, {"schwarzschild"}},
        build_schwarzschild);
    add({"kerr_randers", "Kerr metric in Kerr-Schild coordinates navigated by lambda d_t", 4,
         {{"m", -0.5, -inf, inf, false, "mass parameter (negative allowed)"},
          {"a", 0.3, -inf, inf, false, "rotation parameter"},
          {"lambda", 2.0, -inf, inf, false, "wind scale"}},
         CurvatureKind::ricci, "0", 0.0, {"kerr"}},
        build_kerr);
    add({"c_metric_randers", "C-metric navigated by lambda d_t", 4,
         {{"m", 0.1, -inf, inf, false, "mass parameter"},
          {"a", 0.5, -inf, inf, false, "acceleration parameter"},
          {"lambda", 2.0, -inf, inf, false, "wind scale"}},
         CurvatureKind::ricci, "0", 0.0, {"c_metric"}},
        build_c_metric);
    add({"kasner_randers", "Kasner metric navigated by the homothetic field lambda X_1", 4,
         {{"p", 2.0 / 3.0, -1.0, 1.0, false, "Kasner exponent"},
          {"q", 2.0 / 3.0, -1.0, 1.0, false, "Kasner exponent"},
          {"r", -1.0 / 3.0, -1.0, 1.0, false, "Kasner exponent"},
          {"lambda", 3.0, -inf, inf, false, "wind scale"}},
         CurvatureKind::ricci, "-lambda^2/4", -2.25, {"kasner"}},
        build_kasner);
    add({"levi_civita_randers", "Levi-Civita metric navigated by the Killing field lambda d_t", 4,
         {{"gamma", 2.0, -inf, inf, false, "Levi-Civita parameter"}, {"lambda", 1.0, -inf, inf, false, "wind scale"}},
         CurvatureKind::ricci, "0", 0.0, {"levi_civita"}},
        build_levi_civita);
    add({"levi_civita_homothetic_randers", "Levi-Civita metric navigated by the homothetic field lambda X_1", 4,
         {{"gamma", 2.0, -inf, inf, false, "Levi-Civita parameter"}, {"lambda", 2.0, -inf, inf, false, "wind scale"}},
         CurvatureKind::ricci, "-lambda^2/4", -1.0, {}},
        build_levi_civita_homothetic);
    add({"cartor_randers", "Einstein metric with negative constant navigated by lambda d_t on a strip", 4,
         {{"lambda", 2.0, -inf, inf, false, "wind scale"},
          {"Lambda", 4.0 / 9.0, 1e-6, inf, false, "cosmological constant of h"}},
         CurvatureKind::ricci, "-Lambda", -4.0 / 9.0, {"cartor"}},
        [](const CatalogInfo& info, const ParamMap& p) { return build_cartor(info, p, false); });
    add({"cartor_hyperbolic_randers", "Einstein metric with positive constant navigated by lambda d_t", 4,
         {{"lambda", 1.0, -inf, inf, false, "wind scale"},
          {"Lambda", 4.0 / 9.0, 1e-6, inf, false, "cosmological constant of h"}},
         CurvatureKind::ricci, "Lambda", 4.0 / 9.0, {}},
        [](const CatalogInfo& info, const ParamMap& p) { return build_cartor(info, p, true); });
    add({"singular_hyperbolic", "Randers metric with ||beta||_alpha = 1 built from hyperbolic data", 0,
         {dim_param(3, 2, 4)}, CurvatureKind::flag, "-1/4", -0.25, {}},
        build_singular_hyperbolic);
    return v;
  }();
  return entries;
}

const Builder& find_builder(const std::string& name) {
  for (const auto& b : registry()) {
    if (b.info.name == name) return b;
    if (std::find(b.info.aliases.begin(), b.info.aliases.end(), name) != b.info.aliases.end()) return b;
  }
  throw NotFound("unknown solution '" + name + "'");
}

ParamMap resolve_params(const CatalogInfo& info, const ParamMap& given) {
  ParamMap p;
  for (const auto& s : info.params) p[s.name] = s.default_value;
  for (const auto& [k, v] : given) {
    const auto it = std::find_if(info.params.begin(), info.params.end(), [&](const ParamSpec& s) { return s.name == k; });
    if (it == info.params.end()) throw InvalidParams(info.name + ": unknown parameter '" + k + "'");
    if (!std::isfinite(v) || v < it->min || v > it->max) {
      throw InvalidParams(info.name + ": parameter '" + k + "' out of range");
    }
    if (it->integer && v != std::round(v)) throw InvalidParams(info.name + ": parameter '" + k + "' must be an integer");
    p[k] = v;
  }
  return p;
}

}  // namespace

std::vector<CatalogInfo> catalog_list() {
  std::vector<CatalogInfo> out;
  for (const auto& b : registry()) {
    CatalogInfo info = b.info;
    if (info.dim == 0) {
      for (const auto& s : info.params)
        if (s.name == "n") info.dim = static_cast<int>(s.default_value);
    }
    out.push_back(std::move(info));
  }
  return out;
}

SolutionEntry catalog_get(const std::string& name, const ParamMap& params) {
  const Builder& b = find_builder(name);
  const ParamMap p = resolve_params(b.info, params);
  SolutionEntry e = b.build(p);
  if (!std::isfinite(e.K)) throw InvalidParams(name + ": expected curvature is not finite");
  return e;
}

double kerr_radius(double x, double y, double z, double a) {
  const double d = x * x + y * y + z * z - a * a;
  return std::sqrt(0.5 * (d + std::sqrt(d * d + 4.0 * a * a * z * z)));
}

// ---------------------------------------------------------------------------
// Verification

namespace {

constexpr std::uint64_t kProbeStream = 0xffffffffffffffffULL;
constexpr int kMaxPointAttempts = 20000;
constexpr int kMaxDirectionAttempts = 64;
constexpr double kCharacterizationUnitTol = 1e-10;

bool in_region(const SolutionEntry& e, std::span<const double> x) {
  if (e.sampler.accept && !e.sampler.accept(x)) return false;
  try {
    return e.contains(x);
  } catch (const Error&) {
    return false;
  }
}

double reference_norm(const SolutionEntry& e, std::span<const double> x, std::span<const double> y, double F) {
  if (!e.randers) return F;
  const Eigen::MatrixXd a = e.randers->alpha.values(x);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  return std::sqrt(std::max(0.0, yv.dot(a * yv)));
}

// Draws x in the sampler region and domain, then unit directions y with
// F >= min_ratio * alpha, until `eval` accepts one without a local error.
template <class Eval>
auto draw_admissible(const SolutionEntry& e, CounterRng& rng, double min_ratio, int index, Eval&& eval) {
  for (int attempt = 0; attempt < kMaxPointAttempts; ++attempt) {
    const Eigen::VectorXd x = box_point(rng, e.sampler.lo, e.sampler.hi);
    const auto xs = as_span(x);
    if (!in_region(e, xs)) continue;
    for (int k = 0; k < kMaxDirectionAttempts; ++k) {
      const Eigen::VectorXd y = sphere_direction(rng, e.dim);
      const auto ys = as_span(y);
      try {
        const double Fv = e.metric(xs, ys);
        const double al = reference_norm(e, xs, ys, Fv);
        if (!(Fv > 0.0) || Fv < min_ratio * al) continue;
        return eval(x, y, al);
      } catch (const DomainError&) {
      } catch (const SingularMetric&) {
      } catch (const DivisionByZero&) {
      }
    }
  }
  throw EmptyDomain(e.name + ": no admissible (x, y) found for sample " + std::to_string(index));
}

SampleRecord evaluate_sample(const SolutionEntry& e, const VerifyOptions& opt, int index) {
  CounterRng rng(opt.seed, static_cast<std::uint64_t>(index) + 1);
  const int n = e.dim;
  return draw_admissible(e, rng, opt.min_F_ratio, index, [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                                             double al) {
    const auto xs = as_span(x);
    const auto ys = as_span(y);
    const CurvatureBundle cb = curvature_bundle(e.metric, xs, ys);
    const double F2 = cb.F * cb.F;
    SampleRecord rec;
    rec.index = index;
    rec.x = x;
    rec.y = y;
    rec.F = cb.F;
    rec.alpha = al;
    rec.K_estimate = cb.ricci / ((n - 1) * F2);
    switch (e.kind) {
      case CurvatureKind::flag:
        rec.residual = (cb.R - flag_form(cb, ys, e.K)).cwiseAbs().maxCoeff() / F2;
        break;
      case CurvatureKind::ricci:
        rec.residual = std::abs(cb.ricci - (n - 1) * e.K * F2) / ((n - 1) * F2);
        break;
      case CurvatureKind::sectional: {
        const double flag = (cb.R - flag_form(cb, ys, e.K)).cwiseAbs().maxCoeff() / F2;
        double sect = 0.0;
        if (e.lorentz) sect = space_form_residual(riemann_alpha(*e.lorentz, xs, ys), e.lorentz->values(xs), ys, e.K);
        rec.residual = std::max(flag, sect);
        break;
      }
    }
    if (e.randers) {
      rec.b = beta_norm(*e.randers, xs);
      rec.indicatrix = to_string(classify_indicatrix(*e.randers, xs, 1e-10).kind);
      const CharacterizationReport cr =
          e.kind == CurvatureKind::ricci
              ? check_einstein_characterization(*e.randers, e.K, std::nullopt, xs, ys, kCharacterizationUnitTol)
              : check_cfc_characterization(*e.randers, e.K, std::nullopt, xs, ys, kCharacterizationUnitTol);
      rec.characterization = cr.max_residual;
      if (!cr.unit_branch) rec.c = cr.c;
    }
    return rec;
  });
}

void probe_domain(const SolutionEntry& e, const VerifyOptions& opt) {
  CounterRng rng(opt.seed, kProbeStream);
  for (int i = 0; i < opt.probe_trials; ++i) {
    const Eigen::VectorXd x = box_point(rng, e.sampler.lo, e.sampler.hi);
    if (in_region(e, as_span(x))) return;
  }
  throw EmptyDomain(e.name + ": sampler region contains no point of the domain (" +
                    std::to_string(opt.probe_trials) + " probes)");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<ClassificationSample> sample_points(const SolutionEntry& entry, int count, std::uint64_t seed,
                                                double min_F_ratio) {
  std::vector<ClassificationSample> out;
  for (int i = 0; i < count; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i) + 1);
    out.push_back(draw_admissible(entry, rng, min_F_ratio, i,
                                  [](const Eigen::VectorXd& x, const Eigen::VectorXd& y, double) {
                                    return ClassificationSample{x, y};
                                  }));
  }
  return out;
}

VerificationReport verify_solution(const SolutionEntry& entry, const VerifyOptions& opt) {
  if (opt.samples < 1) throw InvalidParams("verify: samples must be >= 1");
  if (!(opt.tol > 0.0)) throw InvalidParams("verify: tol must be > 0");
  const auto start = std::chrono::steady_clock::now();
  probe_domain(entry, opt);

  const int jobs = std::clamp(opt.jobs, 1, opt.samples);
  std::vector<SampleRecord> records(static_cast<std::size_t>(opt.samples));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(opt.samples));
  auto work = [&](int worker) {
    for (int i = worker; i < opt.samples; i += jobs) {
      try {
        records[static_cast<std::size_t>(i)] = evaluate_sample(entry, opt, i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  VerificationReport rep;
  rep.solution = entry.name;
  rep.params = entry.params;
  rep.kind = to_string(entry.kind);
  rep.K_formula = entry.K_formula;
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  rep.tol = opt.tol;
  rep.K_expected = entry.K;

  double ksum = 0.0;
  for (const auto& r : records) {
    rep.max_residual = std::max(rep.max_residual, r.residual);
    ksum += r.K_estimate;
  }
  rep.K_mean = ksum / opt.samples;
  for (const auto& r : records) rep.K_spread = std::max(rep.K_spread, std::abs(r.K_estimate - rep.K_mean));
  rep.pass = rep.max_residual <= opt.tol;

  if (entry.randers) {
    double bmin = records.front().b, bmax = bmin, cmax = 0.0, csum = 0.0;
    int cn = 0;
    for (const auto& r : records) {
      bmin = std::min(bmin, r.b);
      bmax = std::max(bmax, r.b);
      if (r.indicatrix &&
          std::find(rep.indicatrix_kinds.begin(), rep.indicatrix_kinds.end(), *r.indicatrix) ==
              rep.indicatrix_kinds.end()) {
        rep.indicatrix_kinds.push_back(*r.indicatrix);
      }
      if (r.characterization) cmax = std::max(cmax, *r.characterization);
      if (r.c) {
        csum += *r.c;
        ++cn;
      }
    }
    rep.b_min = bmin;
    rep.b_max = bmax;
    rep.max_characterization_residual = cmax;
    bool ok = cmax <= opt.characterization_tol;
    if (cn > 0) {
      const double mean = csum / cn;
      double spread = 0.0;
      for (const auto& r : records)
        if (r.c) spread = std::max(spread, std::abs(*r.c - mean));
      rep.c_mean = mean;
      rep.c_spread = spread;
      ok = ok && spread <= opt.c_spread_tol;
    }
    rep.characterization_pass = ok;
  }
  rep.records = std::move(records);
  rep.timestamp = utc_timestamp();
  rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace finsler
