#include "finsler/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/errors.hpp"
#include "geometry_jets.hpp"

namespace finsler {

// ---------------------------------------------------------------------------
// Jet-level Levi-Civita calculus

LocalGeometry::LocalGeometry(const PseudoRiemannMetric& metric, std::span<const double> x, int order)
    : n(metric.dim), coords(seed_point(x, order)) {
  a = metric.at(coords);
  if (is_degenerate(a.values())) throw SingularMetric("metric is degenerate at x");
  a_inv = inverse(a);
  std::vector<JetMatrix> da;
  da.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    JetMatrix d(n, Jet());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = a(i, j).derivative(k);
    da.push_back(std::move(d));
  }
  gamma.assign(static_cast<std::size_t>(n * n * n), Jet());
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      // first-kind symbols [jk, l]
      JetVector first;
      for (int l = 0; l < n; ++l) first.push_back(0.5 * (da[j](l, k) + da[k](l, j) - da[l](j, k)));
      for (int i = 0; i < n; ++i) {
        Jet g = a_inv(i, 0) * first[0];
        for (int l = 1; l < n; ++l) g += a_inv(i, l) * first[static_cast<std::size_t>(l)];
        G(i, k, j) = g;
        G(i, j, k) = std::move(g);
      }
    }
  }
}

JetMatrix LocalGeometry::covariant(const JetVector& t) const {
  JetMatrix out(n, Jet());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Jet v = t[static_cast<std::size_t>(i)].derivative(j);
      for (int m = 0; m < n; ++m) v -= G(m, i, j) * t[static_cast<std::size_t>(m)];
      out(i, j) = std::move(v);
    }
  }
  return out;
}

std::vector<Jet> LocalGeometry::covariant(const JetMatrix& t) const {
  std::vector<Jet> out(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Jet v = t(i, j).derivative(k);
        for (int m = 0; m < n; ++m) v -= G(m, i, k) * t(m, j) + G(m, j, k) * t(i, m);
        out[static_cast<std::size_t>((i * n + j) * n + k)] = std::move(v);
      }
    }
  }
  return out;
}

JetVector LocalGeometry::gradient(const Jet& f) const {
  JetVector g;
  for (int k = 0; k < n; ++k) g.push_back(f.derivative(k));
  return g;
}

JetVector LocalGeometry::raise(const JetVector& v) const { return apply(a_inv, v); }

Jet contract(const JetVector& u, const JetVector& v) {
  Jet s = u[0] * v[0];
  for (std::size_t i = 1; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

JetVector contract_first(const JetVector& v, const JetMatrix& m) {
  const int n = m.dim();
  JetVector out;
  for (int i = 0; i < n; ++i) {
    Jet s = v[0] * m(0, i);
    for (int k = 1; k < n; ++k) s += v[static_cast<std::size_t>(k)] * m(k, i);
    out.push_back(std::move(s));
  }
  return out;
}

Tensor3 to_tensor(const std::vector<Jet>& t, int n) {
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j, k) = t[static_cast<std::size_t>((i * n + j) * n + k)].value();
  return out;
}

// ---------------------------------------------------------------------------

Tensor3 christoffel(const PseudoRiemannMetric& metric, std::span<const double> x) {
  const LocalGeometry geo(metric, x, 1);
  return to_tensor(geo.gamma, geo.n);
}

Tensor3 metric_covariant_derivative(const PseudoRiemannMetric& metric, std::span<const double> x) {
  const LocalGeometry geo(metric, x, 1);
  return to_tensor(geo.covariant(geo.a), geo.n);
}

OneFormDerivatives covariant_derivative_oneform(const PseudoRiemannMetric& metric, const OneForm& beta,
                                                std::span<const double> x) {
  const LocalGeometry geo(metric, x, 2);
  const JetMatrix db = geo.covariant(beta.at(geo.coords));
  return {db.values(), to_tensor(geo.covariant(db), geo.n)};
}

namespace {

JetMatrix sym_part(const JetMatrix& m, double sign) {
  const int n = m.dim();
  JetMatrix out(n, Jet());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = 0.5 * (m(i, j) + sign * m(j, i));
  return out;
}

}  // namespace

BetaDerivatives beta_bundle(const PseudoRiemannMetric& metric, const OneForm& beta, std::span<const double> x,
                            std::span<const double> y) {
  const LocalGeometry geo(metric, x, 3);
  const int n = geo.n;
  BetaDerivatives d;
  d.n = n;
  d.y = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));

  const JetVector b = beta.at(geo.coords);
  const JetVector b_up = geo.raise(b);
  const JetMatrix db = geo.covariant(b);
  const JetMatrix r = sym_part(db, 1.0);
  const JetMatrix s = sym_part(db, -1.0);
  const JetVector r_i = contract_first(b_up, r);
  const JetVector s_i = contract_first(b_up, s);
  const Jet r_scalar = contract(r_i, b_up);

  d.a = geo.a.values();
  d.a_inv = geo.a_inv.values();
  d.b = values(b);
  d.b_up = values(b_up);
  d.b2 = d.b.dot(d.b_up);
  d.db = db.values();
  d.ddb = to_tensor(geo.covariant(db), n);
  d.r = r.values();
  d.s = s.values();
  d.r_cov = to_tensor(geo.covariant(r), n);
  d.s_cov = to_tensor(geo.covariant(s), n);
  d.r_lower = values(r_i);
  d.s_lower = values(s_i);
  d.r_upper = d.a_inv * d.r_lower;
  d.s_upper = d.a_inv * d.s_lower;
  d.r_scalar = r_scalar.value();
  d.p = d.r * d.a_inv * d.r;
  d.q = d.r * d.a_inv * d.s;
  d.t = d.s * d.a_inv * d.s;
  d.t_scalar = d.b_up.dot(d.t * d.b_up);
  d.q_lower = d.q.transpose() * d.b_up;
  d.q_star = d.q * d.b_up;
  d.q_scalar = d.b_up.dot(d.q_lower);
  d.r1_cov = geo.covariant(r_i).values();
  d.s1_cov = geo.covariant(s_i).values();
  d.r_grad = values(geo.gradient(r_scalar));

  // c = <r + b(x)s + s(x)b, a - b(x)b> / |a - b(x)b|^2, all contractions by a^{-1}.
  Jet b2 = contract(b, b_up);
  Jet num(b2.space_ptr(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      // a^{ik} a^{jl} (a_kl - b_k b_l) = a^{ij} - b^i b^j
      const Jet pij = geo.a_inv(i, j) - b_up[ui] * b_up[uj];
      num += (r(i, j) + b[ui] * s_i[uj] + s_i[ui] * b[uj]) * pij;
    }
  }
  const Jet den = static_cast<double>(n) - 2.0 * b2 + b2 * b2;
  const Jet c = num / den;
  d.c_fit = c.value();
  d.c_grad = values(geo.gradient(c));
  return d;
}

double BetaDerivatives::r00_0() const {
  double v = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) v += r_cov(i, j, k) * y(i) * y(j) * y(k);
  return v;
}

double BetaDerivatives::s0_0() const { return y.dot(s1_cov * y); }

double BetaDerivatives::sI0_i() const { return sI0_k().trace(); }

Eigen::VectorXd BetaDerivatives::r00_k() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v(k) += r_cov(i, j, k) * y(i) * y(j);
  return v;
}

Eigen::VectorXd BetaDerivatives::rk0_0() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) v(k) += r_cov(k, j, l) * y(j) * y(l);
  return v;
}

Eigen::VectorXd BetaDerivatives::sI0_0() const { return sI0_k() * y; }

Eigen::MatrixXd BetaDerivatives::sI0_k() const {
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);  // s_{m0|k}
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) lower(m, k) += s_cov(m, j, k) * y(j);
  return a_inv * lower;
}

Eigen::MatrixXd BetaDerivatives::sIk_0() const {
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);  // s_{mk|0}
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) lower(m, k) += s_cov(m, k, j) * y(j);
  return a_inv * lower;
}

// ---------------------------------------------------------------------------

RiemannTensorAlpha riemann_alpha(const PseudoRiemannMetric& metric, std::span<const double> x,
                                 std::span<const double> y) {
  const LocalGeometry geo(metric, x, 2);
  const int n = geo.n;
  RiemannTensorAlpha out;
  out.curvature = Tensor4(n);
  std::vector<std::vector<double>> dG;  // d_k Gamma^i_jl at [k][(i,j,l)]
  for (int k = 0; k < n; ++k) {
    std::vector<double> v(static_cast<std::size_t>(n * n * n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          v[static_cast<std::size_t>((i * n + j) * n + l)] = geo.G(i, j, l).derivative(k).value();
    dG.push_back(std::move(v));
  }
  const Tensor3 g = to_tensor(geo.gamma, n);
  auto d = [&](int k, int i, int j, int l) { return dG[static_cast<std::size_t>(k)][static_cast<std::size_t>((i * n + j) * n + l)]; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = d(k, i, j, l) - d(l, i, j, k);
          for (int m = 0; m < n; ++m) v += g(i, k, m) * g(m, j, l) - g(i, l, m) * g(m, j, k);
          out.curvature(j, i, k, l) = v;
        }

  const Eigen::MatrixXd a = geo.a.values();
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  out.R = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) out.R(i, k) += out.curvature(j, i, k, l) * yv(j) * yv(l);

  // R_mi(y) = L_{mi jp} y^j y^p with L_{mijp} = a_ml R_j^l_ip.
  Tensor4 L(n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int p = 0; p < n; ++p) {
          double v = 0.0;
          for (int l = 0; l < n; ++l) v += a(m, l) * out.curvature(j, l, i, p);
          L(m, i, j, p) = v;
        }
  out.fourth = Tensor4(n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          out.fourth(k, m, i, j) = (L(m, i, j, k) + L(m, i, k, j) - L(m, j, i, k) - L(m, j, k, i)) / 3.0;

  out.ricci = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) out.ricci(i, j) += 0.5 * (out.curvature(i, m, m, j) + out.curvature(j, m, m, i));
  out.ricci00 = out.R.trace();
  return out;
}

double space_form_residual(const RiemannTensorAlpha& curv, const Eigen::MatrixXd& a, std::span<const double> y,
                           double mu) {
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const auto n = yv.size();
  const Eigen::MatrixXd expected =
      mu * (yv.dot(a * yv) * Eigen::MatrixXd::Identity(n, n) - yv * (a * yv).transpose());
  const double scale = std::max({1.0, curv.R.cwiseAbs().maxCoeff(), expected.cwiseAbs().maxCoeff()});
  return (curv.R - expected).cwiseAbs().maxCoeff() / scale;
}

double first_bianchi_residual(const RiemannTensorAlpha& curv) {
  const Tensor4& R = curv.fourth;
  const int n = R.dim();
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(R(k, m, i, j) + R(k, i, j, m) + R(k, j, m, i)));
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

class Recorder {
 public:
  void add(std::string name, const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs) {
    IdentityResidual r;
    r.name = std::move(name);
    r.lhs_scale = lhs.size() ? lhs.cwiseAbs().maxCoeff() : 0.0;
    const double rhs_scale = rhs.size() ? rhs.cwiseAbs().maxCoeff() : 0.0;
    const double diff = lhs.size() ? (lhs - rhs).cwiseAbs().maxCoeff() : 0.0;
    r.residual = diff / std::max({1.0, r.lhs_scale, rhs_scale});
    out.max_residual = std::max(out.max_residual, r.residual);
    out.identities.push_back(std::move(r));
  }
  void add(std::string name, double lhs, double rhs) {
    add(std::move(name), Eigen::MatrixXd::Constant(1, 1, lhs), Eigen::MatrixXd::Constant(1, 1, rhs));
  }
  PrioriResiduals out;
};

}  // namespace

PrioriResiduals check_priori_formulae(const PseudoRiemannMetric& metric, const OneForm& beta,
                                      std::span<const double> x, std::span<const double> y) {
  const BetaDerivatives d = beta_bundle(metric, beta, x, y);
  const RiemannTensorAlpha curv = riemann_alpha(metric, x, y);
  const int n = d.n;
  const Tensor4& R4 = curv.fourth;
  const Eigen::VectorXd& yv = d.y;
  const Eigen::VectorXd& bu = d.b_up;
  Recorder rec;

  // Gradient of b^2 has symmetric Hessian.
  {
    const Eigen::MatrixXd m = d.r1_cov + d.s1_cov;
    rec.add("gradient_b2_symmetry", m, m.transpose());
  }
  // s_{0|b}
  rec.add("s0_b", d.s0_b(),
          -d.p0() - d.q0() + d.qstar0() - d.t0() - d.r0_b() + d.r_0());

  // s_{ij|k} = -b^m R_kmij + r_{ik|j} - r_{jk|i}, stored flat over (i, j, k).
  {
    Eigen::MatrixXd lhs(n * n, n), rhs(n * n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = d.r_cov(i, k, j) - d.r_cov(j, k, i);
          for (int m = 0; m < n; ++m) v -= bu(m) * R4(k, m, i, j);
          lhs(i * n + j, k) = d.s_cov(i, j, k);
          rhs(i * n + j, k) = v;
        }
    rec.add("s_ij_k", lhs, rhs);
  }

  // Contractions of the full identity; r- and R-sides evaluated independently of s_cov.
  auto R0 = [&](int m, int q, int k) {  // y^p R_pmqk
    double v = 0.0;
    for (int p = 0; p < n; ++p) v += yv(p) * R4(p, m, q, k);
    return v;
  };
  {
    // s^i_{k|0} = a^{iq}(-b^m y^p R_pmqk + r_{q0|k} - r_{k0|q})
    Eigen::MatrixXd low = Eigen::MatrixXd::Zero(n, n);
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int m = 0; m < n; ++m) v -= bu(m) * R0(m, q, k);
        for (int j = 0; j < n; ++j) v += (d.r_cov(q, j, k) - d.r_cov(k, j, q)) * yv(j);
        low(q, k) = v;
      }
    rec.add("sI_k0", d.sIk_0(), d.a_inv * low);
  }
  {
    // s^i_{0|k} = a^{iq}(-b^m R_kmq0 + r_{qk|0} - r_{0k|q})
    Eigen::MatrixXd low = Eigen::MatrixXd::Zero(n, n);
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int m = 0; m < n; ++m)
          for (int j = 0; j < n; ++j) v -= bu(m) * R4(k, m, q, j) * yv(j);
        for (int j = 0; j < n; ++j) v += (d.r_cov(q, k, j) - d.r_cov(j, k, q)) * yv(j);
        low(q, k) = v;
      }
    rec.add("sI0_k", d.sI0_k(), d.a_inv * low);

    // s^i_{0|0}
    rec.add("sI0_0", d.sI0_0(), d.a_inv * low * yv);
  }
  {
    // s^i_{0|b} = r^i_{|0} - r_{0|}^i - q^i_0 + q_0^i
    const Eigen::VectorXd lhs = d.sI0_k() * bu;
    const Eigen::VectorXd rhs =
        d.a_inv * (d.r1_cov * yv - d.r1_cov.transpose() * yv - d.q * yv + d.q.transpose() * yv);
    rec.add("sI0_b", lhs, rhs);
  }

  // s_{l|k} = -b^m b^p R_kpml - p_kl - t_kl - r_{lk|b} + r_{k|l}, flat (l, k).
  Eigen::MatrixXd slk(n, n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      double v = -d.p(k, l) - d.t(k, l) + d.r1_cov(k, l);
      for (int m = 0; m < n; ++m) {
        v -= d.r_cov(l, k, m) * bu(m);
        for (int p = 0; p < n; ++p) v -= bu(m) * bu(p) * R4(k, p, m, l);
      }
      slk(l, k) = v;
    }
  rec.add("sI_k", d.sI_k(), d.a_inv * slk);
  rec.add("sk_0", d.sk_0(), slk * yv);
  rec.add("s0_k", d.s0_k(), slk.transpose() * yv);
  rec.add("s0_0", d.s0_0(), yv.dot(slk * yv));

  // Traces against the Ricci tensor of a.
  {
    double rI_i0 = 0.0, rI0_i = 0.0, rI_ib = 0.0;
    for (int q = 0; q < n; ++q)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          rI_i0 += d.a_inv(i, q) * d.r_cov(q, i, k) * yv(k);
          rI_ib += d.a_inv(i, q) * d.r_cov(q, i, k) * bu(k);
          rI0_i += d.a_inv(i, q) * d.r_cov(q, k, i) * yv(k);
        }
    rec.add("sI0_i", d.sI0_i(), bu.dot(curv.ricci * yv) + rI_i0 - rI0_i);
    const double rI_i = (d.a_inv * d.r1_cov).trace();
    rec.add("sI_i", d.sI_k().trace(),
            -bu.dot(curv.ricci * bu) - (d.a_inv * d.p).trace() - d.tIi() - rI_ib + rI_i);
  }

  rec.out.q_trace = std::abs(d.qIi());
  return rec.out;
}

}  // namespace finsler
