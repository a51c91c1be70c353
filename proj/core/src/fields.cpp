#include "finsler/fields.hpp"

#include <cmath>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

std::vector<int> Signature::signs() const {
  std::vector<int> s(static_cast<std::size_t>(negative), -1);
  s.insert(s.end(), static_cast<std::size_t>(positive), 1);
  return s;
}

std::string Signature::to_string() const {
  std::ostringstream os;
  os << '(';
  const auto s = signs();
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << (s[i] < 0 ? '-' : '+');
  os << ')';
  return os.str();
}

Signature detect_signature(const Eigen::MatrixXd& m, double threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  Signature sig;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= threshold * scale || scale == 0.0) {
      throw SingularMetric("detect_signature: degenerate form");
    }
    (ev(i) > 0 ? sig.positive : sig.negative) += 1;
  }
  return sig;
}

Eigen::MatrixXd PseudoRiemannMetric::values(std::span<const double> x) const {
  return components(seed_point(x, 0)).values();
}

Eigen::VectorXd OneForm::values(std::span<const double> x) const {
  return finsler::values(components(seed_point(x, 0)));
}

double FinslerMetric::operator()(std::span<const double> x, std::span<const double> y) const {
  return jet_eval(value, x, y, JetOrder{0, 0}).value();
}

std::string to_string(IndicatrixKind kind) {
  switch (kind) {
    case IndicatrixKind::elliptic:
      return "elliptic";
    case IndicatrixKind::parabolic:
      return "parabolic";
    case IndicatrixKind::hyperbolic:
      return "hyperbolic";
  }
  return "unknown";
}

std::string to_string(NullSet nulls) {
  switch (nulls) {
    case NullSet::none:
      return "no null direction";
    case NullSet::single_ray:
      return "exactly one null direction";
    case NullSet::half_cone:
      return "a half-cone of null directions";
  }
  return "unknown";
}

std::vector<Jet> seed_point(std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  return seed_variables(JetSpace::get(n, 0, JetOrder{order, 0}), 0, x);
}

bool is_degenerate(const Eigen::MatrixXd& m, double rel) {
  double scale = 1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) scale *= m.row(i).norm();
  return scale == 0.0 || std::abs(m.determinant()) <= rel * scale;
}

PseudoRiemannMetric euclidean_metric(int n) {
  PseudoRiemannMetric m;
  m.dim = n;
  m.signature = Signature::riemann(n);
  m.components = [n](std::span<const Jet> x) {
    JetMatrix a(n, Jet(x[0].space_ptr(), 0.0));
    for (int i = 0; i < n; ++i) a(i, i) = Jet(x[0].space_ptr(), 1.0);
    return a;
  };
  return m;
}

PseudoRiemannMetric minkowski_metric(int n) {
  PseudoRiemannMetric m;
  m.dim = n;
  m.signature = Signature::lorentz(n);
  m.components = [n](std::span<const Jet> x) {
    JetMatrix a(n, Jet(x[0].space_ptr(), 0.0));
    for (int i = 0; i < n; ++i) a(i, i) = Jet(x[0].space_ptr(), i == n - 1 ? 1.0 : -1.0);
    return a;
  };
  return m;
}

OneForm constant_one_form(const Eigen::VectorXd& b) {
  OneForm f;
  f.dim = static_cast<int>(b.size());
  f.components = [b](std::span<const Jet> x) {
    JetVector v;
    for (Eigen::Index i = 0; i < b.size(); ++i) v.emplace_back(x[0].space_ptr(), b(i));
    return v;
  };
  return f;
}

OneForm zero_one_form(int n) { return constant_one_form(Eigen::VectorXd::Zero(n)); }

OneForm perturbed_one_form(const OneForm& beta, double scale) {
  OneForm f;
  f.dim = beta.dim;
  f.components = [beta, scale](std::span<const Jet> x) {
    JetVector v = beta.at(x);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += scale * x[i];
    return v;
  };
  return f;
}

FinslerMetric riemann_norm(const PseudoRiemannMetric& metric) {
  FinslerMetric F;
  F.dim = metric.dim;
  F.value = [metric](std::span<const Jet> x, std::span<const Jet> y) {
    const JetVector yv(y.begin(), y.end());
    return sqrt(quadratic(metric.at(x), yv, yv));
  };
  return F;
}

FinslerMetric assemble_randers(const RandersData& data) {
  FinslerMetric F;
  F.dim = data.alpha.dim;
  F.value = [data](std::span<const Jet> x, std::span<const Jet> y) {
    const JetVector yv(y.begin(), y.end());
    const Jet a2 = quadratic(data.alpha.at(x), yv, yv);
    if (a2.value() <= 0.0) throw DomainError("assemble_randers: a_ij y^i y^j <= 0");
    const JetVector b = data.beta.at(x);
    Jet beta = b[0] * yv[0];
    for (std::size_t i = 1; i < b.size(); ++i) beta += b[i] * yv[i];
    return sqrt(a2) + beta;
  };
  if (data.alpha.domain) {
    auto dom = data.alpha.domain;
    F.domain = [dom](std::span<const double> x, std::span<const double>) { return dom(x); };
  }
  return F;
}

double beta_norm_squared(const PseudoRiemannMetric& metric, const OneForm& beta, std::span<const double> x) {
  const Eigen::MatrixXd a = metric.values(x);
  if (is_degenerate(a)) throw SingularMetric("beta_norm: det a vanishes");
  const Eigen::VectorXd b = beta.values(x);
  return b.dot(a.inverse() * b);
}

double beta_norm(const RandersData& data, std::span<const double> x) {
  return std::sqrt(std::max(0.0, beta_norm_squared(data.alpha, data.beta, x)));
}

IndicatrixClass classify_indicatrix(const RandersData& data, std::span<const double> x, double tol) {
  IndicatrixClass c;
  c.b = beta_norm(data, x);
  if (std::abs(c.b - 1.0) <= tol) {
    c.kind = IndicatrixKind::parabolic;
    c.null_directions = NullSet::single_ray;
  } else if (c.b < 1.0) {
    c.kind = IndicatrixKind::elliptic;
    c.null_directions = NullSet::none;
  } else {
    c.kind = IndicatrixKind::hyperbolic;
    c.null_directions = NullSet::half_cone;
  }
  return c;
}

FundamentalTensor fundamental_tensor(const FinslerMetric& F, std::span<const double> x, std::span<const double> y) {
  const int n = F.dim;
  bool zero = true;
  for (double v : y) zero = zero && v == 0.0;
  if (zero) throw DomainError("fundamental_tensor: y must be nonzero");
  const Jet f = jet_eval(F.value, x, y, JetOrder{0, 2});
  const Jet half_f2 = 0.5 * square(f);
  FundamentalTensor t;
  t.g.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) t.g(i, j) = half_f2.partial(MultiIndex::of(2 * n, {n + i, n + j}));
  }
  t.determinant = t.g.determinant();
  if (is_degenerate(t.g)) throw SingularMetric("fundamental_tensor: g is degenerate");
  t.inverse = t.g.inverse();
  return t;
}

}  // namespace finsler
