#include "finsler/sampling.hpp"

#include <cmath>
#include <numbers>

namespace finsler {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Eigen::VectorXd sphere_direction(CounterRng& rng, int n) {
  Eigen::VectorXd v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

Eigen::VectorXd box_point(CounterRng& rng, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::VectorXd x(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) x(i) = rng.uniform(lo(i), hi(i));
  return x;
}

RandersData random_randers_data(std::uint64_t seed, const RandomPairOptions& opt) {
  const int n = opt.dim;
  CounterRng rng(seed, 0x5eed);
  auto matrix = [&](double s) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = s * rng.uniform(-1.0, 1.0);
    return m;
  };
  // a = B B^T + 0.2 I with B = B0 + v sum_k sin(x_k + phi_k) B_k: positive
  // definite everywhere.
  Eigen::MatrixXd B0 = Eigen::MatrixXd::Identity(n, n) + matrix(0.2);
  std::vector<Eigen::MatrixXd> Bk;
  Eigen::VectorXd phase(n);
  for (int k = 0; k < n; ++k) {
    Bk.push_back(matrix(opt.variation));
    phase(k) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  Eigen::VectorXd c0(n), ew(n), ef(n);
  Eigen::MatrixXd lin = matrix(opt.variation * opt.beta_scale);
  Eigen::MatrixXd quad = matrix(opt.variation * opt.beta_scale);
  for (int i = 0; i < n; ++i) {
    c0(i) = opt.beta_scale * rng.uniform(-1.0, 1.0);
    ew(i) = 0.5 * opt.beta_scale * rng.uniform(-1.0, 1.0);
    ef(i) = opt.variation * rng.uniform(-1.0, 1.0);
  }

  RandersData d;
  d.alpha.dim = n;
  d.alpha.signature = Signature::riemann(n);
  d.alpha.components = [n, B0, Bk, phase](std::span<const Jet> x) {
    const auto& sp = x[0].space_ptr();
    std::vector<Jet> s;
    for (int k = 0; k < n; ++k) s.push_back(sin(x[static_cast<std::size_t>(k)] + phase(k)));
    JetMatrix B(n, Jet(sp, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet v(sp, B0(i, j));
        for (int k = 0; k < n; ++k) v += Bk[static_cast<std::size_t>(k)](i, j) * s[static_cast<std::size_t>(k)];
        B(i, j) = v;
      }
    JetMatrix a(n, Jet(sp, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet v(sp, i == j ? 0.2 : 0.0);
        for (int k = 0; k < n; ++k) v += B(i, k) * B(j, k);
        a(i, j) = v;
        a(j, i) = v;
      }
    return a;
  };
  d.beta.dim = n;
  d.beta.components = [n, c0, ew, ef, lin, quad](std::span<const Jet> x) {
    const auto& sp = x[0].space_ptr();
    Jet e(sp, 0.0);
    for (int k = 0; k < n; ++k) e += ef(k) * x[static_cast<std::size_t>(k)];
    e = exp(e);
    JetVector b;
    for (int i = 0; i < n; ++i) {
      Jet v = ew(i) * e + c0(i);
      for (int k = 0; k < n; ++k) {
        const Jet& xk = x[static_cast<std::size_t>(k)];
        v += lin(i, k) * xk + quad(i, k) * xk * x[static_cast<std::size_t>((k + i) % n)];
      }
      b.push_back(std::move(v));
    }
    return b;
  };
  return d;
}

}  // namespace finsler
