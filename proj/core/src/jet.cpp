#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

constexpr double kSingularTolerance = 1e-300;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::vector<int> orders) : orders_(std::move(orders)) {
  for (int o : orders_) {
    if (o < 0) throw std::invalid_argument("MultiIndex: negative order");
  }
}

MultiIndex MultiIndex::zero(int nvars) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(nvars), 0)); }

MultiIndex MultiIndex::of(int nvars, std::initializer_list<int> vars) {
  std::vector<int> o(static_cast<std::size_t>(nvars), 0);
  for (int v : vars) {
    if (v < 0 || v >= nvars) throw std::out_of_range("MultiIndex::of: variable out of range");
    ++o[static_cast<std::size_t>(v)];
  }
  return MultiIndex(std::move(o));
}

int MultiIndex::total() const { return std::accumulate(orders_.begin(), orders_.end(), 0); }

int MultiIndex::degree(int begin, int end) const {
  int d = 0;
  for (int v = begin; v < end; ++v) d += orders_[static_cast<std::size_t>(v)];
  return d;
}

MultiIndex MultiIndex::plus(int var, int count) const {
  MultiIndex r = *this;
  r.orders_[static_cast<std::size_t>(var)] += count;
  return r;
}

// ---------------------------------------------------------------------------
// JetSpace

struct JetSpace::EmbeddingCache {
  std::mutex mutex;
  std::map<std::pair<const JetSpace*, int>, std::vector<std::uint32_t>> maps;
};

std::shared_ptr<const JetSpace> JetSpace::get(int nx, int ny, JetOrder order) {
  if (nx < 0 || ny < 0 || nx + ny == 0 || nx + ny > kMaxVariables) {
    throw std::invalid_argument("JetSpace: unsupported variable count");
  }
  if (nx == 0) order.x = 0;
  if (ny == 0) order.y = 0;
  if (order.x < 0 || order.y < 0 || order.x > kMaxXOrder || order.y > kMaxYOrder) {
    throw std::invalid_argument("JetSpace: order exceeds supported bounds");
  }
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int, int>, std::shared_ptr<const JetSpace>> cache;
  const auto k = std::make_tuple(nx, ny, order.x, order.y);
  std::lock_guard lock(mutex);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  auto space = std::make_shared<const JetSpace>(nx, ny, order);
  cache.emplace(k, space);
  return space;
}

JetSpace::JetSpace(int nx, int ny, JetOrder order)
    : nx_(nx), ny_(ny), order_(order), cache_(std::make_shared<EmbeddingCache>()) {
  enumerate();
  build_products();
}

std::uint64_t JetSpace::key(const MultiIndex& e) const {
  std::uint64_t k = 0;
  for (int v = 0; v < e.size(); ++v) k |= static_cast<std::uint64_t>(e[v]) << (4 * v);
  return k;
}

void JetSpace::enumerate() {
  const int n = nvars();
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  // Depth-first over variables; the zero monomial comes first.
  std::function<void(int, int, int)> rec = [&](int v, int xdeg, int ydeg) {
    if (v == n) {
      monomials_.emplace_back(cur);
      return;
    }
    const bool is_x = v < nx_;
    const int room = is_x ? order_.x - xdeg : order_.y - ydeg;
    for (int e = 0; e <= room; ++e) {
      cur[static_cast<std::size_t>(v)] = e;
      rec(v + 1, is_x ? xdeg + e : xdeg, is_x ? ydeg : ydeg + e);
    }
    cur[static_cast<std::size_t>(v)] = 0;
  };
  rec(0, 0, 0);
  std::stable_sort(monomials_.begin(), monomials_.end(),
                   [](const MultiIndex& a, const MultiIndex& b) { return a.total() < b.total(); });
  lookup_.reserve(monomials_.size());
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    lookup_.emplace_back(key(monomials_[i]), static_cast<std::uint32_t>(i));
  }
  std::sort(lookup_.begin(), lookup_.end());
}

std::optional<std::size_t> JetSpace::find(const MultiIndex& e) const {
  if (e.size() != nvars()) return std::nullopt;
  if (e.degree(0, nx_) > order_.x || e.degree(nx_, nvars()) > order_.y) return std::nullopt;
  const auto k = key(e);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(k, std::uint32_t{0}));
  if (it == lookup_.end() || it->first != k) return std::nullopt;
  return it->second;
}

void JetSpace::build_products() {
  const int n = nvars();
  std::vector<int> lhs(static_cast<std::size_t>(n), 0);
  for (std::size_t out = 0; out < monomials_.size(); ++out) {
    const MultiIndex& e = monomials_[out];
    std::function<void(int, double)> rec = [&](int v, double w) {
      if (v == n) {
        std::vector<int> rhs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) rhs[static_cast<std::size_t>(i)] = e[i] - lhs[static_cast<std::size_t>(i)];
        const auto li = find(MultiIndex(lhs));
        const auto ri = find(MultiIndex(std::move(rhs)));
        terms_.push_back(Term{static_cast<std::uint32_t>(*li), static_cast<std::uint32_t>(*ri),
                              static_cast<std::uint32_t>(out), w});
        return;
      }
      for (int a = 0; a <= e[v]; ++a) {
        lhs[static_cast<std::size_t>(v)] = a;
        rec(v + 1, w * binomial(e[v], a));
      }
      lhs[static_cast<std::size_t>(v)] = 0;
    };
    rec(0, 1.0);
  }
}

const std::vector<std::uint32_t>& JetSpace::embedding(const JetSpace& smaller, int var) const {
  std::lock_guard lock(cache_->mutex);
  auto k = std::make_pair(&smaller, var);
  auto it = cache_->maps.find(k);
  if (it != cache_->maps.end()) return it->second;
  std::vector<std::uint32_t> map(smaller.size());
  for (std::size_t i = 0; i < smaller.size(); ++i) {
    const MultiIndex e = var < 0 ? smaller.monomial(i) : smaller.monomial(i).plus(var);
    const auto idx = find(e);
    if (!idx) throw std::logic_error("JetSpace::embedding: target space too small");
    map[i] = static_cast<std::uint32_t>(*idx);
  }
  return cache_->maps.emplace(k, std::move(map)).first->second;
}

// ---------------------------------------------------------------------------
// Jet

Jet::Jet(JetSpacePtr space, double value) : space_(std::move(space)), coeffs_(space_->size(), 0.0) {
  coeffs_[0] = value;
}

Jet Jet::variable(JetSpacePtr space, int var, double value) {
  if (var < 0 || var >= space->nvars()) throw std::out_of_range("Jet::variable: index out of range");
  Jet j(space, value);
  const JetOrder o = space->order();
  if ((space->is_x_variable(var) ? o.x : o.y) > 0) {
    j.coeffs_[*space->find(MultiIndex::of(space->nvars(), {var}))] = 1.0;
  }
  return j;
}

double Jet::partial(const MultiIndex& e) const {
  const auto idx = space_->find(e);
  if (!idx) throw std::out_of_range("Jet::partial: multi-index truncated away");
  return static_cast<double>(coeffs_[*idx]);
}

Jet Jet::derivative(int var) const {
  JetOrder o = space_->order();
  int& group = space_->is_x_variable(var) ? o.x : o.y;
  if (group == 0) throw std::logic_error("Jet::derivative: order exhausted for this variable");
  --group;
  auto target = JetSpace::get(space_->nx(), space_->ny(), o);
  const auto& map = space_->embedding(*target, var);
  Jet r(target, 0.0);
  for (std::size_t i = 0; i < map.size(); ++i) r.coeffs_[i] = coeffs_[map[i]];
  return r;
}

Jet Jet::truncated(JetOrder order) const {
  const JetOrder o = space_->order();
  order.x = std::min(order.x, o.x);
  order.y = std::min(order.y, o.y);
  if (order == o) return *this;
  auto target = JetSpace::get(space_->nx(), space_->ny(), order);
  const auto& map = space_->embedding(*target, -1);
  Jet r(target, 0.0);
  for (std::size_t i = 0; i < map.size(); ++i) r.coeffs_[i] = coeffs_[map[i]];
  return r;
}

namespace {

// Brings two jets of the same chart onto their common (smaller) truncation.
void coerce(Jet& a, Jet& b) {
  if (a.space_ptr() == b.space_ptr()) return;
  if (a.space().nx() != b.space().nx() || a.space().ny() != b.space().ny()) {
    throw std::invalid_argument("Jet: operands belong to different charts");
  }
  const JetOrder oa = a.space().order();
  const JetOrder ob = b.space().order();
  const JetOrder common{std::min(oa.x, ob.x), std::min(oa.y, ob.y)};
  a = a.truncated(common);
  b = b.truncated(common);
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  if (space_ == o.space_) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Jet b = o;
  coerce(*this, b);
  return *this += b;
}

Jet& Jet::operator-=(const Jet& o) {
  if (space_ == o.space_) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Jet b = o;
  coerce(*this, b);
  return *this -= b;
}

Jet& Jet::operator*=(const Jet& o) { return *this = multiply(*this, o); }
Jet& Jet::operator/=(const Jet& o) { return *this = multiply(*this, reciprocal(o)); }

Jet& Jet::operator+=(double c) {
  coeffs_[0] += c;
  return *this;
}
Jet& Jet::operator-=(double c) {
  coeffs_[0] -= c;
  return *this;
}
Jet& Jet::operator*=(double c) {
  for (JetReal& v : coeffs_) v *= c;
  return *this;
}
Jet& Jet::operator/=(double c) {
  if (std::abs(c) <= kSingularTolerance) throw DomainError("Jet: division by zero constant");
  for (JetReal& v : coeffs_) v /= c;
  return *this;
}

Jet multiply(const Jet& a0, const Jet& b0) {
  Jet a = a0;
  Jet b = b0;
  coerce(a, b);
  Jet r(a.space_, 0.0);
  const JetReal* pa = a.coeffs_.data();
  const JetReal* pb = b.coeffs_.data();
  JetReal* pr = r.coeffs_.data();
  for (const auto& t : a.space_->product_terms()) pr[t.out] += t.weight * pa[t.lhs] * pb[t.rhs];
  return r;
}

Jet compose(const Jet& u, std::span<const JetReal> derivatives) {
  const int K = std::min<int>(u.space().max_total_degree(), static_cast<int>(derivatives.size()) - 1);
  Jet delta = u;
  delta.coeffs_[0] = 0.0;
  JetReal factorial = 1.0;
  for (int k = 1; k <= K; ++k) factorial *= k;
  Jet r(u.space_, derivatives[static_cast<std::size_t>(K)] / factorial);
  for (int k = K - 1; k >= 0; --k) {
    factorial /= (k + 1);
    r = multiply(r, delta);
    r.coeffs_[0] += derivatives[static_cast<std::size_t>(k)] / factorial;
  }
  return r;
}

Jet operator-(const Jet& a) { return a * -1.0; }
Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(const Jet& a, const Jet& b) { return multiply(a, b); }
Jet operator/(const Jet& a, const Jet& b) { return multiply(a, reciprocal(b)); }
Jet operator+(Jet a, double c) { return a += c; }
Jet operator+(double c, Jet a) { return a += c; }
Jet operator-(Jet a, double c) { return a -= c; }
Jet operator-(double c, const Jet& a) { return (-a) + c; }
Jet operator*(Jet a, double c) { return a *= c; }
Jet operator*(double c, Jet a) { return a *= c; }
Jet operator/(Jet a, double c) { return a /= c; }
Jet operator/(double c, const Jet& a) { return reciprocal(a) * c; }

namespace {

std::vector<JetReal> power_derivatives(JetReal u0, JetReal p, int K) {
  std::vector<JetReal> d(static_cast<std::size_t>(K) + 1);
  JetReal falling = 1.0;
  for (int k = 0; k <= K; ++k) {
    d[static_cast<std::size_t>(k)] = falling * std::pow(u0, p - k);
    falling *= (p - k);
  }
  return d;
}

}  // namespace

Jet reciprocal(const Jet& u) {
  const JetReal u0 = u.value_ext();
  if (std::abs(u0) <= kSingularTolerance) throw DomainError("Jet: division by (near) zero");
  const int K = u.space().max_total_degree();
  std::vector<JetReal> d(static_cast<std::size_t>(K) + 1);
  JetReal v = 1.0 / u0;
  for (int k = 0; k <= K; ++k) {
    d[static_cast<std::size_t>(k)] = v;
    v *= -(k + 1) / u0;
  }
  return compose(u, d);
}

Jet square(const Jet& u) { return multiply(u, u); }

Jet sqrt(const Jet& u) {
  if (u.value_ext() <= kSingularTolerance) throw DomainError("Jet: sqrt of non-positive argument");
  return compose(u, power_derivatives(u.value_ext(), 0.5, u.space().max_total_degree()));
}

Jet pow(const Jet& u, double p) {
  const JetReal u0 = u.value_ext();
  const bool integer = std::floor(p) == p;
  if (integer && p >= 0 && p <= 32) {
    Jet result(u.space_ptr(), 1.0);
    Jet base = u;
    for (auto e = static_cast<unsigned>(p); e != 0; e >>= 1) {
      if (e & 1u) result = multiply(result, base);
      if (e > 1) base = multiply(base, base);
    }
    return result;
  }
  if (integer) {
    if (std::abs(u0) <= kSingularTolerance) throw DomainError("Jet: negative power of (near) zero");
  } else if (u0 <= kSingularTolerance) {
    throw DomainError("Jet: fractional power of non-positive argument");
  }
  return compose(u, power_derivatives(u0, p, u.space().max_total_degree()));
}

Jet exp(const Jet& u) {
  const int K = u.space().max_total_degree();
  return compose(u, std::vector<JetReal>(static_cast<std::size_t>(K) + 1, std::exp(u.value_ext())));
}

Jet log(const Jet& u) {
  const JetReal u0 = u.value_ext();
  if (u0 <= kSingularTolerance) throw DomainError("Jet: log of non-positive argument");
  const int K = u.space().max_total_degree();
  std::vector<JetReal> d(static_cast<std::size_t>(K) + 1);
  d[0] = std::log(u0);
  JetReal v = 1.0 / u0;
  for (int k = 1; k <= K; ++k) {
    d[static_cast<std::size_t>(k)] = v;
    v *= -k / u0;
  }
  return compose(u, d);
}

namespace {

Jet cyclic(const Jet& u, JetReal f0, JetReal f1, JetReal sign) {
  // f'' = sign * f
  const int K = u.space().max_total_degree();
  std::vector<JetReal> d(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    const JetReal base = (k % 2 == 0) ? f0 : f1;
    d[static_cast<std::size_t>(k)] = base * std::pow(sign, k / 2);
  }
  return compose(u, d);
}

}  // namespace

Jet sin(const Jet& u) { return cyclic(u, std::sin(u.value_ext()), std::cos(u.value_ext()), -1.0); }
Jet cos(const Jet& u) { return cyclic(u, std::cos(u.value_ext()), -std::sin(u.value_ext()), -1.0); }
Jet sinh(const Jet& u) { return cyclic(u, std::sinh(u.value_ext()), std::cosh(u.value_ext()), 1.0); }
Jet cosh(const Jet& u) { return cyclic(u, std::cosh(u.value_ext()), std::sinh(u.value_ext()), 1.0); }

std::vector<Jet> seed_variables(const JetSpacePtr& space, int first, std::span<const double> values) {
  std::vector<Jet> v;
  v.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    v.push_back(Jet::variable(space, first + static_cast<int>(i), values[i]));
  }
  return v;
}

Jet jet_eval(const ScalarField& f, std::span<const double> x, std::span<const double> y, JetOrder order) {
  if (x.size() != y.size()) throw std::invalid_argument("jet_eval: x and y dimensions differ");
  const int n = static_cast<int>(x.size());
  auto space = JetSpace::get(n, n, order);
  const auto xs = seed_variables(space, 0, x);
  const auto ys = seed_variables(space, n, y);
  return f(xs, ys);
}

}  // namespace finsler
