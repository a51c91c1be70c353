#pragma once

// Truncated multivariate Taylor arithmetic ("jets") in the 2n chart variables
// (x^1..x^n, y^1..y^n).
//
// Convention: a Jet stores RAW partial derivatives, i.e. the coefficient of
// the multi-index e is  d^{|e|} f / (dz_1^{e_1} ... dz_m^{e_m})  evaluated at
// the base point.  It is NOT divided by e!.  Products therefore carry Leibniz
// binomial weights; these are precomputed per JetSpace.
//
// Truncation is by separate x-degree and y-degree bounds.  The discarded
// monomials form an ideal, so every propagated coefficient is exact (up to
// rounding), not an approximation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace finsler {

inline constexpr int kMaxXOrder = 3;
inline constexpr int kMaxYOrder = 6;
inline constexpr int kMaxVariables = 16;

/// Coefficient type.  Extended precision keeps fourth-order y-derivatives of
/// nearly null Randers directions within the curvature tolerance.
using JetReal = long double;

/// Maximum x-degree and y-degree retained by a jet.
struct JetOrder {
  int x = 0;
  int y = 0;

  friend bool operator==(const JetOrder&, const JetOrder&) = default;
};

/// Derivative orders per variable, variables ordered (x^1..x^nx, y^1..y^ny).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> orders);

  static MultiIndex zero(int nvars);
  /// Builds the multi-index of d/dz_{v1} d/dz_{v2} ... from a list of
  /// variable indices (repetition allowed).
  static MultiIndex of(int nvars, std::initializer_list<int> vars);

  int size() const { return static_cast<int>(orders_.size()); }
  int operator[](int v) const { return orders_[static_cast<std::size_t>(v)]; }
  int total() const;
  /// Sum of orders over variables [begin, end).
  int degree(int begin, int end) const;
  MultiIndex plus(int var, int count = 1) const;
  const std::vector<int>& orders() const { return orders_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> orders_;
};

/// The monomial basis of one truncation (nx, ny, order) together with the
/// Leibniz product table.  Instances are immutable, cached, and shared.
class JetSpace {
 public:
  struct Term {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
    JetReal weight;
  };

  static std::shared_ptr<const JetSpace> get(int nx, int ny, JetOrder order);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nvars() const { return nx_ + ny_; }
  JetOrder order() const { return order_; }
  int max_total_degree() const { return order_.x + order_.y; }
  std::size_t size() const { return monomials_.size(); }

  const MultiIndex& monomial(std::size_t k) const { return monomials_[k]; }
  std::optional<std::size_t> find(const MultiIndex& e) const;
  bool is_x_variable(int v) const { return v < nx_; }

  std::span<const Term> product_terms() const { return terms_; }

  /// For every monomial e of `smaller`, the index in this space of e + 1_var
  /// (var < 0: of e itself).  Cached.
  const std::vector<std::uint32_t>& embedding(const JetSpace& smaller, int var) const;

  JetSpace(int nx, int ny, JetOrder order);

 private:
  std::uint64_t key(const MultiIndex& e) const;
  void enumerate();
  void build_products();

  int nx_;
  int ny_;
  JetOrder order_;
  std::vector<MultiIndex> monomials_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> lookup_;  // sorted by key
  std::vector<Term> terms_;

  struct EmbeddingCache;
  std::shared_ptr<EmbeddingCache> cache_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

/// A truncated jet of a scalar field.  Value semantics.
class Jet {
 public:
  Jet() = default;
  /// Constant jet.
  Jet(JetSpacePtr space, double value);

  /// The coordinate function z_var, evaluated at `value`.
  static Jet variable(JetSpacePtr space, int var, double value);

  bool valid() const { return space_ != nullptr; }
  const JetSpace& space() const { return *space_; }
  const JetSpacePtr& space_ptr() const { return space_; }

  double value() const { return static_cast<double>(coeffs_[0]); }
  JetReal value_ext() const { return coeffs_[0]; }
  /// Raw partial derivative; throws std::out_of_range if truncated away.
  double partial(const MultiIndex& e) const;
  std::span<const JetReal> coefficients() const { return coeffs_; }
  std::span<JetReal> coefficients() { return coeffs_; }

  /// d/dz_var.  The result lives in the space with that group's order reduced
  /// by one.
  Jet derivative(int var) const;
  /// Drops monomials beyond `order`.
  Jet truncated(JetOrder order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double c);
  Jet& operator-=(double c);
  Jet& operator*=(double c);
  Jet& operator/=(double c);

 private:
  friend Jet compose(const Jet& u, std::span<const JetReal> derivatives);
  friend Jet multiply(const Jet& a, const Jet& b);

  JetSpacePtr space_;
  std::vector<JetReal> coeffs_;
};

Jet operator-(const Jet& a);
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double c);
Jet operator+(double c, Jet a);
Jet operator-(Jet a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(Jet a, double c);
Jet operator*(double c, Jet a);
Jet operator/(Jet a, double c);
Jet operator/(double c, const Jet& a);

Jet multiply(const Jet& a, const Jet& b);
/// f(u) given f^{(k)}(u0) for k = 0..K; missing higher derivatives are
/// treated as zero.
Jet compose(const Jet& u, std::span<const JetReal> derivatives);

Jet reciprocal(const Jet& u);
Jet square(const Jet& u);
Jet sqrt(const Jet& u);
Jet pow(const Jet& u, double p);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sinh(const Jet& u);
Jet cosh(const Jet& u);

/// A scalar field on the chart, written once against jets.  The spans hold the
/// seeded coordinate jets x^i and y^i; fields that do not depend on y may
/// ignore the second span.
using ScalarField = std::function<Jet(std::span<const Jet> x, std::span<const Jet> y)>;

/// Seeds coordinate jets at (x, y) in the space (n, n, order) and evaluates f.
Jet jet_eval(const ScalarField& f, std::span<const double> x, std::span<const double> y,
             JetOrder order);

/// Coordinate jets for variables [first, first + values.size()) of `space`.
std::vector<Jet> seed_variables(const JetSpacePtr& space, int first, std::span<const double> values);

}  // namespace finsler
