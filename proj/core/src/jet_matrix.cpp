#include "finsler/jet_matrix.hpp"

#include <cmath>
#include <utility>

#include "finsler/errors.hpp"

namespace finsler {

Eigen::MatrixXd JetMatrix::values() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).value();
  return m;
}

Eigen::VectorXd values(const JetVector& v) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i].value();
  return r;
}

JetMatrix inverse(const JetMatrix& m, double pivot_tolerance) {
  const int n = m.dim();
  JetMatrix a = m;
  const Jet zero(m(0, 0).space_ptr(), 0.0);
  JetMatrix inv(n, zero);
  for (int i = 0; i < n; ++i) inv(i, i) = Jet(m(0, 0).space_ptr(), 1.0);

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col).value()) > std::abs(a(pivot, col).value())) pivot = r;
    }
    if (std::abs(a(pivot, col).value()) <= pivot_tolerance) {
      throw SingularMetric("inverse: matrix is singular at the base point");
    }
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Jet rp = reciprocal(a(col, col));
    for (int j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * rp;
      inv(col, j) = inv(col, j) * rp;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a(r, col);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Jet determinant(const JetMatrix& m) {
  const int n = m.dim();
  JetMatrix a = m;
  Jet det(m(0, 0).space_ptr(), 1.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col).value()) > std::abs(a(pivot, col).value())) pivot = r;
    }
    if (a(pivot, col).value() == 0.0) return Jet(m(0, 0).space_ptr(), 0.0);
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det = det * a(col, col);
    const Jet rp = reciprocal(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const Jet f = a(r, col) * rp;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

JetVector apply(const JetMatrix& m, const JetVector& v) {
  const int n = m.dim();
  JetVector r;
  r.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Jet s = m(i, 0) * v[0];
    for (int j = 1; j < n; ++j) s += m(i, j) * v[static_cast<std::size_t>(j)];
    r.push_back(std::move(s));
  }
  return r;
}

Jet quadratic(const JetMatrix& m, const JetVector& v, const JetVector& w) {
  const auto mw = apply(m, w);
  Jet s = v[0] * mw[0];
  for (std::size_t i = 1; i < v.size(); ++i) s += v[i] * mw[i];
  return s;
}

}  // namespace finsler
