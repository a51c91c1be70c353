#pragma once

#include <Eigen/Dense>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

/// Dense square matrix of jets, row-major.
class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(int n, const Jet& fill) : n_(n), data_(static_cast<std::size_t>(n * n), fill) {}

  int dim() const { return n_; }
  Jet& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const Jet& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * n_ + j)]; }

  Eigen::MatrixXd values() const;

 private:
  int n_ = 0;
  std::vector<Jet> data_;
};

using JetVector = std::vector<Jet>;

Eigen::VectorXd values(const JetVector& v);

/// Gauss-Jordan elimination with partial pivoting on the base-point values.
/// Throws SingularMetric when a pivot falls below `pivot_tolerance`.
JetMatrix inverse(const JetMatrix& m, double pivot_tolerance = 1e-300);

Jet determinant(const JetMatrix& m);

/// m * v
JetVector apply(const JetMatrix& m, const JetVector& v);
/// v^T m w
Jet quadratic(const JetMatrix& m, const JetVector& v, const JetVector& w);

}  // namespace finsler
