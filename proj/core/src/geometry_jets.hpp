#pragma once

// Internal: Levi-Civita calculus on x-only jets.  Every covariant derivative
// lowers the jet x-order by one.

#include <span>
#include <vector>

#include "finsler/fields.hpp"
#include "finsler/jet_matrix.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

struct LocalGeometry {
  LocalGeometry(const PseudoRiemannMetric& metric, std::span<const double> x, int order);

  int n;
  std::vector<Jet> coords;
  JetMatrix a, a_inv;
  std::vector<Jet> gamma;  // Gamma^i_jk at (i, j, k)

  Jet& G(int i, int j, int k) { return gamma[static_cast<std::size_t>((i * n + j) * n + k)]; }
  const Jet& G(int i, int j, int k) const { return gamma[static_cast<std::size_t>((i * n + j) * n + k)]; }

  /// t_{i|j}
  JetMatrix covariant(const JetVector& t) const;
  /// t_{ij|k}, flat (i, j, k)
  std::vector<Jet> covariant(const JetMatrix& t) const;
  JetVector gradient(const Jet& f) const;
  JetVector raise(const JetVector& v) const;
};

/// u_i v^i
Jet contract(const JetVector& u, const JetVector& v);
/// v^k m_ki
JetVector contract_first(const JetVector& v, const JetMatrix& m);
Tensor3 to_tensor(const std::vector<Jet>& t, int n);

}  // namespace finsler
