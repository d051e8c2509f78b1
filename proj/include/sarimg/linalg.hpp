#pragma once

#include "sarimg/types.hpp"

namespace sarimg::linalg {

/// Cholesky factorization A = U^H U of a Hermitian positive definite matrix.
/// Only the upper triangle of the input is read; the factor is computed in
/// place through the active kernel backend.
class HermitianFactor {
 public:
  HermitianFactor() = default;

  /// Throws NumericalError when a pivot is not strictly positive.
  static HermitianFactor compute(CMatrix a);

  std::size_t size() const { return u_.rows(); }

  /// Solves A x = b via the two triangular solves.
  CVec solve(const CVec& b) const;
  void solve_in_place(CVec& x) const;

 private:
  CMatrix u_;
};

CVec matvec(const CMatrix& a, const CVec& x);
CVec matvec_adjoint(const CMatrix& a, const CVec& y);

double norm2(const CVec& v);
double norm2_diff(const CVec& a, const CVec& b);

}  // namespace sarimg::linalg
