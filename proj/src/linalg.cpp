#include "sarimg/linalg.hpp"

#include <cmath>
#include <string>

#include "sarimg/kernels.hpp"

namespace sarimg::linalg {

HermitianFactor HermitianFactor::compute(CMatrix a) {
  const auto& k = kernels::active();
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("HermitianFactor: matrix not square");

  for (std::size_t p = 0; p < n; ++p) {
    const double pivot = a(p, p).real();
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw NumericalError("HermitianFactor: pivot " + std::to_string(p) +
                           " is not positive (" + std::to_string(pivot) +
                           "); input not positive definite");
    }
    const double d = std::sqrt(pivot);
    a(p, p) = d;
    if (p + 1 < n) {
      k.scal(cplx{1.0 / d, 0.0}, a.row(p) + p + 1, n - p - 1);
      for (std::size_t i = p + 1; i < n; ++i) {
        const cplx alpha = -std::conj(a(p, i));
        k.axpy(alpha, a.row(p) + i, a.row(i) + i, n - i);
      }
    }
  }
  HermitianFactor f;
  f.u_ = std::move(a);
  return f;
}

void HermitianFactor::solve_in_place(CVec& x) const {
  const auto& k = kernels::active();
  const std::size_t n = u_.rows();
  if (x.size() != n) throw std::invalid_argument("HermitianFactor::solve: size mismatch");

  // U^H w = b (forward, column updates stay row-contiguous)
  for (std::size_t p = 0; p < n; ++p) {
    x[p] /= u_(p, p).real();
    if (p + 1 < n) k.axpy_conj(-x[p], u_.row(p) + p + 1, x.data() + p + 1, n - p - 1);
  }
  // U x = w (backward)
  for (std::size_t p = n; p-- > 0;) {
    cplx s = x[p];
    if (p + 1 < n) s -= k.dotu(u_.row(p) + p + 1, x.data() + p + 1, n - p - 1);
    x[p] = s / u_(p, p).real();
  }
}

CVec HermitianFactor::solve(const CVec& b) const {
  CVec x = b;
  solve_in_place(x);
  return x;
}

CVec matvec(const CMatrix& a, const CVec& x) {
  if (x.size() != a.cols()) throw std::invalid_argument("matvec: size mismatch");
  CVec y(a.rows());
  kernels::active().matvec(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

CVec matvec_adjoint(const CMatrix& a, const CVec& y) {
  if (y.size() != a.rows()) throw std::invalid_argument("matvec_adjoint: size mismatch");
  CVec x(a.cols());
  kernels::active().matvec_adjoint(a.data(), a.rows(), a.cols(), y.data(), x.data());
  return x;
}

double norm2(const CVec& v) {
  return std::sqrt(kernels::active().sum_sq(v.data(), v.size()));
}

double norm2_diff(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("norm2_diff: size mismatch");
  return std::sqrt(kernels::active().sum_sq_diff(a.data(), b.data(), a.size()));
}

}  // namespace sarimg::linalg
