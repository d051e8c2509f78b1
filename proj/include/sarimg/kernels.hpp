#pragma once

#include <cstddef>
#include <string_view>

#include "sarimg/types.hpp"

namespace sarimg::kernels {

// Dense complex building blocks for the imaging and solver hot loops. All
// matrices are row-major with contiguous rows. Each operation exists as a
// scalar reference implementation and, on x86-64 CPUs with AVX2+FMA, as a
// vectorized variant; the backend is picked once at startup. The variants are
// equivalence-tested against each other, but accumulation order differs, so
// agreement is to rounding, not bit-exact.
struct Backend {
  const char* name;

  // y = A x                 (A: rows x cols)
  void (*matvec)(const cplx* a, std::size_t rows, std::size_t cols,
                 const cplx* x, cplx* y);
  // x = A^H y
  void (*matvec_adjoint)(const cplx* a, std::size_t rows, std::size_t cols,
                         const cplx* y, cplx* x);
  // G += A^H A, upper triangle only (G: cols x cols, row-major)
  void (*herk_upper)(const cplx* a, std::size_t rows, std::size_t cols,
                     cplx* g);
  // y += alpha x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // y += alpha conj(x)
  void (*axpy_conj)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // x *= alpha
  void (*scal)(cplx alpha, cplx* x, std::size_t n);
  // sum x_i y_i
  cplx (*dotu)(const cplx* x, const cplx* y, std::size_t n);
  // sum conj(x_i) y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // out_i = (x_i / |x_i|) max(|x_i| - tau, 0), with 0 -> 0
  void (*soft_threshold)(const cplx* x, double tau, cplx* out, std::size_t n);
  // sum |x_i|^2
  double (*sum_sq)(const cplx* x, std::size_t n);
  // sum |x_i|
  double (*sum_abs)(const cplx* x, std::size_t n);
  // sum |a_i - b_i|^2
  double (*sum_sq_diff)(const cplx* a, const cplx* b, std::size_t n);
  // acc_i = max(acc_i, |x_i|^2)
  void (*max_abs2_accum)(const cplx* x, double* acc, std::size_t n);
};

const Backend& scalar_backend();

/// AVX2 backend, or nullptr when the build or the CPU lacks support.
const Backend* avx2_backend();

/// Backend in use. Defaults to the best supported variant; the SARIMG_KERNELS
/// environment variable ("scalar" or "avx2") overrides the choice.
const Backend& active();

/// Force a backend by name; throws std::invalid_argument if unavailable.
void force_backend(std::string_view name);

}  // namespace sarimg::kernels
