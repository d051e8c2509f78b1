// AVX2+FMA backend. Complex doubles are processed two at a time as
// [re0 im0 re1 im1] vectors; the caller (dispatch.cpp) guarantees the CPU
// supports AVX2 and FMA before this table is ever used.

#include "sarimg/kernels.hpp"

#if defined(SARIMG_HAVE_AVX2_BUILD)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace sarimg::kernels {
namespace {

inline const double* re_im(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* re_im(cplx* p) { return reinterpret_cast<double*>(p); }

// [ar*br - ai*bi, ar*bi + ai*br] for two complex pairs at once
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

// conj(a) * b
inline __m256d cmul_conj(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmsubadd_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

inline cplx reduce_c(__m256d acc) {
  alignas(32) double t[4];
  _mm256_store_pd(t, acc);
  return {t[0] + t[2], t[1] + t[3]};
}

inline double reduce_d(__m256d acc) {
  alignas(32) double t[4];
  _mm256_store_pd(t, acc);
  return (t[0] + t[2]) + (t[1] + t[3]);
}

// y[0..n) += alpha * x[0..n), raw complex pointers
inline void axpy_range(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d p = _mm256_set1_pd(alpha.real());
  const __m256d q = _mm256_set1_pd(alpha.imag());
  const double* xd = re_im(x);
  double* yd = re_im(y);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    const __m256d prod = _mm256_fmaddsub_pd(p, xv, _mm256_mul_pd(q, xs));
    _mm256_storeu_pd(yd + 2 * k, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * k), prod));
  }
  for (; k < n; ++k) {
    const double br = xd[2 * k], bi = xd[2 * k + 1];
    yd[2 * k] += alpha.real() * br - alpha.imag() * bi;
    yd[2 * k + 1] += alpha.real() * bi + alpha.imag() * br;
  }
}

void matvec_avx2(const cplx* a, std::size_t rows, std::size_t cols,
                 const cplx* x, cplx* y) {
  const double* xd = re_im(x);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ad = re_im(a + r * cols);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= cols; k += 4) {
      acc0 = _mm256_add_pd(acc0, cmul(_mm256_loadu_pd(ad + 2 * k),
                                      _mm256_loadu_pd(xd + 2 * k)));
      acc1 = _mm256_add_pd(acc1, cmul(_mm256_loadu_pd(ad + 2 * k + 4),
                                      _mm256_loadu_pd(xd + 2 * k + 4)));
    }
    for (; k + 2 <= cols; k += 2) {
      acc0 = _mm256_add_pd(acc0, cmul(_mm256_loadu_pd(ad + 2 * k),
                                      _mm256_loadu_pd(xd + 2 * k)));
    }
    cplx s = reduce_c(_mm256_add_pd(acc0, acc1));
    for (; k < cols; ++k) {
      const double ar = ad[2 * k], ai = ad[2 * k + 1];
      const double br = xd[2 * k], bi = xd[2 * k + 1];
      s += cplx{ar * br - ai * bi, ar * bi + ai * br};
    }
    y[r] = s;
  }
}

void matvec_adjoint_avx2(const cplx* a, std::size_t rows, std::size_t cols,
                         const cplx* y, cplx* x) {
  double* xd = re_im(x);
  for (std::size_t k = 0; k < 2 * cols; ++k) xd[k] = 0.0;
  const __m256d neg_odd = _mm256_castsi256_pd(_mm256_set_epi64x(
      0x8000000000000000LL, 0, 0x8000000000000000LL, 0));
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ad = re_im(a + r * cols);
    // x += y[r] * conj(a_row)
    const __m256d p = _mm256_set1_pd(y[r].real());
    const __m256d q = _mm256_set1_pd(y[r].imag());
    std::size_t k = 0;
    for (; k + 2 <= cols; k += 2) {
      const __m256d av = _mm256_loadu_pd(ad + 2 * k);
      const __m256d as = _mm256_permute_pd(av, 0x5);
      // alpha * conj(a): even p*ar + q*ai, odd q*ar - p*ai
      __m256d prod = _mm256_fmsubadd_pd(p, av, _mm256_mul_pd(q, as));
      prod = _mm256_xor_pd(prod, neg_odd);
      _mm256_storeu_pd(xd + 2 * k,
                       _mm256_add_pd(_mm256_loadu_pd(xd + 2 * k), prod));
    }
    for (; k < cols; ++k) {
      const double ar = ad[2 * k], ai = -ad[2 * k + 1];
      xd[2 * k] += ar * y[r].real() - ai * y[r].imag();
      xd[2 * k + 1] += ar * y[r].imag() + ai * y[r].real();
    }
  }
}

void herk_upper_avx2(const cplx* a, std::size_t rows, std::size_t cols,
                     cplx* g) {
  for (std::size_t r = 0; r < rows; ++r) {
    const cplx* row = a + r * cols;
    for (std::size_t i = 0; i < cols; ++i) {
      const cplx alpha = std::conj(row[i]);
      axpy_range(alpha, row + i, g + i * cols + i, cols - i);
    }
  }
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  axpy_range(alpha, x, y, n);
}

void axpy_conj_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d p = _mm256_set1_pd(alpha.real());
  const __m256d q = _mm256_set1_pd(alpha.imag());
  const __m256d neg_odd = _mm256_castsi256_pd(_mm256_set_epi64x(
      0x8000000000000000LL, 0, 0x8000000000000000LL, 0));
  const double* xd = re_im(x);
  double* yd = re_im(y);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d prod = _mm256_fmsubadd_pd(p, xv, _mm256_mul_pd(q, xs));
    prod = _mm256_xor_pd(prod, neg_odd);
    _mm256_storeu_pd(yd + 2 * k, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * k), prod));
  }
  for (; k < n; ++k) {
    const double br = xd[2 * k], bi = -xd[2 * k + 1];
    yd[2 * k] += alpha.real() * br - alpha.imag() * bi;
    yd[2 * k + 1] += alpha.real() * bi + alpha.imag() * br;
  }
}

void scal_avx2(cplx alpha, cplx* x, std::size_t n) {
  const __m256d p = _mm256_set1_pd(alpha.real());
  const __m256d q = _mm256_set1_pd(alpha.imag());
  double* xd = re_im(x);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    _mm256_storeu_pd(xd + 2 * k,
                     _mm256_fmaddsub_pd(p, xv, _mm256_mul_pd(q, xs)));
  }
  for (; k < n; ++k) {
    const double br = xd[2 * k], bi = xd[2 * k + 1];
    xd[2 * k] = alpha.real() * br - alpha.imag() * bi;
    xd[2 * k + 1] = alpha.real() * bi + alpha.imag() * br;
  }
}

cplx dotu_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = re_im(x);
  const double* yd = re_im(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    acc = _mm256_add_pd(acc, cmul(_mm256_loadu_pd(xd + 2 * k),
                                  _mm256_loadu_pd(yd + 2 * k)));
  }
  cplx s = reduce_c(acc);
  for (; k < n; ++k) {
    const double ar = xd[2 * k], ai = xd[2 * k + 1];
    const double br = yd[2 * k], bi = yd[2 * k + 1];
    s += cplx{ar * br - ai * bi, ar * bi + ai * br};
  }
  return s;
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = re_im(x);
  const double* yd = re_im(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    acc = _mm256_add_pd(acc, cmul_conj(_mm256_loadu_pd(xd + 2 * k),
                                       _mm256_loadu_pd(yd + 2 * k)));
  }
  cplx s = reduce_c(acc);
  for (; k < n; ++k) {
    const double ar = xd[2 * k], ai = -xd[2 * k + 1];
    const double br = yd[2 * k], bi = yd[2 * k + 1];
    s += cplx{ar * br - ai * bi, ar * bi + ai * br};
  }
  return s;
}

void soft_threshold_avx2(const cplx* x, double tau, cplx* out, std::size_t n) {
  const double* xd = re_im(x);
  double* od = re_im(out);
  const __m256d tau_v = _mm256_set1_pd(tau);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
    const __m256d sq = _mm256_mul_pd(xv, xv);
    const __m256d mag2 = _mm256_hadd_pd(sq, sq);  // |v|^2 duplicated per pair
    const __m256d mag = _mm256_sqrt_pd(mag2);
    const __m256d keep = _mm256_cmp_pd(mag, tau_v, _CMP_GT_OQ);
    __m256d scale = _mm256_div_pd(_mm256_sub_pd(mag, tau_v), mag);
    scale = _mm256_and_pd(scale, keep);
    _mm256_storeu_pd(od + 2 * k, _mm256_mul_pd(xv, scale));
  }
  for (; k < n; ++k) {
    const double re = xd[2 * k], im = xd[2 * k + 1];
    const double mag = std::sqrt(re * re + im * im);
    if (mag > tau) {
      const double scale = (mag - tau) / mag;
      od[2 * k] = re * scale;
      od[2 * k + 1] = im * scale;
    } else {
      od[2 * k] = 0.0;
      od[2 * k + 1] = 0.0;
    }
  }
}

double sum_sq_avx2(const cplx* x, std::size_t n) {
  const double* xd = re_im(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= 2 * n; k += 4) {
    const __m256d v = _mm256_loadu_pd(xd + k);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = reduce_d(acc);
  for (; k < 2 * n; ++k) s += xd[k] * xd[k];
  return s;
}

double sum_abs_avx2(const cplx* x, std::size_t n) {
  const double* xd = re_im(x);
  const __m256d even_mask = _mm256_castsi256_pd(
      _mm256_set_epi64x(0, -1, 0, -1));
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_loadu_pd(xd + 2 * k);
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d mag = _mm256_sqrt_pd(_mm256_hadd_pd(sq, sq));
    acc = _mm256_add_pd(acc, _mm256_and_pd(mag, even_mask));
  }
  double s = reduce_d(acc);
  for (; k < n; ++k) {
    const double re = xd[2 * k], im = xd[2 * k + 1];
    s += std::sqrt(re * re + im * im);
  }
  return s;
}

double sum_sq_diff_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = re_im(a);
  const double* bd = re_im(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= 2 * n; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(ad + k),
                                    _mm256_loadu_pd(bd + k));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = reduce_d(acc);
  for (; k < 2 * n; ++k) {
    const double d = ad[k] - bd[k];
    s += d * d;
  }
  return s;
}

void max_abs2_accum_avx2(const cplx* x, double* acc, std::size_t n) {
  const double* xd = re_im(x);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_loadu_pd(xd + 2 * k);
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d mag2 = _mm256_hadd_pd(sq, sq);  // [m0 m0 m1 m1]
    const __m128d lo = _mm256_castpd256_pd128(mag2);
    const __m128d hi = _mm256_extractf128_pd(mag2, 1);
    const __m128d m = _mm_shuffle_pd(lo, hi, 0);  // [m0 m1]
    _mm_storeu_pd(acc + k, _mm_max_pd(_mm_loadu_pd(acc + k), m));
  }
  for (; k < n; ++k) {
    const double re = xd[2 * k], im = xd[2 * k + 1];
    const double m2 = re * re + im * im;
    if (m2 > acc[k]) acc[k] = m2;
  }
}

constexpr Backend kAvx2 = {
    "avx2",
    matvec_avx2,
    matvec_adjoint_avx2,
    herk_upper_avx2,
    axpy_avx2,
    axpy_conj_avx2,
    scal_avx2,
    dotu_avx2,
    dotc_avx2,
    soft_threshold_avx2,
    sum_sq_avx2,
    sum_abs_avx2,
    sum_sq_diff_avx2,
    max_abs2_accum_avx2,
};

}  // namespace

namespace detail {
const Backend& avx2_backend_table() { return kAvx2; }
}  // namespace detail

}  // namespace sarimg::kernels

#endif  // SARIMG_HAVE_AVX2_BUILD
