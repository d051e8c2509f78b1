#include <cmath>
#include <cstddef>

#include "sarimg/kernels.hpp"

// Reference backend. Complex arithmetic is spelled out on real/imag parts so
// the compiler emits plain FMAs instead of __muldc3 calls.

namespace sarimg::kernels {
namespace {

inline const double* re_im(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* re_im(cplx* p) { return reinterpret_cast<double*>(p); }

void matvec_scalar(const cplx* a, std::size_t rows, std::size_t cols,
                   const cplx* x, cplx* y) {
  const double* xd = re_im(x);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ad = re_im(a + r * cols);
    double sr = 0.0, si = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      const double ar = ad[2 * k], ai = ad[2 * k + 1];
      const double br = xd[2 * k], bi = xd[2 * k + 1];
      sr += ar * br - ai * bi;
      si += ar * bi + ai * br;
    }
    y[r] = {sr, si};
  }
}

void matvec_adjoint_scalar(const cplx* a, std::size_t rows, std::size_t cols,
                           const cplx* y, cplx* x) {
  double* xd = re_im(x);
  for (std::size_t k = 0; k < 2 * cols; ++k) xd[k] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ad = re_im(a + r * cols);
    const double yr = y[r].real(), yi = y[r].imag();
    for (std::size_t k = 0; k < cols; ++k) {
      // conj(a) * y
      const double ar = ad[2 * k], ai = -ad[2 * k + 1];
      xd[2 * k] += ar * yr - ai * yi;
      xd[2 * k + 1] += ar * yi + ai * yr;
    }
  }
}

void herk_upper_scalar(const cplx* a, std::size_t rows, std::size_t cols,
                       cplx* g) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ad = re_im(a + r * cols);
    for (std::size_t i = 0; i < cols; ++i) {
      // alpha = conj(a[r][i]); g[i][j] += alpha * a[r][j] for j >= i
      const double alr = ad[2 * i], ali = -ad[2 * i + 1];
      double* gd = re_im(g + i * cols);
      for (std::size_t j = i; j < cols; ++j) {
        const double br = ad[2 * j], bi = ad[2 * j + 1];
        gd[2 * j] += alr * br - ali * bi;
        gd[2 * j + 1] += alr * bi + ali * br;
      }
    }
  }
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double alr = alpha.real(), ali = alpha.imag();
  const double* xd = re_im(x);
  double* yd = re_im(y);
  for (std::size_t k = 0; k < n; ++k) {
    const double br = xd[2 * k], bi = xd[2 * k + 1];
    yd[2 * k] += alr * br - ali * bi;
    yd[2 * k + 1] += alr * bi + ali * br;
  }
}

void axpy_conj_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double alr = alpha.real(), ali = alpha.imag();
  const double* xd = re_im(x);
  double* yd = re_im(y);
  for (std::size_t k = 0; k < n; ++k) {
    const double br = xd[2 * k], bi = -xd[2 * k + 1];
    yd[2 * k] += alr * br - ali * bi;
    yd[2 * k + 1] += alr * bi + ali * br;
  }
}

void scal_scalar(cplx alpha, cplx* x, std::size_t n) {
  const double alr = alpha.real(), ali = alpha.imag();
  double* xd = re_im(x);
  for (std::size_t k = 0; k < n; ++k) {
    const double br = xd[2 * k], bi = xd[2 * k + 1];
    xd[2 * k] = alr * br - ali * bi;
    xd[2 * k + 1] = alr * bi + ali * br;
  }
}

cplx dotu_scalar(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = re_im(x);
  const double* yd = re_im(y);
  double sr = 0.0, si = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = xd[2 * k], ai = xd[2 * k + 1];
    const double br = yd[2 * k], bi = yd[2 * k + 1];
    sr += ar * br - ai * bi;
    si += ar * bi + ai * br;
  }
  return {sr, si};
}

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = re_im(x);
  const double* yd = re_im(y);
  double sr = 0.0, si = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = xd[2 * k], ai = -xd[2 * k + 1];
    const double br = yd[2 * k], bi = yd[2 * k + 1];
    sr += ar * br - ai * bi;
    si += ar * bi + ai * br;
  }
  return {sr, si};
}

void soft_threshold_scalar(const cplx* x, double tau, cplx* out,
                           std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = x[k].real(), im = x[k].imag();
    const double mag = std::sqrt(re * re + im * im);
    if (mag > tau) {
      const double scale = (mag - tau) / mag;
      out[k] = {re * scale, im * scale};
    } else {
      out[k] = {0.0, 0.0};
    }
  }
}

double sum_sq_scalar(const cplx* x, std::size_t n) {
  const double* xd = re_im(x);
  double s = 0.0;
  for (std::size_t k = 0; k < 2 * n; ++k) s += xd[k] * xd[k];
  return s;
}

double sum_abs_scalar(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double re = x[k].real(), im = x[k].imag();
    s += std::sqrt(re * re + im * im);
  }
  return s;
}

double sum_sq_diff_scalar(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = re_im(a);
  const double* bd = re_im(b);
  double s = 0.0;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const double d = ad[k] - bd[k];
    s += d * d;
  }
  return s;
}

void max_abs2_accum_scalar(const cplx* x, double* acc, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = x[k].real(), im = x[k].imag();
    const double m2 = re * re + im * im;
    if (m2 > acc[k]) acc[k] = m2;
  }
}

constexpr Backend kScalar = {
    "scalar",
    matvec_scalar,
    matvec_adjoint_scalar,
    herk_upper_scalar,
    axpy_scalar,
    axpy_conj_scalar,
    scal_scalar,
    dotu_scalar,
    dotc_scalar,
    soft_threshold_scalar,
    sum_sq_scalar,
    sum_abs_scalar,
    sum_sq_diff_scalar,
    max_abs2_accum_scalar,
};

}  // namespace

const Backend& scalar_backend() { return kScalar; }

}  // namespace sarimg::kernels
