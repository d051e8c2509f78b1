#include "sarimg/solver.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sarimg/kernels.hpp"

namespace sarimg::solver {

void GflParams::validate() const {
  if (lambda_e < 0.0 || lambda_f < 0.0) {
    throw std::invalid_argument("GflParams: penalties must be nonnegative");
  }
  if (!(c_u > 0.0) || !(c_z > 0.0)) {
    throw std::invalid_argument("GflParams: c_u and c_z must be positive");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("GflParams: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("GflParams: max_iter must be >= 1");
}

CVec soft_threshold(const CVec& v, double tau) {
  if (tau < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
  CVec out(v.size());
  kernels::active().soft_threshold(v.data(), tau, out.data(), v.size());
  return out;
}

CMatrix assemble_system(const CMatrix& theta, const graph::DifferenceMatrix& lambda,
                        const GflParams& params) {
  params.validate();
  const std::size_t n = theta.cols() != 0 ? theta.cols() : lambda.n_cols;
  if (lambda.n_cols != 0 && lambda.n_cols != n) {
    throw std::invalid_argument("assemble_system: Theta and Lambda disagree on N");
  }
  CMatrix g(n, n);
  if (theta.rows() > 0) {
    kernels::active().herk_upper(theta.data(), theta.rows(), theta.cols(), g.data());
  }
  for (std::size_t i = 0; i < n; ++i) g(i, i) += params.c_u;
  if (lambda.rows() > 0) graph::add_difference_gram_upper(lambda, params.c_z, g);
  // mirror the upper triangle so the result is the full Hermitian matrix
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g(j, i) = std::conj(g(i, j));
  }
  return g;
}

CachedSystem build_cache(const CMatrix& theta, const graph::DifferenceMatrix& lambda,
                         const GflParams& params, const CVec& y) {
  if (theta.rows() != y.size()) {
    throw std::invalid_argument("build_cache: y length does not match Theta rows");
  }
  CachedSystem cache;
  cache.n = theta.cols() != 0 ? theta.cols() : lambda.n_cols;
  cache.factor = linalg::HermitianFactor::compute(assemble_system(theta, lambda, params));
  cache.theta_h_y.assign(cache.n, cplx{0.0, 0.0});
  if (theta.rows() > 0) {
    kernels::active().matvec_adjoint(theta.data(), theta.rows(), theta.cols(),
                                     y.data(), cache.theta_h_y.data());
  }
  return cache;
}

CVec s_update(const CachedSystem& cache, const CVec& u, const CVec& z,
              const CVec& rho_u, const CVec& rho_z,
              const graph::DifferenceMatrix& lambda, const GflParams& params) {
  const auto& k = kernels::active();
  CVec rhs = cache.theta_h_y;
  k.axpy(cplx{1.0, 0.0}, rho_u.data(), rhs.data(), rhs.size());
  k.axpy(cplx{params.c_u, 0.0}, u.data(), rhs.data(), rhs.size());
  if (lambda.rows() > 0) {
    CVec t = rho_z;
    k.axpy(cplx{params.c_z, 0.0}, z.data(), t.data(), t.size());
    const CVec adj = graph::difference_apply_adjoint(lambda, t);
    k.axpy(cplx{1.0, 0.0}, adj.data(), rhs.data(), rhs.size());
  }
  cache.factor.solve_in_place(rhs);
  return rhs;
}

CVec u_update(const CVec& s, const CVec& rho_u, const GflParams& params) {
  const auto& k = kernels::active();
  CVec arg = s;
  k.axpy(cplx{-1.0 / params.c_u, 0.0}, rho_u.data(), arg.data(), arg.size());
  return soft_threshold(arg, params.lambda_e / params.c_u);
}

CVec z_update(const CVec& s, const CVec& rho_z,
              const graph::DifferenceMatrix& lambda, const GflParams& params) {
  const auto& k = kernels::active();
  CVec arg = graph::difference_apply(lambda, s);
  k.axpy(cplx{-1.0 / params.c_z, 0.0}, rho_z.data(), arg.data(), arg.size());
  return soft_threshold(arg, params.lambda_f / params.c_z);
}

void multiplier_update(CVec& rho_u, CVec& rho_z, const CVec& s, const CVec& u,
                       const CVec& z, const graph::DifferenceMatrix& lambda,
                       const GflParams& params) {
  const auto& k = kernels::active();
  CVec du = u;
  k.axpy(cplx{-1.0, 0.0}, s.data(), du.data(), du.size());
  k.axpy(cplx{params.c_u, 0.0}, du.data(), rho_u.data(), rho_u.size());

  CVec dz = z;
  const CVec ls = graph::difference_apply(lambda, s);
  k.axpy(cplx{-1.0, 0.0}, ls.data(), dz.data(), dz.size());
  k.axpy(cplx{params.c_z, 0.0}, dz.data(), rho_z.data(), rho_z.size());
}

double objective_value(const CMatrix& theta, const CVec& y,
                       const graph::DifferenceMatrix& lambda,
                       const GflParams& params, const CVec& s) {
  const auto& k = kernels::active();
  double fit = 0.0;
  if (theta.rows() > 0) {
    CVec resid(theta.rows());
    k.matvec(theta.data(), theta.rows(), theta.cols(), s.data(), resid.data());
    k.axpy(cplx{-1.0, 0.0}, y.data(), resid.data(), resid.size());
    fit = 0.5 * k.sum_sq(resid.data(), resid.size());
  }
  double obj = fit + params.lambda_e * k.sum_abs(s.data(), s.size());
  if (lambda.rows() > 0 && params.lambda_f != 0.0) {
    const CVec ls = graph::difference_apply(lambda, s);
    obj += params.lambda_f * k.sum_abs(ls.data(), ls.size());
  }
  return obj;
}

SolveResult solve_gfl(const CMatrix& theta, const CVec& y,
                      const graph::DifferenceMatrix& lambda,
                      const GflParams& params, const CVec* init) {
  const CachedSystem cache = build_cache(theta, lambda, params, y);
  return solve_gfl(cache, theta, y, lambda, params, init);
}

SolveResult solve_gfl(const CachedSystem& cache, const CMatrix& theta,
                      const CVec& y, const graph::DifferenceMatrix& lambda,
                      const GflParams& params, const CVec* init) {
  params.validate();
  const auto& k = kernels::active();
  const std::size_t n = cache.n;
  const std::size_t e = lambda.rows();
  if (init != nullptr && init->size() != n) {
    throw std::invalid_argument("solve_gfl: init length mismatch");
  }

  CVec s = init != nullptr ? *init : CVec(n, cplx{0.0, 0.0});
  CVec u(n, cplx{0.0, 0.0});
  CVec z(e, cplx{0.0, 0.0});
  CVec rho_u(n, cplx{0.0, 0.0});
  CVec rho_z(e, cplx{0.0, 0.0});

  SolveResult result;
  Diagnostics& diag = result.diagnostics;
  diag.trace.reserve(params.max_iter);

  for (std::size_t t = 1; t <= params.max_iter; ++t) {
    CVec s_next = s_update(cache, u, z, rho_u, rho_z, lambda, params);
    const CVec& s_for_aux =
        params.update_order == UpdateOrder::sequential ? s_next : s;
    CVec u_next = u_update(s_for_aux, rho_u, params);
    CVec z_next = z_update(s_for_aux, rho_z, lambda, params);
    multiplier_update(rho_u, rho_z, s_next, u_next, z_next, lambda, params);

    const double step = std::sqrt(k.sum_sq_diff(s_next.data(), s.data(), n));
    const double base = std::max(std::sqrt(k.sum_sq(s.data(), n)), DBL_EPSILON);
    const double rel_step = step / base;

    s = std::move(s_next);
    u = std::move(u_next);
    z = std::move(z_next);

    IterationRecord rec;
    rec.iter = t;
    rec.objective = objective_value(theta, y, lambda, params, s);
    rec.s_update_norm = rel_step;
    rec.r_u_norm = std::sqrt(k.sum_sq_diff(u.data(), s.data(), n));
    {
      const CVec ls = graph::difference_apply(lambda, s);
      rec.r_z_norm = std::sqrt(k.sum_sq_diff(z.data(), ls.data(), e));
    }
    diag.trace.push_back(rec);
    diag.iterations = t;
    diag.objective = rec.objective;
    diag.s_update_norm = rec.s_update_norm;
    diag.r_u_norm = rec.r_u_norm;
    diag.r_z_norm = rec.r_z_norm;

    if (!std::isfinite(rec.objective) || !std::isfinite(rel_step)) {
      throw DivergenceError(t, "solve_gfl: non-finite iterate at iteration " +
                                   std::to_string(t));
    }
    if (rel_step < params.tol) break;
    if (t == params.max_iter) diag.hit_iteration_cap = true;
  }

  result.s = std::move(s);
  return result;
}

CVec backprojection(const CMatrix& theta, const CVec& y, bool scale_by_rows) {
  if (theta.rows() != y.size()) {
    throw std::invalid_argument("backprojection: y length does not match Theta rows");
  }
  CVec img(theta.cols());
  kernels::active().matvec_adjoint(theta.data(), theta.rows(), theta.cols(),
                                   y.data(), img.data());
  if (scale_by_rows && theta.rows() > 0) {
    kernels::active().scal(cplx{1.0 / static_cast<double>(theta.rows()), 0.0},
                           img.data(), img.size());
  }
  return img;
}

}  // namespace sarimg::solver
