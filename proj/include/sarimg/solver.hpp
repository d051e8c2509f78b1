#pragma once

#include <cstdint>
#include <vector>

#include "sarimg/graph.hpp"
#include "sarimg/linalg.hpp"
#include "sarimg/types.hpp"

namespace sarimg::solver {

/// Sweep order for one iteration. `sequential` is the standard two-block
/// scheme: s from the previous u, z and multipliers, then u and z from the
/// fresh s, then the multiplier ascent. `jacobi` computes s, u and z all from
/// the previous iterates; it matches a literal reading of the update
/// superscripts but is not convergent in general and exists for comparison.
enum class UpdateOrder { sequential, jacobi };

struct GflParams {
  double lambda_e = 0.0;  // elementwise sparsity penalty
  double lambda_f = 0.0;  // fusion penalty on graph differences
  double c_u = 1.0;
  double c_z = 1.0;
  double tol = 1e-5;
  std::size_t max_iter = 100;
  UpdateOrder update_order = UpdateOrder::sequential;

  void validate() const;
};

struct IterationRecord {
  std::size_t iter = 0;
  double objective = 0.0;
  double s_update_norm = 0.0;
  double r_u_norm = 0.0;
  double r_z_norm = 0.0;
};

struct Diagnostics {
  std::size_t iterations = 0;
  bool hit_iteration_cap = false;
  double objective = 0.0;
  double s_update_norm = 0.0;
  double r_u_norm = 0.0;
  double r_z_norm = 0.0;
  std::vector<IterationRecord> trace;
};

/// Iteration-independent pieces of the s-update: the factorization of
/// Theta^H Theta + c_u I + c_z Lambda^T Lambda and the vector Theta^H y.
struct CachedSystem {
  std::size_t n = 0;
  linalg::HermitianFactor factor;
  CVec theta_h_y;
};

/// Complex soft threshold: magnitudes shrink by tau, phases are kept,
/// zero maps to zero.
CVec soft_threshold(const CVec& v, double tau);

/// Full Hermitian system matrix Theta^H Theta + c_u I + c_z Lambda^T Lambda.
CMatrix assemble_system(const CMatrix& theta, const graph::DifferenceMatrix& lambda,
                        const GflParams& params);

CachedSystem build_cache(const CMatrix& theta, const graph::DifferenceMatrix& lambda,
                         const GflParams& params, const CVec& y);

CVec s_update(const CachedSystem& cache, const CVec& u, const CVec& z,
              const CVec& rho_u, const CVec& rho_z,
              const graph::DifferenceMatrix& lambda, const GflParams& params);

CVec u_update(const CVec& s, const CVec& rho_u, const GflParams& params);

CVec z_update(const CVec& s, const CVec& rho_z,
              const graph::DifferenceMatrix& lambda, const GflParams& params);

void multiplier_update(CVec& rho_u, CVec& rho_z, const CVec& s, const CVec& u,
                       const CVec& z, const graph::DifferenceMatrix& lambda,
                       const GflParams& params);

/// 1/2 ||y - Theta s||^2 + lambda_e ||s||_1 + lambda_f ||Lambda s||_1
/// with complex moduli in the l1 terms.
double objective_value(const CMatrix& theta, const CVec& y,
                       const graph::DifferenceMatrix& lambda,
                       const GflParams& params, const CVec& s);

struct SolveResult {
  CVec s;
  Diagnostics diagnostics;
};

/// ADMM on the graph-fused-lasso objective. Stops when the relative l2
/// s-update drops below tol or after max_iter sweeps. Throws DivergenceError
/// when an iterate turns non-finite.
SolveResult solve_gfl(const CMatrix& theta, const CVec& y,
                      const graph::DifferenceMatrix& lambda,
                      const GflParams& params, const CVec* init = nullptr);

/// Same iteration on a prebuilt cache (the cache must come from the same
/// Theta, Lambda, y and penalties).
SolveResult solve_gfl(const CachedSystem& cache, const CMatrix& theta,
                      const CVec& y, const graph::DifferenceMatrix& lambda,
                      const GflParams& params, const CVec* init = nullptr);

/// Matched-filter image Theta^H y, scaled by 1/rows by default so point
/// targets come out near their true amplitude. The same scale is applied for
/// every sub-aperture, which keeps the max-fusion rule scale-consistent.
CVec backprojection(const CMatrix& theta, const CVec& y,
                    bool scale_by_rows = true);

}  // namespace sarimg::solver
