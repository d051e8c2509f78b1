#include "sarimg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sarimg/kernels.hpp"

namespace sarimg::graph {

double en_distance(const scene::SceneGrid& grid, std::size_t n, std::size_t n2) {
  const double dx = grid.x[n] - grid.x[n2];
  const double dy = grid.y[n] - grid.y[n2];
  return std::sqrt(dx * dx + dy * dy);
}

double nltv_distance(const CVec& ref_image, const scene::SceneGrid& grid,
                     std::size_t n, std::size_t n2, std::size_t patch_size,
                     bool magnitude_only) {
  if (patch_size % 2 == 0) {
    throw std::invalid_argument("nltv_distance: patch size must be odd");
  }
  if (ref_image.size() != grid.size()) {
    throw std::invalid_argument("nltv_distance: reference image length mismatch");
  }
  const long half = static_cast<long>(patch_size / 2);
  const long nx = static_cast<long>(grid.nx);
  const long ny = static_cast<long>(grid.ny);
  const long r0 = static_cast<long>(grid.row_of(n)), c0 = static_cast<long>(grid.col_of(n));
  const long r1 = static_cast<long>(grid.row_of(n2)), c1 = static_cast<long>(grid.col_of(n2));

  const auto& k = kernels::active();
  double ssd = 0.0;
  for (long dr = -half; dr <= half; ++dr) {
    const long ra = r0 + dr, rb = r1 + dr;
    const bool rows_in = ra >= 0 && ra < ny && rb >= 0 && rb < ny;
    const bool cols_in = c0 - half >= 0 && c0 + half < nx && c1 - half >= 0 &&
                         c1 + half < nx;
    if (!magnitude_only && rows_in && cols_in) {
      // fully interior patch rows are contiguous segments
      const cplx* pa = ref_image.data() + ra * nx + (c0 - half);
      const cplx* pb = ref_image.data() + rb * nx + (c1 - half);
      ssd += k.sum_sq_diff(pa, pb, patch_size);
      continue;
    }
    for (long dc = -half; dc <= half; ++dc) {
      const long ca = c0 + dc, cb = c1 + dc;
      cplx va{0.0, 0.0}, vb{0.0, 0.0};
      if (ra >= 0 && ra < ny && ca >= 0 && ca < nx) va = ref_image[ra * nx + ca];
      if (rb >= 0 && rb < ny && cb >= 0 && cb < nx) vb = ref_image[rb * nx + cb];
      if (magnitude_only) {
        const double d = std::abs(va) - std::abs(vb);
        ssd += d * d;
      } else {
        const cplx d = va - vb;
        ssd += d.real() * d.real() + d.imag() * d.imag();
      }
    }
  }
  return std::sqrt(ssd);
}

GraphModel build_weights(const scene::SceneGrid& grid, double sigma,
                         double cutoff, std::size_t radius_x_cells,
                         std::size_t radius_y_cells,
                         const std::function<double(std::size_t, std::size_t)>& distance) {
  if (!(sigma > 0.0)) throw std::invalid_argument("build_weights: sigma must be positive");
  if (!(cutoff > 0.0)) throw std::invalid_argument("build_weights: cutoff must be positive");

  const long nx = static_cast<long>(grid.nx);
  const long ny = static_cast<long>(grid.ny);
  const long rx = static_cast<long>(radius_x_cells);
  const long ry = static_cast<long>(radius_y_cells);
  const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);

  GraphModel model;
  model.n_vertices = grid.size();
  model.row_ptr.assign(grid.size() + 1, 0);
  model.degree.assign(grid.size(), 0.0);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const long r = static_cast<long>(grid.row_of(n));
    const long c = static_cast<long>(grid.col_of(n));
    double deg = 0.0;
    for (long rr = std::max(0L, r - ry); rr <= std::min(ny - 1, r + ry); ++rr) {
      for (long cc = std::max(0L, c - rx); cc <= std::min(nx - 1, c + rx); ++cc) {
        const std::size_t n2 = static_cast<std::size_t>(rr * nx + cc);
        if (n2 == n) continue;
        const double d = distance(n, n2);
        if (d > cutoff) continue;
        const double w = std::exp(-d * d * inv_two_sigma_sq);
        model.col.push_back(static_cast<std::uint32_t>(n2));
        model.weight.push_back(w);
        deg += w;
      }
    }
    model.degree[n] = deg;
    model.row_ptr[n + 1] = model.col.size();
  }
  return model;
}

GraphModel build_en_graph(const scene::SceneGrid& grid, double sigma,
                          double cutoff_m) {
  const auto radius_x = static_cast<std::size_t>(std::ceil(cutoff_m / grid.dx()));
  const auto radius_y = static_cast<std::size_t>(std::ceil(cutoff_m / grid.dy()));
  return build_weights(grid, sigma, cutoff_m, radius_x, radius_y,
                       [&grid](std::size_t a, std::size_t b) {
                         return en_distance(grid, a, b);
                       });
}

GraphModel build_nltv_graph(const scene::SceneGrid& grid, const CVec& ref_image,
                            const NltvParams& params) {
  if (params.patch_size % 2 == 0 || params.window_size % 2 == 0) {
    throw std::invalid_argument("build_nltv_graph: patch and window sizes must be odd");
  }
  const std::size_t radius = params.window_size / 2;
  return build_weights(grid, params.sigma, params.patch_cutoff, radius, radius,
                       [&](std::size_t a, std::size_t b) {
                         return nltv_distance(ref_image, grid, a, b,
                                              params.patch_size,
                                              params.magnitude_only);
                       });
}

GraphModel tv2d_graph(const scene::SceneGrid& grid) {
  const long nx = static_cast<long>(grid.nx);
  const long ny = static_cast<long>(grid.ny);

  GraphModel model;
  model.n_vertices = grid.size();
  model.row_ptr.assign(grid.size() + 1, 0);
  model.degree.assign(grid.size(), 0.0);
  for (long r = 0; r < ny; ++r) {
    for (long c = 0; c < nx; ++c) {
      const std::size_t n = static_cast<std::size_t>(r * nx + c);
      const long offsets[4][2] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
      for (const auto& o : offsets) {
        const long rr = r + o[0], cc = c + o[1];
        if (rr < 0 || rr >= ny || cc < 0 || cc >= nx) continue;
        model.col.push_back(static_cast<std::uint32_t>(rr * nx + cc));
        model.weight.push_back(1.0);
        model.degree[n] += 1.0;
      }
      model.row_ptr[n + 1] = model.col.size();
    }
  }
  return model;
}

DifferenceMatrix build_difference(const GraphModel& model) {
  DifferenceMatrix d;
  d.n_cols = model.n_vertices;
  d.self_idx.reserve(model.edge_count());
  d.nbr_idx.reserve(model.edge_count());
  d.weight.reserve(model.edge_count());
  for (std::size_t n = 0; n < model.n_vertices; ++n) {
    for (std::size_t e = model.row_ptr[n]; e < model.row_ptr[n + 1]; ++e) {
      d.self_idx.push_back(static_cast<std::uint32_t>(n));
      d.nbr_idx.push_back(model.col[e]);
      d.weight.push_back(model.weight[e]);
    }
  }
  return d;
}

CVec difference_apply(const DifferenceMatrix& d, const CVec& s) {
  if (s.size() != d.n_cols) throw std::invalid_argument("difference_apply: size mismatch");
  CVec out(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    out[i] = d.weight[i] * (s[d.self_idx[i]] - s[d.nbr_idx[i]]);
  }
  return out;
}

CVec difference_apply_adjoint(const DifferenceMatrix& d, const CVec& v) {
  if (v.size() != d.rows()) {
    throw std::invalid_argument("difference_apply_adjoint: size mismatch");
  }
  CVec out(d.n_cols, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const cplx wv = d.weight[i] * v[i];
    out[d.self_idx[i]] += wv;
    out[d.nbr_idx[i]] -= wv;
  }
  return out;
}

void add_difference_gram_upper(const DifferenceMatrix& d, double scale,
                               CMatrix& g) {
  if (g.rows() != d.n_cols || g.cols() != d.n_cols) {
    throw std::invalid_argument("add_difference_gram_upper: size mismatch");
  }
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const double w2 = scale * d.weight[i] * d.weight[i];
    const std::size_t a = d.self_idx[i], b = d.nbr_idx[i];
    g(a, a) += w2;
    g(b, b) += w2;
    g(std::min(a, b), std::max(a, b)) -= w2;
  }
}

CVec laplacian_apply(const GraphModel& model, const CVec& s) {
  if (s.size() != model.n_vertices) {
    throw std::invalid_argument("laplacian_apply: size mismatch");
  }
  CVec out(model.n_vertices);
  for (std::size_t n = 0; n < model.n_vertices; ++n) {
    cplx acc = model.degree[n] * s[n];
    for (std::size_t e = model.row_ptr[n]; e < model.row_ptr[n + 1]; ++e) {
      acc -= model.weight[e] * s[model.col[e]];
    }
    out[n] = acc;
  }
  return out;
}

}  // namespace sarimg::graph
