#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "sarimg/scene.hpp"
#include "sarimg/types.hpp"

namespace sarimg::graph {

/// Undirected weighted graph over image pixels in CSR form. Neighbour lists
/// are sorted by vertex index; the edge count E counts directed edges, i.e.
/// both (n, n') and (n', n) appear.
struct GraphModel {
  std::size_t n_vertices = 0;
  std::vector<std::size_t> row_ptr;   // n_vertices + 1
  std::vector<std::uint32_t> col;
  std::vector<double> weight;
  std::vector<double> degree;         // row sums of W

  std::size_t edge_count() const { return col.size(); }
  std::size_t neighbour_count(std::size_t n) const {
    return row_ptr[n + 1] - row_ptr[n];
  }
};

/// Euclidean distance between the cell centers of n and n2, meters.
double en_distance(const scene::SceneGrid& grid, std::size_t n, std::size_t n2);

/// l2 distance between the square patches centered at n and n2, taken from
/// the reference image; cells outside the raster count as zero. With
/// magnitude_only the patches hold |ref| instead of the complex values.
double nltv_distance(const CVec& ref_image, const scene::SceneGrid& grid,
                     std::size_t n, std::size_t n2, std::size_t patch_size,
                     bool magnitude_only = false);

/// Gaussian-kernel weights on an arbitrary distance:
/// w(n, n2) = exp(-d^2 / (2 sigma^2)) when d <= cutoff, else 0. Candidates
/// are restricted to the (2 rx + 1) x (2 ry + 1) cell box around each pixel;
/// the diagonal is always zero. Isolated vertices are legal.
GraphModel build_weights(const scene::SceneGrid& grid, double sigma,
                         double cutoff, std::size_t radius_x_cells,
                         std::size_t radius_y_cells,
                         const std::function<double(std::size_t, std::size_t)>& distance);

/// Extended-neighbourhood graph: Gaussian kernel on physical cell distance,
/// cutoff in meters. Independent of any image content.
GraphModel build_en_graph(const scene::SceneGrid& grid, double sigma,
                          double cutoff_m);

struct NltvParams {
  double sigma = 1.0;
  std::size_t patch_size = 3;    // full width, odd
  std::size_t window_size = 21;  // full width, odd
  double patch_cutoff = std::numeric_limits<double>::infinity();
  bool magnitude_only = false;
};

/// Nonlocal-TV graph: Gaussian kernel on patch distances from a reference
/// image; eligibility is the search window, plus the optional patch-distance
/// cutoff.
GraphModel build_nltv_graph(const scene::SceneGrid& grid, const CVec& ref_image,
                            const NltvParams& params);

/// 4-connected lattice with unit weights (the plain 2D-TV baseline).
GraphModel tv2d_graph(const scene::SceneGrid& grid);

/// Graph difference operator: one row per directed edge, +w at the source
/// column and -w at the neighbour column. Rows are grouped per source vertex
/// in neighbour-list order.
struct DifferenceMatrix {
  std::size_t n_cols = 0;
  std::vector<std::uint32_t> self_idx;
  std::vector<std::uint32_t> nbr_idx;
  std::vector<double> weight;

  std::size_t rows() const { return weight.size(); }
};

DifferenceMatrix build_difference(const GraphModel& model);

CVec difference_apply(const DifferenceMatrix& d, const CVec& s);
CVec difference_apply_adjoint(const DifferenceMatrix& d, const CVec& v);

/// g += scale * Lambda^T Lambda, upper triangle plus diagonal (g: N x N).
void add_difference_gram_upper(const DifferenceMatrix& d, double scale,
                               CMatrix& g);

/// (D - W) s through the CSR structure.
CVec laplacian_apply(const GraphModel& model, const CVec& s);

}  // namespace sarimg::graph
