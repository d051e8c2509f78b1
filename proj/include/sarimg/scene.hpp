#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sarimg/types.hpp"

namespace sarimg::scene {

/// Uniform Cartesian raster of cell centers, symmetric about the origin.
/// Vectorization is row-major: n = row * nx + col, col indexes x, row
/// indexes y. Every module that touches images relies on this one order.
struct SceneGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double extent = 0.0;  // physical half-width per axis, meters
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return nx * ny; }
  double dx() const { return 2.0 * extent / static_cast<double>(nx); }
  double dy() const { return 2.0 * extent / static_cast<double>(ny); }

  std::size_t index(std::size_t row, std::size_t col) const { return row * nx + col; }
  std::size_t row_of(std::size_t n) const { return n / nx; }
  std::size_t col_of(std::size_t n) const { return n % nx; }
};

SceneGrid make_grid(std::size_t nx, std::size_t ny, double extent);

/// Index of the cell whose center is nearest to (x, y).
/// Throws std::out_of_range when the point lies outside the extent.
std::size_t nearest_cell(const SceneGrid& grid, double x, double y);

/// Complex reflectivity raster. One vector for isotropic targets, or one per
/// sub-aperture for aspect-dependent scenes.
struct GroundTruth {
  std::vector<CVec> values;

  bool isotropic() const { return values.size() == 1; }
  std::size_t size() const { return values.empty() ? 0 : values.front().size(); }
  const CVec& for_subaperture(std::size_t l) const {
    return values[isotropic() ? 0 : l];
  }
};

struct PointTarget {
  double x = 0.0;
  double y = 0.0;
  cplx amplitude{0.0, 0.0};
};

/// Snaps each point to its nearest cell center; coincident points sum.
GroundTruth make_point_targets(const SceneGrid& grid,
                               const std::vector<PointTarget>& points);

enum class AmplitudeLaw { constant, random_phase };

struct Rect {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  bool contains(double px, double py) const {
    return px >= x_min && px <= x_max && py >= y_min && py <= y_max;
  }
};

/// Axis-aligned L: vertical arm along the left edge of the bounding box plus
/// horizontal arm along its bottom edge, both `thickness` wide.
struct LShape {
  Rect bbox;
  double thickness = 0.0;
  bool contains(double px, double py) const {
    return bbox.contains(px, py) &&
           (px <= bbox.x_min + thickness || py <= bbox.y_min + thickness);
  }
};

using Shape = std::variant<Rect, LShape>;

/// Fills all cells whose centers fall inside the shape. Under
/// AmplitudeLaw::random_phase each supported cell gets magnitude `amplitude`
/// and a phase drawn uniformly on [0, 2pi) from the seeded generator.
/// Throws std::out_of_range when the shape does not fit the extent.
GroundTruth make_extended_target(const SceneGrid& grid, const Shape& shape,
                                 AmplitudeLaw law, double amplitude,
                                 std::uint64_t seed);

}  // namespace sarimg::scene
