#include "sarimg/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sarimg/rng.hpp"

namespace sarimg::scene {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::size_t nearest_axis_index(double v, double extent, double step,
                               std::size_t count) {
  const double f = (v + extent) / step - 0.5;
  const long idx = std::lround(f);
  return static_cast<std::size_t>(std::clamp<long>(idx, 0, static_cast<long>(count) - 1));
}

void check_extent(const SceneGrid& grid, double x, double y, const char* what) {
  if (x < -grid.extent || x > grid.extent || y < -grid.extent || y > grid.extent) {
    throw std::out_of_range(std::string(what) + " (" + std::to_string(x) + ", " +
                            std::to_string(y) + ") outside grid extent " +
                            std::to_string(grid.extent));
  }
}

}  // namespace

SceneGrid make_grid(std::size_t nx, std::size_t ny, double extent) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("make_grid: nx and ny must be >= 1");
  if (!(extent > 0.0)) throw std::invalid_argument("make_grid: extent must be positive");

  SceneGrid grid;
  grid.nx = nx;
  grid.ny = ny;
  grid.extent = extent;
  grid.x.resize(nx * ny);
  grid.y.resize(nx * ny);
  const double dx = grid.dx();
  const double dy = grid.dy();
  for (std::size_t row = 0; row < ny; ++row) {
    const double yc = -extent + (static_cast<double>(row) + 0.5) * dy;
    for (std::size_t col = 0; col < nx; ++col) {
      const std::size_t n = grid.index(row, col);
      grid.x[n] = -extent + (static_cast<double>(col) + 0.5) * dx;
      grid.y[n] = yc;
    }
  }
  return grid;
}

std::size_t nearest_cell(const SceneGrid& grid, double x, double y) {
  check_extent(grid, x, y, "point");
  const std::size_t col = nearest_axis_index(x, grid.extent, grid.dx(), grid.nx);
  const std::size_t row = nearest_axis_index(y, grid.extent, grid.dy(), grid.ny);
  return grid.index(row, col);
}

GroundTruth make_point_targets(const SceneGrid& grid,
                               const std::vector<PointTarget>& points) {
  CVec values(grid.size(), cplx{0.0, 0.0});
  for (const auto& p : points) {
    values[nearest_cell(grid, p.x, p.y)] += p.amplitude;
  }
  return GroundTruth{{std::move(values)}};
}

GroundTruth make_extended_target(const SceneGrid& grid, const Shape& shape,
                                 AmplitudeLaw law, double amplitude,
                                 std::uint64_t seed) {
  const Rect& bbox = std::holds_alternative<Rect>(shape)
                         ? std::get<Rect>(shape)
                         : std::get<LShape>(shape).bbox;
  if (bbox.x_min > bbox.x_max || bbox.y_min > bbox.y_max) {
    throw std::invalid_argument("make_extended_target: degenerate shape bounds");
  }
  check_extent(grid, bbox.x_min, bbox.y_min, "shape corner");
  check_extent(grid, bbox.x_max, bbox.y_max, "shape corner");

  const auto contains = [&shape](double px, double py) {
    return std::visit([&](const auto& s) { return s.contains(px, py); }, shape);
  };

  Rng rng(seed);
  CVec values(grid.size(), cplx{0.0, 0.0});
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!contains(grid.x[n], grid.y[n])) continue;
    if (law == AmplitudeLaw::constant) {
      values[n] = cplx{amplitude, 0.0};
    } else {
      const double phase = kTwoPi * rng.uniform();
      values[n] = amplitude * cplx{std::cos(phase), std::sin(phase)};
    }
  }
  return GroundTruth{{std::move(values)}};
}

}  // namespace sarimg::scene
