#include <doctest.h>

#include <cmath>
#include <set>

#include "sarimg/rng.hpp"
#include "sarimg/scene.hpp"

using namespace sarimg;
using namespace sarimg::scene;

TEST_CASE("make_grid basics") {
  SUBCASE("128x128 yields 16384 cells") {
    const auto grid = make_grid(128, 128, 9.6);
    CHECK(grid.size() == 16384);
  }
  SUBCASE("single cell sits at the origin") {
    const auto grid = make_grid(1, 1, 1.0);
    CHECK(grid.x[0] == doctest::Approx(0.0));
    CHECK(grid.y[0] == doctest::Approx(0.0));
  }
  SUBCASE("2x2 grid has centers at +-0.5") {
    const auto grid = make_grid(2, 2, 1.0);
    std::multiset<std::pair<double, double>> centers;
    for (std::size_t n = 0; n < 4; ++n) centers.insert({grid.x[n], grid.y[n]});
    CHECK(centers.count({-0.5, -0.5}) == 1);
    CHECK(centers.count({-0.5, 0.5}) == 1);
    CHECK(centers.count({0.5, -0.5}) == 1);
    CHECK(centers.count({0.5, 0.5}) == 1);
  }
  SUBCASE("invalid dimensions rejected") {
    CHECK_THROWS_AS(make_grid(0, 4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(4, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(4, 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(4, 4, -2.0), std::invalid_argument);
  }
  SUBCASE("centers stay inside the extent and are distinct") {
    const auto grid = make_grid(5, 3, 2.0);
    std::set<std::pair<double, double>> seen;
    for (std::size_t n = 0; n < grid.size(); ++n) {
      CHECK(std::abs(grid.x[n]) <= grid.extent);
      CHECK(std::abs(grid.y[n]) <= grid.extent);
      seen.insert({grid.x[n], grid.y[n]});
    }
    CHECK(seen.size() == grid.size());
  }
  SUBCASE("index mapping round-trips") {
    const auto grid = make_grid(7, 5, 1.0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      CHECK(grid.index(grid.row_of(n), grid.col_of(n)) == n);
    }
  }
}

TEST_CASE("point targets snap to nearest centers") {
  const auto grid = make_grid(8, 8, 1.0);

  SUBCASE("empty list gives the all-zero raster") {
    const auto truth = make_point_targets(grid, {});
    for (const auto& v : truth.values[0]) CHECK(v == cplx{0.0, 0.0});
  }
  SUBCASE("a point on a cell center lands exactly there") {
    const std::size_t target = grid.index(3, 5);
    const auto truth =
        make_point_targets(grid, {{grid.x[target], grid.y[target], cplx{1.0, 0.0}}});
    for (std::size_t n = 0; n < grid.size(); ++n) {
      CHECK(truth.values[0][n] == (n == target ? cplx{1.0, 0.0} : cplx{0.0, 0.0}));
    }
  }
  SUBCASE("snapping matches the brute-force nearest center") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const double px = (rng.uniform() * 2.0 - 1.0) * grid.extent;
      const double py = (rng.uniform() * 2.0 - 1.0) * grid.extent;
      std::size_t best = 0;
      double best_d = 1e300;
      for (std::size_t n = 0; n < grid.size(); ++n) {
        const double d = std::hypot(grid.x[n] - px, grid.y[n] - py);
        if (d < best_d) {
          best_d = d;
          best = n;
        }
      }
      CHECK(nearest_cell(grid, px, py) == best);
    }
  }
  SUBCASE("two points in one cell sum their amplitudes") {
    const std::size_t target = grid.index(2, 2);
    const double eps = grid.dx() * 0.2;
    const auto truth = make_point_targets(
        grid, {{grid.x[target] - eps, grid.y[target], cplx{1.0, 0.0}},
               {grid.x[target] + eps, grid.y[target], cplx{0.0, 2.0}}});
    CHECK(truth.values[0][target] == cplx{1.0, 2.0});
  }
  SUBCASE("points outside the extent are rejected") {
    CHECK_THROWS_AS(make_point_targets(grid, {{1.5, 0.0, cplx{1.0, 0.0}}}),
                    std::out_of_range);
  }
}

TEST_CASE("extended targets") {
  const auto grid = make_grid(16, 16, 1.0);

  SUBCASE("constant rectangle fills exactly its covered cells with ones") {
    const Rect rect{-0.5, 0.25, -0.25, 0.5};
    const auto truth = make_extended_target(grid, rect, AmplitudeLaw::constant, 1.0, 0);
    std::size_t count = 0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const bool inside = rect.contains(grid.x[n], grid.y[n]);
      if (inside) {
        ++count;
        CHECK(truth.values[0][n] == cplx{1.0, 0.0});
      } else {
        CHECK(truth.values[0][n] == cplx{0.0, 0.0});
      }
    }
    CHECK(count > 0);
  }
  SUBCASE("same seed reproduces bit-identical rasters") {
    const Rect rect{-0.5, 0.5, -0.5, 0.5};
    const auto a = make_extended_target(grid, rect, AmplitudeLaw::random_phase, 2.0, 77);
    const auto b = make_extended_target(grid, rect, AmplitudeLaw::random_phase, 2.0, 77);
    CHECK(a.values[0] == b.values[0]);
    const auto c = make_extended_target(grid, rect, AmplitudeLaw::random_phase, 2.0, 78);
    CHECK(a.values[0] != c.values[0]);
  }
  SUBCASE("random phase keeps magnitudes at the requested amplitude") {
    const Rect rect{-0.5, 0.5, -0.5, 0.5};
    const auto truth = make_extended_target(grid, rect, AmplitudeLaw::random_phase, 3.0, 5);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      if (truth.values[0][n] != cplx{0.0, 0.0}) {
        CHECK(std::abs(truth.values[0][n]) == doctest::Approx(3.0).epsilon(1e-12));
      }
    }
  }
  SUBCASE("l-shape covers only its two arms") {
    const LShape ell{{-0.8, 0.8, -0.8, 0.8}, 0.3};
    const auto truth = make_extended_target(grid, ell, AmplitudeLaw::constant, 1.0, 0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const bool inside = ell.contains(grid.x[n], grid.y[n]);
      CHECK((truth.values[0][n] != cplx{0.0, 0.0}) == inside);
    }
  }
  SUBCASE("shapes beyond the extent are rejected") {
    CHECK_THROWS_AS(make_extended_target(grid, Rect{-1.5, 0.0, 0.0, 0.5},
                                         AmplitudeLaw::constant, 1.0, 0),
                    std::out_of_range);
  }
}
