// SPDX-License-Identifier: Apache-2.0
#include "safebound/geometry.hpp"

#include <doctest.h>

#include <stdexcept>

#include <random>

using namespace safebound;

TEST_CASE("cell_of uniform split") {
    UniformGrid grid(make_rect({-1.0}, {1.0}), {20});
    CHECK(grid.n_cells() == 20);
    const HyperRect first = grid.cell_of(0);
    CHECK(first.lower[0] == doctest::Approx(-1.0));
    CHECK(first.upper[0] == doctest::Approx(-0.9));
    const HyperRect last = grid.cell_of(19);
    CHECK(last.lower[0] == doctest::Approx(0.9));
    CHECK(last.upper[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)grid.cell_of(20), std::out_of_range);
}

TEST_CASE("cell_of row-major in 2-D") {
    UniformGrid grid(make_rect({0.0, 0.0}, {1.0, 2.0}), {2, 2});
    const HyperRect cell = grid.cell_of(3);
    CHECK(cell.lower[0] == doctest::Approx(0.5));
    CHECK(cell.upper[0] == doctest::Approx(1.0));
    CHECK(cell.lower[1] == doctest::Approx(1.0));
    CHECK(cell.upper[1] == doctest::Approx(2.0));
}

TEST_CASE("cells_intersecting excludes boundary-only touches") {
    UniformGrid grid(make_rect({-1.0}, {1.0}), {20});

    SUBCASE("interior query") {
        const auto cells = grid.cells_intersecting(make_rect({-0.25}, {0.25}));
        CHECK(cells == std::vector<std::size_t>{7, 8, 9, 10, 11, 12});
    }
    SUBCASE("whole domain") {
        CHECK(grid.cells_intersecting(grid.domain()).size() == 20);
    }
    SUBCASE("zero-measure query is an error") {
        CHECK_THROWS_AS((void)grid.cells_intersecting(make_rect({0.9}, {0.9})),
                        std::domain_error);
    }
    SUBCASE("query aligned on a shared face") {
        // [-0.25, -0.2] lies inside cell 7; it only touches the face of cell 8.
        const auto cells = grid.cells_intersecting(make_rect({-0.25}, {-0.2}));
        CHECK(cells == std::vector<std::size_t>{7});
    }
}

TEST_CASE("max_cell_width") {
    CHECK(UniformGrid(make_rect({-1.0}, {1.0}), {20}).max_cell_width() ==
          doctest::Approx(0.1));
    CHECK(UniformGrid(make_rect({-1.0}, {1.0}), {100}).max_cell_width() ==
          doctest::Approx(0.02));
    CHECK(UniformGrid(make_rect({0.0, 0.0}, {1.0, 4.0}), {2, 2}).max_cell_width() ==
          doctest::Approx(2.0));
}

TEST_CASE("cell volumes sum to the domain volume") {
    UniformGrid grid(make_rect({-1.0, 0.0, 2.5}, {1.0, 0.7, 3.1}), {7, 3, 5});
    double total = 0.0;
    for (std::size_t i = 0; i < grid.n_cells(); ++i)
        total += grid.cell_of(i).volume();
    CHECK(total == doctest::Approx(grid.domain().volume()).epsilon(1e-12));
}

TEST_CASE("center index round trip and interior uniqueness") {
    UniformGrid grid(make_rect({-1.0, -2.0}, {1.0, 2.0}), {9, 4});
    for (std::size_t i = 0; i < grid.n_cells(); ++i)
        CHECK(grid.cell_index_of(grid.cell_center(i)) == i);

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> ux(-0.999, 0.999), uy(-1.999, 1.999);
    for (int trial = 0; trial < 200; ++trial) {
        const std::vector<double> p{ux(rng), uy(rng)};
        int containing = 0;
        for (std::size_t i = 0; i < grid.n_cells(); ++i) {
            const auto cell = grid.cell_of(i);
            if (p[0] > cell.lower[0] && p[0] < cell.upper[0] && p[1] > cell.lower[1] &&
                p[1] < cell.upper[1])
                ++containing;
        }
        CHECK(containing == 1);
    }
}

TEST_CASE("invalid boxes and grids are rejected") {
    CHECK_THROWS_AS((void)make_rect({1.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)make_rect({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(UniformGrid(make_rect({0.0}, {1.0}), {0}), std::invalid_argument);
    CHECK_THROWS_AS(UniformGrid(make_rect({0.0}, {1.0}), {2, 2}), std::invalid_argument);
}
