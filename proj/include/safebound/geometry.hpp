// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace safebound {

/// Axis-aligned closed box. The universal region representation: grid cells,
/// the safe set, and the initial set are all HyperRects.
struct HyperRect {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const { return lower.size(); }
    double volume() const;
    double width(std::size_t axis) const { return upper[axis] - lower[axis]; }
    /// Largest extent over all axes (diameter in the infinity norm).
    double diameter_inf() const;
    /// Throws std::invalid_argument on empty or inverted boxes.
    void validate() const;
};

HyperRect make_rect(std::vector<double> lower, std::vector<double> upper);

/// Uniform axis-aligned partition of a box into counts[0] x ... x counts[n-1]
/// cells. Flat indices are row-major with axis 0 slowest.
class UniformGrid {
  public:
    UniformGrid(HyperRect domain, std::vector<std::size_t> counts);

    std::size_t n_cells() const { return n_cells_; }
    std::size_t dim() const { return domain_.dim(); }
    const HyperRect& domain() const { return domain_; }
    const std::vector<std::size_t>& counts() const { return counts_; }
    double cell_width(std::size_t axis) const { return widths_[axis]; }
    double max_cell_width() const;

    HyperRect cell_of(std::size_t index) const;
    std::vector<double> cell_center(std::size_t index) const;

    /// Flat index of the cell containing the point; points on interior faces
    /// go to the cell with the larger index along that axis.
    std::size_t cell_index_of(const std::vector<double>& point) const;

    /// Indices of all cells whose intersection with `query` has positive
    /// volume, sorted ascending. Throws std::domain_error when the overlap
    /// with the domain has zero measure.
    std::vector<std::size_t> cells_intersecting(const HyperRect& query) const;

    std::vector<std::size_t> multi_index(std::size_t flat) const;
    std::size_t flat_index(const std::vector<std::size_t>& multi) const;

  private:
    HyperRect domain_;
    std::vector<std::size_t> counts_;
    std::vector<double> widths_;
    std::size_t n_cells_;
};

} // namespace safebound
