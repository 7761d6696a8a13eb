// SPDX-License-Identifier: Apache-2.0
#include "safebound/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safebound {

double HyperRect::volume() const {
    double v = 1.0;
    for (std::size_t d = 0; d < dim(); ++d)
        v *= width(d);
    return v;
}

double HyperRect::diameter_inf() const {
    double l = 0.0;
    for (std::size_t d = 0; d < dim(); ++d)
        l = std::max(l, width(d));
    return l;
}

void HyperRect::validate() const {
    if (lower.empty() || lower.size() != upper.size())
        throw std::invalid_argument("HyperRect: dimension must be >= 1 and bounds consistent");
    for (std::size_t d = 0; d < dim(); ++d) {
        if (!(lower[d] <= upper[d]))
            throw std::invalid_argument("HyperRect: lower > upper on axis " + std::to_string(d));
    }
}

HyperRect make_rect(std::vector<double> lower, std::vector<double> upper) {
    HyperRect r{std::move(lower), std::move(upper)};
    r.validate();
    return r;
}

UniformGrid::UniformGrid(HyperRect domain, std::vector<std::size_t> counts)
    : domain_(std::move(domain)), counts_(std::move(counts)) {
    domain_.validate();
    if (counts_.size() != domain_.dim())
        throw std::invalid_argument("UniformGrid: counts dimension mismatch");
    n_cells_ = 1;
    widths_.resize(counts_.size());
    for (std::size_t d = 0; d < counts_.size(); ++d) {
        if (counts_[d] == 0)
            throw std::invalid_argument("UniformGrid: counts must be positive");
        widths_[d] = domain_.width(d) / static_cast<double>(counts_[d]);
        if (!(widths_[d] > 0.0))
            throw std::invalid_argument("UniformGrid: zero-width cells on axis " + std::to_string(d));
        n_cells_ *= counts_[d];
    }
}

double UniformGrid::max_cell_width() const {
    return *std::max_element(widths_.begin(), widths_.end());
}

std::vector<std::size_t> UniformGrid::multi_index(std::size_t flat) const {
    if (flat >= n_cells_)
        throw std::out_of_range("UniformGrid: cell index out of range");
    std::vector<std::size_t> mi(counts_.size());
    for (std::size_t d = counts_.size(); d-- > 0;) {
        mi[d] = flat % counts_[d];
        flat /= counts_[d];
    }
    return mi;
}

std::size_t UniformGrid::flat_index(const std::vector<std::size_t>& multi) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < counts_.size(); ++d) {
        if (multi[d] >= counts_[d])
            throw std::out_of_range("UniformGrid: multi-index out of range");
        flat = flat * counts_[d] + multi[d];
    }
    return flat;
}

HyperRect UniformGrid::cell_of(std::size_t index) const {
    const auto mi = multi_index(index);
    HyperRect cell;
    cell.lower.resize(dim());
    cell.upper.resize(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
        cell.lower[d] = domain_.lower[d] + static_cast<double>(mi[d]) * widths_[d];
        cell.upper[d] = domain_.lower[d] + static_cast<double>(mi[d] + 1) * widths_[d];
        // Last cell closes exactly onto the domain face.
        if (mi[d] + 1 == counts_[d])
            cell.upper[d] = domain_.upper[d];
    }
    return cell;
}

std::vector<double> UniformGrid::cell_center(std::size_t index) const {
    const auto cell = cell_of(index);
    std::vector<double> c(dim());
    for (std::size_t d = 0; d < dim(); ++d)
        c[d] = 0.5 * (cell.lower[d] + cell.upper[d]);
    return c;
}

std::size_t UniformGrid::cell_index_of(const std::vector<double>& point) const {
    if (point.size() != dim())
        throw std::invalid_argument("UniformGrid: point dimension mismatch");
    std::vector<std::size_t> mi(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
        const double t = (point[d] - domain_.lower[d]) / widths_[d];
        auto idx = static_cast<long long>(std::floor(t));
        idx = std::clamp<long long>(idx, 0, static_cast<long long>(counts_[d]) - 1);
        mi[d] = static_cast<std::size_t>(idx);
    }
    return flat_index(mi);
}

std::vector<std::size_t> UniformGrid::cells_intersecting(const HyperRect& query) const {
    query.validate();
    if (query.dim() != dim())
        throw std::invalid_argument("UniformGrid: query dimension mismatch");

    // Per-axis ranges of cells with strictly positive 1-D overlap.
    std::vector<std::pair<std::size_t, std::size_t>> ranges(dim()); // [first, last]
    for (std::size_t d = 0; d < dim(); ++d) {
        const double lo = std::max(query.lower[d], domain_.lower[d]);
        const double hi = std::min(query.upper[d], domain_.upper[d]);
        if (!(hi > lo))
            throw std::domain_error("UniformGrid: query has zero-measure overlap with domain");
        std::size_t first = counts_[d], last = 0;
        for (std::size_t j = 0; j < counts_[d]; ++j) {
            const double clo = domain_.lower[d] + static_cast<double>(j) * widths_[d];
            const double chi = domain_.lower[d] + static_cast<double>(j + 1) * widths_[d];
            if (std::min(hi, chi) > std::max(lo, clo)) {
                first = std::min(first, j);
                last = std::max(last, j);
            }
        }
        if (first > last)
            throw std::domain_error("UniformGrid: query has zero-measure overlap with domain");
        ranges[d] = {first, last};
    }

    std::vector<std::size_t> out;
    std::vector<std::size_t> mi(dim());
    for (std::size_t d = 0; d < dim(); ++d)
        mi[d] = ranges[d].first;
    while (true) {
        out.push_back(flat_index(mi));
        std::size_t d = dim();
        while (d-- > 0) {
            if (mi[d] < ranges[d].second) {
                ++mi[d];
                for (std::size_t e = d + 1; e < dim(); ++e)
                    mi[e] = ranges[e].first;
                break;
            }
            if (d == 0)
                return out;
        }
    }
}

} // namespace safebound
