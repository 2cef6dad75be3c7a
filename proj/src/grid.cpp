#include "gal/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gal {

namespace {

// floor bin with a guard for points an ulp shy of the upper grid edge:
// the crop predicate and the bin rule must agree on them
int bin_axis(double v, double origin, double cell, int n) {
    int i = static_cast<int>(std::floor((v - origin) / cell));
    if (i == n && v - origin < n * cell) i = n - 1;
    return i;
}

}  // namespace

GridSpec GridSpec::from_roi(const RoiConfig& roi, double cell_size) {
    roi.validate();
    if (!(cell_size > 0.0)) {
        throw std::invalid_argument("GridSpec: cell_size must be positive");
    }
    GridSpec s;
    s.x_min = roi.x_min;
    s.y_min = roi.y_min;
    s.cell_size = cell_size;
    s.rows = static_cast<int>(std::ceil((roi.x_max - roi.x_min) / cell_size));
    s.cols = static_cast<int>(std::ceil((roi.y_max - roi.y_min) / cell_size));
    return s;
}

void GridSpec::validate() const {
    if (!(cell_size > 0.0) || rows <= 0 || cols <= 0) {
        throw std::invalid_argument("GridSpec: positive cell_size/rows/cols required");
    }
}

std::vector<CellIndex> bin_points(const PointCloud& cloud,
                                  const GridSpec& spec) {
    spec.validate();
    std::vector<CellIndex> out;
    out.reserve(cloud.points.size());
    for (std::size_t n = 0; n < cloud.points.size(); ++n) {
        const Point3& p = cloud.points[n];
        const int i = bin_axis(p.x, spec.x_min, spec.cell_size, spec.rows);
        const int j = bin_axis(p.y, spec.y_min, spec.cell_size, spec.cols);
        if (i < 0 || i >= spec.rows || j < 0 || j >= spec.cols) {
            throw std::invalid_argument(
                "bin_points: point " + std::to_string(n) +
                " is outside the grid (crop the cloud first)");
        }
        out.push_back({i, j});
    }
    return out;
}

HeightMap build_height_map(const PointCloud& cloud, const GridSpec& spec) {
    spec.validate();
    HeightMap hm;
    hm.spec = spec;
    hm.max_z.assign(spec.cell_count(),
                    -std::numeric_limits<double>::infinity());
    hm.valid.assign(spec.cell_count(), 0);
    for (std::size_t n = 0; n < cloud.points.size(); ++n) {
        const Point3& p = cloud.points[n];
        const int i = bin_axis(p.x, spec.x_min, spec.cell_size, spec.rows);
        const int j = bin_axis(p.y, spec.y_min, spec.cell_size, spec.cols);
        if (i < 0 || i >= spec.rows || j < 0 || j >= spec.cols) {
            throw std::invalid_argument(
                "build_height_map: point " + std::to_string(n) +
                " is outside the grid (crop the cloud first)");
        }
        const std::size_t idx = spec.index(i, j);
        if (p.z > hm.max_z[idx]) hm.max_z[idx] = p.z;
        hm.valid[idx] = 1;
    }
    return hm;
}

CountGrid build_count_grid(const PointCloud& cloud, const GridSpec& spec) {
    spec.validate();
    CountGrid cg;
    cg.spec = spec;
    cg.counts.assign(spec.cell_count(), 0);
    for (std::size_t n = 0; n < cloud.points.size(); ++n) {
        const Point3& p = cloud.points[n];
        const int i = bin_axis(p.x, spec.x_min, spec.cell_size, spec.rows);
        const int j = bin_axis(p.y, spec.y_min, spec.cell_size, spec.cols);
        if (i < 0 || i >= spec.rows || j < 0 || j >= spec.cols) {
            throw std::invalid_argument(
                "build_count_grid: point " + std::to_string(n) +
                " is outside the grid (crop the cloud first)");
        }
        ++cg.counts[spec.index(i, j)];
    }
    return cg;
}

IntegralGrid integral(const CountGrid& cg) {
    const GridSpec& s = cg.spec;
    IntegralGrid ig;
    ig.spec = s;
    const std::size_t w = static_cast<std::size_t>(s.cols) + 1;
    ig.prefix.assign((static_cast<std::size_t>(s.rows) + 1) * w, 0);
    for (int i = 0; i < s.rows; ++i) {
        std::uint64_t row_sum = 0;
        for (int j = 0; j < s.cols; ++j) {
            row_sum += cg.counts[s.index(i, j)];
            ig.prefix[(i + 1) * w + (j + 1)] = ig.prefix[i * w + (j + 1)] + row_sum;
        }
    }
    return ig;
}

std::uint64_t region_count(const IntegralGrid& ig, int i0, int i1, int j0,
                           int j1) {
    if (i0 < 0 || j0 < 0 || i0 > i1 || j0 > j1 || i1 > ig.spec.rows ||
        j1 > ig.spec.cols) {
        throw std::invalid_argument("region_count: query range out of bounds");
    }
    return ig.at(i1, j1) - ig.at(i0, j1) - ig.at(i1, j0) + ig.at(i0, j0);
}

}  // namespace gal
