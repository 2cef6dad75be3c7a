#pragma once

#include <cstdint>
#include <vector>

#include "gal/cloud.hpp"

namespace gal {

// BEV grid frame: rows follow x (forward), cols follow y (lateral).
// A point maps to cell (floor((x-x_min)/cell), floor((y-y_min)/cell)),
// half-open on the upper edge.
struct GridSpec {
    double x_min = -50.0;
    double y_min = -30.0;
    double cell_size = 0.1;
    int rows = 1000;
    int cols = 600;

    static GridSpec from_roi(const RoiConfig& roi, double cell_size);

    void validate() const;

    std::size_t cell_count() const {
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
               static_cast<std::size_t>(j);
    }
    double cell_center_x(int i) const { return x_min + (i + 0.5) * cell_size; }
    double cell_center_y(int j) const { return y_min + (j + 0.5) * cell_size; }

    bool operator==(const GridSpec&) const = default;
};

struct CellIndex {
    int row = 0;
    int col = 0;
};

// Per-cell maximum point height. Cells without points are flagged invalid
// and hold -inf, which nothing downstream reads.
struct HeightMap {
    GridSpec spec;
    std::vector<double> max_z;
    std::vector<std::uint8_t> valid;
};

struct CountGrid {
    GridSpec spec;
    std::vector<std::uint32_t> counts;
};

// Summed-area table over a CountGrid: prefix[i][j] holds the count over
// cells [0,i) x [0,j), so any rectangle query is four lookups.
struct IntegralGrid {
    GridSpec spec;
    std::vector<std::uint64_t> prefix;  // (rows+1) x (cols+1)

    std::uint64_t at(int i, int j) const {
        return prefix[static_cast<std::size_t>(i) *
                          static_cast<std::size_t>(spec.cols + 1) +
                      static_cast<std::size_t>(j)];
    }
};

// Maps each point to its cell. The cloud must already be cropped so every
// point lands in-grid; an out-of-grid point raises std::invalid_argument
// naming the point index.
std::vector<CellIndex> bin_points(const PointCloud& cloud,
                                  const GridSpec& spec);

HeightMap build_height_map(const PointCloud& cloud, const GridSpec& spec);

CountGrid build_count_grid(const PointCloud& cloud, const GridSpec& spec);

IntegralGrid integral(const CountGrid& counts);

// Count over the half-open cell rectangle [i0,i1) x [j0,j1).
// Requires 0 <= i0 <= i1 <= rows and 0 <= j0 <= j1 <= cols.
std::uint64_t region_count(const IntegralGrid& ig, int i0, int i1, int j0,
                           int j1);

}  // namespace gal
