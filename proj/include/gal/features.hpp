#pragma once

#include <vector>

#include "gal/cloud.hpp"
#include "gal/ground.hpp"

namespace gal {

struct FeatureConfig {
    int num_slices = 5;
    double slice_span = 2.5;  // meters above local ground covered by slices

    void validate() const;
};

// Ground-relative BEV feature tensor: num_slices height-slice channels
// plus one density channel, every value in [0, 1]. Channel planes are
// row-major grids.
struct BevFeatures {
    GridSpec spec;
    int num_slices = 0;
    std::vector<float> slices;  // num_slices * rows * cols
    std::vector<float> density;

    std::size_t plane_size() const { return spec.cell_count(); }
    float slice_at(int s, int i, int j) const {
        return slices[static_cast<std::size_t>(s) * plane_size() +
                      spec.index(i, j)];
    }
};

// Slice s spans [s, s+1) * slice_span / num_slices above the local ground;
// its value is the max of (z_rel - lo) / (hi - lo) over the cell's points
// inside the slice. Density is min(1, ln(1 + n) / ln 64). Points below the
// local ground count toward density only, and cells with invalid ground
// stay all-zero. Heights are measured against ground_z of the point's own
// cell, so shifting scene and surface together leaves the tensor
// unchanged.
BevFeatures extract_features(const PointCloud& cloud, const GroundSurface& gs,
                             const FeatureConfig& cfg);

}  // namespace gal
