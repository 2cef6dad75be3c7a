#pragma once

#include <cstdint>
#include <vector>

#include "gal/cloud.hpp"
#include "gal/grid.hpp"

namespace gal {

// Rectangular min-filter half-extents in meters, converted to whole cells
// by rounding up. The single parameter of the ground estimator.
struct FilterConfig {
    double half_window_x = 1.5;
    double half_window_y = 1.5;

    void validate() const;
};

// Piecewise local ground estimate: per cell, the minimum of max_z over the
// valid height-map cells inside the filter window. Invalid cells hold -inf.
struct GroundSurface {
    GridSpec spec;
    std::vector<double> ground_z;
    std::vector<std::uint8_t> valid;
};

// Per-point ground flags, aligned with the source cloud order.
struct GroundLabels {
    std::vector<std::uint8_t> ground;
    double tau_g = 0.2;
};

// Mask-aware rectangular window minimum over the height map, clamped at
// the borders. A cell is valid iff its window held at least one valid
// height-map cell. Runs as two separable 1-D sliding-minimum passes, which
// is bit-identical to the 2-D window scan.
GroundSurface estimate_surface(const HeightMap& hm, const FilterConfig& cfg);

// Extends the estimate to invalid cells reachable within
// ceil(k / cell_size) 8-neighbour dilation steps of a valid cell. Each
// filled cell takes the value of its nearest valid cell (Chebyshev
// distance, ties resolved to the minimum value). Valid cells are
// untouched; k = 0 is the identity.
GroundSurface interpolate_surface(const GroundSurface& gs, double k);

// Labels a point ground iff its cell is valid and
// z <= ground_z + tau_g (inclusive). Out-of-grid or invalid-cell points
// are non-ground.
GroundLabels classify_points(const PointCloud& cloud, const GroundSurface& gs,
                             double tau_g);

}  // namespace gal
