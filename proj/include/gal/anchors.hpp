#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gal/boxes.hpp"
#include "gal/grid.hpp"
#include "gal/ground.hpp"

namespace gal {

struct AnchorConfig {
    double stride = 0.5;  // BEV lattice pitch, meters
    // (l, w, h) size templates; default is a conventional car prior
    std::vector<std::array<double, 3>> sizes{{3.9, 1.6, 1.56}};
    std::vector<double> orientations{0.0, 1.5707963267948966};
    std::uint32_t min_points = 1;

    void validate() const;
};

struct AnchorSet {
    std::vector<Box3D> anchors;
    std::vector<std::uint32_t> point_counts;
    std::vector<std::uint8_t> kept;
};

// Places one candidate box per (lattice point x size x orientation) whose
// ground cell is valid after morphological interpolation with
// k = sqrt(l^2 + w^2) / 2 (run once with the largest k over the size
// templates). Lattice points sit at cell centers, x_min + (i + 1/2) *
// stride, and anchor z is ground_z + h/2. Output order is lattice-major,
// then size, then orientation.
AnchorSet generate_anchors(const GroundSurface& gs, const AnchorConfig& cfg);

// Counts the points inside the cell-aligned axis-aligned bounding
// rectangle of each anchor footprint (clamped to the grid) via the
// integral image; an anchor is kept iff count >= cfg.min_points.
AnchorSet prune_anchors(const AnchorSet& set, const IntegralGrid& ig,
                        const AnchorConfig& cfg);

}  // namespace gal
