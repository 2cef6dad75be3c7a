#pragma once

#include <cstdint>
#include <vector>

#include "gal/boxes.hpp"
#include "gal/cloud.hpp"
#include "gal/grid.hpp"
#include "gal/ground.hpp"

namespace gal {

struct Scene {
    PointCloud cloud;
    std::vector<Box3D> boxes;
};

// Mirror about the x axis: (x, y, z) -> (x, -y, z), box yaw negated.
Scene flip_scene(const Scene& scene);

// Yaw rotation of points and boxes about the origin.
Scene rotate_scene(const Scene& scene, double alpha);

// An annotated object lifted out of some frame: its points plus its box.
struct Donor {
    std::vector<Point3> points;
    Box3D box;
};

// Cells whose `footprint`-sized square window (centered on the cell, fully
// inside the grid) has valid ground, holds no non-ground point, and whose
// footprint box has zero BEV IoU with every existing box. `nonground`
// must be the integral image of the count grid built from the points
// classified non-ground (above ground_z + tau_g).
std::vector<CellIndex> find_free_cells(const GroundSurface& gs,
                                       const IntegralGrid& nonground,
                                       const std::vector<Box3D>& boxes,
                                       double footprint);

struct TransplantResult {
    Scene scene;
    // per donor: index into free_cells actually used, or -1 when no
    // placement was possible
    std::vector<int> placements;
    int placed = 0;
};

// Drops each donor onto a seeded random free cell: the box BEV center
// moves to the cell center and the donor is lowered until its lowest
// point touches ground_z there. Cells already consumed (or overlapping a
// previously placed donor) are skipped; a donor that cannot be placed is
// reported with placement -1 rather than dropped silently.
TransplantResult transplant_objects(const Scene& scene,
                                    const GroundSurface& gs,
                                    const std::vector<Donor>& donors,
                                    const std::vector<CellIndex>& free_cells,
                                    std::uint64_t seed);

}  // namespace gal
