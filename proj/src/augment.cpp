#include "gal/augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gal/rng.hpp"

namespace gal {

Scene flip_scene(const Scene& scene) {
    Scene out = scene;
    for (Point3& p : out.cloud.points) p.y = -p.y;
    for (Box3D& b : out.boxes) {
        b.y = -b.y;
        b.theta = normalize_angle(-b.theta);
    }
    return out;
}

Scene rotate_scene(const Scene& scene, double alpha) {
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    Scene out = scene;
    for (Point3& p : out.cloud.points) {
        const double x = p.x, y = p.y;
        p.x = c * x - s * y;
        p.y = s * x + c * y;
    }
    for (Box3D& b : out.boxes) {
        const double x = b.x, y = b.y;
        b.x = c * x - s * y;
        b.y = s * x + c * y;
        b.theta = normalize_angle(b.theta + alpha);
    }
    return out;
}

std::vector<CellIndex> find_free_cells(const GroundSurface& gs,
                                       const IntegralGrid& nonground,
                                       const std::vector<Box3D>& boxes,
                                       double footprint) {
    const GridSpec& s = gs.spec;
    const int half = static_cast<int>(std::ceil(footprint / (2.0 * s.cell_size)));

    std::vector<CellIndex> free;
    for (int i = half; i < s.rows - half; ++i) {
        for (int j = half; j < s.cols - half; ++j) {
            if (!gs.valid[s.index(i, j)]) continue;
            if (region_count(nonground, i - half, i + half + 1, j - half,
                             j + half + 1) > 0) {
                continue;
            }
            Box3D probe;
            probe.x = s.cell_center_x(i);
            probe.y = s.cell_center_y(j);
            probe.l = footprint;
            probe.w = footprint;
            bool clear = true;
            for (const Box3D& b : boxes) {
                if (iou_bev(probe, b) > 0.0) {
                    clear = false;
                    break;
                }
            }
            if (clear) free.push_back({i, j});
        }
    }
    return free;
}

TransplantResult transplant_objects(const Scene& scene,
                                    const GroundSurface& gs,
                                    const std::vector<Donor>& donors,
                                    const std::vector<CellIndex>& free_cells,
                                    std::uint64_t seed) {
    const GridSpec& s = gs.spec;
    TransplantResult result;
    result.scene = scene;
    result.placements.assign(donors.size(), -1);

    Rng rng(seed);
    std::vector<std::uint8_t> used(free_cells.size(), 0);

    for (std::size_t d = 0; d < donors.size(); ++d) {
        const Donor& donor = donors[d];
        if (donor.points.empty()) continue;

        // seeded sampling without replacement over the free cells; a cell
        // is also rejected when the donor box would touch a box placed by
        // an earlier donor
        int chosen = -1;
        std::size_t remaining = free_cells.size();
        while (remaining > 0) {
            std::size_t pick = bounded(rng, free_cells.size());
            while (used[pick]) pick = (pick + 1) % free_cells.size();
            used[pick] = 1;
            --remaining;

            const CellIndex cell = free_cells[pick];
            Box3D candidate = donor.box;
            candidate.x = s.cell_center_x(cell.row);
            candidate.y = s.cell_center_y(cell.col);
            bool clear = true;
            for (const Box3D& b : result.scene.boxes) {
                if (iou_bev(candidate, b) > 0.0) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                chosen = static_cast<int>(pick);
                break;
            }
        }
        if (chosen < 0) continue;  // reported as -1, never silent

        const CellIndex cell = free_cells[static_cast<std::size_t>(chosen)];
        double min_z = std::numeric_limits<double>::infinity();
        for (const Point3& p : donor.points) min_z = std::min(min_z, p.z);

        // align the lowest donor point with the local ground, not the box
        // bottom, so loosely annotated donors do not float
        const double dx = s.cell_center_x(cell.row) - donor.box.x;
        const double dy = s.cell_center_y(cell.col) - donor.box.y;
        const double dz = gs.ground_z[s.index(cell.row, cell.col)] - min_z;

        for (const Point3& p : donor.points) {
            Point3 q = p;
            q.x += dx;
            q.y += dy;
            q.z += dz;
            result.scene.cloud.points.push_back(q);
        }
        Box3D placed = donor.box;
        placed.x += dx;
        placed.y += dy;
        placed.z += dz;
        result.scene.boxes.push_back(placed);
        result.placements[d] = chosen;
        ++result.placed;
    }
    return result;
}

}  // namespace gal
