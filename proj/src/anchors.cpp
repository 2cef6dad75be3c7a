#include "gal/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gal {

void AnchorConfig::validate() const {
    if (!(stride > 0.0)) {
        throw std::invalid_argument("AnchorConfig: stride must be positive");
    }
    if (sizes.empty()) {
        throw std::invalid_argument("AnchorConfig: at least one size template");
    }
    for (const auto& s : sizes) {
        if (!(s[0] > 0.0) || !(s[1] > 0.0) || !(s[2] > 0.0)) {
            throw std::invalid_argument("AnchorConfig: sizes must be positive");
        }
    }
    if (orientations.empty()) {
        throw std::invalid_argument("AnchorConfig: at least one orientation");
    }
    if (min_points < 1) {
        throw std::invalid_argument("AnchorConfig: min_points must be >= 1");
    }
}

AnchorSet generate_anchors(const GroundSurface& gs, const AnchorConfig& cfg) {
    cfg.validate();
    const GridSpec& s = gs.spec;

    double k_max = 0.0;
    for (const auto& size : cfg.sizes) {
        k_max = std::max(k_max,
                         std::sqrt(size[0] * size[0] + size[1] * size[1]) / 2.0);
    }
    const GroundSurface filled = interpolate_surface(gs, k_max);

    const double extent_x = s.rows * s.cell_size;
    const double extent_y = s.cols * s.cell_size;
    const int nx = static_cast<int>(std::floor(extent_x / cfg.stride));
    const int ny = static_cast<int>(std::floor(extent_y / cfg.stride));

    AnchorSet set;
    set.anchors.reserve(static_cast<std::size_t>(nx) * ny * cfg.sizes.size() *
                        cfg.orientations.size());
    for (int ix = 0; ix < nx; ++ix) {
        const double px = s.x_min + (ix + 0.5) * cfg.stride;
        const int ci = static_cast<int>(std::floor((px - s.x_min) / s.cell_size));
        for (int iy = 0; iy < ny; ++iy) {
            const double py = s.y_min + (iy + 0.5) * cfg.stride;
            const int cj =
                static_cast<int>(std::floor((py - s.y_min) / s.cell_size));
            if (ci >= s.rows || cj >= s.cols) continue;
            const std::size_t cell = s.index(ci, cj);
            if (!filled.valid[cell]) continue;
            const double gz = filled.ground_z[cell];
            for (const auto& size : cfg.sizes) {
                for (double theta : cfg.orientations) {
                    Box3D b;
                    b.x = px;
                    b.y = py;
                    b.z = gz + size[2] * 0.5;
                    b.l = size[0];
                    b.w = size[1];
                    b.h = size[2];
                    b.theta = normalize_angle(theta);
                    set.anchors.push_back(b);
                }
            }
        }
    }
    set.point_counts.assign(set.anchors.size(), 0);
    set.kept.assign(set.anchors.size(), 1);
    return set;
}

AnchorSet prune_anchors(const AnchorSet& set, const IntegralGrid& ig,
                        const AnchorConfig& cfg) {
    cfg.validate();
    const GridSpec& s = ig.spec;
    AnchorSet out;
    out.anchors = set.anchors;
    out.point_counts.assign(set.anchors.size(), 0);
    out.kept.assign(set.anchors.size(), 0);

    for (std::size_t n = 0; n < set.anchors.size(); ++n) {
        Vec2 corners[4];
        footprint_corners(set.anchors[n], corners);
        double x0 = corners[0].x, x1 = corners[0].x;
        double y0 = corners[0].y, y1 = corners[0].y;
        for (int c = 1; c < 4; ++c) {
            x0 = std::min(x0, corners[c].x);
            x1 = std::max(x1, corners[c].x);
            y0 = std::min(y0, corners[c].y);
            y1 = std::max(y1, corners[c].y);
        }
        // cell-aligned cover of the footprint AABB, clamped to the grid
        const int i0 = std::clamp(
            static_cast<int>(std::floor((x0 - s.x_min) / s.cell_size)), 0,
            s.rows);
        const int i1 = std::clamp(
            static_cast<int>(std::ceil((x1 - s.x_min) / s.cell_size)), i0,
            s.rows);
        const int j0 = std::clamp(
            static_cast<int>(std::floor((y0 - s.y_min) / s.cell_size)), 0,
            s.cols);
        const int j1 = std::clamp(
            static_cast<int>(std::ceil((y1 - s.y_min) / s.cell_size)), j0,
            s.cols);
        const std::uint64_t count = region_count(ig, i0, i1, j0, j1);
        out.point_counts[n] =
            static_cast<std::uint32_t>(std::min<std::uint64_t>(count, 0xffffffffu));
        out.kept[n] = count >= cfg.min_points ? 1 : 0;
    }
    return out;
}

}  // namespace gal
