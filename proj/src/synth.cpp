#include "gal/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "gal/rng.hpp"

namespace gal {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// coordinates are kept on the f32 lattice so synthetic clouds survive the
// sensor format round trip bit-exactly
double quantize(double v) { return static_cast<double>(static_cast<float>(v)); }

void push_point(PointCloud& cloud, std::vector<std::uint8_t>& is_ground,
                const RoiConfig& roi, double x, double y, double z,
                double intensity, bool ground) {
    Point3 p{quantize(x), quantize(y), quantize(z), quantize(intensity)};
    if (!roi.contains(p)) return;
    cloud.points.push_back(p);
    is_ground.push_back(ground ? 1 : 0);
}

// one point uniform on the 4 side faces + top of the box (bottom is never
// visible to a lidar)
void sample_box_surface(Rng& rng, const Box3D& b, double& x, double& y,
                        double& z) {
    const double side_lw = b.w * b.h;  // faces normal to the length axis
    const double side_ll = b.l * b.h;  // faces normal to the width axis
    const double top = b.l * b.w;
    const double total = 2.0 * side_lw + 2.0 * side_ll + top;
    const double pick = uniform(rng, 0.0, total);

    double lx, ly, lz;  // box-local, center at origin
    if (pick < 2.0 * side_lw) {
        lx = pick < side_lw ? b.l * 0.5 : -b.l * 0.5;
        ly = uniform(rng, -b.w * 0.5, b.w * 0.5);
        lz = uniform(rng, -b.h * 0.5, b.h * 0.5);
    } else if (pick < 2.0 * side_lw + 2.0 * side_ll) {
        ly = pick < 2.0 * side_lw + side_ll ? b.w * 0.5 : -b.w * 0.5;
        lx = uniform(rng, -b.l * 0.5, b.l * 0.5);
        lz = uniform(rng, -b.h * 0.5, b.h * 0.5);
    } else {
        lx = uniform(rng, -b.l * 0.5, b.l * 0.5);
        ly = uniform(rng, -b.w * 0.5, b.w * 0.5);
        lz = b.h * 0.5;
    }
    const double c = std::cos(b.theta), s = std::sin(b.theta);
    x = b.x + c * lx - s * ly;
    y = b.y + s * lx + c * ly;
    z = b.z + lz;
}

}  // namespace

double TerrainSpec::ground_z(double x, double y) const {
    switch (kind) {
        case Kind::Flat:
            return z0;
        case Kind::Slope:
            return z0 + gx * x + gy * y;
        case Kind::Crown: {
            const double t = y / crown_half_width;
            const double bump = 1.0 - t * t;
            return z0 + (bump > 0.0 ? crown_peak * bump : 0.0);
        }
        case Kind::Step:
            return x < step_x ? z_low : z_high;
    }
    return z0;
}

void TerrainSpec::validate() const {
    if (point_density < 0.0) {
        throw std::invalid_argument("TerrainSpec: point_density must be >= 0");
    }
    if (noise_sigma < 0.0) {
        throw std::invalid_argument("TerrainSpec: noise_sigma must be >= 0");
    }
    if (point_density == 0.0 && !ring.has_value()) {
        throw std::invalid_argument("TerrainSpec: no sampling layer enabled");
    }
    if (ring && (ring->beams < 1 || !(ring->angular_step_deg > 0.0) ||
                 !(ring->sensor_height > 0.0) ||
                 !(ring->min_elevation_deg > 0.0) ||
                 !(ring->max_elevation_deg > ring->min_elevation_deg))) {
        throw std::invalid_argument("TerrainSpec: bad ring sampling parameters");
    }
}

SceneSample generate_scene(const TerrainSpec& terrain,
                           const std::vector<Box3D>& objects,
                           const RoiConfig& roi, int points_per_object) {
    terrain.validate();
    roi.validate();
    for (std::size_t a = 0; a < objects.size(); ++a) {
        objects[a].validate();
        for (std::size_t b = a + 1; b < objects.size(); ++b) {
            if (iou_bev(objects[a], objects[b]) > 0.0) {
                throw std::invalid_argument(
                    "generate_scene: object footprints overlap");
            }
        }
    }

    SceneSample scene;
    scene.terrain = terrain;
    scene.boxes = objects;
    Rng rng(terrain.seed);

    if (terrain.point_density > 0.0) {
        const double area =
            (roi.x_max - roi.x_min) * (roi.y_max - roi.y_min);
        const std::size_t n =
            static_cast<std::size_t>(std::llround(terrain.point_density * area));
        for (std::size_t i = 0; i < n; ++i) {
            const double x = uniform(rng, roi.x_min, roi.x_max);
            const double y = uniform(rng, roi.y_min, roi.y_max);
            const double z = terrain.ground_z(x, y) +
                             terrain.noise_sigma * gaussian(rng);
            push_point(scene.cloud, scene.is_ground, roi, x, y, z, 0.3, true);
        }
    }

    if (terrain.ring) {
        const RingSampling& ring = *terrain.ring;
        const int per_ring =
            static_cast<int>(std::floor(360.0 / ring.angular_step_deg));
        for (int b = 0; b < ring.beams; ++b) {
            const double t =
                ring.beams > 1 ? static_cast<double>(b) / (ring.beams - 1) : 0.0;
            const double elevation =
                (ring.min_elevation_deg +
                 t * (ring.max_elevation_deg - ring.min_elevation_deg)) *
                kPi / 180.0;
            const double radius = ring.sensor_height / std::tan(elevation);
            for (int a = 0; a < per_ring; ++a) {
                const double phi = a * ring.angular_step_deg * kPi / 180.0;
                const double x = radius * std::cos(phi);
                const double y = radius * std::sin(phi);
                const double z = terrain.ground_z(x, y) +
                                 terrain.noise_sigma * gaussian(rng);
                push_point(scene.cloud, scene.is_ground, roi, x, y, z, 0.3,
                           true);
            }
        }
    }

    for (const Box3D& box : objects) {
        for (int i = 0; i < points_per_object; ++i) {
            double x, y, z;
            sample_box_surface(rng, box, x, y, z);
            push_point(scene.cloud, scene.is_ground, roi, x, y, z, 0.6, false);
        }
    }
    return scene;
}

AccuracyReport accuracy_report(const GroundSurface& gs, const PlaneModel& p,
                               const TerrainSpec& terrain,
                               double exclude_x_min, double exclude_x_max) {
    const GridSpec& s = gs.spec;
    AccuracyReport rep;
    double sum_sq_s = 0.0, sum_sq_p = 0.0;
    for (int i = 0; i < s.rows; ++i) {
        const double cx = s.cell_center_x(i);
        for (int j = 0; j < s.cols; ++j) {
            const std::size_t idx = s.index(i, j);
            if (!gs.valid[idx]) continue;
            const double cy = s.cell_center_y(j);
            const double truth = terrain.ground_z(cx, cy);

            const double err_p = plane_z(p, cx, cy) - truth;
            sum_sq_p += err_p * err_p;
            rep.plane_max = std::max(rep.plane_max, std::fabs(err_p));
            ++rep.plane_cells;

            if (cx >= exclude_x_min && cx <= exclude_x_max) continue;
            const double err_s = gs.ground_z[idx] - truth;
            sum_sq_s += err_s * err_s;
            rep.surface_max = std::max(rep.surface_max, std::fabs(err_s));
            ++rep.surface_cells;
        }
    }
    if (rep.surface_cells > 0) rep.surface_rms = std::sqrt(sum_sq_s / rep.surface_cells);
    if (rep.plane_cells > 0) rep.plane_rms = std::sqrt(sum_sq_p / rep.plane_cells);
    return rep;
}

}  // namespace gal
