#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gal/boxes.hpp"
#include "gal/cloud.hpp"
#include "gal/ground.hpp"
#include "gal/plane.hpp"

namespace gal {

// Spinning-lidar style sampling: one ring of ground hits per beam, beams
// evenly spread in elevation, points every angular_step_deg of azimuth.
// Ring radii follow sensor_height / tan(elevation), so returns concentrate
// near the sensor the way real scans do.
struct RingSampling {
    int beams = 64;
    double angular_step_deg = 0.2;
    double sensor_height = 1.73;
    double min_elevation_deg = 2.0;
    double max_elevation_deg = 25.0;
};

// Analytic terrain used as the test oracle: the generator samples it and
// hands the spec back so estimation error can be measured exactly.
struct TerrainSpec {
    enum class Kind { Flat, Slope, Crown, Step };

    Kind kind = Kind::Flat;
    double z0 = -1.73;  // flat height; slope offset; crown base
    double gx = 0.0;    // slope gradients
    double gy = 0.0;
    double crown_peak = 0.3;  // parabolic crown across y
    double crown_half_width = 8.0;
    double z_low = -1.7;  // step terrace heights, step at x = step_x
    double z_high = -1.2;
    double step_x = 0.0;

    double point_density = 20.0;  // uniform layer, points / m^2 (0 = off)
    std::optional<RingSampling> ring;
    double noise_sigma = 0.02;  // vertical jitter, meters
    std::uint64_t seed = 0;

    double ground_z(double x, double y) const;
    void validate() const;
};

struct SceneSample {
    PointCloud cloud;
    std::vector<std::uint8_t> is_ground;  // truth label per point
    std::vector<Box3D> boxes;             // the objects actually placed
    TerrainSpec terrain;
};

// Samples ground points on the terrain (uniform layer and/or rings) plus
// surface points on each object box, all inside the ROI, deterministic per
// seed. Coordinates are quantized to f32 values so clouds survive the
// sensor file format bit-exactly. Overlapping objects (positive BEV IoU)
// raise std::invalid_argument.
SceneSample generate_scene(const TerrainSpec& terrain,
                           const std::vector<Box3D>& objects,
                           const RoiConfig& roi, int points_per_object = 512);

struct AccuracyReport {
    double surface_rms = 0.0;
    double surface_max = 0.0;
    double plane_rms = 0.0;
    double plane_max = 0.0;
    std::size_t surface_cells = 0;  // valid cells scored per method
    std::size_t plane_cells = 0;
};

// Errors of both estimates against the analytic terrain, evaluated at the
// valid cells of gs (cell centers). Cells with cell_center_x inside
// [exclude_x_min, exclude_x_max] are left out of the surface score only
// (used to skip the discontinuity band of a step); pass an empty interval
// to score everything.
AccuracyReport accuracy_report(const GroundSurface& gs, const PlaneModel& p,
                               const TerrainSpec& terrain,
                               double exclude_x_min = 1.0,
                               double exclude_x_max = -1.0);

}  // namespace gal
