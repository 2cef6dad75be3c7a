#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gal {

// Sensor-frame lidar return: x forward, y left, z up, meters.
// Intensity is parsed and carried through every stage but no algorithm in
// this library reads it.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double intensity = 0.0;
};

struct PointCloud {
    std::vector<Point3> points;
    std::string source_id;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

// Crop box, half-open [min, max) on every axis so each point lands in
// exactly one cell after binning.
struct RoiConfig {
    double x_min = -50.0;
    double x_max = 50.0;
    double y_min = -30.0;
    double y_max = 30.0;
    double z_min = -3.0;
    double z_max = 3.0;

    // throws std::invalid_argument unless min < max on every axis
    void validate() const;

    bool contains(const Point3& p) const {
        return p.x >= x_min && p.x < x_max && p.y >= y_min && p.y < y_max &&
               p.z >= z_min && p.z < z_max;
    }
};

// Keeps exactly the points inside the box, order preserved. Idempotent.
PointCloud crop_roi(const PointCloud& cloud, const RoiConfig& roi);

}  // namespace gal
