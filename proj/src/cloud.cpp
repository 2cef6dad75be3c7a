#include "gal/cloud.hpp"

#include <stdexcept>

namespace gal {

void RoiConfig::validate() const {
    if (!(x_min < x_max) || !(y_min < y_max) || !(z_min < z_max)) {
        throw std::invalid_argument("RoiConfig: min must be < max on every axis");
    }
}

PointCloud crop_roi(const PointCloud& cloud, const RoiConfig& roi) {
    roi.validate();
    PointCloud out;
    out.source_id = cloud.source_id;
    out.points.reserve(cloud.points.size());
    for (const Point3& p : cloud.points) {
        if (roi.contains(p)) out.points.push_back(p);
    }
    return out;
}

}  // namespace gal
