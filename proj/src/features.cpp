#include "gal/features.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gal {

void FeatureConfig::validate() const {
    if (num_slices < 1) {
        throw std::invalid_argument("FeatureConfig: num_slices must be >= 1");
    }
    if (!(slice_span > 0.0)) {
        throw std::invalid_argument("FeatureConfig: slice_span must be positive");
    }
}

BevFeatures extract_features(const PointCloud& cloud, const GroundSurface& gs,
                             const FeatureConfig& cfg) {
    cfg.validate();
    const GridSpec& s = gs.spec;
    const int m = cfg.num_slices;
    const double width = cfg.slice_span / m;

    BevFeatures f;
    f.spec = s;
    f.num_slices = m;
    f.slices.assign(static_cast<std::size_t>(m) * s.cell_count(), 0.0f);
    f.density.assign(s.cell_count(), 0.0f);

    // accumulate in double; the stored planes are f32
    std::vector<double> acc(f.slices.size(), 0.0);
    std::vector<std::uint32_t> counts(s.cell_count(), 0);

    for (const Point3& p : cloud.points) {
        const int i = static_cast<int>(std::floor((p.x - s.x_min) / s.cell_size));
        const int j = static_cast<int>(std::floor((p.y - s.y_min) / s.cell_size));
        if (i < 0 || i >= s.rows || j < 0 || j >= s.cols) continue;
        const std::size_t cell = s.index(i, j);
        if (!gs.valid[cell]) continue;  // no ground estimate, no features

        ++counts[cell];  // below-ground returns still count here
        const double z_rel = p.z - gs.ground_z[cell];
        if (z_rel < 0.0) continue;
        const int slice = static_cast<int>(std::floor(z_rel / width));
        if (slice >= m) continue;  // above the covered span
        const double v = (z_rel - slice * width) / width;
        double& slot = acc[static_cast<std::size_t>(slice) * s.cell_count() + cell];
        if (v > slot) slot = v;
    }

    const double log64 = std::log(64.0);
    for (std::size_t k = 0; k < acc.size(); ++k) {
        f.slices[k] = static_cast<float>(acc[k]);
    }
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0) {
            f.density[k] = static_cast<float>(
                std::min(1.0, std::log(1.0 + counts[k]) / log64));
        }
    }
    return f;
}

}  // namespace gal
