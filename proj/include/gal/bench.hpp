#pragma once

#include <string>

#include "gal/cloud.hpp"
#include "gal/ground.hpp"
#include "gal/plane.hpp"

namespace gal {

struct BenchReport {
    std::string method;
    double median_ms = 0.0;
    double p95_ms = 0.0;
    int reps = 0;
    std::size_t cloud_size = 0;
};

struct GroundBench {
    BenchReport surface;
    BenchReport plane;
    double speedup = 0.0;  // median plane time / median surface time
};

// Times the local surface estimate (height map + min filter, end to end)
// against the RANSAC plane fit on the same cloud: `warmup` discarded runs,
// then `reps` measured ones, single-threaded, monotonic clock, median and
// p95 reported.
GroundBench bench_ground(const PointCloud& cloud, const GridSpec& spec,
                         const FilterConfig& filter, const RansacConfig& ransac,
                         int reps = 50, int warmup = 5);

}  // namespace gal
