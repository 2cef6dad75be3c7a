#include "gal/bench.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <vector>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace {

// The pipelines under test allocate multi-megabyte grids per run. By
// default glibc hands such blocks back to the kernel on free, so every
// repetition pays page faults and kernel zeroing instead of the
// algorithm's own cost. Pin the thresholds once so freed grids are reused
// and the comparison measures compute, like the single-thread pinning.
void stabilize_allocator() {
#if defined(__GLIBC__)
    static const bool done = [] {
        mallopt(M_TRIM_THRESHOLD, 256 * 1024 * 1024);
        mallopt(M_MMAP_THRESHOLD, 256 * 1024 * 1024);
        return true;
    }();
    (void)done;
#endif
}

}  // namespace

namespace gal {

namespace {

using Clock = std::chrono::steady_clock;

double percentile(std::vector<double>& samples, double q) {
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    if (n == 1) return samples[0];
    if (q >= 1.0) return samples.back();
    const std::size_t idx = static_cast<std::size_t>(
        std::min<double>(n - 1.0, std::max(0.0, q * n - 0.5)));
    return samples[idx];
}

template <typename F>
std::vector<double> time_ms(F&& fn, int reps, int warmup) {
    for (int i = 0; i < warmup; ++i) fn();
    std::vector<double> out;
    out.reserve(reps);
    for (int i = 0; i < reps; ++i) {
        const auto t0 = Clock::now();
        fn();
        const auto t1 = Clock::now();
        out.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return out;
}

BenchReport summarize(const std::string& method, std::vector<double> samples,
                      std::size_t cloud_size) {
    BenchReport rep;
    rep.method = method;
    rep.reps = static_cast<int>(samples.size());
    rep.cloud_size = cloud_size;
    std::vector<double> sorted = samples;
    rep.median_ms = percentile(sorted, 0.5);
    rep.p95_ms = percentile(sorted, 0.95);
    return rep;
}

}  // namespace

GroundBench bench_ground(const PointCloud& cloud, const GridSpec& spec,
                         const FilterConfig& filter, const RansacConfig& ransac,
                         int reps, int warmup) {
    if (reps < 1) throw std::invalid_argument("bench_ground: reps must be >= 1");
    if (warmup < 0) throw std::invalid_argument("bench_ground: warmup must be >= 0");
    stabilize_allocator();

    // the full grid pipeline per rep: binning, height map, min filter
    volatile double sink = 0.0;
    auto surface_run = [&] {
        const HeightMap hm = build_height_map(cloud, spec);
        const GroundSurface gs = estimate_surface(hm, filter);
        sink = sink + gs.ground_z[0];
    };
    auto plane_run = [&] {
        const PlaneFit fit = fit_plane_ransac(cloud, ransac);
        sink = sink + fit.model.d;
    };

    GroundBench bench;
    bench.surface =
        summarize("ground-surface", time_ms(surface_run, reps, warmup),
                  cloud.size());
    bench.plane = summarize("ransac-plane", time_ms(plane_run, reps, warmup),
                            cloud.size());
    bench.speedup = bench.plane.median_ms / bench.surface.median_ms;
    return bench;
}

}  // namespace gal
