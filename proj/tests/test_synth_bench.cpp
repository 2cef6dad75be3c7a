#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gal/bench.hpp"
#include "gal/io.hpp"
#include "gal/synth.hpp"

using namespace gal;

TEST_CASE("flat terrain with no noise is exactly flat") {
    TerrainSpec terrain;
    terrain.kind = TerrainSpec::Kind::Flat;
    terrain.z0 = -1.73;
    terrain.noise_sigma = 0.0;
    terrain.point_density = 5.0;
    const SceneSample scene = generate_scene(terrain, {}, RoiConfig{});
    REQUIRE(!scene.cloud.empty());
    const double expect = static_cast<float>(-1.73);
    for (const Point3& p : scene.cloud.points) CHECK(p.z == expect);
    CHECK(std::count(scene.is_ground.begin(), scene.is_ground.end(), 1) ==
          static_cast<long>(scene.cloud.size()));
}

TEST_CASE("step terrain with no noise has exactly two levels") {
    TerrainSpec terrain;
    terrain.kind = TerrainSpec::Kind::Step;
    terrain.z_low = -1.7;
    terrain.z_high = -1.2;
    terrain.step_x = 10.0;
    terrain.noise_sigma = 0.0;
    terrain.point_density = 5.0;
    const SceneSample scene = generate_scene(terrain, {}, RoiConfig{});
    std::set<double> levels;
    for (const Point3& p : scene.cloud.points) {
        levels.insert(p.z);
        CHECK(p.z == (p.x < 10.0 ? static_cast<double>(static_cast<float>(-1.7))
                                 : static_cast<double>(static_cast<float>(-1.2))));
    }
    CHECK(levels.size() == 2);
}

TEST_CASE("uniform density delivers the expected point budget") {
    TerrainSpec terrain;
    terrain.point_density = 10.0;
    terrain.noise_sigma = 0.0;
    terrain.z0 = -1.73;
    const SceneSample scene = generate_scene(terrain, {}, RoiConfig{});
    // 10 pts/m^2 over 100 m x 60 m
    CHECK(std::llabs(static_cast<long long>(scene.cloud.size()) - 60000) <= 1200);
}

TEST_CASE("generation is bit-identical per seed") {
    TerrainSpec terrain;
    terrain.kind = TerrainSpec::Kind::Slope;
    terrain.gx = 0.02;
    terrain.seed = 77;
    Box3D box;
    box.x = 10;
    box.y = 0;
    box.z = -1.0;
    box.l = 3.9;
    box.w = 1.6;
    box.h = 1.56;
    const SceneSample a = generate_scene(terrain, {box}, RoiConfig{});
    const SceneSample b = generate_scene(terrain, {box}, RoiConfig{});
    REQUIRE(a.cloud.size() == b.cloud.size());
    for (std::size_t i = 0; i < a.cloud.size(); ++i) {
        REQUIRE(a.cloud.points[i].x == b.cloud.points[i].x);
        REQUIRE(a.cloud.points[i].y == b.cloud.points[i].y);
        REQUIRE(a.cloud.points[i].z == b.cloud.points[i].z);
    }
    CHECK(a.is_ground == b.is_ground);
}

TEST_CASE("object points are labeled non-ground and sit on the box") {
    TerrainSpec terrain;
    terrain.point_density = 2.0;
    Box3D box;
    box.x = 10;
    box.y = 5;
    box.z = -0.92;
    box.l = 3.9;
    box.w = 1.6;
    box.h = 1.56;
    box.theta = 0.5;
    const SceneSample scene = generate_scene(terrain, {box}, RoiConfig{}, 256);
    std::size_t object_points = 0;
    for (std::size_t i = 0; i < scene.cloud.size(); ++i) {
        if (scene.is_ground[i]) continue;
        ++object_points;
        const Point3& p = scene.cloud.points[i];
        CHECK(std::hypot(p.x - box.x, p.y - box.y) <=
              std::hypot(box.l, box.w) / 2 + 1e-6);
        CHECK(p.z <= box.z + box.h / 2 + 1e-6);
        CHECK(p.z >= box.z - box.h / 2 - 1e-6);
    }
    CHECK(object_points == 256);
}

TEST_CASE("overlapping objects are rejected") {
    TerrainSpec terrain;
    Box3D a;
    a.l = a.w = a.h = 2.0;
    Box3D b = a;
    b.x = 0.5;
    CHECK_THROWS_AS(generate_scene(terrain, {a, b}, RoiConfig{}),
                    std::invalid_argument);
}

TEST_CASE("ring sampling concentrates points near the sensor") {
    TerrainSpec terrain;
    terrain.point_density = 0.0;
    terrain.ring = RingSampling{};  // radii h / tan(el), el in [2, 25] deg
    terrain.noise_sigma = 0.0;
    const SceneSample scene = generate_scene(terrain, {}, RoiConfig{});
    REQUIRE(scene.cloud.size() > 10000);
    std::size_t near = 0, far = 0;
    for (const Point3& p : scene.cloud.points) {
        (std::hypot(p.x, p.y) < 15.0 ? near : far)++;
    }
    CHECK(near > far);
}

TEST_CASE("accuracy report on an exact flat scene") {
    TerrainSpec terrain;
    terrain.z0 = -1.73;
    terrain.noise_sigma = 0.0;
    terrain.point_density = 20.0;
    const SceneSample scene = generate_scene(terrain, {}, RoiConfig{});
    const GridSpec spec = GridSpec::from_roi(RoiConfig{}, 0.1);
    const GroundSurface gs =
        estimate_surface(build_height_map(scene.cloud, spec), FilterConfig{});
    const PlaneModel flat{0.0, 0.0, 1.0, 1.73};
    const AccuracyReport rep = accuracy_report(gs, flat, terrain);
    CHECK(rep.surface_cells > 0);
    CHECK(rep.surface_rms <= 0.01);  // f32 quantization only
    CHECK(rep.plane_rms <= 0.01);
}

TEST_CASE("any plane misses a crown by at least half the peak") {
    TerrainSpec terrain;
    terrain.kind = TerrainSpec::Kind::Crown;
    terrain.z0 = -1.7;
    terrain.crown_peak = 0.4;
    terrain.crown_half_width = 8.0;
    terrain.point_density = 20.0;
    terrain.seed = 5;
    RoiConfig roi;
    roi.y_min = -8.0;  // keep the scene on the crowned road itself
    roi.y_max = 8.0;
    const SceneSample scene = generate_scene(terrain, {}, roi);
    const GridSpec spec = GridSpec::from_roi(roi, 0.1);
    const GroundSurface gs =
        estimate_surface(build_height_map(scene.cloud, spec), FilterConfig{});

    RansacConfig cfg;
    cfg.seed = 9;
    const PlaneFit fit = fit_plane_ransac(scene.cloud, cfg);
    const AccuracyReport rep = accuracy_report(gs, fit.model, terrain);
    CHECK(rep.plane_max >= 0.199);
    CHECK(rep.surface_rms < rep.plane_rms);
}

TEST_CASE("bench report is well-formed on a tiny cloud") {
    TerrainSpec terrain;
    terrain.point_density = 0.02;  // about 120 points
    const SceneSample scene = generate_scene(terrain, {}, RoiConfig{});
    const GridSpec spec = GridSpec::from_roi(RoiConfig{}, 0.5);
    const GroundBench bench =
        bench_ground(scene.cloud, spec, FilterConfig{}, RansacConfig{}, 5, 1);
    CHECK(bench.surface.median_ms > 0.0);
    CHECK(bench.plane.median_ms > 0.0);
    CHECK(bench.surface.p95_ms >= bench.surface.median_ms);
    CHECK(bench.plane.p95_ms >= bench.plane.median_ms);
    CHECK(bench.speedup > 0.0);
    CHECK(bench.surface.reps == 5);
    CHECK(bench.surface.cloud_size == scene.cloud.size());
}

TEST_CASE("object points far from footprints leave the surface untouched") {
    TerrainSpec terrain;
    terrain.z0 = -1.7;
    terrain.seed = 21;
    terrain.point_density = 15.0;
    Box3D box;
    box.x = 10;
    box.y = 5;
    box.z = -0.92;
    box.l = 3.9;
    box.w = 1.6;
    box.h = 1.56;

    const SceneSample bare = generate_scene(terrain, {}, RoiConfig{});
    const SceneSample with_box = generate_scene(terrain, {box}, RoiConfig{});
    // identical seeds draw identical ground points, objects append after
    REQUIRE(with_box.cloud.size() > bare.cloud.size());

    const GridSpec spec = GridSpec::from_roi(RoiConfig{}, 0.1);
    const FilterConfig f{1.5, 1.5};
    const GroundSurface a = estimate_surface(build_height_map(bare.cloud, spec), f);
    const GroundSurface b =
        estimate_surface(build_height_map(with_box.cloud, spec), f);

    // outside one window of the box footprint nothing may change
    const double margin = 1.5 + 0.2;
    for (int i = 0; i < spec.rows; ++i) {
        for (int j = 0; j < spec.cols; ++j) {
            const double cx = spec.cell_center_x(i);
            const double cy = spec.cell_center_y(j);
            if (std::fabs(cx - box.x) <= box.l / 2 + margin &&
                std::fabs(cy - box.y) <= box.l / 2 + margin) {
                continue;
            }
            const std::size_t k = spec.index(i, j);
            REQUIRE(b.valid[k] == a.valid[k]);
            if (a.valid[k]) REQUIRE(b.ground_z[k] == a.ground_z[k]);
        }
    }
}
