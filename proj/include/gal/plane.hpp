#pragma once

#include <cstdint>

#include "gal/cloud.hpp"
#include "gal/ground.hpp"

namespace gal {

// Single ground plane a*x + b*y + c*z + d = 0 with unit normal and c > 0
// (upward facing). The uniplanar comparator for the local surface method.
struct PlaneModel {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double d = 0.0;
};

struct RansacConfig {
    int iterations = 512;
    double inlier_threshold = 0.2;  // meters
    std::uint64_t seed = 0;

    void validate() const;
};

struct PlaneFit {
    PlaneModel model;
    std::uint64_t inliers = 0;
    int iterations = 0;
};

// RANSAC plane fit: samples point triples, keeps the hypothesis with the
// most inliers (first best wins), then refines it by least squares on its
// inliers. The refined model is returned only if it does not lose inliers.
// Deterministic given cfg.seed. Throws FitError on fewer than 3 points or
// when every sampled triple is degenerate.
PlaneFit fit_plane_ransac(const PointCloud& cloud, const RansacConfig& cfg);

// Ground height of the plane at (x, y): z = -(a*x + b*y + d) / c.
double plane_z(const PlaneModel& p, double x, double y);

// Same contract as ground-surface classification with ground_z taken from
// the plane; every point gets a label (a plane covers the whole BEV).
GroundLabels classify_points_plane(const PointCloud& cloud,
                                   const PlaneModel& p, double tau_g);

}  // namespace gal
