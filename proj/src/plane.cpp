#include "gal/plane.hpp"

#include <cmath>
#include <stdexcept>

#include "gal/error.hpp"
#include "gal/rng.hpp"

namespace gal {

namespace {

constexpr double kDegenerateArea = 1e-9;  // m^2, triple rejection threshold

struct Candidate {
    double a, b, c, d;
};

bool plane_from_triple(const Point3& p1, const Point3& p2, const Point3& p3,
                       Candidate& out) {
    const double ux = p2.x - p1.x, uy = p2.y - p1.y, uz = p2.z - p1.z;
    const double vx = p3.x - p1.x, vy = p3.y - p1.y, vz = p3.z - p1.z;
    double nx = uy * vz - uz * vy;
    double ny = uz * vx - ux * vz;
    double nz = ux * vy - uy * vx;
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (norm * 0.5 < kDegenerateArea) return false;  // collinear-ish triple
    nx /= norm;
    ny /= norm;
    nz /= norm;
    if (nz == 0.0) return false;  // vertical plane cannot face upward
    if (nz < 0.0) {
        nx = -nx;
        ny = -ny;
        nz = -nz;
    }
    out = {nx, ny, nz, -(nx * p1.x + ny * p1.y + nz * p1.z)};
    return true;
}

std::uint64_t count_inliers(const PointCloud& cloud, const Candidate& m,
                            double threshold) {
    std::uint64_t count = 0;
    for (const Point3& p : cloud.points) {
        const double dist = m.a * p.x + m.b * p.y + m.c * p.z + m.d;
        if (std::fabs(dist) <= threshold) ++count;
    }
    return count;
}

// Least-squares z = alpha*x + beta*y + gamma on the model's inliers,
// solved on centered coordinates. Returns false when the inlier footprint
// is degenerate (near-singular normal equations).
bool refine_on_inliers(const PointCloud& cloud, const Candidate& m,
                       double threshold, Candidate& out) {
    double sx = 0, sy = 0, sz = 0;
    std::uint64_t n = 0;
    for (const Point3& p : cloud.points) {
        if (std::fabs(m.a * p.x + m.b * p.y + m.c * p.z + m.d) <= threshold) {
            sx += p.x;
            sy += p.y;
            sz += p.z;
            ++n;
        }
    }
    if (n < 3) return false;
    const double cx = sx / n, cy = sy / n, cz = sz / n;

    double sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0;
    for (const Point3& p : cloud.points) {
        if (std::fabs(m.a * p.x + m.b * p.y + m.c * p.z + m.d) <= threshold) {
            const double dx = p.x - cx, dy = p.y - cy, dz = p.z - cz;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
            sxz += dx * dz;
            syz += dy * dz;
        }
    }
    const double det = sxx * syy - sxy * sxy;
    if (std::fabs(det) < 1e-12) return false;
    const double alpha = (sxz * syy - syz * sxy) / det;
    const double beta = (syz * sxx - sxz * sxy) / det;

    // z = cz + alpha (x - cx) + beta (y - cy), normalized with c > 0
    const double norm = std::sqrt(alpha * alpha + beta * beta + 1.0);
    out.a = -alpha / norm;
    out.b = -beta / norm;
    out.c = 1.0 / norm;
    out.d = -(cz - alpha * cx - beta * cy) / norm;
    return true;
}

}  // namespace

void RansacConfig::validate() const {
    if (iterations < 1) {
        throw std::invalid_argument("RansacConfig: iterations must be >= 1");
    }
    if (!(inlier_threshold > 0.0)) {
        throw std::invalid_argument("RansacConfig: inlier_threshold must be > 0");
    }
}

PlaneFit fit_plane_ransac(const PointCloud& cloud, const RansacConfig& cfg) {
    cfg.validate();
    const std::size_t n = cloud.points.size();
    if (n < 3) throw FitError("fit_plane_ransac: need at least 3 points");

    Rng rng(cfg.seed);
    Candidate best{};
    std::uint64_t best_count = 0;
    bool have_best = false;

    for (int it = 0; it < cfg.iterations; ++it) {
        const std::size_t i = bounded(rng, n);
        const std::size_t j = bounded(rng, n);
        const std::size_t k = bounded(rng, n);
        if (i == j || j == k || i == k) continue;
        Candidate cand;
        if (!plane_from_triple(cloud.points[i], cloud.points[j],
                               cloud.points[k], cand)) {
            continue;
        }
        const std::uint64_t count =
            count_inliers(cloud, cand, cfg.inlier_threshold);
        if (!have_best || count > best_count) {  // first best wins on ties
            best = cand;
            best_count = count;
            have_best = true;
        }
    }
    if (!have_best) {
        throw FitError("fit_plane_ransac: every sampled triple was degenerate");
    }

    Candidate refined;
    if (refine_on_inliers(cloud, best, cfg.inlier_threshold, refined)) {
        const std::uint64_t refined_count =
            count_inliers(cloud, refined, cfg.inlier_threshold);
        // keep the invariant that the returned plane beats every hypothesis
        if (refined_count >= best_count) {
            best = refined;
            best_count = refined_count;
        }
    }

    PlaneFit fit;
    fit.model = {best.a, best.b, best.c, best.d};
    fit.inliers = best_count;
    fit.iterations = cfg.iterations;
    return fit;
}

double plane_z(const PlaneModel& p, double x, double y) {
    return -(p.a * x + p.b * y + p.d) / p.c;
}

GroundLabels classify_points_plane(const PointCloud& cloud,
                                   const PlaneModel& p, double tau_g) {
    GroundLabels labels;
    labels.tau_g = tau_g;
    labels.ground.assign(cloud.points.size(), 0);
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const Point3& pt = cloud.points[i];
        if (pt.z <= plane_z(p, pt.x, pt.y) + tau_g) labels.ground[i] = 1;
    }
    return labels;
}

}  // namespace gal
