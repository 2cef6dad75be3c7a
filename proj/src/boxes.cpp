#include "gal/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gal {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSliverArea = 1e-12;  // m^2, below this counts as empty

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// shoelace area of a CCW polygon
double polygon_area(const Vec2* poly, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    return 0.5 * acc;
}

// Sutherland-Hodgman clip of CCW polygon `subject` against the CCW convex
// polygon `clip`. Two rectangles intersect in at most 8 vertices; the
// buffers leave slack for the intermediate stages.
int clip_polygon(const Vec2* subject, int n, const Vec2* clip, int m,
                 Vec2* out) {
    Vec2 bufs[2][16];
    int count = n;
    for (int i = 0; i < n; ++i) bufs[0][i] = subject[i];
    int cur = 0;

    for (int e = 0; e < m && count > 0; ++e) {
        const Vec2& cp = clip[e];
        const Vec2& cq = clip[(e + 1) % m];
        const Vec2* in = bufs[cur];
        Vec2* next = bufs[cur ^ 1];
        int next_count = 0;

        for (int i = 0; i < count; ++i) {
            const Vec2& s = in[i];
            const Vec2& t = in[(i + 1) % count];
            const bool s_in = cross(cp, cq, s) >= 0.0;
            const bool t_in = cross(cp, cq, t) >= 0.0;
            if (s_in != t_in) {
                // edge crosses the clip line; parametric intersection
                const double dx = cq.x - cp.x;
                const double dy = cq.y - cp.y;
                const double num = dx * (s.y - cp.y) - dy * (s.x - cp.x);
                const double den = dy * (t.x - s.x) - dx * (t.y - s.y);
                const double u = den != 0.0 ? num / den : 0.0;
                next[next_count++] = {s.x + u * (t.x - s.x),
                                      s.y + u * (t.y - s.y)};
            }
            if (t_in) next[next_count++] = t;
        }
        cur ^= 1;
        count = next_count;
    }
    for (int i = 0; i < count; ++i) out[i] = bufs[cur][i];
    return count;
}

double intersection_area(const Box3D& a, const Box3D& b) {
    Vec2 ca[4], cb[4], poly[16];
    footprint_corners(a, ca);
    footprint_corners(b, cb);
    const int n = clip_polygon(ca, 4, cb, 4, poly);
    if (n < 3) return 0.0;
    const double area = polygon_area(poly, n);
    return area < kSliverArea ? 0.0 : area;
}

bool axis_aligned(double theta) {
    return theta == 0.0 || theta == kPi / 2 || theta == -kPi / 2 ||
           theta == -kPi;
}

}  // namespace

double normalize_angle(double theta) {
    if (theta >= -kPi && theta < kPi) return theta;  // already normalized
    double t = std::fmod(theta + kPi, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    return t - kPi;
}

void Box3D::validate() const {
    if (!(l > 0.0) || !(w > 0.0) || !(h > 0.0)) {
        throw std::invalid_argument("Box3D: l, w, h must be positive");
    }
}

void footprint_corners(const Box3D& b, Vec2 out[4]) {
    const double c = std::cos(b.theta);
    const double s = std::sin(b.theta);
    const double lx = c * b.l * 0.5, ly = s * b.l * 0.5;    // half-length axis
    const double wx = -s * b.w * 0.5, wy = c * b.w * 0.5;   // half-width axis
    out[0] = {b.x + lx + wx, b.y + ly + wy};
    out[1] = {b.x - lx + wx, b.y - ly + wy};
    out[2] = {b.x - lx - wx, b.y - ly - wy};
    out[3] = {b.x + lx - wx, b.y + ly - wy};
}

double iou_bev(const Box3D& a, const Box3D& b) {
    const double inter = intersection_area(a, b);
    if (inter <= 0.0) return 0.0;
    const double uni = a.l * a.w + b.l * b.w - inter;
    return inter / uni;
}

double iou_3d(const Box3D& a, const Box3D& b) {
    const double inter_bev = intersection_area(a, b);
    if (inter_bev <= 0.0) return 0.0;
    const double z_lo = std::max(a.z - a.h * 0.5, b.z - b.h * 0.5);
    const double z_hi = std::min(a.z + a.h * 0.5, b.z + b.h * 0.5);
    const double dz = z_hi - z_lo;
    if (dz <= 0.0) return 0.0;
    const double inter = inter_bev * dz;
    const double uni = a.l * a.w * a.h + b.l * b.w * b.h - inter;
    return inter / uni;
}

std::vector<int> nms(const std::vector<Box3D>& boxes,
                     const std::vector<double>& scores, double iou_threshold,
                     std::size_t top_n) {
    if (boxes.size() != scores.size()) {
        throw std::invalid_argument("nms: boxes and scores length mismatch");
    }
    std::vector<int> order(boxes.size());
    std::iota(order.begin(), order.end(), 0);
    // equal scores break ties toward the lower index for determinism
    std::stable_sort(order.begin(), order.end(), [&scores](int a, int b) {
        return scores[a] > scores[b];
    });

    std::vector<int> kept;
    for (int idx : order) {
        if (kept.size() >= top_n) break;
        bool suppressed = false;
        for (int k : kept) {
            if (iou_bev(boxes[idx], boxes[k]) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(idx);
    }
    return kept;
}

std::vector<DetMatch> match_detections(const std::vector<Box3D>& dets,
                                       const std::vector<Box3D>& gts,
                                       double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw std::invalid_argument("match_detections: tau must be in (0, 1)");
    }
    struct Pair {
        double iou;
        int det;
        int gt;
    };
    std::vector<Pair> pairs;
    for (int d = 0; d < static_cast<int>(dets.size()); ++d) {
        for (int g = 0; g < static_cast<int>(gts.size()); ++g) {
            const double iou = iou_bev(dets[d], gts[g]);
            if (iou > 0.0) pairs.push_back({iou, d, g});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.det != b.det) return a.det < b.det;
        return a.gt < b.gt;
    });

    std::vector<DetMatch> out(dets.size());
    std::vector<std::uint8_t> gt_used(gts.size(), 0);
    for (const Pair& p : pairs) {
        if (out[p.det].gt >= 0 || gt_used[p.gt]) continue;
        out[p.det].gt = p.gt;
        out[p.det].iou = p.iou;
        out[p.det].tp = p.iou >= tau;
        gt_used[p.gt] = 1;
    }
    return out;
}

Box4CA box3d_to_4ca(const Box3D& b) {
    b.validate();
    if (!axis_aligned(b.theta)) {
        throw std::invalid_argument(
            "box3d_to_4ca: corner encoding carries no yaw, box must be "
            "axis-aligned (theta in {0, +-pi/2, -pi})");
    }
    const bool swapped = b.theta == kPi / 2 || b.theta == -kPi / 2;
    const double hx = (swapped ? b.w : b.l) * 0.5;
    const double hy = (swapped ? b.l : b.w) * 0.5;
    return Box4CA{b.x - hx, b.y - hy, b.x + hx, b.y + hy,
                  b.z + b.h * 0.5, b.z - b.h * 0.5};
}

Box3D ca4_to_box3d(const Box4CA& c, double theta) {
    if (!axis_aligned(theta)) {
        throw std::invalid_argument(
            "ca4_to_box3d: theta must be axis-aligned (0, +-pi/2, -pi)");
    }
    if (!(c.h1 > c.h2) || !(c.x2 > c.x1) || !(c.y2 > c.y1)) {
        throw std::invalid_argument("ca4_to_box3d: corners out of order");
    }
    const bool swapped = theta == kPi / 2 || theta == -kPi / 2;
    Box3D b;
    b.x = (c.x1 + c.x2) * 0.5;
    b.y = (c.y1 + c.y2) * 0.5;
    b.z = (c.h1 + c.h2) * 0.5;
    b.l = swapped ? c.y2 - c.y1 : c.x2 - c.x1;
    b.w = swapped ? c.x2 - c.x1 : c.y2 - c.y1;
    b.h = c.h1 - c.h2;
    b.theta = theta;
    return b;
}

OrientationCode encode_orientation(double theta) {
    OrientationCode code;
    code.cx = std::cos(theta);
    code.cy = std::sin(theta);
    code.dir = (theta > -kPi / 2 && theta <= kPi / 2) ? 1 : 0;
    return code;
}

double decode_orientation(const OrientationCode& code) {
    return std::atan2(code.cy, code.cx);
}

}  // namespace gal
