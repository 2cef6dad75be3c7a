#pragma once

#include <cstddef>
#include <vector>

namespace gal {

// wraps an angle into [-pi, pi)
double normalize_angle(double theta);

// Oriented 3D box: center (x,y,z), dimensions l,w,h (> 0), yaw theta about
// the vertical axis, normalized to [-pi, pi).
struct Box3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double l = 1.0;
    double w = 1.0;
    double h = 1.0;
    double theta = 0.0;

    // throws std::invalid_argument on non-positive dimensions
    void validate() const;
};

// Compact corner encoding {x1,y1,x2,y2,h1,h2}: min/max footprint corners
// plus top (h1) and bottom (h2) heights. Carries no yaw, so only
// axis-aligned boxes round-trip through it.
struct Box4CA {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;
    double h1 = 0.0;  // top, h1 > h2
    double h2 = 0.0;  // bottom
};

// Yaw regression target: unit vector (cos theta, sin theta) plus a binary
// front/back direction class.
struct OrientationCode {
    double cx = 1.0;
    double cy = 0.0;
    int dir = 1;  // 1 iff theta in (-pi/2, pi/2]
};

// BEV footprint corners in CCW order
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};
void footprint_corners(const Box3D& b, Vec2 out[4]);

// Rotated-rectangle intersection over union of the two footprints.
// Exact convex clipping; slivers below 1e-12 m^2 count as empty.
double iou_bev(const Box3D& a, const Box3D& b);

// BEV intersection area times vertical overlap, over the volume union.
double iou_3d(const Box3D& a, const Box3D& b);

// Greedy NMS: boxes sorted by descending score (ties broken by lower
// index), a box is suppressed when iou_bev with any kept box exceeds
// iou_threshold. Returns kept indices, at most top_n.
std::vector<int> nms(const std::vector<Box3D>& boxes,
                     const std::vector<double>& scores, double iou_threshold,
                     std::size_t top_n);

struct DetMatch {
    int gt = -1;       // matched ground-truth index, -1 if unmatched
    double iou = 0.0;  // IoU of the match
    bool tp = false;   // matched with IoU >= tau
};

// Greedy one-to-one matching by descending BEV IoU. tau must be in (0,1).
std::vector<DetMatch> match_detections(const std::vector<Box3D>& dets,
                                       const std::vector<Box3D>& gts,
                                       double tau);

// Conversions between the 7-value box and the corner encoding. Both ends
// require an axis-aligned yaw (one of 0, +-pi/2, -pi after normalization)
// and throw std::invalid_argument otherwise.
Box4CA box3d_to_4ca(const Box3D& b);
Box3D ca4_to_box3d(const Box4CA& c, double theta);

OrientationCode encode_orientation(double theta);
double decode_orientation(const OrientationCode& code);

}  // namespace gal
