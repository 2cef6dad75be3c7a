#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "gal/boxes.hpp"
#include "gal/rng.hpp"

using namespace gal;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Box3D make_box(double x, double y, double l, double w, double theta) {
    Box3D b;
    b.x = x;
    b.y = y;
    b.z = 0.0;
    b.l = l;
    b.w = w;
    b.h = 1.0;
    b.theta = theta;
    return b;
}

Box3D random_box(Rng& rng) {
    return make_box(uniform(rng, -5, 5), uniform(rng, -5, 5),
                    uniform(rng, 0.5, 4.0), uniform(rng, 0.5, 4.0),
                    uniform(rng, -kPi, kPi));
}

// hit-counting area estimator over the joint bounding box
double monte_carlo_iou(const Box3D& a, const Box3D& b, int samples,
                       std::uint64_t seed) {
    Vec2 ca[4], cb[4];
    footprint_corners(a, ca);
    footprint_corners(b, cb);
    double x0 = ca[0].x, x1 = ca[0].x, y0 = ca[0].y, y1 = ca[0].y;
    for (int i = 0; i < 4; ++i) {
        x0 = std::min({x0, ca[i].x, cb[i].x});
        x1 = std::max({x1, ca[i].x, cb[i].x});
        y0 = std::min({y0, ca[i].y, cb[i].y});
        y1 = std::max({y1, ca[i].y, cb[i].y});
    }
    auto inside = [](const Box3D& box, double px, double py) {
        const double c = std::cos(box.theta), s = std::sin(box.theta);
        const double dx = px - box.x, dy = py - box.y;
        const double u = c * dx + s * dy;
        const double v = -s * dx + c * dy;
        return std::fabs(u) <= box.l * 0.5 && std::fabs(v) <= box.w * 0.5;
    };
    Rng rng(seed);
    long in_a = 0, in_b = 0, in_both = 0;
    for (int i = 0; i < samples; ++i) {
        const double px = uniform(rng, x0, x1);
        const double py = uniform(rng, y0, y1);
        const bool ia = inside(a, px, py);
        const bool ib = inside(b, px, py);
        in_a += ia;
        in_b += ib;
        in_both += ia && ib;
    }
    const long uni = in_a + in_b - in_both;
    return uni > 0 ? static_cast<double>(in_both) / uni : 0.0;
}

}  // namespace

TEST_CASE("angle normalization wraps into [-pi, pi)") {
    CHECK(normalize_angle(0.0) == 0.0);
    CHECK(normalize_angle(kPi) == -kPi);
    CHECK(normalize_angle(-kPi) == -kPi);
    CHECK(normalize_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(normalize_angle(-5 * kPi / 2) == doctest::Approx(-kPi / 2));
}

TEST_CASE("bev iou analytic cases") {
    const Box3D a = make_box(0, 0, 2, 2, 0.3);
    CHECK(iou_bev(a, a) == doctest::Approx(1.0).epsilon(1e-9));

    const Box3D far_box = make_box(10, 0, 2, 2, 0.0);
    CHECK(iou_bev(make_box(0, 0, 2, 2, 0), far_box) == 0.0);

    // two unit squares offset by half: intersection 0.5, union 1.5
    const Box3D u1 = make_box(0, 0, 1, 1, 0);
    const Box3D u2 = make_box(0.5, 0, 1, 1, 0);
    CHECK(iou_bev(u1, u2) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("bev iou is symmetric, rotation-equivariant, translation-invariant") {
    Rng rng(41);
    for (int t = 0; t < 50; ++t) {
        Box3D a = random_box(rng);
        Box3D b = random_box(rng);
        const double iou = iou_bev(a, b);
        CHECK(iou_bev(b, a) == doctest::Approx(iou).epsilon(1e-12));

        const double yaw = uniform(rng, -kPi, kPi);
        const double c = std::cos(yaw), s = std::sin(yaw);
        auto spin = [&](Box3D box) {
            const double x = box.x, y = box.y;
            box.x = c * x - s * y;
            box.y = s * x + c * y;
            box.theta = normalize_angle(box.theta + yaw);
            return box;
        };
        CHECK(iou_bev(spin(a), spin(b)) == doctest::Approx(iou).epsilon(1e-9));

        const double dx = uniform(rng, -20, 20), dy = uniform(rng, -20, 20);
        Box3D at = a, bt = b;
        at.x += dx;
        at.y += dy;
        bt.x += dx;
        bt.y += dy;
        CHECK(iou_bev(at, bt) == doctest::Approx(iou).epsilon(1e-9));
    }
}

TEST_CASE("bev iou agrees with a monte-carlo estimate") {
    Rng rng(43);
    for (int t = 0; t < 10; ++t) {
        Box3D a = random_box(rng);
        Box3D b = random_box(rng);
        b.x = a.x + uniform(rng, -2, 2);  // keep many pairs overlapping
        b.y = a.y + uniform(rng, -2, 2);
        const double exact = iou_bev(a, b);
        const double mc = monte_carlo_iou(a, b, 200000, 500 + t);
        CHECK(std::fabs(exact - mc) < 0.02);
    }
}

TEST_CASE("3d iou analytic cases") {
    Box3D a = make_box(0, 0, 1, 1, 0);
    CHECK(iou_3d(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    Box3D b = a;
    b.z = 0.5;  // unit cubes offset by half a height
    CHECK(iou_3d(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    b.z = 2.0;  // no vertical overlap
    CHECK(iou_3d(a, b) == 0.0);
}

TEST_CASE("nms basics") {
    std::vector<Box3D> boxes{make_box(0, 0, 2, 2, 0)};
    std::vector<double> scores{0.5};
    CHECK(nms(boxes, scores, 0.5, 300) == std::vector<int>{0});

    boxes.push_back(make_box(0, 0, 2, 2, 0));
    scores = {0.8, 0.9};
    CHECK(nms(boxes, scores, 0.5, 300) == std::vector<int>{1});

    CHECK_THROWS_AS(nms(boxes, std::vector<double>{0.5}, 0.5, 300),
                    std::invalid_argument);
}

TEST_CASE("nms on disjoint boxes is a top-n sort") {
    Rng rng(47);
    std::vector<Box3D> boxes;
    std::vector<double> scores;
    for (int i = 0; i < 500; ++i) {
        const int gx = i % 25, gy = i / 25;
        boxes.push_back(make_box(gx * 10.0, gy * 10.0, 2, 2, uniform(rng, -kPi, kPi)));
        scores.push_back(uniform01(rng));
    }
    const std::vector<int> kept = nms(boxes, scores, 0.1, 300);
    REQUIRE(kept.size() == 300);

    std::vector<int> want(500);
    std::iota(want.begin(), want.end(), 0);
    std::sort(want.begin(), want.end(),
              [&](int a, int b) { return scores[a] > scores[b]; });
    want.resize(300);
    CHECK(kept == want);
}

TEST_CASE("nms ties break toward the lower index") {
    std::vector<Box3D> boxes{make_box(0, 0, 2, 2, 0), make_box(0.1, 0, 2, 2, 0)};
    std::vector<double> scores{0.7, 0.7};
    CHECK(nms(boxes, scores, 0.3, 10) == std::vector<int>{0});
}

TEST_CASE("nms kept set ignores input order for distinct scores") {
    Rng rng(53);
    std::vector<Box3D> boxes;
    std::vector<double> scores;
    for (int i = 0; i < 60; ++i) {
        boxes.push_back(random_box(rng));
        scores.push_back((i + 1) * 0.01);  // distinct
    }
    const std::vector<int> kept = nms(boxes, scores, 0.4, 60);

    std::vector<int> perm(60);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(3));
    std::vector<Box3D> boxes2(60);
    std::vector<double> scores2(60);
    for (int i = 0; i < 60; ++i) {
        boxes2[perm[i]] = boxes[i];
        scores2[perm[i]] = scores[i];
    }
    std::vector<int> kept2 = nms(boxes2, scores2, 0.4, 60);
    for (int& k : kept2) {
        k = static_cast<int>(std::find(perm.begin(), perm.end(), k) - perm.begin());
    }
    std::vector<int> a = kept, b = kept2;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("detection matching against the iou threshold") {
    const Box3D gt = make_box(5, 5, 4, 2, 0.4);

    SUBCASE("identical detection is a tp at 0.7") {
        const auto m = match_detections({gt}, {gt}, 0.7);
        REQUIRE(m.size() == 1);
        CHECK(m[0].tp);
        CHECK(m[0].gt == 0);
    }
    SUBCASE("an iou of 0.6 fails tau 0.7 but passes tau 0.5") {
        // unit squares offset by 0.25: 0.75 / 1.25 = 0.6
        const Box3D g = make_box(0, 0, 1, 1, 0);
        Box3D d = g;
        d.x = 0.25;
        CHECK(iou_bev(d, g) == doctest::Approx(0.6).epsilon(1e-9));
        CHECK_FALSE(match_detections({d}, {g}, 0.7)[0].tp);
        CHECK(match_detections({d}, {g}, 0.5)[0].tp);
    }
    SUBCASE("no ground truth means all detections are fp") {
        const auto m = match_detections({gt, gt}, {}, 0.5);
        CHECK_FALSE(m[0].tp);
        CHECK_FALSE(m[1].tp);
        CHECK(m[0].gt == -1);
    }
    SUBCASE("one gt cannot match two detections") {
        Box3D near_gt = gt;
        near_gt.x += 0.1;
        const auto m = match_detections({near_gt, gt}, {gt}, 0.5);
        CHECK(m[1].tp);       // exact overlap wins the greedy pass
        CHECK(m[0].gt == -1); // the weaker detection is left unmatched
    }
    SUBCASE("tau is range checked") {
        CHECK_THROWS_AS(match_detections({gt}, {gt}, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(match_detections({gt}, {gt}, 1.0), std::invalid_argument);
    }
}

TEST_CASE("corner encoding for axis-aligned boxes") {
    Box3D cube = make_box(0, 0, 1, 1, 0);
    cube.h = 1.0;
    const Box4CA c = box3d_to_4ca(cube);
    CHECK(c.x1 == -0.5);
    CHECK(c.y1 == -0.5);
    CHECK(c.x2 == 0.5);
    CHECK(c.y2 == 0.5);
    CHECK(c.h1 == 0.5);
    CHECK(c.h2 == -0.5);

    Box3D rot = make_box(2, -1, 3.9, 1.6, kPi / 2);
    rot.z = -0.9;
    rot.h = 1.56;
    const Box4CA cr = box3d_to_4ca(rot);
    const Box3D back = ca4_to_box3d(cr, rot.theta);
    CHECK(back.x == rot.x);
    CHECK(back.y == rot.y);
    CHECK(back.z == doctest::Approx(rot.z).epsilon(1e-15));
    CHECK(back.l == doctest::Approx(rot.l).epsilon(1e-15));
    CHECK(back.w == doctest::Approx(rot.w).epsilon(1e-15));
    CHECK(back.h == doctest::Approx(rot.h).epsilon(1e-15));
    CHECK(back.theta == rot.theta);

    Box3D tilted = make_box(0, 0, 2, 1, 0.3);
    CHECK_THROWS_AS(box3d_to_4ca(tilted), std::invalid_argument);
    CHECK_THROWS_AS(ca4_to_box3d(c, 0.3), std::invalid_argument);
}

TEST_CASE("orientation encoding round trips") {
    const OrientationCode zero = encode_orientation(0.0);
    CHECK(zero.cx == 1.0);
    CHECK(zero.cy == 0.0);
    CHECK(zero.dir == 1);

    const OrientationCode quarter = encode_orientation(kPi / 2);
    CHECK(quarter.cx == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(quarter.cy == 1.0);
    CHECK(quarter.dir == 1);

    CHECK(encode_orientation(-kPi / 2).dir == 0);
    CHECK(encode_orientation(-kPi).dir == 0);

    Rng rng(59);
    for (int i = 0; i < 1000; ++i) {
        const double theta = uniform(rng, -kPi, kPi);
        const OrientationCode code = encode_orientation(theta);
        CHECK(code.cx * code.cx + code.cy * code.cy ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::fabs(decode_orientation(code) - theta) < 1e-9);
        CHECK(code.dir == ((theta > -kPi / 2 && theta <= kPi / 2) ? 1 : 0));
    }
}
