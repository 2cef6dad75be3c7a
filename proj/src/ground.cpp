#include "gal/ground.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int window_cells(double half_window, double cell_size) {
    return static_cast<int>(std::ceil(half_window / cell_size));
}

// Border-clamped sliding minimum over one contiguous row, radius r.
// Interior windows use the block prefix/suffix decomposition (van Herk):
// with blocks of width w = 2r+1 aligned at multiples of w, the window
// [i-r, i+r] is exactly suffix[i-r] within its block joined with
// prefix[i+r] within the next, so the result is a min over precisely the
// window's cells and stays bit-identical to a direct scan. Clamped border
// windows nest, so they fold incrementally.
void sliding_min_row(const double* a, double* o, int m, int r, double* pre,
                     double* suf) {
    const int w = 2 * r + 1;
    if (m < 2 * w) {  // tiny rows: direct scans
        for (int i = 0; i < m; ++i) {
            const int lo = std::max(0, i - r), hi = std::min(m - 1, i + r);
            double best = a[lo];
            for (int k = lo + 1; k <= hi; ++k) best = std::min(best, a[k]);
            o[i] = best;
        }
        return;
    }
    for (int i = 0; i < m; ++i) {
        pre[i] = (i % w == 0) ? a[i] : std::min(pre[i - 1], a[i]);
    }
    for (int i = m - 1; i >= 0; --i) {
        suf[i] = (i % w == w - 1 || i == m - 1) ? a[i]
                                                : std::min(suf[i + 1], a[i]);
    }
    double run = a[0];
    for (int k = 1; k <= r; ++k) run = std::min(run, a[k]);
    o[0] = run;
    for (int i = 1; i < r; ++i) o[i] = run = std::min(run, a[i + r]);
    for (int i = r; i <= m - 1 - r; ++i) o[i] = std::min(suf[i - r], pre[i + r]);
    run = a[m - 1];
    for (int k = m - 2; k >= m - 1 - r; --k) run = std::min(run, a[k]);
    o[m - 1] = run;
    for (int i = m - 2; i >= m - r; --i) o[i] = run = std::min(run, a[i - r]);
}

}  // namespace

void FilterConfig::validate() const {
    if (!(half_window_x > 0.0) || !(half_window_y > 0.0)) {
        throw std::invalid_argument("FilterConfig: half windows must be positive");
    }
}

GroundSurface estimate_surface(const HeightMap& hm, const FilterConfig& cfg) {
    cfg.validate();
    const GridSpec& s = hm.spec;
    const int rx = window_cells(cfg.half_window_x, s.cell_size);
    const int ry = window_cells(cfg.half_window_y, s.cell_size);

    GroundSurface gs;
    gs.spec = s;
    gs.ground_z.assign(s.cell_count(), 0.0);
    gs.valid.assign(s.cell_count(), 0);

    // The rectangular window factors into a per-row pass (along y) and a
    // down-the-columns pass (along x) because min is associative. The
    // column pass runs on horizontal bands so the row-filtered rows and
    // the prefix/suffix planes stay cache-resident; bands only change the
    // traversal order, every window still reduces the same cells.
    const std::size_t m = static_cast<std::size_t>(s.cols);
    const int w = 2 * rx + 1;
    const int band = 48;  // output rows per tile
    const int in_rows = band + 2 * rx;
    std::vector<double> bandbuf(static_cast<std::size_t>(in_rows) * m);
    std::vector<double> pre(static_cast<std::size_t>(in_rows) * m);
    std::vector<double> suf(static_cast<std::size_t>(in_rows) * m);
    std::vector<double> rowpre(m);
    std::vector<double> rowsuf(m);
    std::vector<double> rowbuf(m);

    auto row_min = [m](const double* x, const double* y, double* dst) {
        for (std::size_t j = 0; j < m; ++j) dst[j] = std::min(x[j], y[j]);
    };

    for (int out_lo = 0; out_lo < s.rows; out_lo += band) {
        const int out_hi = std::min(s.rows, out_lo + band);
        const int in_lo = std::max(0, out_lo - rx);
        const int in_hi = std::min(s.rows - 1, out_hi - 1 + rx);
        const int nb = in_hi - in_lo + 1;

        // row pass: invalid cells become +inf so the min ignores them
        for (int k = 0; k < nb; ++k) {
            const std::size_t base = s.index(in_lo + k, 0);
            for (std::size_t j = 0; j < m; ++j) {
                rowbuf[j] = hm.valid[base + j] ? hm.max_z[base + j] : kInf;
            }
            sliding_min_row(rowbuf.data(), bandbuf.data() + k * m, s.cols, ry,
                            rowpre.data(), rowsuf.data());
        }

        // band-local prefix/suffix block minima down the rows
        for (int k = 0; k < nb; ++k) {
            if (k % w == 0) {
                std::copy_n(bandbuf.data() + k * m, m, pre.data() + k * m);
            } else {
                row_min(pre.data() + (k - 1) * m, bandbuf.data() + k * m,
                        pre.data() + k * m);
            }
        }
        for (int k = nb - 1; k >= 0; --k) {
            if (k % w == w - 1 || k == nb - 1) {
                std::copy_n(bandbuf.data() + k * m, m, suf.data() + k * m);
            } else {
                row_min(suf.data() + (k + 1) * m, bandbuf.data() + k * m,
                        suf.data() + k * m);
            }
        }

        for (int i = out_lo; i < out_hi; ++i) {
            const int l = std::max(0, i - rx) - in_lo;
            const int h = std::min(s.rows - 1, i + rx) - in_lo;
            double* out = gs.ground_z.data() + s.index(i, 0);
            if (h - l == 2 * rx) {
                // full window: suffix of l's block joined with prefix of
                // h's covers exactly rows [l, h]
                row_min(suf.data() + l * m, pre.data() + h * m, out);
            } else {
                // window clamped at the grid edge: direct accumulation
                std::copy_n(bandbuf.data() + l * m, m, out);
                for (int k = l + 1; k <= h; ++k) {
                    row_min(out, bandbuf.data() + k * m, out);
                }
            }
            std::uint8_t* vrow = gs.valid.data() + s.index(i, 0);
            for (std::size_t j = 0; j < m; ++j) {
                if (out[j] == kInf) {
                    out[j] = -kInf;  // never read
                } else {
                    vrow[j] = 1;
                }
            }
        }
    }
    return gs;
}

GroundSurface interpolate_surface(const GroundSurface& gs, double k) {
    if (k < 0.0) {
        throw std::invalid_argument("interpolate_surface: k must be >= 0");
    }
    const GridSpec& s = gs.spec;
    const int steps = static_cast<int>(std::ceil(k / s.cell_size));
    GroundSurface out = gs;
    if (steps == 0) return out;

    // Multi-source layered BFS over the 8-neighbourhood. A cell filled at
    // layer d takes the minimum value over its layer-(d-1) neighbours,
    // which is exactly the minimum over the valid cells at Chebyshev
    // distance d (every closer source would have claimed it earlier).
    std::vector<int> dist(s.cell_count(), -1);
    std::vector<std::size_t> frontier;
    frontier.reserve(s.cell_count() / 8 + 64);
    for (std::size_t idx = 0; idx < s.cell_count(); ++idx) {
        if (gs.valid[idx]) {
            dist[idx] = 0;
            frontier.push_back(idx);
        }
    }

    std::vector<std::size_t> next;
    for (int layer = 1; layer <= steps && !frontier.empty(); ++layer) {
        next.clear();
        for (std::size_t idx : frontier) {
            const int i = static_cast<int>(idx) / s.cols;
            const int j = static_cast<int>(idx) % s.cols;
            const double v = out.ground_z[idx];
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ni = i + di, nj = j + dj;
                    if (ni < 0 || ni >= s.rows || nj < 0 || nj >= s.cols) continue;
                    const std::size_t nidx = s.index(ni, nj);
                    if (dist[nidx] == -1) {
                        dist[nidx] = layer;
                        out.ground_z[nidx] = v;
                        out.valid[nidx] = 1;
                        next.push_back(nidx);
                    } else if (dist[nidx] == layer && v < out.ground_z[nidx]) {
                        out.ground_z[nidx] = v;
                    }
                }
            }
        }
        frontier.swap(next);
    }
    return out;
}

GroundLabels classify_points(const PointCloud& cloud, const GroundSurface& gs,
                             double tau_g) {
    const GridSpec& s = gs.spec;
    GroundLabels labels;
    labels.tau_g = tau_g;
    labels.ground.assign(cloud.points.size(), 0);
    for (std::size_t n = 0; n < cloud.points.size(); ++n) {
        const Point3& p = cloud.points[n];
        const int i = static_cast<int>(std::floor((p.x - s.x_min) / s.cell_size));
        const int j = static_cast<int>(std::floor((p.y - s.y_min) / s.cell_size));
        if (i < 0 || i >= s.rows || j < 0 || j >= s.cols) continue;
        const std::size_t idx = s.index(i, j);
        if (!gs.valid[idx]) continue;
        if (p.z <= gs.ground_z[idx] + tau_g) labels.ground[n] = 1;
    }
    return labels;
}

}  // namespace gal
