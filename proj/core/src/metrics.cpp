// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/metrics.hpp"

#include <cmath>
#include <limits>

#include "vesselmip/errors.hpp"

namespace vesselmip {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_boundary(const Mask3D& m, int x, int y, int z) {
    if (!m(x, y, z)) {
        return false;
    }
    static constexpr int nb[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                     {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (const auto& o : nb) {
        const int nx = x + o[0], ny = y + o[1], nz = z + o[2];
        if (!m.in_bounds(nx, ny, nz) || !m(nx, ny, nz)) {
            return true;
        }
    }
    return false;
}

Mask3D boundary_voxels(const Mask3D& m) {
    const Dims& d = m.dims();
    Mask3D b(d, 0);
    for (int z = 0; z < d.z; ++z) {
        for (int y = 0; y < d.y; ++y) {
            for (int x = 0; x < d.x; ++x) {
                if (is_boundary(m, x, y, z)) {
                    b(x, y, z) = 1;
                }
            }
        }
    }
    return b;
}

// One lower-envelope squared-distance pass along `axis`.  Lines with no
// finite entry are left untouched; infinite entries do not join the envelope.
void edt_pass(Grid3D<double>& g, int axis) {
    const Dims& d = g.dims();
    const std::size_t sx = 1, sy = std::size_t(d.x), sz = std::size_t(d.x) * std::size_t(d.y);
    std::size_t stride, stride_a, stride_b, na, nb;
    int n;
    if (axis == 0) {
        stride = sx; n = d.x; stride_a = sy; na = std::size_t(d.y); stride_b = sz; nb = std::size_t(d.z);
    } else if (axis == 1) {
        stride = sy; n = d.y; stride_a = sx; na = std::size_t(d.x); stride_b = sz; nb = std::size_t(d.z);
    } else {
        stride = sz; n = d.z; stride_a = sx; na = std::size_t(d.x); stride_b = sy; nb = std::size_t(d.y);
    }
    const std::size_t un = std::size_t(n);
    std::vector<double> f(un), out(un), z(un + 1);
    std::vector<int> v(un);
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t a = 0; a < na; ++a) {
            const std::size_t base = a * stride_a + b * stride_b;
            bool any = false;
            for (int i = 0; i < n; ++i) {
                f[std::size_t(i)] = g[base + stride * std::size_t(i)];
                any = any || f[std::size_t(i)] != kInf;
            }
            if (!any) {
                continue;
            }
            int k = -1;
            for (int q = 0; q < n; ++q) {
                if (f[std::size_t(q)] == kInf) {
                    continue;
                }
                double s = 0;
                while (k >= 0) {
                    const int p = v[std::size_t(k)];
                    s = ((f[std::size_t(q)] + double(q) * q) -
                         (f[std::size_t(p)] + double(p) * p)) /
                        (2.0 * q - 2.0 * p);
                    if (s <= z[std::size_t(k)]) {
                        --k;
                    } else {
                        break;
                    }
                }
                ++k;
                v[std::size_t(k)] = q;
                z[std::size_t(k)] = k == 0 ? -kInf : s;
                z[std::size_t(k + 1)] = kInf;
            }
            int j = 0;
            for (int q = 0; q < n; ++q) {
                while (z[std::size_t(j + 1)] < double(q)) {
                    ++j;
                }
                const int p = v[std::size_t(j)];
                out[std::size_t(q)] = (double(q) - p) * (double(q) - p) + f[std::size_t(p)];
            }
            for (int i = 0; i < n; ++i) {
                g[base + stride * std::size_t(i)] = out[std::size_t(i)];
            }
        }
    }
}

}  // namespace

OverlapMetrics overlap_metrics(const Mask3D& pred, const Mask3D& gt) {
    if (pred.dims() != gt.dims()) {
        throw DimsMismatchError("overlap_metrics: mask dims differ");
    }
    OverlapMetrics m;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] != 0;
        const bool g = gt[i] != 0;
        m.counts.tp += std::size_t(p && g);
        m.counts.fp += std::size_t(p && !g);
        m.counts.fn += std::size_t(!p && g);
    }
    const std::size_t p_total = m.counts.tp + m.counts.fp;
    const std::size_t g_total = m.counts.tp + m.counts.fn;
    if (p_total == 0 && g_total == 0) {
        m.dice = m.precision = m.recall = 1.0;
        return m;
    }
    const double tp = double(m.counts.tp);
    m.precision = p_total ? tp / double(p_total) : 0.0;
    m.recall = g_total ? tp / double(g_total) : 0.0;
    const double denom = double(2 * m.counts.tp + m.counts.fp + m.counts.fn);
    m.dice = denom > 0 ? 2.0 * tp / denom : 0.0;
    return m;
}

double skeleton_recall(const Mask3D& pred, const std::vector<Coord>& centerline) {
    if (centerline.empty()) {
        throw UndefinedMetricError("skeleton_recall: empty centerline");
    }
    std::size_t hit = 0;
    for (const Coord& c : centerline) {
        if (pred.in_bounds(c.x, c.y, c.z) && pred(c.x, c.y, c.z)) {
            ++hit;
        }
    }
    return double(hit) / double(centerline.size());
}

Grid3D<double> squared_edt(const Mask3D& sites) {
    Grid3D<double> g(sites.dims());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        g[i] = sites[i] ? 0.0 : kInf;
    }
    edt_pass(g, 0);
    edt_pass(g, 1);
    edt_pass(g, 2);
    return g;
}

double mean_surface_distance(const Mask3D& pred, const Mask3D& gt) {
    if (pred.dims() != gt.dims()) {
        throw DimsMismatchError("mean_surface_distance: mask dims differ");
    }
    bool pred_any = false, gt_any = false;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        pred_any = pred_any || pred[i];
        gt_any = gt_any || gt[i];
    }
    if (!pred_any || !gt_any) {
        throw UndefinedMetricError("mean_surface_distance: empty mask");
    }
    const Mask3D pb = boundary_voxels(pred);
    const Mask3D gb = boundary_voxels(gt);
    const Grid3D<double> to_g = squared_edt(gb);
    const Grid3D<double> to_p = squared_edt(pb);
    double sum_p = 0, sum_g = 0;
    std::size_t np = 0, ng = 0;
    for (std::size_t i = 0; i < pb.size(); ++i) {
        if (pb[i]) {
            sum_p += std::sqrt(to_g[i]);
            ++np;
        }
        if (gb[i]) {
            sum_g += std::sqrt(to_p[i]);
            ++ng;
        }
    }
    return 0.5 * (sum_p / double(np) + sum_g / double(ng));
}

Mask3D fill_holes(const Mask3D& mask) {
    const Dims& d = mask.dims();
    Mask3D reached(d, 0);
    std::vector<Coord> stack;
    auto push = [&](int x, int y, int z) {
        if (mask.in_bounds(x, y, z) && !mask(x, y, z) && !reached(x, y, z)) {
            reached(x, y, z) = 1;
            stack.push_back({x, y, z});
        }
    };
    for (int z = 0; z < d.z; ++z) {
        for (int y = 0; y < d.y; ++y) {
            for (int x = 0; x < d.x; ++x) {
                if (x == 0 || y == 0 || z == 0 || x == d.x - 1 || y == d.y - 1 || z == d.z - 1) {
                    push(x, y, z);
                }
            }
        }
    }
    while (!stack.empty()) {
        const Coord c = stack.back();
        stack.pop_back();
        push(c.x + 1, c.y, c.z);
        push(c.x - 1, c.y, c.z);
        push(c.x, c.y + 1, c.z);
        push(c.x, c.y - 1, c.z);
        push(c.x, c.y, c.z + 1);
        push(c.x, c.y, c.z - 1);
    }
    Mask3D out(d, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (mask[i] || !reached[i]) ? 1 : 0;
    }
    return out;
}

MetricsReport evaluate(const Mask3D& pred, const Mask3D& gt,
                       const std::vector<Coord>& centerline) {
    MetricsReport r;
    r.overlap = overlap_metrics(pred, gt);
    r.skeleton_recall = skeleton_recall(pred, centerline);
    r.msd = mean_surface_distance(pred, gt);
    return r;
}

}  // namespace vesselmip
