// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/supervision.hpp"

#include <string>
#include <utility>
#include <vector>

#include "vesselmip/errors.hpp"

namespace vesselmip {

LossValue loss(const Volume& y, const SupervisionBundle& bundle) {
    const Dims d = y.dims();
    const double eps = bundle.clamp_eps;
    LossValue out;
    out.gradient = Volume(d, 0.0f);
    std::vector<double> grad(y.size(), 0.0);

    if (!bundle.annotations.empty()) {
        const double view_w = 1.0 / double(bundle.annotations.size());
        double term = 0;
        for (const Annotation2D& ann : bundle.annotations) {
            const ImageShape s = image_shape(d, ann.axis);
            if (s.nu != ann.mask.nu() || s.nv != ann.mask.nv()) {
                throw DimsMismatchError("loss: annotation along " +
                                        std::string(1, axis_name(ann.axis)) +
                                        " does not match volume dims");
            }
            const int n = axis_extent(d, ann.axis);
            const double pixel_w = view_w / double(std::size_t(s.nu) * std::size_t(s.nv));
            double view_sum = 0;
            std::vector<std::pair<int, int>> runs;
            for (int pv = 0; pv < s.nv; ++pv) {
                for (int pu = 0; pu < s.nu; ++pu) {
                    const auto [base, step] = ray_base_step(d, ann.axis, pu, pv);
                    const RayExtremum r = scan_ray(y.data(), base, step, n);
                    const double target = ann.mask(pu, pv) ? 1.0 : 0.0;
                    view_sum += bce(double(r.value), target, eps);
                    const double g =
                        bundle.alpha * pixel_w * bce_ddp(double(r.value), target, eps);
                    // Subgradient of the ray max, spread over the endpoints of
                    // every maximal run of maximizers: each boundary voxel of
                    // tied plateaus takes a share, interior voxels take none.
                    runs.clear();
                    for (int k = 0; k < n; ++k) {
                        if (y[base + step * std::size_t(k)] == r.value) {
                            if (!runs.empty() && runs.back().second == k - 1) {
                                runs.back().second = k;
                            } else {
                                runs.push_back({k, k});
                            }
                        }
                    }
                    const double share = 0.5 * g / double(runs.size());
                    for (const auto& [lo, hi] : runs) {
                        grad[base + step * std::size_t(lo)] += share;
                        grad[base + step * std::size_t(hi)] += share;
                    }
                }
            }
            term += view_sum / double(std::size_t(s.nu) * std::size_t(s.nv));
        }
        out.term_2d = term * view_w;
    }

    if (bundle.depth_map && bundle.depth_map->positives > 0) {
        const DepthMap& dm = *bundle.depth_map;
        if (dm.mask.dims() != d) {
            throw DimsMismatchError("loss: depth map dims do not match volume dims");
        }
        const double voxel_w = 1.0 / double(dm.positives);
        double sum = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (!dm.mask[i]) {
                continue;
            }
            const double p = double(y[i]);
            sum += bce(p, 1.0, eps);
            grad[i] += (1.0 - bundle.alpha) * voxel_w * (-1.0 / std::max(p, eps));
        }
        out.term_depth = sum * voxel_w;
    }

    out.total = bundle.alpha * out.term_2d + (1.0 - bundle.alpha) * out.term_depth;
    for (std::size_t i = 0; i < grad.size(); ++i) {
        out.gradient[i] = float(grad[i]);
    }
    return out;
}

LossValue loss_full3d(const Volume& y, const Mask3D& gt, double clamp_eps) {
    if (y.dims() != gt.dims()) {
        throw DimsMismatchError("loss_full3d: prediction and mask dims differ");
    }
    LossValue out;
    out.gradient = Volume(y.dims());
    const double w = 1.0 / double(y.size());
    double sum = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double p = double(y[i]);
        const double t = gt[i] ? 1.0 : 0.0;
        sum += bce(p, t, clamp_eps);
        out.gradient[i] = float(w * bce_ddp(p, t, clamp_eps));
    }
    out.term_2d = 0;
    out.term_depth = 0;
    out.total = sum * w;
    return out;
}

}  // namespace vesselmip
