// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/depthmap.hpp"

#include <string>

#include "vesselmip/errors.hpp"

namespace vesselmip {

DepthMap reconstruct(const Annotation2D& annotation, const Volume& v, double tau) {
    const ImageShape s = image_shape(v.dims(), annotation.axis);
    if (s.nu != annotation.mask.nu() || s.nv != annotation.mask.nv()) {
        throw DimsMismatchError("reconstruct: annotation is " +
                                std::to_string(annotation.mask.nu()) + "x" +
                                std::to_string(annotation.mask.nv()) + " but axis " +
                                axis_name(annotation.axis) + " projection needs " +
                                std::to_string(s.nu) + "x" + std::to_string(s.nv));
    }
    DepthMap out{Mask3D(v.dims(), 0), annotation.axis, 0};
    const int n = axis_extent(v.dims(), annotation.axis);
    for (int pv = 0; pv < s.nv; ++pv) {
        for (int pu = 0; pu < s.nu; ++pu) {
            if (!annotation.mask(pu, pv)) {
                continue;
            }
            const auto [base, step] = ray_base_step(v.dims(), annotation.axis, pu, pv);
            const RayExtremum r = scan_ray(v.data(), base, step, n);

            float span_min = r.value;
            for (int k = r.first; k <= r.last; ++k) {
                span_min = std::min(span_min, v[base + step * std::size_t(k)]);
            }
            const double fluctuation = double(r.value) - double(span_min);
            if (fluctuation <= tau) {
                for (int k = r.first; k <= r.last; ++k) {
                    out.mask[base + step * std::size_t(k)] = 1;
                }
            } else {
                out.mask[base + step * std::size_t(r.first)] = 1;
                out.mask[base + step * std::size_t(r.last)] = 1;
            }
        }
    }
    for (std::size_t i = 0; i < out.mask.size(); ++i) {
        out.positives += out.mask[i];
    }
    return out;
}

}  // namespace vesselmip
