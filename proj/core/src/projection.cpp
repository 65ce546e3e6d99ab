// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/projection.hpp"

#include <cmath>

namespace vesselmip {

ImageShape image_shape(const Dims& d, Axis axis) {
    switch (axis) {
        case Axis::X: return {d.y, d.z};
        case Axis::Y: return {d.x, d.z};
        default:      return {d.x, d.y};
    }
}

MipResult mip(const Volume& v, Axis axis) {
    const ImageShape s = image_shape(v.dims(), axis);
    const int n = axis_extent(v.dims(), axis);
    MipResult out{Grid2D<float>(s.nu, s.nv),
                  {Grid2D<std::int32_t>(s.nu, s.nv), Grid2D<std::int32_t>(s.nu, s.nv)}};
    for (int pv = 0; pv < s.nv; ++pv) {
        for (int pu = 0; pu < s.nu; ++pu) {
            const auto [base, step] = ray_base_step(v.dims(), axis, pu, pv);
            const RayExtremum r = scan_ray(v.data(), base, step, n);
            out.image(pu, pv) = r.value;
            out.depth.forward(pu, pv) = r.first;
            out.depth.backward(pu, pv) = r.last;
        }
    }
    return out;
}

SoftMipResult soft_mip(const Volume& y, Axis axis) {
    const ImageShape s = image_shape(y.dims(), axis);
    const int n = axis_extent(y.dims(), axis);
    SoftMipResult out{Grid2D<float>(s.nu, s.nv), Grid2D<std::int32_t>(s.nu, s.nv)};
    for (int pv = 0; pv < s.nv; ++pv) {
        for (int pu = 0; pu < s.nu; ++pu) {
            const auto [base, step] = ray_base_step(y.dims(), axis, pu, pv);
            const RayExtremum r = scan_ray(y.data(), base, step, n);
            out.image(pu, pv) = r.value;
            out.argmax(pu, pv) = r.first;
        }
    }
    return out;
}

DepthEnhancedMip depth_enhanced_mip(const Volume& v, Axis axis) {
    const MipResult m = mip(v, axis);
    const int n = axis_extent(v.dims(), axis);
    const double inv = n > 1 ? 1.0 / double(n - 1) : 0.0;
    DepthEnhancedMip out{Grid2D<float>(m.image.nu(), m.image.nv()),
                         Grid2D<float>(m.image.nu(), m.image.nv())};
    for (std::size_t i = 0; i < m.image.size(); ++i) {
        const double a = std::sqrt(double(m.image[i]));
        out.p_fw[i] = float(a * (double(m.depth.forward[i]) * inv));
        out.p_bw[i] = float(a * (double(m.depth.backward[i]) * inv));
    }
    return out;
}

Annotation2D derive_annotation(const Mask3D& gt, Axis axis) {
    const ImageShape s = image_shape(gt.dims(), axis);
    const int n = axis_extent(gt.dims(), axis);
    Annotation2D out{axis, Grid2D<std::uint8_t>(s.nu, s.nv)};
    for (int pv = 0; pv < s.nv; ++pv) {
        for (int pu = 0; pu < s.nu; ++pu) {
            const auto [base, step] = ray_base_step(gt.dims(), axis, pu, pv);
            std::uint8_t hit = 0;
            std::size_t at = base;
            for (int k = 0; k < n; ++k, at += step) {
                if (gt[at]) {
                    hit = 1;
                    break;
                }
            }
            out.mask(pu, pv) = hit;
        }
    }
    return out;
}

}  // namespace vesselmip
