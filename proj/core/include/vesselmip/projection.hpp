// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_PROJECTION_HPP
#define VESSELMIP_PROJECTION_HPP

#include <cstdint>
#include <utility>

#include "vesselmip/volume.hpp"

namespace vesselmip {

// Axis-collapsed image layout: the two surviving axes in (x,y,z) order
// become (u,v).  Collapsing X gives (u,v)=(y,z), Y gives (x,z), Z gives (x,y).
struct ImageShape {
    int nu = 0;
    int nv = 0;
};

ImageShape image_shape(const Dims& d, Axis axis);

// Linear index of (u,v,0) along the collapsed axis, plus the stride that
// steps the collapsed coordinate.  Shared by every per-ray scan.
inline std::pair<std::size_t, std::size_t> ray_base_step(const Dims& d, Axis axis,
                                                         int u, int v) {
    const std::size_t sx = 1;
    const std::size_t sy = std::size_t(d.x);
    const std::size_t sz = std::size_t(d.x) * std::size_t(d.y);
    switch (axis) {
        case Axis::X: return {sy * std::size_t(u) + sz * std::size_t(v), sx};
        case Axis::Y: return {sx * std::size_t(u) + sz * std::size_t(v), sy};
        default:      return {sx * std::size_t(u) + sy * std::size_t(v), sz};
    }
}

// Per-ray maximum with the first and last coordinates attaining it.
// Ties are decided by exact float equality.
struct RayExtremum {
    float value = 0.0f;
    int first = 0;
    int last = 0;
};

inline RayExtremum scan_ray(const float* data, std::size_t base, std::size_t step, int n) {
    RayExtremum r{data[base], 0, 0};
    std::size_t at = base;
    for (int k = 1; k < n; ++k) {
        at += step;
        const float v = data[at];
        if (v > r.value) {
            r.value = v;
            r.first = k;
            r.last = k;
        } else if (v == r.value) {
            r.last = k;
        }
    }
    return r;
}

// Forward depth = first maximizer along the ray, backward = last.
struct DepthImages {
    Grid2D<std::int32_t> forward;
    Grid2D<std::int32_t> backward;
};

struct MipResult {
    Grid2D<float> image;
    DepthImages depth;
};

// Maximum intensity projection along axis with forward/backward depths.
MipResult mip(const Volume& v, Axis axis);

// Same reduction for predicted probability fields; keeps the first-maximizer
// index per ray for subgradient routing.
struct SoftMipResult {
    Grid2D<float> image;
    Grid2D<std::int32_t> argmax;
};

SoftMipResult soft_mip(const Volume& y, Axis axis);

// Depth-enhanced projections: sqrt(mip) * normalized depth, where the depth
// coordinate is scaled by 1/(n-1) into [0,1] (0 when the axis has extent 1).
// Input values must already lie in [0,1].
struct DepthEnhancedMip {
    Grid2D<float> p_fw;
    Grid2D<float> p_bw;
};

DepthEnhancedMip depth_enhanced_mip(const Volume& v, Axis axis);

// Binary silhouette of a mask along axis.
struct Annotation2D {
    Axis axis = Axis::Z;
    Grid2D<std::uint8_t> mask;
};

Annotation2D derive_annotation(const Mask3D& gt, Axis axis);

}  // namespace vesselmip

#endif
