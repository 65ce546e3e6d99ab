// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_DEPTHMAP_HPP
#define VESSELMIP_DEPTHMAP_HPP

#include <cstddef>

#include "vesselmip/projection.hpp"
#include "vesselmip/volume.hpp"

namespace vesselmip {

// Sparse voxel labels recovered from one annotated projection.
// mask semantics: 1 = known foreground, 0 = unlabeled (not background).
struct DepthMap {
    Mask3D mask;
    Axis axis = Axis::Z;
    std::size_t positives = 0;
};

// For every annotation-foreground pixel, marks the first and last voxel
// attaining the ray maximum of v.  When the intensity fluctuation over
// [first, last] - ray max minus the minimum on that span - stays within
// tau, the whole span is filled; otherwise only the two extremes are kept.
// tau = +infinity fills every annotated span.
DepthMap reconstruct(const Annotation2D& annotation, const Volume& v, double tau);

}  // namespace vesselmip

#endif
