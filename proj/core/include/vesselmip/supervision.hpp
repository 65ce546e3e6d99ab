// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_SUPERVISION_HPP
#define VESSELMIP_SUPERVISION_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "vesselmip/depthmap.hpp"
#include "vesselmip/projection.hpp"
#include "vesselmip/volume.hpp"

namespace vesselmip {

// Weak-label package for one volume: screen-space silhouettes plus an
// optional sparse voxel depth map.
struct SupervisionBundle {
    std::vector<Annotation2D> annotations;
    std::optional<DepthMap> depth_map;
    double alpha = 0.5;       // projection-term weight; depth term gets 1 - alpha
    double clamp_eps = 1e-7;  // log clamp
};

struct LossValue {
    double total = 0;
    double term_2d = 0;
    double term_depth = 0;
    Volume gradient;  // d total / d y
};

// Clamped binary cross-entropy.
inline double bce(double p, double t, double eps) {
    return -(t * std::log(std::max(p, eps)) + (1.0 - t) * std::log(std::max(1.0 - p, eps)));
}

// d bce / d p with the same clamping in the denominators.
inline double bce_ddp(double p, double t, double eps) {
    return -t / std::max(p, eps) + (1.0 - t) / std::max(1.0 - p, eps);
}

// total = alpha * term_2d + (1 - alpha) * term_depth.
//
// term_2d: for each annotation, the predicted silhouette is the per-ray hard
// maximum of y; the term is the per-pixel mean BCE against the annotation,
// averaged over views.  Its derivative is a subgradient of the hard max:
// with R maximal runs of tied maximizers along the ray, each run's first and
// last voxel receives 1/(2R) of the per-pixel value (a unique maximizer is a
// single singleton run and takes all of it).  Voxels that do not attain the
// maximum, and interior voxels of a run, get exactly zero.
//
// term_depth: mean BCE(y, 1) over depth-map positives; unlabeled voxels
// contribute nothing.  Zero when no depth map is present or it is empty.
//
// Accumulation runs in float64; the gradient is emitted as a float32 volume.
LossValue loss(const Volume& y, const SupervisionBundle& bundle);

// Dense reference: per-voxel mean BCE of y against a full mask.
LossValue loss_full3d(const Volume& y, const Mask3D& gt, double clamp_eps = 1e-7);

}  // namespace vesselmip

#endif
