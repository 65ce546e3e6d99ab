// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_METRICS_HPP
#define VESSELMIP_METRICS_HPP

#include <cstddef>
#include <vector>

#include "vesselmip/volume.hpp"

namespace vesselmip {

struct OverlapCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

struct OverlapMetrics {
    double dice = 0;
    double precision = 0;
    double recall = 0;
    OverlapCounts counts;
};

// Voxel-count ratios.  Both masks empty gives all ones; a 0/0 ratio from
// exactly one empty mask gives 0.
OverlapMetrics overlap_metrics(const Mask3D& pred, const Mask3D& gt);

// Fraction of centerline voxels present in pred.  An empty centerline has
// no defined value and raises UndefinedMetricError.
double skeleton_recall(const Mask3D& pred, const std::vector<Coord>& centerline);

// Symmetric mean surface distance over boundary voxels (foreground voxels
// with a 6-neighbor that is background or outside the grid; volume faces
// count as background).  Distances are exact Euclidean via a squared
// distance transform.  Either mask empty raises UndefinedMetricError.
double mean_surface_distance(const Mask3D& pred, const Mask3D& gt);

// Background connected to the volume boundary by 6-connectivity stays
// background; every other background voxel becomes foreground.
Mask3D fill_holes(const Mask3D& mask);

// Exact squared Euclidean distance to the nearest set voxel of `sites`.
// Empty sites give an all-infinity field.
Grid3D<double> squared_edt(const Mask3D& sites);

struct MetricsReport {
    OverlapMetrics overlap;
    double skeleton_recall = 0;
    double msd = 0;
};

MetricsReport evaluate(const Mask3D& pred, const Mask3D& gt,
                       const std::vector<Coord>& centerline);

}  // namespace vesselmip

#endif
