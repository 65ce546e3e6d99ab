// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_TRANSFORM_HPP
#define VESSELMIP_TRANSFORM_HPP

#include <array>
#include <string>
#include <vector>

#include "vesselmip/volume.hpp"

namespace vesselmip {

// Axis-aligned orientation change: an axis permutation followed by
// per-axis flips on the permuted grid.  The 48 such transforms form
// the symmetry group of the voxel cube.
//
// Gather convention: output axis i reads input axis perm[i], so the output
// extent along i is dims[perm[i]], and
//   out(q0,q1,q2) = in(p)  with  p[perm[i]] = flip[i] ? n_i-1-q_i : q_i
// where n_i is the output extent along i.
struct OrientationTransform {
    std::array<int, 3> perm{0, 1, 2};
    std::array<bool, 3> flip{false, false, false};

    bool operator==(const OrientationTransform&) const = default;

    static OrientationTransform identity() { return {}; }
};

Dims transformed_dims(const Dims& d, const OrientationTransform& t);

// Maps input voxel coordinates to output coordinates under t.
Coord transform_point(const Coord& p, const Dims& in_dims, const OrientationTransform& t);

// apply(invert(t)) undoes apply(t).
OrientationTransform invert(const OrientationTransform& t);

// compose(a, b) applies b first, then a.
OrientationTransform compose(const OrientationTransform& a, const OrientationTransform& b);

// All 48 elements (6 permutations x 8 flip patterns), deterministic order.
std::vector<OrientationTransform> all_transforms();

std::string to_string(const OrientationTransform& t);

template <typename T>
Grid3D<T> apply_transform(const Grid3D<T>& in, const OrientationTransform& t) {
    const Dims od = transformed_dims(in.dims(), t);
    Grid3D<T> out(od);
    std::array<int, 3> p{};
    for (int q2 = 0; q2 < od.z; ++q2) {
        const int r2 = t.flip[2] ? od.z - 1 - q2 : q2;
        for (int q1 = 0; q1 < od.y; ++q1) {
            const int r1 = t.flip[1] ? od.y - 1 - q1 : q1;
            for (int q0 = 0; q0 < od.x; ++q0) {
                const int r0 = t.flip[0] ? od.x - 1 - q0 : q0;
                p[t.perm[0]] = r0;
                p[t.perm[1]] = r1;
                p[t.perm[2]] = r2;
                out(q0, q1, q2) = in(p[0], p[1], p[2]);
            }
        }
    }
    return out;
}

}  // namespace vesselmip

#endif
