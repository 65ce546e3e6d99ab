// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_PHANTOM_HPP
#define VESSELMIP_PHANTOM_HPP

#include <cstdint>
#include <vector>

#include "vesselmip/volume.hpp"

namespace vesselmip {

// Synthetic vessel-tree settings.  Interiors are intensity-flat at
// vessel_intensity; the background carries uniform noise in
// [0, noise_amplitude), which must stay below vessel_intensity so the
// per-ray maximum is always attained inside a vessel.
struct PhantomConfig {
    Dims dims{64, 64, 64};
    int branch_count = 4;
    double radius_min = 1.5;
    double radius_max = 4.0;
    double vessel_intensity = 0.8;
    double noise_amplitude = 0.1;
    int occluder_count = 0;         // bright spherical distractors, excluded from gt
    double curvature = 0.12;        // per-step direction jitter
};

struct Phantom {
    Volume intensity;
    Mask3D gt;
    std::vector<Coord> centerline;  // voxelized branch centerlines, subset of gt
    std::uint64_t seed = 0;
};

// Deterministic: equal (seed, cfg) gives bit-identical phantoms.
// Throws GenerationError when the tree cannot be placed inside dims
// after bounded retries.
Phantom generate(std::uint64_t seed, const PhantomConfig& cfg);

// Documented fixed suite settings: 64^3, 3-6 branches (seed-derived),
// radii drawn from [1.5, 4].
PhantomConfig standard_config(std::uint64_t seed);

// Scaled-down variant for quick convergence studies: 16^3, 1-2 branches.
PhantomConfig small_config(std::uint64_t seed);

// Phantoms with seeds 0..n-1 under standard_config.
std::vector<Phantom> standard_suite(int n);

}  // namespace vesselmip

#endif
