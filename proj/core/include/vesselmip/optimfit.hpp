// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_OPTIMFIT_HPP
#define VESSELMIP_OPTIMFIT_HPP

#include <cstdint>
#include <vector>

#include "vesselmip/supervision.hpp"
#include "vesselmip/volume.hpp"

namespace vesselmip {

// Direct per-volume optimization: y = sigmoid(smooth(theta, sigma)) with a
// free logit field theta trained by Adam against a supervision bundle.
struct FitConfig {
    int steps = 500;
    double learning_rate = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    // theta starts at init_logit + init_scale * guidance.  The whole range
    // must sit below the binarization threshold so untrained voxels come
    // out background.
    double init_logit = -0.3;
    // Image anchoring of the otherwise input-blind logit field: seeding from
    // the windowed intensity puts the initial per-ray maxima inside bright
    // structures, so max routing engages them instead of arbitrary tied
    // voxels.  Requires guidance values in [0, 1]; 0 disables.
    double init_scale = 0.25;
    // Optional isotropic coherence prior; 0 disables smoothing entirely.
    double smoothing_sigma = 0.0;
    double binarize_threshold = 0.5;
    std::uint64_t seed = 0;  // reserved for stochastic variants; the fit is deterministic
};

struct TraceRow {
    int step = 0;
    double total = 0;
    double term_2d = 0;
    double term_depth = 0;
};

struct FitResult {
    Mask3D prediction;     // probability >= binarize_threshold
    Volume probability;    // final y
    std::vector<TraceRow> trace;
};

// Separable truncated Gaussian, radius ceil(3*sigma), kernel renormalized to
// sum 1, half-sample reflective boundaries (the operator is self-adjoint).
// sigma = 0 is the identity.
Volume smooth(const Volume& v, double sigma);

// Fits a logit field over guidance.dims(), seeded from the guidance volume
// (normally the windowed intensity).  Throws DivergenceError with the step
// index if the loss goes non-finite.
FitResult fit(const Volume& guidance, const SupervisionBundle& bundle, const FitConfig& cfg);

// Dense-supervision variant against a full mask; constant initialization.
FitResult fit_full3d(const Mask3D& gt, const FitConfig& cfg);

}  // namespace vesselmip

#endif
