// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the per-step hot paths (projection, loss, smoothing)
// and the per-cell evaluation passes (distance transform, hole filling).
#include <benchmark/benchmark.h>

#include "vesselmip/depthmap.hpp"
#include "vesselmip/metrics.hpp"
#include "vesselmip/optimfit.hpp"
#include "vesselmip/phantom.hpp"
#include "vesselmip/projection.hpp"
#include "vesselmip/supervision.hpp"

using namespace vesselmip;

namespace {

const Phantom& phantom64() {
    static const Phantom ph = generate(0, standard_config(0));
    return ph;
}

const SupervisionBundle& bundle64() {
    static const SupervisionBundle b = [] {
        const Phantom& ph = phantom64();
        SupervisionBundle bundle;
        bundle.annotations = {derive_annotation(ph.gt, Axis::Z),
                              derive_annotation(ph.gt, Axis::X)};
        bundle.depth_map = reconstruct(bundle.annotations.front(), ph.intensity, 0.05);
        return bundle;
    }();
    return b;
}

void BM_Mip64(benchmark::State& state) {
    const Volume& v = phantom64().intensity;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mip(v, Axis::Z));
    }
}
BENCHMARK(BM_Mip64);

void BM_DepthEnhancedMip64(benchmark::State& state) {
    const Volume& v = phantom64().intensity;
    for (auto _ : state) {
        benchmark::DoNotOptimize(depth_enhanced_mip(v, Axis::Z));
    }
}
BENCHMARK(BM_DepthEnhancedMip64);

void BM_Reconstruct64(benchmark::State& state) {
    const Phantom& ph = phantom64();
    const Annotation2D ann = derive_annotation(ph.gt, Axis::Z);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reconstruct(ann, ph.intensity, 0.05));
    }
}
BENCHMARK(BM_Reconstruct64);

void BM_LossGradient64(benchmark::State& state) {
    const Volume& v = phantom64().intensity;
    for (auto _ : state) {
        benchmark::DoNotOptimize(loss(v, bundle64()));
    }
}
BENCHMARK(BM_LossGradient64);

void BM_Smooth64(benchmark::State& state) {
    const Volume& v = phantom64().intensity;
    for (auto _ : state) {
        benchmark::DoNotOptimize(smooth(v, 1.0));
    }
}
BENCHMARK(BM_Smooth64);

void BM_SquaredEdt64(benchmark::State& state) {
    const Mask3D& gt = phantom64().gt;
    for (auto _ : state) {
        benchmark::DoNotOptimize(squared_edt(gt));
    }
}
BENCHMARK(BM_SquaredEdt64);

void BM_FillHoles64(benchmark::State& state) {
    const Mask3D& gt = phantom64().gt;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fill_holes(gt));
    }
}
BENCHMARK(BM_FillHoles64);

void BM_FitStep16(benchmark::State& state) {
    const Phantom ph = generate(0, small_config(0));
    SupervisionBundle bundle;
    bundle.annotations = {derive_annotation(ph.gt, Axis::Z)};
    bundle.alpha = 1.0;
    FitConfig cfg;
    cfg.steps = int(state.range(0));
    Volume guidance = window_clip(ph.intensity, 0.0f, 1.0f);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(guidance, bundle, cfg));
    }
}
BENCHMARK(BM_FitStep16)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
