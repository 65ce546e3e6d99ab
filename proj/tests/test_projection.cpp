// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "vesselmip/phantom.hpp"
#include "vesselmip/projection.hpp"
#include "vesselmip/rng.hpp"
#include "vesselmip/transform.hpp"

#include "test_support.hpp"

using namespace vesselmip;

namespace {

constexpr Axis kAxes[] = {Axis::X, Axis::Y, Axis::Z};

}  // namespace

TEST_CASE("constant volume projects to a full plateau") {
    const Volume v({4, 5, 6}, 0.3f);
    for (Axis a : kAxes) {
        const MipResult r = mip(v, a);
        const int n = axis_extent(v.dims(), a);
        for (std::size_t i = 0; i < r.image.size(); ++i) {
            CHECK(r.image[i] == 0.3f);
            CHECK(r.depth.forward[i] == 0);
            CHECK(r.depth.backward[i] == n - 1);
        }
    }
}

TEST_CASE("single bright voxel pins one ray") {
    Volume v({4, 4, 4}, 0.0f);
    v(1, 2, 3) = 1.0f;
    const MipResult r = mip(v, Axis::Z);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            if (x == 1 && y == 2) {
                CHECK(r.image(x, y) == 1.0f);
                CHECK(r.depth.forward(x, y) == 3);
                CHECK(r.depth.backward(x, y) == 3);
            } else {
                CHECK(r.image(x, y) == 0.0f);
                CHECK(r.depth.forward(x, y) == 0);
                CHECK(r.depth.backward(x, y) == 3);
            }
        }
    }
}

TEST_CASE("mip matches the triple-loop oracle on random volumes") {
    Rng rng(21);
    for (int trial = 0; trial < 15; ++trial) {
        const Dims d{1 + rng.below(8), 1 + rng.below(7), 1 + rng.below(6)};
        const Volume v = test::random_volume(rng, d);
        for (Axis a : kAxes) {
            const MipResult got = mip(v, a);
            const MipResult want = test::mip_oracle(v, a);
            CHECK(got.image == want.image);
            CHECK(got.depth.forward == want.depth.forward);
            CHECK(got.depth.backward == want.depth.backward);
        }
    }
}

TEST_CASE("depth images index exact maximizers") {
    Rng rng(22);
    const Volume v = test::random_volume(rng, {6, 5, 7});
    for (Axis a : kAxes) {
        const MipResult r = mip(v, a);
        const ImageShape s = image_shape(v.dims(), a);
        for (int pv = 0; pv < s.nv; ++pv) {
            for (int pu = 0; pu < s.nu; ++pu) {
                const Coord cf = test::ray_voxel(a, pu, pv, r.depth.forward(pu, pv));
                const Coord cb = test::ray_voxel(a, pu, pv, r.depth.backward(pu, pv));
                CHECK(v(cf.x, cf.y, cf.z) == r.image(pu, pv));
                CHECK(v(cb.x, cb.y, cb.z) == r.image(pu, pv));
                CHECK(r.depth.forward(pu, pv) <= r.depth.backward(pu, pv));
            }
        }
    }
}

TEST_CASE("soft_mip ties resolve to the first index") {
    const Volume y({3, 3, 4}, 0.5f);
    const SoftMipResult r = soft_mip(y, Axis::Z);
    for (std::size_t i = 0; i < r.image.size(); ++i) {
        CHECK(r.image[i] == 0.5f);
        CHECK(r.argmax[i] == 0);
    }
}

TEST_CASE("soft_mip finds one-hot positions") {
    Volume y({2, 2, 5}, 0.0f);
    y(0, 0, 4) = 1.0f;
    y(1, 0, 2) = 1.0f;
    y(0, 1, 0) = 1.0f;
    const SoftMipResult r = soft_mip(y, Axis::Z);
    CHECK(r.argmax(0, 0) == 4);
    CHECK(r.argmax(1, 0) == 2);
    CHECK(r.argmax(0, 1) == 0);
    CHECK(r.image(1, 1) == 0.0f);
}

TEST_CASE("soft_mip matches the oracle on random fields") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const Dims d{1 + rng.below(8), 1 + rng.below(7), 1 + rng.below(6)};
        const Volume y = test::random_volume(rng, d);
        for (Axis a : kAxes) {
            const SoftMipResult got = soft_mip(y, a);
            const MipResult want = test::mip_oracle(y, a);
            CHECK(got.image == want.image);
            CHECK(got.argmax == want.depth.forward);
        }
    }
}

TEST_CASE("depth-enhanced projection follows the per-ray formula") {
    // Ray (0, 0.25, 0): max 0.25 at k=1 of 3, normalized depth 0.5.
    Volume v({1, 1, 3}, 0.0f);
    v(0, 0, 1) = 0.25f;
    const DepthEnhancedMip d = depth_enhanced_mip(v, Axis::Z);
    CHECK(d.p_fw(0, 0) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(d.p_bw(0, 0) == doctest::Approx(0.25).epsilon(1e-6));

    // Maximizer at the front face: zero forward product regardless of mip.
    Volume w({1, 1, 4}, 0.0f);
    w(0, 0, 0) = 0.9f;
    const DepthEnhancedMip e = depth_enhanced_mip(w, Axis::Z);
    CHECK(e.p_fw(0, 0) == 0.0f);
    CHECK(e.p_bw(0, 0) == 0.0f);  // unique maximizer, backward == forward
}

TEST_CASE("depth-enhanced projection handles a collapsed axis of extent 1") {
    Volume v({3, 3, 1}, 0.8f);
    const DepthEnhancedMip d = depth_enhanced_mip(v, Axis::Z);
    for (std::size_t i = 0; i < d.p_fw.size(); ++i) {
        CHECK(d.p_fw[i] == 0.0f);
        CHECK(d.p_bw[i] == 0.0f);
    }
}

TEST_CASE("depth-enhanced projection matches per-pixel recomputation on a phantom") {
    const Phantom ph = generate(3, small_config(3));
    for (Axis a : kAxes) {
        const DepthEnhancedMip got = depth_enhanced_mip(ph.intensity, a);
        const MipResult m = test::mip_oracle(ph.intensity, a);
        const int n = axis_extent(ph.intensity.dims(), a);
        for (std::size_t i = 0; i < m.image.size(); ++i) {
            const double scale = n > 1 ? 1.0 / double(n - 1) : 0.0;
            const double pf = std::sqrt(double(m.image[i])) * double(m.depth.forward[i]) * scale;
            const double pb = std::sqrt(double(m.image[i])) * double(m.depth.backward[i]) * scale;
            CHECK(double(got.p_fw[i]) == doctest::Approx(pf).epsilon(1e-6));
            CHECK(double(got.p_bw[i]) == doctest::Approx(pb).epsilon(1e-6));
            CHECK(got.p_fw[i] >= 0.0f);
            CHECK(got.p_fw[i] <= 1.0f);
        }
    }
}

TEST_CASE("derive_annotation marks exactly the occupied rays") {
    Mask3D empty({4, 5, 6}, 0);
    for (Axis a : kAxes) {
        const Annotation2D ann = derive_annotation(empty, a);
        CHECK(ann.axis == a);
        for (std::size_t i = 0; i < ann.mask.size(); ++i) {
            CHECK(ann.mask[i] == 0);
        }
    }

    Mask3D one({4, 5, 6}, 0);
    one(2, 3, 4) = 1;
    const Annotation2D az = derive_annotation(one, Axis::Z);
    std::size_t fg = 0;
    for (std::size_t i = 0; i < az.mask.size(); ++i) {
        fg += az.mask[i];
    }
    CHECK(fg == 1);
    CHECK(az.mask(2, 3) == 1);
}

TEST_CASE("derive_annotation matches the oracle and never exceeds gt volume") {
    Rng rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        const Dims d{1 + rng.below(8), 1 + rng.below(7), 1 + rng.below(6)};
        const Mask3D gt = test::random_mask(rng, d, 0.2);
        std::size_t gt_count = 0;
        for (auto b : gt.raw()) {
            gt_count += b;
        }
        for (Axis a : kAxes) {
            const Annotation2D ann = derive_annotation(gt, a);
            CHECK(ann.mask == test::annotation_oracle(gt, a));
            std::size_t fg = 0;
            for (std::size_t i = 0; i < ann.mask.size(); ++i) {
                fg += ann.mask[i];
            }
            CHECK(fg <= gt_count);
        }
    }
}

TEST_CASE("soft_mip of a binarized mask equals its derived annotation") {
    Rng rng(25);
    const Mask3D m = test::random_mask(rng, {6, 7, 5}, 0.25);
    Volume as_probs(m.dims());
    for (std::size_t i = 0; i < m.size(); ++i) {
        as_probs[i] = m[i] ? 1.0f : 0.0f;
    }
    for (Axis a : kAxes) {
        const SoftMipResult s = soft_mip(as_probs, a);
        const Annotation2D ann = derive_annotation(m, a);
        for (std::size_t i = 0; i < s.image.size(); ++i) {
            CHECK((s.image[i] > 0.5f) == (ann.mask[i] != 0));
        }
    }
}

TEST_CASE("projection commutes with orientation transforms") {
    Rng rng(26);
    const Dims d{5, 6, 7};
    const Volume v = test::random_volume(rng, d);
    for (const auto& t : all_transforms()) {
        const Volume w = apply_transform(v, t);
        const Dims wd = w.dims();
        for (int ai = 0; ai < 3; ++ai) {
            const Axis a = Axis(ai);
            const Axis pre = Axis(t.perm[ai]);  // input axis the projection collapses
            const MipResult got = mip(w, a);
            const MipResult src = mip(v, pre);
            const int n_pre = axis_extent(d, pre);
            const ImageShape s = image_shape(wd, a);
            const OrientationTransform inv = invert(t);
            for (int pv = 0; pv < s.nv; ++pv) {
                for (int pu = 0; pu < s.nu; ++pu) {
                    // Any voxel on the output ray maps to the matching input ray.
                    const Coord q = test::ray_voxel(a, pu, pv, 0);
                    const Coord p = transform_point(q, wd, inv);
                    int iu, iv;
                    switch (pre) {
                        case Axis::X: iu = p.y; iv = p.z; break;
                        case Axis::Y: iu = p.x; iv = p.z; break;
                        default:      iu = p.x; iv = p.y; break;
                    }
                    CHECK(got.image(pu, pv) == src.image(iu, iv));
                    const int fw = src.depth.forward(iu, iv);
                    const int bw = src.depth.backward(iu, iv);
                    if (t.flip[ai]) {
                        CHECK(got.depth.forward(pu, pv) == n_pre - 1 - bw);
                        CHECK(got.depth.backward(pu, pv) == n_pre - 1 - fw);
                    } else {
                        CHECK(got.depth.forward(pu, pv) == fw);
                        CHECK(got.depth.backward(pu, pv) == bw);
                    }
                }
            }
        }
    }
}
