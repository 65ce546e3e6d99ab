// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "vesselmip/depthmap.hpp"
#include "vesselmip/errors.hpp"
#include "vesselmip/phantom.hpp"
#include "vesselmip/projection.hpp"
#include "vesselmip/rng.hpp"
#include "vesselmip/supervision.hpp"

#include "test_support.hpp"

using namespace vesselmip;

namespace {

Annotation2D random_annotation(Rng& rng, const Dims& d, Axis axis, double fg_prob) {
    const ImageShape s = image_shape(d, axis);
    Annotation2D a;
    a.axis = axis;
    a.mask = Grid2D<std::uint8_t>(s.nu, s.nv, 0);
    for (std::size_t i = 0; i < a.mask.size(); ++i) {
        a.mask[i] = rng.uniform() < fg_prob ? 1 : 0;
    }
    return a;
}

DepthMap random_depth_map(Rng& rng, const Dims& d, double fg_prob) {
    DepthMap dm;
    dm.axis = Axis::Z;
    dm.mask = Mask3D(d, 0);
    for (std::size_t i = 0; i < dm.mask.size(); ++i) {
        if (rng.uniform() < fg_prob) {
            dm.mask[i] = 1;
            ++dm.positives;
        }
    }
    return dm;
}

SupervisionBundle random_bundle(Rng& rng, const Dims& d, double alpha) {
    SupervisionBundle b;
    b.alpha = alpha;
    b.annotations.push_back(random_annotation(rng, d, Axis::Z, 0.5));
    b.annotations.push_back(random_annotation(rng, d, Axis::X, 0.5));
    b.depth_map = random_depth_map(rng, d, 0.05);
    return b;
}

// Largest minus second-largest value along the voxel's ray; 0 on a tie.
double top_two_gap(const Volume& y, Axis axis, std::size_t i) {
    const Dims d = y.dims();
    const int nx = d.x;
    const int x = int(i % std::size_t(nx));
    const int yy = int((i / std::size_t(nx)) % std::size_t(d.y));
    const int z = int(i / (std::size_t(nx) * std::size_t(d.y)));
    int u, v;
    switch (axis) {
        case Axis::X: u = yy; v = z; break;
        case Axis::Y: u = x; v = z; break;
        default:      u = x; v = yy; break;
    }
    const int n = axis_extent(d, axis);
    float max1 = -1.0f, max2 = -1.0f;
    for (int k = 0; k < n; ++k) {
        const Coord c = test::ray_voxel(axis, u, v, k);
        const float val = y(c.x, c.y, c.z);
        if (val > max1) {
            max2 = max1;
            max1 = val;
        } else if (val > max2) {
            max2 = val;
        }
    }
    return n < 2 ? 1.0 : double(max1) - double(max2);
}

double fd_slope(Volume y, std::size_t i, const SupervisionBundle& b) {
    const float y0 = y[i];
    const float yp = float(double(y0) + 1e-4);
    const float ym = float(double(y0) - 1e-4);
    y[i] = yp;
    const double lp = loss(y, b).total;
    y[i] = ym;
    const double lm = loss(y, b).total;
    return (lp - lm) / (double(yp) - double(ym));
}

}  // namespace

TEST_CASE("clamped cross-entropy pins its reference points") {
    const double eps = 1e-7;
    CHECK(bce(1.0, 1.0, eps) == 0.0);
    CHECK(bce(0.0, 0.0, eps) == 0.0);
    CHECK(bce(0.5, 1.0, eps) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(bce(0.5, 0.0, eps) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(bce(0.0, 1.0, eps) == -std::log(eps));
    CHECK(bce(0.0, 1.0, eps) == doctest::Approx(16.1181).epsilon(1e-4));
    CHECK(bce(1.0, 0.0, eps) == -std::log(eps));
}

TEST_CASE("a perfect hard prediction has near-zero loss") {
    PhantomConfig cfg = small_config(2);
    cfg.noise_amplitude = 0.0;
    const Phantom ph = generate(2, cfg);
    Volume y(ph.gt.dims());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = ph.gt[i] ? 1.0f : 0.0f;
    }
    SupervisionBundle b;
    b.alpha = 0.5;
    b.annotations.push_back(derive_annotation(ph.gt, Axis::Z));
    b.depth_map = reconstruct(b.annotations.front(), ph.intensity, 0.05);
    REQUIRE(b.depth_map->positives > 0);
    const LossValue lv = loss(y, b);
    CHECK(lv.total >= 0.0);
    CHECK(lv.total <= 3e-7);
}

TEST_CASE("alpha endpoints select a single term") {
    Rng rng(51);
    const Dims d{6, 6, 6};
    const Volume y = test::random_volume(rng, d, 0.1f, 0.9f);

    SupervisionBundle b1 = random_bundle(rng, d, 1.0);
    const LossValue l1 = loss(y, b1);
    CHECK(l1.total == l1.term_2d);

    SupervisionBundle b0 = random_bundle(rng, d, 0.0);
    const LossValue l0 = loss(y, b0);
    CHECK(l0.total == l0.term_depth);

    CHECK(l1.total >= 0.0);
    CHECK(l0.total >= 0.0);
}

TEST_CASE("a half-probability field scores ln 2 everywhere") {
    const Dims d{5, 5, 5};
    const Volume y(d, 0.5f);
    Rng rng(52);
    SupervisionBundle b = random_bundle(rng, d, 0.5);
    const LossValue lv = loss(y, b);
    CHECK(lv.term_2d == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(lv.term_depth == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(lv.total == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("loss total is invariant under view order") {
    Rng rng(53);
    const Dims d{7, 6, 5};
    const Volume y = test::random_volume(rng, d, 0.05f, 0.95f);
    SupervisionBundle fwd;
    fwd.alpha = 0.7;
    fwd.annotations = {random_annotation(rng, d, Axis::X, 0.4),
                       random_annotation(rng, d, Axis::Y, 0.4),
                       random_annotation(rng, d, Axis::Z, 0.4)};
    SupervisionBundle rev = fwd;
    std::reverse(rev.annotations.begin(), rev.annotations.end());

    const LossValue a = loss(y, fwd);
    const LossValue b = loss(y, rev);
    CHECK(a.total == doctest::Approx(b.total).epsilon(1e-13));
    CHECK(a.term_2d == doctest::Approx(b.term_2d).epsilon(1e-13));
    for (std::size_t i = 0; i < a.gradient.size(); ++i) {
        CHECK(double(a.gradient[i]) ==
              doctest::Approx(double(b.gradient[i])).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("voxels outside the depth map cannot move the depth term") {
    Rng rng(54);
    const Dims d{6, 6, 6};
    Volume y = test::random_volume(rng, d, 0.1f, 0.9f);
    SupervisionBundle b;
    b.alpha = 0.0;
    b.annotations.push_back(random_annotation(rng, d, Axis::Z, 0.5));
    b.depth_map = random_depth_map(rng, d, 0.1);
    const LossValue before = loss(y, b);
    bool tested = false;
    for (std::size_t i = 0; i < y.size() && !tested; ++i) {
        if (!b.depth_map->mask[i]) {
            CHECK(before.gradient[i] == 0.0f);
            y[i] = 0.123f;
            const LossValue after = loss(y, b);
            CHECK(after.term_depth == before.term_depth);
            tested = true;
        }
    }
    CHECK(tested);
}

TEST_CASE("projection gradient lands on run endpoints only") {
    // Ray max 0.7 attained on the run [1,3] and the singleton {5}.
    Volume y({1, 1, 7});
    const float vals[7] = {0.2f, 0.7f, 0.7f, 0.7f, 0.2f, 0.7f, 0.3f};
    for (int k = 0; k < 7; ++k) {
        y(0, 0, k) = vals[k];
    }
    SupervisionBundle b;
    b.alpha = 1.0;
    Annotation2D ann;
    ann.axis = Axis::Z;
    ann.mask = Grid2D<std::uint8_t>(1, 1, 1);
    b.annotations.push_back(ann);

    const LossValue lv = loss(y, b);
    CHECK(lv.term_2d == doctest::Approx(bce(double(0.7f), 1.0, 1e-7)).epsilon(1e-12));

    const double g = bce_ddp(double(0.7f), 1.0, 1e-7);  // two runs, quarter shares
    CHECK(double(lv.gradient(0, 0, 1)) == doctest::Approx(0.25 * g).epsilon(1e-6));
    CHECK(double(lv.gradient(0, 0, 3)) == doctest::Approx(0.25 * g).epsilon(1e-6));
    CHECK(double(lv.gradient(0, 0, 5)) == doctest::Approx(0.50 * g).epsilon(1e-6));
    CHECK(lv.gradient(0, 0, 0) == 0.0f);
    CHECK(lv.gradient(0, 0, 2) == 0.0f);  // run interior
    CHECK(lv.gradient(0, 0, 4) == 0.0f);
    CHECK(lv.gradient(0, 0, 6) == 0.0f);

    // A unique maximizer takes the full per-pixel value.
    Volume u({1, 1, 4});
    const float uvals[4] = {0.1f, 0.8f, 0.3f, 0.2f};
    for (int k = 0; k < 4; ++k) {
        u(0, 0, k) = uvals[k];
    }
    const LossValue lu = loss(u, b);
    CHECK(double(lu.gradient(0, 0, 1)) ==
          doctest::Approx(bce_ddp(double(0.8f), 1.0, 1e-7)).epsilon(1e-6));
    CHECK(lu.gradient(0, 0, 0) == 0.0f);
    CHECK(lu.gradient(0, 0, 2) == 0.0f);
    CHECK(lu.gradient(0, 0, 3) == 0.0f);
}

TEST_CASE("gradient is linear in alpha") {
    Rng rng(55);
    const Dims d{6, 5, 7};
    const Volume y = test::random_volume(rng, d, 0.1f, 0.9f);
    SupervisionBundle b = random_bundle(rng, d, 0.0);

    auto at = [&](double alpha) {
        SupervisionBundle c = b;
        c.alpha = alpha;
        return loss(y, c);
    };
    const LossValue l0 = at(0.0);
    const LossValue l1 = at(1.0);
    for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
        const LossValue la = at(alpha);
        CHECK(la.total ==
              doctest::Approx(alpha * la.term_2d + (1 - alpha) * la.term_depth).epsilon(1e-12));
        CHECK(la.term_2d == doctest::Approx(l1.term_2d).epsilon(1e-12));
        CHECK(la.term_depth == doctest::Approx(l0.term_depth).epsilon(1e-12));
        for (std::size_t i = 0; i < la.gradient.size(); ++i) {
            const double want = alpha * double(l1.gradient[i]) + (1 - alpha) * double(l0.gradient[i]);
            CHECK(double(la.gradient[i]) == doctest::Approx(want).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(56);
    const Dims d{8, 8, 8};
    const Volume y = test::random_volume(rng, d, 0.05f, 0.95f);
    SupervisionBundle b = random_bundle(rng, d, 0.5);
    const LossValue lv = loss(y, b);

    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t i = std::size_t(rng.below(int(y.size())));
        bool near_tie = false;
        for (const Annotation2D& a : b.annotations) {
            if (top_two_gap(y, a.axis, i) < 1e-3) {
                near_tie = true;
            }
        }
        if (near_tie) {
            continue;
        }
        const double fd = fd_slope(y, i, b);
        const double an = double(lv.gradient[i]);
        const double err = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-8});
        CHECK(err < 1e-4);
        ++checked;
    }
    CHECK(checked > 30);
}

TEST_CASE("dense loss pins its reference points") {
    Rng rng(57);
    const Dims d{6, 6, 6};
    const Mask3D gt = test::random_mask(rng, d, 0.3);

    Volume half(d, 0.5f);
    const LossValue lh = loss_full3d(half, gt);
    CHECK(lh.total == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(lh.term_2d == 0.0);
    CHECK(lh.term_depth == 0.0);

    Volume exact(d);
    for (std::size_t i = 0; i < exact.size(); ++i) {
        exact[i] = gt[i] ? 1.0f : 0.0f;
    }
    CHECK(loss_full3d(exact, gt).total <= 3e-7);

    // Per-voxel mean: the gradient is bce'(y, gt) / n.
    const Volume y = test::random_volume(rng, d, 0.1f, 0.9f);
    const LossValue lv = loss_full3d(y, gt);
    const double w = 1.0 / double(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double want = w * bce_ddp(double(y[i]), gt[i] ? 1.0 : 0.0, 1e-7);
        CHECK(double(lv.gradient[i]) == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("shape disagreements are rejected") {
    Rng rng(58);
    const Volume y = test::random_volume(rng, {4, 5, 6});
    SupervisionBundle b;
    b.annotations.push_back(random_annotation(rng, {4, 6, 6}, Axis::Z, 0.5));
    CHECK_THROWS_AS(loss(y, b), DimsMismatchError);

    SupervisionBundle b2;
    b2.annotations.push_back(random_annotation(rng, {4, 5, 6}, Axis::Z, 0.5));
    b2.depth_map = random_depth_map(rng, {4, 5, 7}, 0.1);
    CHECK_THROWS_AS(loss(y, b2), DimsMismatchError);

    const Mask3D gt({4, 5, 7}, 0);
    CHECK_THROWS_AS(loss_full3d(y, gt), DimsMismatchError);
}
