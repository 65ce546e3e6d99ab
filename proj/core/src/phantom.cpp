// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vesselmip/errors.hpp"
#include "vesselmip/rng.hpp"

namespace vesselmip {

namespace {

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }

Vec3 normalize(Vec3 a) {
    const double n = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
    return n > 0 ? (1.0 / n) * a : Vec3{1, 0, 0};
}

Vec3 draw_unit(Rng& rng) {
    const auto u = rng.unit_vector();
    return {u[0], u[1], u[2]};
}

// Ball of radius r around p must stay strictly inside the grid.
bool ball_fits(const Vec3& p, double r, const Dims& d) {
    return p.x >= r && p.y >= r && p.z >= r &&
           p.x <= double(d.x - 1) - r && p.y <= double(d.y - 1) - r &&
           p.z <= double(d.z - 1) - r;
}

void stamp_ball(Mask3D& m, const Vec3& c, double r) {
    const Dims& d = m.dims();
    const int x0 = std::max(0, int(std::floor(c.x - r)));
    const int x1 = std::min(d.x - 1, int(std::ceil(c.x + r)));
    const int y0 = std::max(0, int(std::floor(c.y - r)));
    const int y1 = std::min(d.y - 1, int(std::ceil(c.y + r)));
    const int z0 = std::max(0, int(std::floor(c.z - r)));
    const int z1 = std::min(d.z - 1, int(std::ceil(c.z + r)));
    const double r2 = r * r;
    for (int z = z0; z <= z1; ++z) {
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = double(x) - c.x;
                const double dy = double(y) - c.y;
                const double dz = double(z) - c.z;
                if (dx * dx + dy * dy + dz * dz <= r2) {
                    m(x, y, z) = 1;
                }
            }
        }
    }
}

struct BranchPath {
    std::vector<Vec3> samples;
    double radius = 0;
};

constexpr double kStep = 0.5;
constexpr int kMaxRetries = 100;

// Walks one branch; empty result means this attempt left bounds too early.
BranchPath walk_branch(Rng& rng, const Dims& dims, const Vec3& start, double radius,
                       double target_len, double curvature) {
    BranchPath path;
    path.radius = radius;
    Vec3 p = start;
    Vec3 dir = draw_unit(rng);
    if (!ball_fits(p, radius, dims)) {
        return {};
    }
    path.samples.push_back(p);
    double len = 0;
    while (len < target_len) {
        dir = normalize(dir + (curvature * kStep) * draw_unit(rng));
        const Vec3 next = p + kStep * dir;
        if (!ball_fits(next, radius, dims)) {
            break;
        }
        p = next;
        len += kStep;
        path.samples.push_back(p);
    }
    if (len < 0.6 * target_len) {
        return {};
    }
    return path;
}

}  // namespace

Phantom generate(std::uint64_t seed, const PhantomConfig& cfg) {
    if (cfg.branch_count < 1) {
        throw GenerationError("branch_count must be >= 1");
    }
    const Dims d = cfg.dims;
    Rng rng(splitmix64(seed ^ 0x76657373656c6dULL));

    const double min_dim = double(std::min({d.x, d.y, d.z}));
    std::vector<BranchPath> branches;
    std::vector<Vec3> all_samples;

    for (int b = 0; b < cfg.branch_count; ++b) {
        // Thickness-favoring draw keeps the tree from degenerating to hairline
        // branches while staying inside radius_range.
        BranchPath path;
        bool placed = false;
        for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
            const double radius =
                cfg.radius_min + (cfg.radius_max - cfg.radius_min) * std::sqrt(rng.uniform());
            const double target_len = rng.uniform(0.55, 0.85) * min_dim;
            Vec3 start;
            if (b == 0 || all_samples.empty()) {
                start = {rng.uniform(0.3, 0.7) * double(d.x - 1),
                         rng.uniform(0.3, 0.7) * double(d.y - 1),
                         rng.uniform(0.3, 0.7) * double(d.z - 1)};
            } else {
                start = all_samples[std::size_t(rng.below(int(all_samples.size())))];
            }
            path = walk_branch(rng, d, start, radius, target_len, cfg.curvature);
            if (!path.samples.empty()) {
                placed = true;
                break;
            }
        }
        if (!placed) {
            throw GenerationError("tree does not fit inside " + std::to_string(d.x) + "x" +
                                  std::to_string(d.y) + "x" + std::to_string(d.z) +
                                  " after " + std::to_string(kMaxRetries) + " retries");
        }
        all_samples.insert(all_samples.end(), path.samples.begin(), path.samples.end());
        branches.push_back(std::move(path));
    }

    Phantom out;
    out.seed = seed;
    out.gt = Mask3D(d, 0);
    for (const BranchPath& br : branches) {
        for (const Vec3& p : br.samples) {
            stamp_ball(out.gt, p, br.radius);
        }
    }

    // Voxelized centerline, order-preserving and deduplicated.
    Mask3D seen(d, 0);
    for (const BranchPath& br : branches) {
        for (const Vec3& p : br.samples) {
            const Coord c{int(std::lround(p.x)), int(std::lround(p.y)), int(std::lround(p.z))};
            if (!seen(c.x, c.y, c.z)) {
                seen(c.x, c.y, c.z) = 1;
                out.centerline.push_back(c);
            }
        }
    }

    // Occluders share the vessel intensity but are excluded from gt.
    Mask3D occluder(d, 0);
    for (int i = 0; i < cfg.occluder_count; ++i) {
        const Vec3 c{rng.uniform(0.15, 0.85) * double(d.x - 1),
                     rng.uniform(0.15, 0.85) * double(d.y - 1),
                     rng.uniform(0.15, 0.85) * double(d.z - 1)};
        stamp_ball(occluder, c, rng.uniform(2.0, 5.0));
    }

    out.intensity = Volume(d);
    const float fg = float(cfg.vessel_intensity);
    for (std::size_t i = 0; i < out.intensity.size(); ++i) {
        if (out.gt[i] || occluder[i]) {
            out.intensity[i] = fg;
        } else {
            out.intensity[i] = float(rng.uniform() * cfg.noise_amplitude);
        }
    }
    return out;
}

PhantomConfig standard_config(std::uint64_t seed) {
    PhantomConfig cfg;
    cfg.dims = {64, 64, 64};
    cfg.branch_count = 3 + int(splitmix64(seed ^ 0x6272616e63686573ULL) % 4);
    cfg.radius_min = 1.5;
    cfg.radius_max = 4.0;
    return cfg;
}

PhantomConfig small_config(std::uint64_t seed) {
    PhantomConfig cfg;
    cfg.dims = {16, 16, 16};
    cfg.branch_count = 1 + int(splitmix64(seed ^ 0x6272616e63686573ULL) % 2);
    cfg.radius_min = 1.3;
    cfg.radius_max = 2.2;
    cfg.curvature = 0.1;
    return cfg;
}

std::vector<Phantom> standard_suite(int n) {
    std::vector<Phantom> out;
    out.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        out.push_back(generate(std::uint64_t(i), standard_config(std::uint64_t(i))));
    }
    return out;
}

}  // namespace vesselmip
