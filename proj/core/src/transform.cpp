// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/transform.hpp"

#include <algorithm>

namespace vesselmip {

Dims transformed_dims(const Dims& d, const OrientationTransform& t) {
    const std::array<int, 3> n{d.x, d.y, d.z};
    return Dims{n[t.perm[0]], n[t.perm[1]], n[t.perm[2]]};
}

Coord transform_point(const Coord& p, const Dims& in_dims, const OrientationTransform& t) {
    const std::array<int, 3> pc{p.x, p.y, p.z};
    const Dims od = transformed_dims(in_dims, t);
    const std::array<int, 3> n{od.x, od.y, od.z};
    std::array<int, 3> q{};
    for (int i = 0; i < 3; ++i) {
        const int v = pc[t.perm[i]];
        q[i] = t.flip[i] ? n[i] - 1 - v : v;
    }
    return Coord{q[0], q[1], q[2]};
}

OrientationTransform invert(const OrientationTransform& t) {
    OrientationTransform inv;
    for (int i = 0; i < 3; ++i) {
        inv.perm[t.perm[i]] = i;
    }
    for (int j = 0; j < 3; ++j) {
        inv.flip[j] = t.flip[inv.perm[j]];
    }
    return inv;
}

OrientationTransform compose(const OrientationTransform& a, const OrientationTransform& b) {
    // out(q) under a reads b's output along a.perm[i]; chaining the gather
    // steps gives perm[i] = b.perm[a.perm[i]] and flips combining by xor.
    OrientationTransform c;
    for (int i = 0; i < 3; ++i) {
        c.perm[i] = b.perm[a.perm[i]];
        c.flip[i] = a.flip[i] != b.flip[a.perm[i]];
    }
    return c;
}

std::vector<OrientationTransform> all_transforms() {
    std::vector<OrientationTransform> out;
    out.reserve(48);
    std::array<int, 3> perm{0, 1, 2};
    std::array<std::array<int, 3>, 6> perms;
    int k = 0;
    do {
        perms[k++] = perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (const auto& pm : perms) {
        for (int f = 0; f < 8; ++f) {
            OrientationTransform t;
            t.perm = pm;
            t.flip = {(f & 1) != 0, (f & 2) != 0, (f & 4) != 0};
            out.push_back(t);
        }
    }
    return out;
}

std::string to_string(const OrientationTransform& t) {
    std::string s = "perm(";
    for (int i = 0; i < 3; ++i) {
        s += axis_name(static_cast<Axis>(t.perm[i]));
    }
    s += ") flip(";
    for (int i = 0; i < 3; ++i) {
        s += t.flip[i] ? '1' : '0';
    }
    s += ')';
    return s;
}

}  // namespace vesselmip
