// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_VOLUME_HPP
#define VESSELMIP_VOLUME_HPP

#include <algorithm>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "vesselmip/errors.hpp"

namespace vesselmip {

// Volume extents, all >= 1.
struct Dims {
    int x = 0;
    int y = 0;
    int z = 0;

    bool operator==(const Dims&) const = default;
    std::size_t count() const { return std::size_t(x) * std::size_t(y) * std::size_t(z); }
};

enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline int axis_extent(const Dims& d, Axis a) {
    switch (a) {
        case Axis::X: return d.x;
        case Axis::Y: return d.y;
        default: return d.z;
    }
}

inline char axis_name(Axis a) {
    switch (a) {
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
        default: return 'z';
    }
}

// Dense 3-D grid, x-fastest: index = x + nx*(y + ny*z).
template <typename T>
class Grid3D {
public:
    Grid3D() = default;
    Grid3D(Dims d, T fill = T{}) : dims_(d), data_(d.count(), fill) {}

    const Dims& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    std::size_t index(int x, int y, int z) const {
        return std::size_t(x) + std::size_t(dims_.x) * (std::size_t(y) + std::size_t(dims_.y) * std::size_t(z));
    }

    T& operator()(int x, int y, int z) { return data_[index(x, y, z)]; }
    const T& operator()(int x, int y, int z) const { return data_[index(x, y, z)]; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    std::vector<T>& raw() { return data_; }
    const std::vector<T>& raw() const { return data_; }

    bool in_bounds(int x, int y, int z) const {
        return x >= 0 && y >= 0 && z >= 0 && x < dims_.x && y < dims_.y && z < dims_.z;
    }

    bool operator==(const Grid3D&) const = default;

private:
    Dims dims_;
    std::vector<T> data_;
};

// Dense 2-D grid, u-fastest: index = u + nu*v.
template <typename T>
class Grid2D {
public:
    Grid2D() = default;
    Grid2D(int nu, int nv, T fill = T{})
        : nu_(nu), nv_(nv), data_(std::size_t(nu) * std::size_t(nv), fill) {}

    int nu() const { return nu_; }
    int nv() const { return nv_; }
    std::size_t size() const { return data_.size(); }

    std::size_t index(int u, int v) const { return std::size_t(u) + std::size_t(nu_) * std::size_t(v); }

    T& operator()(int u, int v) { return data_[index(u, v)]; }
    const T& operator()(int u, int v) const { return data_[index(u, v)]; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    bool operator==(const Grid2D&) const = default;

private:
    int nu_ = 0;
    int nv_ = 0;
    std::vector<T> data_;
};

using Volume = Grid3D<float>;   // scalar field, f32
using Mask3D = Grid3D<std::uint8_t>;  // binary field, values 0/1

// Integer voxel coordinate.
struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;
    bool operator==(const Coord&) const = default;
};

// Affine window to [0,1]: clamp((v - lo) / (hi - lo), 0, 1).
// lo >= hi is rejected.
inline Volume window_clip(const Volume& v, float lo, float hi) {
    if (!(lo < hi)) {
        throw InvalidWindowError("window_clip: lo (" + std::to_string(lo) +
                                 ") must be strictly below hi (" + std::to_string(hi) + ")");
    }
    Volume out(v.dims());
    const float scale = 1.0f / (hi - lo);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::clamp((v[i] - lo) * scale, 0.0f, 1.0f);
    }
    return out;
}

}  // namespace vesselmip

#endif
