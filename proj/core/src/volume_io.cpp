// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/volume_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "vesselmip/errors.hpp"

namespace vesselmip {

using nlohmann::json;

std::string sidecar_path(const std::string& vol_path) {
    const auto dot = vol_path.rfind('.');
    if (dot == std::string::npos) {
        return vol_path + ".json";
    }
    return vol_path.substr(0, dot) + ".json";
}

namespace {

void write_sidecar(const std::string& vol_path, const Dims& d, const std::string& kind) {
    json j;
    j["dims"] = {d.x, d.y, d.z};
    j["order"] = "x-fastest";
    j["dtype"] = "f32le";
    j["kind"] = kind;
    std::ofstream out(sidecar_path(vol_path));
    if (!out) {
        throw IoError("cannot write sidecar for " + vol_path);
    }
    out << j.dump(2) << "\n";
}

struct Header {
    Dims dims;
    std::string kind;
};

Header read_sidecar(const std::string& vol_path) {
    const std::string path = sidecar_path(vol_path);
    std::ifstream in(path);
    if (!in) {
        throw IoError("missing sidecar " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("malformed sidecar " + path + ": " + e.what());
    }
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3) {
        throw IoError("malformed sidecar " + path + ": bad dims");
    }
    Header h;
    h.dims = Dims{j["dims"][0].get<int>(), j["dims"][1].get<int>(), j["dims"][2].get<int>()};
    if (h.dims.x < 1 || h.dims.y < 1 || h.dims.z < 1) {
        throw IoError("malformed sidecar " + path + ": non-positive dims");
    }
    if (j.value("order", "") != "x-fastest") {
        throw IoError("unsupported order in " + path);
    }
    if (j.value("dtype", "") != "f32le") {
        throw IoError("unsupported dtype in " + path);
    }
    h.kind = j.value("kind", "intensity");
    return h;
}

void write_payload(const std::string& vol_path, const float* data, std::size_t count) {
    std::ofstream out(vol_path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + vol_path);
    }
    out.write(reinterpret_cast<const char*>(data),
              std::streamsize(count * sizeof(float)));
    if (!out) {
        throw IoError("short write to " + vol_path);
    }
}

std::vector<float> read_payload(const std::string& vol_path, std::size_t expected) {
    std::ifstream in(vol_path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw IoError("cannot read " + vol_path);
    }
    const std::size_t bytes = std::size_t(in.tellg());
    if (bytes != expected * sizeof(float)) {
        throw IoError("payload length mismatch in " + vol_path + ": got " +
                      std::to_string(bytes) + " bytes, expected " +
                      std::to_string(expected * sizeof(float)));
    }
    std::vector<float> data(expected);
    in.seekg(0);
    in.read(reinterpret_cast<char*>(data.data()), std::streamsize(bytes));
    if (!in) {
        throw IoError("short read from " + vol_path);
    }
    return data;
}

}  // namespace

void save_volume(const std::string& vol_path, const Volume& v, const std::string& kind) {
    write_payload(vol_path, v.data(), v.size());
    write_sidecar(vol_path, v.dims(), kind);
}

Volume load_volume(const std::string& vol_path) {
    const Header h = read_sidecar(vol_path);
    Volume v(h.dims);
    v.raw() = read_payload(vol_path, h.dims.count());
    return v;
}

void save_mask(const std::string& vol_path, const Mask3D& m) {
    std::vector<float> data(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        data[i] = m[i] ? 1.0f : 0.0f;
    }
    write_payload(vol_path, data.data(), data.size());
    write_sidecar(vol_path, m.dims(), "mask");
}

Mask3D load_mask(const std::string& vol_path) {
    const Header h = read_sidecar(vol_path);
    const std::vector<float> data = read_payload(vol_path, h.dims.count());
    Mask3D m(h.dims);
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i] == 0.0f) {
            m[i] = 0;
        } else if (data[i] == 1.0f) {
            m[i] = 1;
        } else {
            throw IoError("mask " + vol_path + " holds non-binary value " +
                          std::to_string(data[i]));
        }
    }
    return m;
}

}  // namespace vesselmip
