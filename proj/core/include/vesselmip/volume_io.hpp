// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_VOLUME_IO_HPP
#define VESSELMIP_VOLUME_IO_HPP

#include <string>

#include "vesselmip/volume.hpp"

namespace vesselmip {

// Scalar volumes are stored as <name>.vol (raw little-endian float32,
// x-fastest) next to a sidecar <name>.json carrying
//   {"dims": [nx,ny,nz], "order": "x-fastest", "dtype": "f32le", "kind": ...}
// kind is "intensity" for scalar fields and "mask" for binary fields,
// the latter written as 0.0 / 1.0 values.

void save_volume(const std::string& vol_path, const Volume& v,
                 const std::string& kind = "intensity");
Volume load_volume(const std::string& vol_path);

void save_mask(const std::string& vol_path, const Mask3D& m);
Mask3D load_mask(const std::string& vol_path);

// <name>.vol -> <name>.json
std::string sidecar_path(const std::string& vol_path);

}  // namespace vesselmip

#endif
