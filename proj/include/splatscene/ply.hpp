#pragma once

#include <cstdint>
#include <vector>

#include "splatscene/gaussian.hpp"

namespace splat {

// Binary little-endian 3DGS PLY. Vertex properties, all float32, in order:
//   x y z nx ny nz f_dc_0..2 f_rest_0..44 opacity scale_0..2 rot_0..3
// scale_* is log(meters), opacity is a logit, rot is (w,x,y,z) and gets
// normalized on load.
GaussianCloud loadPly(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> savePly(const GaussianCloud& cloud);

GaussianCloud loadPlyFile(const std::string& path);
void savePlyFile(const GaussianCloud& cloud, const std::string& path);

}  // namespace splat
