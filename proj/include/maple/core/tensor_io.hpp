#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace maple::core {

// Fixed binary tensor layout:
//   magic "MAPL" | format version u16 | rank u8 | dims u32 LE each |
//   payload f32 LE row-major | CRC32(payload) u32 LE
// Zero-element tensors are rejected on both save and load.
struct TensorF {
  std::vector<uint32_t> dims;
  std::vector<float> data;

  std::size_t numel() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return dims.empty() ? 0 : n;
  }
};

inline constexpr uint16_t kTensorFormatVersion = 1;

void save_tensor(const std::string& path, const TensorF& t);
TensorF load_tensor(const std::string& path);

// Several named tensors in one file (checkpoints, codebooks):
//   magic "MAPB" | version u16 | count u32 LE |
//   count x { name_len u16 LE | name bytes | embedded MAPL record }
using TensorBundle = std::vector<std::pair<std::string, TensorF>>;

void save_bundle(const std::string& path, const TensorBundle& entries);
TensorBundle load_bundle(const std::string& path);

// CRC32 (zlib polynomial) over the little-endian payload bytes of every
// tensor in the bundle, in file order. Used for frozen-weight contracts.
uint32_t bundle_checksum(const TensorBundle& entries);

}  // namespace maple::core
