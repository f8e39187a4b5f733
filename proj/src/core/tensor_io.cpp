#include "maple/core/tensor_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace maple::core {

namespace {

constexpr char kTensorMagic[4] = {'M', 'A', 'P', 'L'};
constexpr char kBundleMagic[4] = {'M', 'A', 'P', 'B'};

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(out, bits);
}

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;
  const std::string& what;

  void need(std::size_t n) const {
    if (pos + n > buf.size())
      throw std::runtime_error("tensor file truncated: " + what);
  }
  uint8_t u8() {
    need(1);
    return static_cast<uint8_t>(buf[pos++]);
  }
  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint8_t>(buf[pos]) | (static_cast<uint16_t>(static_cast<uint8_t>(buf[pos + 1])) << 8);
    pos += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
};

std::string encode_tensor(const TensorF& t, const std::string& what) {
  if (t.dims.empty() || t.numel() == 0)
    throw std::invalid_argument("refusing to save zero-element tensor: " + what);
  if (t.data.size() != t.numel())
    throw std::invalid_argument("dims/payload mismatch saving tensor: " + what);
  if (t.dims.size() > 255)
    throw std::invalid_argument("tensor rank exceeds format limit: " + what);
  std::string out;
  out.append(kTensorMagic, 4);
  put_u16(out, kTensorFormatVersion);
  out.push_back(static_cast<char>(t.dims.size()));
  for (uint32_t d : t.dims) put_u32(out, d);
  std::string payload;
  payload.reserve(t.data.size() * 4);
  for (float f : t.data) put_f32(payload, f);
  uint32_t crc = crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), payload.size());
  out += payload;
  put_u32(out, crc);
  return out;
}

TensorF decode_tensor(Reader& r) {
  r.need(4);
  if (std::memcmp(r.buf.data() + r.pos, kTensorMagic, 4) != 0)
    throw std::runtime_error("bad tensor magic: " + r.what);
  r.pos += 4;
  uint16_t ver = r.u16();
  if (ver != kTensorFormatVersion)
    throw std::runtime_error("unsupported tensor format version: " + r.what);
  uint8_t rank = r.u8();
  if (rank == 0) throw std::runtime_error("zero-rank tensor: " + r.what);
  TensorF t;
  t.dims.resize(rank);
  std::size_t n = 1;
  for (int i = 0; i < rank; ++i) {
    t.dims[i] = r.u32();
    if (t.dims[i] == 0) throw std::runtime_error("zero-sized dimension: " + r.what);
    n *= t.dims[i];
  }
  r.need(n * 4 + 4);
  const char* payload = r.buf.data() + r.pos;
  uint32_t crc = crc32(0L, reinterpret_cast<const Bytef*>(payload), n * 4);
  t.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    uint32_t bits = 0;
    for (int b = 0; b < 4; ++b)
      bits |= static_cast<uint32_t>(static_cast<uint8_t>(payload[i * 4 + b])) << (8 * b);
    float f;
    std::memcpy(&f, &bits, 4);
    t.data[i] = f;
  }
  r.pos += n * 4;
  uint32_t stored = r.u32();
  if (stored != crc)
    throw std::runtime_error("payload checksum mismatch: " + r.what);
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return buf;
}

void write_file(const std::string& path, const std::string& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void save_tensor(const std::string& path, const TensorF& t) {
  write_file(path, encode_tensor(t, path));
}

TensorF load_tensor(const std::string& path) {
  std::string buf = read_file(path);
  Reader r{buf, 0, path};
  TensorF t = decode_tensor(r);
  if (r.pos != buf.size()) throw std::runtime_error("trailing bytes in tensor file: " + path);
  return t;
}

void save_bundle(const std::string& path, const TensorBundle& entries) {
  std::string out;
  out.append(kBundleMagic, 4);
  put_u16(out, kTensorFormatVersion);
  put_u32(out, static_cast<uint32_t>(entries.size()));
  for (const auto& [name, t] : entries) {
    if (name.size() > 0xffff) throw std::invalid_argument("bundle entry name too long");
    put_u16(out, static_cast<uint16_t>(name.size()));
    out += name;
    out += encode_tensor(t, path + ":" + name);
  }
  write_file(path, out);
}

TensorBundle load_bundle(const std::string& path) {
  std::string buf = read_file(path);
  Reader r{buf, 0, path};
  r.need(4);
  if (std::memcmp(buf.data(), kBundleMagic, 4) != 0)
    throw std::runtime_error("bad bundle magic: " + path);
  r.pos += 4;
  if (r.u16() != kTensorFormatVersion)
    throw std::runtime_error("unsupported bundle version: " + path);
  uint32_t count = r.u32();
  TensorBundle entries;
  entries.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    uint16_t len = r.u16();
    r.need(len);
    std::string name(buf.data() + r.pos, len);
    r.pos += len;
    entries.emplace_back(std::move(name), decode_tensor(r));
  }
  if (r.pos != buf.size()) throw std::runtime_error("trailing bytes in bundle: " + path);
  return entries;
}

uint32_t bundle_checksum(const TensorBundle& entries) {
  uint32_t crc = crc32(0L, Z_NULL, 0);
  for (const auto& [name, t] : entries) {
    crc = crc32(crc, reinterpret_cast<const Bytef*>(name.data()), name.size());
    std::string payload;
    payload.reserve(t.data.size() * 4);
    for (float f : t.data) put_f32(payload, f);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(payload.data()), payload.size());
  }
  return crc;
}

}  // namespace maple::core
