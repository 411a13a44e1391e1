#pragma once

// Key file: fixed 128-byte little-endian header followed by ceil(n/8) body bytes.
//
//   0   magic "DUALHASH"
//   8   u32 version
//   12  u32 reserved (0)
//   16  u64 n        payload bits in the body
//   24  u64 m        output bits of the producing family (0 for raw keys)
//   32  u64 d        seed bits consumed (0 for raw keys)
//   40  u64 padding  zero bits appended to the hashed input
//   48  char[80]     family record, NUL padded

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualhash/bitvector.hpp"

namespace dualhash {

class keyfile_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeyFileHeader {
  static constexpr std::array<char, 8> magic = {'D', 'U', 'A', 'L', 'H', 'A', 'S', 'H'};
  static constexpr std::uint32_t current_version = 1;
  static constexpr std::size_t size = 128;
  static constexpr std::size_t family_field = 80;

  std::uint32_t version = current_version;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t d = 0;
  std::uint64_t padding = 0;
  std::string family;

  std::uint64_t body_bytes() const { return (n + 7) / 8; }
  friend bool operator==(const KeyFileHeader&, const KeyFileHeader&) = default;
};

namespace detail {
inline void put_le(std::vector<std::uint8_t>& out, std::size_t pos, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out[pos + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v >> (8 * i));
}
inline std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}
}  // namespace detail

inline std::vector<std::uint8_t> serialize_header(const KeyFileHeader& h) {
  if (h.family.size() >= KeyFileHeader::family_field)
    throw keyfile_error("family record longer than " + std::to_string(KeyFileHeader::family_field - 1) + " bytes");
  std::vector<std::uint8_t> out(KeyFileHeader::size, 0);
  std::memcpy(out.data(), KeyFileHeader::magic.data(), 8);
  detail::put_le(out, 8, h.version, 4);
  detail::put_le(out, 16, h.n, 8);
  detail::put_le(out, 24, h.m, 8);
  detail::put_le(out, 32, h.d, 8);
  detail::put_le(out, 40, h.padding, 8);
  std::memcpy(out.data() + 48, h.family.data(), h.family.size());
  return out;
}

inline bool has_magic(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 8 && std::memcmp(bytes.data(), KeyFileHeader::magic.data(), 8) == 0;
}

inline KeyFileHeader parse_header(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < KeyFileHeader::size) throw keyfile_error("key file shorter than its header");
  if (!has_magic(bytes)) throw keyfile_error("bad key file magic");
  KeyFileHeader h;
  h.version = static_cast<std::uint32_t>(detail::get_le(bytes.data() + 8, 4));
  if (h.version != KeyFileHeader::current_version) throw keyfile_error("unsupported key file version");
  if (detail::get_le(bytes.data() + 12, 4) != 0) throw keyfile_error("reserved header field is nonzero");
  h.n = detail::get_le(bytes.data() + 16, 8);
  h.m = detail::get_le(bytes.data() + 24, 8);
  h.d = detail::get_le(bytes.data() + 32, 8);
  h.padding = detail::get_le(bytes.data() + 40, 8);
  const char* fam = reinterpret_cast<const char*>(bytes.data() + 48);
  h.family.assign(fam, strnlen(fam, KeyFileHeader::family_field));
  return h;
}

struct KeyFile {
  KeyFileHeader header;
  BitVector payload;
};

inline std::vector<std::uint8_t> serialize_keyfile(const KeyFile& k) {
  if (k.payload.size() != k.header.n) throw keyfile_error("payload length differs from header n");
  auto out = serialize_header(k.header);
  const auto body = k.payload.to_bytes();
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

inline KeyFile parse_keyfile(const std::vector<std::uint8_t>& bytes) {
  KeyFile k;
  k.header = parse_header(bytes);
  if (bytes.size() - KeyFileHeader::size != k.header.body_bytes())
    throw keyfile_error("key file body length does not match header n");
  k.payload = BitVector::from_bytes(std::span(bytes).subspan(KeyFileHeader::size), k.header.n);
  return k;
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw keyfile_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw keyfile_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw keyfile_error("write failed for " + path);
}

}  // namespace dualhash
