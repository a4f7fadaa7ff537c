// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>

namespace shapemetric::binio {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written with native little-endian stores");

inline void put_u32(std::string& out, std::uint32_t v) { out.append(reinterpret_cast<const char*>(&v), 4); }
inline void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }
inline void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }
inline void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  out.append(reinterpret_cast<const char*>(&bits), 8);
}

/// Bounds-checked sequential reader; throws Error(Format) on truncation.
class Reader {
 public:
  Reader(std::string_view bytes, std::string_view what) : bytes_(bytes), what_(what) {}

  void expect_magic(std::string_view magic);
  std::uint32_t u32();
  std::uint8_t u8();
  float f32() { return std::bit_cast<float>(u32()); }
  double f64();
  bool at_end() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const char* take(std::size_t n);

  std::string_view bytes_;
  std::string_view what_;
  std::size_t pos_ = 0;
};

std::string read_all(const std::filesystem::path& path);
void write_all(const std::filesystem::path& path, const std::string& bytes);

}  // namespace shapemetric::binio
