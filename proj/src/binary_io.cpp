// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/binary_io.hpp"

#include <fstream>
#include <sstream>

#include "shapemetric/error.hpp"

namespace shapemetric::binio {

const char* Reader::take(std::size_t n) {
  if (bytes_.size() - pos_ < n) {
    throw Error(ErrorKind::Format, std::string(what_) + " is truncated at byte " + std::to_string(pos_));
  }
  const char* p = bytes_.data() + pos_;
  pos_ += n;
  return p;
}

void Reader::expect_magic(std::string_view magic) {
  const char* p = take(magic.size());
  if (std::string_view(p, magic.size()) != magic) {
    throw Error(ErrorKind::Format, std::string(what_) + ": bad magic, expected '" + std::string(magic) + "'");
  }
}

std::uint32_t Reader::u32() {
  std::uint32_t v;
  std::memcpy(&v, take(4), 4);
  return v;
}

std::uint8_t Reader::u8() { return static_cast<std::uint8_t>(*take(1)); }

double Reader::f64() {
  std::uint64_t v;
  std::memcpy(&v, take(8), 8);
  return std::bit_cast<double>(v);
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const std::filesystem::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace shapemetric::binio
