// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shapemetric/binary_io.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/mesh.hpp"

namespace shapemetric {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Splits on whitespace without allocating per token.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorKind::Format, "expected a number, got '" + std::string(tok) + "'", line);
  }
  return v;
}

long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorKind::Format, "expected an integer, got '" + std::string(tok) + "'", line);
  }
  return v;
}

struct PendingFace {
  Face face;
  std::size_t line;
};

TriangleMesh finish(std::vector<Vec3> verts, const std::vector<PendingFace>& pending,
                    LoadReport* report) {
  std::vector<Face> faces;
  faces.reserve(pending.size());
  for (const PendingFace& pf : pending) {
    for (std::uint32_t idx : pf.face) {
      if (idx >= verts.size()) {
        throw Error(ErrorKind::Structural,
                    "face references vertex " + std::to_string(idx + 1) + " (1-based) but only " +
                        std::to_string(verts.size()) + " vertices exist",
                    pf.line);
      }
    }
    faces.push_back(pf.face);
  }
  TriangleMesh mesh(std::move(verts), std::move(faces));
  if (report) report->degenerate_faces = mesh.degenerate_faces();
  return mesh;
}

void fan_triangulate(const std::vector<std::uint32_t>& poly, std::size_t line,
                     std::vector<PendingFace>& out, LoadReport* report) {
  if (poly.size() < 3) throw Error(ErrorKind::Format, "face with fewer than 3 vertices", line);
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) out.push_back({{poly[0], poly[k], poly[k + 1]}, line});
  if (poly.size() > 3 && report) ++report->polygons_triangulated;
}

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

TriangleMesh parse_obj(const std::string& text, LoadReport* report) {
  std::vector<Vec3> verts;
  std::vector<PendingFace> pending;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  std::vector<std::uint32_t> poly;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view sv(raw);
    if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    const auto tok = tokenize(sv);
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      if (tok.size() < 4) throw Error(ErrorKind::Format, "vertex record needs 3 coordinates", line);
      verts.emplace_back(parse_double(tok[1], line), parse_double(tok[2], line),
                         parse_double(tok[3], line));
    } else if (tok[0] == "f") {
      poly.clear();
      for (std::size_t k = 1; k < tok.size(); ++k) {
        const std::string_view idx_tok = tok[k].substr(0, tok[k].find('/'));
        const long long idx = parse_int(idx_tok, line);
        long long zero_based = 0;
        if (idx > 0) {
          zero_based = idx - 1;
        } else if (idx < 0) {
          zero_based = static_cast<long long>(verts.size()) + idx;
          if (zero_based < 0) {
            throw Error(ErrorKind::Structural, "relative face index points before the first vertex",
                        line);
          }
        } else {
          throw Error(ErrorKind::Format, "face index 0 is not valid in OBJ", line);
        }
        poly.push_back(static_cast<std::uint32_t>(zero_based));
      }
      fan_triangulate(poly, line, pending, report);
    } else if (report) {
      ++report->records_ignored;
    }
  }
  return finish(std::move(verts), pending, report);
}

TriangleMesh parse_off(const std::string& text, LoadReport* report) {
  // (token, line) stream with comments stripped
  std::vector<std::pair<std::string_view, std::size_t>> toks;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') ++i;
      toks.emplace_back(std::string_view(text).substr(start, i - start), line);
    }
  }
  std::size_t pos = 0;
  auto next = [&](const char* what) -> std::pair<std::string_view, std::size_t> {
    if (pos >= toks.size()) {
      throw Error(ErrorKind::Format, std::string("unexpected end of file while reading ") + what,
                  toks.empty() ? 1 : toks.back().second);
    }
    return toks[pos++];
  };
  auto header = next("header");
  if (header.first != "OFF") throw Error(ErrorKind::Format, "missing OFF header", header.second);
  auto [nv_tok, nv_line] = next("vertex count");
  auto [nf_tok, nf_line] = next("face count");
  next("edge count");
  const long long nv = parse_int(nv_tok, nv_line);
  const long long nf = parse_int(nf_tok, nf_line);
  if (nv < 0 || nf < 0) throw Error(ErrorKind::Format, "negative element count", nv_line);

  std::vector<Vec3> verts;
  verts.reserve(static_cast<std::size_t>(nv));
  for (long long v = 0; v < nv; ++v) {
    Vec3 p;
    for (int k = 0; k < 3; ++k) {
      auto [t, l] = next("vertex");
      p[k] = parse_double(t, l);
    }
    verts.push_back(p);
  }
  std::vector<PendingFace> pending;
  std::vector<std::uint32_t> poly;
  for (long long f = 0; f < nf; ++f) {
    auto [kt, kl] = next("face");
    const long long k = parse_int(kt, kl);
    if (k < 3) throw Error(ErrorKind::Format, "face with fewer than 3 vertices", kl);
    poly.clear();
    for (long long j = 0; j < k; ++j) {
      auto [t, l] = next("face index");
      const long long idx = parse_int(t, l);
      if (idx < 0 || idx >= nv) {
        throw Error(ErrorKind::Structural,
                    "face index " + std::to_string(idx) + " out of range for " +
                        std::to_string(nv) + " vertices",
                    l);
      }
      poly.push_back(static_cast<std::uint32_t>(idx));
    }
    fan_triangulate(poly, kl, pending, report);
    // trailing per-face colour values are allowed on the same line
    while (pos < toks.size() && toks[pos].second == kl) ++pos;
  }
  return finish(std::move(verts), pending, report);
}

MeshFormat format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".obj") return MeshFormat::Obj;
  if (ext == ".off") return MeshFormat::Off;
  throw Error(ErrorKind::InvalidArgument, "unknown mesh extension '" + ext + "'");
}

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format, LoadReport* report) {
  if (format == MeshFormat::Auto) format = format_from_extension(path);
  const std::string text = read_file(path);
  try {
    return format == MeshFormat::Obj ? parse_obj(text, report) : parse_off(text, report);
  } catch (const Error& e) {
    throw e.within(path.string());
  }
}

std::string format_obj(const TriangleMesh& mesh) {
  std::string out;
  out.reserve(mesh.vertex_count() * 40 + mesh.face_count() * 24);
  for (const Vec3& v : mesh.vertices()) {
    out += "v " + format_coord(v.x()) + ' ' + format_coord(v.y()) + ' ' + format_coord(v.z()) + '\n';
  }
  for (const Face& f : mesh.faces()) {
    out += "f " + std::to_string(f[0] + 1) + ' ' + std::to_string(f[1] + 1) + ' ' +
           std::to_string(f[2] + 1) + '\n';
  }
  return out;
}

std::string format_off(const TriangleMesh& mesh) {
  std::string out = "OFF\n" + std::to_string(mesh.vertex_count()) + ' ' +
                    std::to_string(mesh.face_count()) + " 0\n";
  for (const Vec3& v : mesh.vertices()) {
    out += format_coord(v.x()) + ' ' + format_coord(v.y()) + ' ' + format_coord(v.z()) + '\n';
  }
  for (const Face& f : mesh.faces()) {
    out += "3 " + std::to_string(f[0]) + ' ' + std::to_string(f[1]) + ' ' + std::to_string(f[2]) + '\n';
  }
  return out;
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path, MeshFormat format) {
  if (format == MeshFormat::Auto) format = format_from_extension(path);
  binio::write_all(path, format == MeshFormat::Obj ? format_obj(mesh) : format_off(mesh));
}

}  // namespace shapemetric
