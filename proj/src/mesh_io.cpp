#include "quicci/mesh_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "quicci/error.hpp"

namespace quicci {

namespace {

void compute_vertex_normals(Mesh& mesh) {
  std::vector<Vec3> accum(mesh.vertex_count());
  for (const auto& t : mesh.triangles) {
    // Cross product length is twice the area, so plain face normals
    // accumulate area-weighted.
    const Vec3 fn =
        (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    for (uint32_t i : t) accum[i] += fn;
  }
  mesh.normals.resize(mesh.vertex_count());
  for (size_t i = 0; i < accum.size(); ++i)
    mesh.normals[i] = accum[i].squared_norm() > 0 ? accum[i].normalized() : Vec3{0, 0, 1};
}

void validate_loaded(Mesh& mesh, const std::filesystem::path& path) {
  if (mesh.triangles.empty())
    throw Error("load_mesh: no faces in " + path.string());
  double area = 0.0;
  for (size_t t = 0; t < mesh.triangle_count() && area <= 0.0; ++t) {
    const auto v = mesh.triangle_vertices(t);
    area += triangle_area(v[0], v[1], v[2]);
  }
  if (area <= 0.0) throw Error("load_mesh: all faces degenerate in " + path.string());
}

// ---------------------------------------------------------------------------
// OBJ

struct ObjCorner {
  int vertex = 0;  // 1-based
  int normal = 0;  // 1-based, 0 = absent
};

ObjCorner parse_obj_corner(std::string_view token, const std::filesystem::path& path) {
  ObjCorner corner;
  const size_t first = token.find('/');
  const std::string_view v = token.substr(0, first);
  auto parse_int = [&](std::string_view s) {
    int value = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || value <= 0)
      throw Error("load_mesh: bad face index '" + std::string(token) + "' in " + path.string());
    return value;
  };
  corner.vertex = parse_int(v);
  if (first != std::string_view::npos) {
    const size_t last = token.rfind('/');
    // Normal index only in the two-slash forms v//vn and v/vt/vn.
    if (last > first) {
      const std::string_view n = token.substr(last + 1);
      if (!n.empty()) corner.normal = parse_int(n);
    }
  }
  return corner;
}

Mesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_mesh: cannot open " + path.string());

  std::vector<Vec3> positions, file_normals;
  // Faces reference (position, normal) pairs; distinct pairs become
  // distinct output vertices, OBJ-expansion style.
  std::map<std::pair<int, int>, uint32_t> corner_ids;
  Mesh mesh;
  bool any_missing_normal = false;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) throw Error("load_mesh: malformed vertex in " + path.string());
      positions.push_back(p);
    } else if (tag == "vn") {
      Vec3 n;
      if (!(ls >> n.x >> n.y >> n.z)) throw Error("load_mesh: malformed normal in " + path.string());
      file_normals.push_back(n);
    } else if (tag == "f") {
      std::vector<uint32_t> corners;
      std::string token;
      while (ls >> token) {
        const ObjCorner c = parse_obj_corner(token, path);
        if (c.vertex > static_cast<int>(positions.size()))
          throw Error("load_mesh: face index out of range in " + path.string());
        if (c.normal > static_cast<int>(file_normals.size()))
          throw Error("load_mesh: normal index out of range in " + path.string());
        if (c.normal == 0) any_missing_normal = true;
        auto [it, inserted] =
            corner_ids.emplace(std::make_pair(c.vertex, c.normal),
                               static_cast<uint32_t>(mesh.vertices.size()));
        if (inserted) {
          mesh.vertices.push_back(positions[c.vertex - 1]);
          mesh.normals.push_back(c.normal > 0 ? file_normals[c.normal - 1].normalized() : Vec3{});
        }
        corners.push_back(it->second);
      }
      if (corners.size() < 3)
        throw Error("load_mesh: face with fewer than 3 corners in " + path.string());
      for (size_t i = 1; i + 1 < corners.size(); ++i)
        mesh.triangles.push_back({corners[0], corners[i], corners[i + 1]});
    }
  }
  if (mesh.vertices.empty()) throw Error("load_mesh: no geometry in " + path.string());
  if (any_missing_normal || file_normals.empty()) compute_vertex_normals(mesh);
  validate_loaded(mesh, path);
  return mesh;
}

// ---------------------------------------------------------------------------
// PLY (ascii and binary_little_endian 1.0)

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

size_t ply_type_size(PlyType t) {
  switch (t) {
    case PlyType::i8:
    case PlyType::u8: return 1;
    case PlyType::i16:
    case PlyType::u16: return 2;
    case PlyType::i32:
    case PlyType::u32:
    case PlyType::f32: return 4;
    case PlyType::f64: return 8;
  }
  return 0;
}

PlyType parse_ply_type(const std::string& name, const std::filesystem::path& path) {
  if (name == "char" || name == "int8") return PlyType::i8;
  if (name == "uchar" || name == "uint8") return PlyType::u8;
  if (name == "short" || name == "int16") return PlyType::i16;
  if (name == "ushort" || name == "uint16") return PlyType::u16;
  if (name == "int" || name == "int32") return PlyType::i32;
  if (name == "uint" || name == "uint32") return PlyType::u32;
  if (name == "float" || name == "float32") return PlyType::f32;
  if (name == "double" || name == "float64") return PlyType::f64;
  throw Error("load_mesh: unsupported PLY type '" + name + "' in " + path.string());
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::f32;
  bool is_list = false;
  PlyType count_type = PlyType::u8;
};

struct PlyElement {
  std::string name;
  size_t count = 0;
  std::vector<PlyProperty> properties;
};

double read_binary_scalar(std::istream& in, PlyType t, const std::filesystem::path& path) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(ply_type_size(t)));
  if (!in) throw Error("load_mesh: truncated PLY data in " + path.string());
  auto le = [&](int n) {
    uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
  };
  switch (t) {
    case PlyType::i8: return static_cast<int8_t>(buf[0]);
    case PlyType::u8: return buf[0];
    case PlyType::i16: return static_cast<int16_t>(le(2));
    case PlyType::u16: return static_cast<uint16_t>(le(2));
    case PlyType::i32: return static_cast<int32_t>(le(4));
    case PlyType::u32: return static_cast<uint32_t>(le(4));
    case PlyType::f32: {
      const uint32_t raw = static_cast<uint32_t>(le(4));
      float f;
      std::memcpy(&f, &raw, 4);
      return f;
    }
    case PlyType::f64: {
      const uint64_t raw = le(8);
      double d;
      std::memcpy(&d, &raw, 8);
      return d;
    }
  }
  return 0.0;
}

Mesh load_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("load_mesh: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw Error("load_mesh: empty file " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ply") throw Error("load_mesh: missing PLY magic in " + path.string());

  bool binary = false;
  std::vector<PlyElement> elements;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "comment" || tag == "obj_info") continue;
    if (tag == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "ascii") binary = false;
      else if (fmt == "binary_little_endian") binary = true;
      else throw Error("load_mesh: unsupported PLY format '" + fmt + "' in " + path.string());
    } else if (tag == "element") {
      PlyElement e;
      ls >> e.name >> e.count;
      elements.push_back(e);
    } else if (tag == "property") {
      if (elements.empty()) throw Error("load_mesh: PLY property before element in " + path.string());
      PlyProperty p;
      std::string type_name;
      ls >> type_name;
      if (type_name == "list") {
        p.is_list = true;
        std::string count_name, value_name;
        ls >> count_name >> value_name >> p.name;
        p.count_type = parse_ply_type(count_name, path);
        p.type = parse_ply_type(value_name, path);
      } else {
        p.type = parse_ply_type(type_name, path);
        ls >> p.name;
      }
      elements.back().properties.push_back(p);
    } else if (tag == "end_header") {
      break;
    } else if (tag.empty()) {
      continue;
    } else {
      throw Error("load_mesh: unknown PLY header line '" + line + "' in " + path.string());
    }
  }

  Mesh mesh;
  bool has_normals = false;

  auto read_scalar = [&](PlyType t) -> double {
    if (binary) return read_binary_scalar(in, t, path);
    double v;
    if (!(in >> v)) throw Error("load_mesh: truncated PLY data in " + path.string());
    return v;
  };

  for (const PlyElement& element : elements) {
    if (element.name == "vertex") {
      for (const PlyProperty& p : element.properties)
        if (p.name == "nx") has_normals = true;
      mesh.vertices.resize(element.count);
      if (has_normals) mesh.normals.resize(element.count);
      for (size_t i = 0; i < element.count; ++i) {
        for (const PlyProperty& p : element.properties) {
          if (p.is_list) {
            const size_t n = static_cast<size_t>(read_scalar(p.count_type));
            for (size_t j = 0; j < n; ++j) read_scalar(p.type);
            continue;
          }
          const double v = read_scalar(p.type);
          if (p.name == "x") mesh.vertices[i].x = v;
          else if (p.name == "y") mesh.vertices[i].y = v;
          else if (p.name == "z") mesh.vertices[i].z = v;
          else if (has_normals && p.name == "nx") mesh.normals[i].x = v;
          else if (has_normals && p.name == "ny") mesh.normals[i].y = v;
          else if (has_normals && p.name == "nz") mesh.normals[i].z = v;
        }
      }
    } else if (element.name == "face") {
      for (size_t i = 0; i < element.count; ++i) {
        for (const PlyProperty& p : element.properties) {
          if (!p.is_list) {
            read_scalar(p.type);
            continue;
          }
          const size_t n = static_cast<size_t>(read_scalar(p.count_type));
          std::vector<uint32_t> corners(n);
          for (size_t j = 0; j < n; ++j) {
            const double idx = read_scalar(p.type);
            if (idx < 0 || idx >= static_cast<double>(mesh.vertex_count()))
              throw Error("load_mesh: face index out of range in " + path.string());
            corners[j] = static_cast<uint32_t>(idx);
          }
          if (p.name == "vertex_indices" || p.name == "vertex_index") {
            if (n < 3) throw Error("load_mesh: face with fewer than 3 corners in " + path.string());
            for (size_t j = 1; j + 1 < n; ++j)
              mesh.triangles.push_back({corners[0], corners[j], corners[j + 1]});
          }
        }
      }
    } else {
      // Skip unknown elements.
      for (size_t i = 0; i < element.count; ++i)
        for (const PlyProperty& p : element.properties) {
          if (p.is_list) {
            const size_t n = static_cast<size_t>(read_scalar(p.count_type));
            for (size_t j = 0; j < n; ++j) read_scalar(p.type);
          } else {
            read_scalar(p.type);
          }
        }
    }
  }
  if (mesh.vertices.empty()) throw Error("load_mesh: no geometry in " + path.string());
  if (has_normals)
    for (Vec3& n : mesh.normals) n = n.normalized();
  else
    compute_vertex_normals(mesh);
  validate_loaded(mesh, path);
  return mesh;
}

}  // namespace

Mesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
  if (!std::filesystem::exists(path)) throw Error("load_mesh: no such file " + path.string());
  return format == MeshFormat::OBJ ? load_obj(path) : load_ply(path);
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".obj") return load_mesh(path, MeshFormat::OBJ);
  if (ext == ".ply") return load_mesh(path, MeshFormat::PLY);
  throw Error("load_mesh: unrecognized extension '" + ext + "' for " + path.string());
}

void save_obj(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_obj: cannot open " + path.string() + " for writing");
  out.precision(17);
  for (const Vec3& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const Vec3& n : mesh.normals) out << "vn " << n.x << ' ' << n.y << ' ' << n.z << '\n';
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << "//" << t[0] + 1 << ' ' << t[1] + 1 << "//" << t[1] + 1 << ' '
        << t[2] + 1 << "//" << t[2] + 1 << '\n';
  if (!out) throw Error("save_obj: write failed for " + path.string());
}

}  // namespace quicci
