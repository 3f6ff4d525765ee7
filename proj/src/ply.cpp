#include "sclab/io/ply.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "sclab/error.hpp"

namespace sclab::io {

namespace {

using geom::TriangleMesh;

enum class PropType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

std::size_t prop_size(PropType t) {
  switch (t) {
    case PropType::kInt8:
    case PropType::kUint8:
      return 1;
    case PropType::kInt16:
    case PropType::kUint16:
      return 2;
    case PropType::kInt32:
    case PropType::kUint32:
    case PropType::kFloat32:
      return 4;
    case PropType::kFloat64:
      return 8;
  }
  return 0;
}

PropType parse_type(const std::string& s, const std::string& path) {
  if (s == "char" || s == "int8") return PropType::kInt8;
  if (s == "uchar" || s == "uint8") return PropType::kUint8;
  if (s == "short" || s == "int16") return PropType::kInt16;
  if (s == "ushort" || s == "uint16") return PropType::kUint16;
  if (s == "int" || s == "int32") return PropType::kInt32;
  if (s == "uint" || s == "uint32") return PropType::kUint32;
  if (s == "float" || s == "float32") return PropType::kFloat32;
  if (s == "double" || s == "float64") return PropType::kFloat64;
  throw DataError(path + ": unsupported PLY property type '" + s + "'");
}

struct Property {
  std::string name;
  PropType type = PropType::kFloat32;
  bool is_list = false;
  PropType count_type = PropType::kUint8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  bool binary = false;
  std::vector<Element> elements;
  std::size_t data_offset = 0;
};

Header parse_header(std::istream& in, const std::string& path) {
  Header header;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (line.size() >= 1 && line.back() == '\r') line.pop_back();
  if (line != "ply") throw DataError(path + ": not a PLY file");
  bool format_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    if (token == "comment" || token == "obj_info" || token.empty()) continue;
    if (token == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "ascii")
        header.binary = false;
      else if (fmt == "binary_little_endian")
        header.binary = true;
      else
        throw DataError(path + ": unsupported PLY format '" + fmt + "'");
      format_seen = true;
    } else if (token == "element") {
      Element e;
      ls >> e.name >> e.count;
      header.elements.push_back(e);
    } else if (token == "property") {
      if (header.elements.empty()) throw DataError(path + ": property before element");
      std::string type;
      ls >> type;
      Property p;
      if (type == "list") {
        std::string count_type, value_type;
        ls >> count_type >> value_type >> p.name;
        p.is_list = true;
        p.count_type = parse_type(count_type, path);
        p.type = parse_type(value_type, path);
      } else {
        p.type = parse_type(type, path);
        ls >> p.name;
      }
      header.elements.back().properties.push_back(p);
    } else if (token == "end_header") {
      if (!format_seen) throw DataError(path + ": missing format line");
      return header;
    }
  }
  throw DataError(path + ": unterminated PLY header");
}

double read_binary_value(std::istream& in, PropType type, const std::string& path) {
  char buf[8];
  in.read(buf, static_cast<std::streamsize>(prop_size(type)));
  if (!in) throw DataError(path + ": truncated PLY data");
  switch (type) {
    case PropType::kInt8: {
      int8_t v;
      std::memcpy(&v, buf, 1);
      return v;
    }
    case PropType::kUint8: {
      uint8_t v;
      std::memcpy(&v, buf, 1);
      return v;
    }
    case PropType::kInt16: {
      int16_t v;
      std::memcpy(&v, buf, 2);
      return v;
    }
    case PropType::kUint16: {
      uint16_t v;
      std::memcpy(&v, buf, 2);
      return v;
    }
    case PropType::kInt32: {
      int32_t v;
      std::memcpy(&v, buf, 4);
      return v;
    }
    case PropType::kUint32: {
      uint32_t v;
      std::memcpy(&v, buf, 4);
      return static_cast<double>(v);
    }
    case PropType::kFloat32: {
      float v;
      std::memcpy(&v, buf, 4);
      return v;
    }
    case PropType::kFloat64: {
      double v;
      std::memcpy(&v, buf, 8);
      return v;
    }
  }
  return 0.0;
}

double read_ascii_value(std::istream& in, const std::string& path) {
  double v;
  if (!(in >> v)) throw DataError(path + ": truncated PLY data");
  return v;
}

struct ParsedPly {
  // One row per element instance, one column per scalar property.
  std::vector<std::vector<double>> vertex_rows;
  std::vector<std::string> vertex_props;
  std::vector<std::vector<int>> faces;
};

ParsedPly read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  const Header header = parse_header(in, path);

  ParsedPly out;
  for (const Element& elem : header.elements) {
    const bool is_vertex = elem.name == "vertex";
    const bool is_face = elem.name == "face";
    if (is_vertex) {
      for (const Property& p : elem.properties)
        if (!p.is_list) out.vertex_props.push_back(p.name);
      out.vertex_rows.reserve(elem.count);
    }
    for (std::size_t i = 0; i < elem.count; ++i) {
      std::vector<double> row;
      std::vector<int> face;
      for (const Property& p : elem.properties) {
        if (p.is_list) {
          const std::size_t n = static_cast<std::size_t>(
              header.binary ? read_binary_value(in, p.count_type, path)
                            : read_ascii_value(in, path));
          for (std::size_t k = 0; k < n; ++k) {
            const double v = header.binary ? read_binary_value(in, p.type, path)
                                           : read_ascii_value(in, path);
            if (is_face && (p.name == "vertex_indices" || p.name == "vertex_index"))
              face.push_back(static_cast<int>(v));
          }
        } else {
          const double v =
              header.binary ? read_binary_value(in, p.type, path) : read_ascii_value(in, path);
          if (is_vertex) row.push_back(v);
        }
      }
      if (is_vertex) out.vertex_rows.push_back(std::move(row));
      if (is_face && !face.empty()) out.faces.push_back(std::move(face));
    }
  }
  return out;
}

int find_prop(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

void append_binary(std::string& buf, const void* data, std::size_t n) {
  buf.append(static_cast<const char*>(data), n);
}

std::string cloud_header(Eigen::Index n, bool normals, bool labels, PlyFormat format) {
  std::ostringstream h;
  h << "ply\nformat "
    << (format == PlyFormat::kAscii ? "ascii" : "binary_little_endian") << " 1.0\n";
  h << "element vertex " << n << "\n";
  h << "property double x\nproperty double y\nproperty double z\n";
  if (normals) h << "property double nx\nproperty double ny\nproperty double nz\n";
  if (labels) h << "property int32 instance_id\n";
  h << "end_header\n";
  return h.str();
}

}  // namespace

void write_point_cloud_ply(const std::string& path, const geom::OrientedPointCloud& cloud,
                           PlyFormat format) {
  static_assert(std::endian::native == std::endian::little, "binary PLY writer assumes LE host");
  const bool normals = cloud.normals.rows() == cloud.points.rows() && cloud.points.rows() > 0;
  const bool labels = cloud.has_labels();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open file for writing");
  out << cloud_header(cloud.points.rows(), normals, labels, format);
  if (format == PlyFormat::kAscii) {
    out.precision(17);
    for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
      out << cloud.points(i, 0) << " " << cloud.points(i, 1) << " " << cloud.points(i, 2);
      if (normals)
        out << " " << cloud.normals(i, 0) << " " << cloud.normals(i, 1) << " "
            << cloud.normals(i, 2);
      if (labels) out << " " << cloud.labels[i];
      out << "\n";
    }
  } else {
    std::string buf;
    buf.reserve(cloud.points.rows() * 56);
    for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
      for (int k = 0; k < 3; ++k) {
        const double v = cloud.points(i, k);
        append_binary(buf, &v, 8);
      }
      if (normals) {
        for (int k = 0; k < 3; ++k) {
          const double v = cloud.normals(i, k);
          append_binary(buf, &v, 8);
        }
      }
      if (labels) {
        const int32_t v = cloud.labels[i];
        append_binary(buf, &v, 4);
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw DataError(path + ": write failed");
}

void write_point_cloud_ply(const std::string& path, const geom::PointCloud& cloud,
                           PlyFormat format) {
  geom::OrientedPointCloud wrapped;
  wrapped.points = cloud.points;
  write_point_cloud_ply(path, wrapped, format);
}

geom::OrientedPointCloud read_point_cloud_ply(const std::string& path) {
  const ParsedPly ply = read_ply(path);
  const int ix = find_prop(ply.vertex_props, "x");
  const int iy = find_prop(ply.vertex_props, "y");
  const int iz = find_prop(ply.vertex_props, "z");
  if (ix < 0 || iy < 0 || iz < 0) throw DataError(path + ": PLY has no x/y/z properties");
  const int inx = find_prop(ply.vertex_props, "nx");
  const int iny = find_prop(ply.vertex_props, "ny");
  const int inz = find_prop(ply.vertex_props, "nz");
  const int ilabel = find_prop(ply.vertex_props, "instance_id");
  const bool normals = inx >= 0 && iny >= 0 && inz >= 0;

  geom::OrientedPointCloud cloud;
  const Eigen::Index n = static_cast<Eigen::Index>(ply.vertex_rows.size());
  cloud.points.resize(n, 3);
  cloud.normals.resize(normals ? n : 0, 3);
  if (ilabel >= 0) cloud.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = ply.vertex_rows[i];
    cloud.points.row(i) << row[ix], row[iy], row[iz];
    if (normals) cloud.normals.row(i) << row[inx], row[iny], row[inz];
    if (ilabel >= 0) cloud.labels[i] = static_cast<int32_t>(row[ilabel]);
  }
  return cloud;
}

void write_mesh_ply(const std::string& path, const geom::TriangleMesh& mesh, PlyFormat format) {
  static_assert(std::endian::native == std::endian::little, "binary PLY writer assumes LE host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open file for writing");
  std::ostringstream h;
  h << "ply\nformat " << (format == PlyFormat::kAscii ? "ascii" : "binary_little_endian")
    << " 1.0\n";
  h << "element vertex " << mesh.vertex_count() << "\n";
  h << "property double x\nproperty double y\nproperty double z\n";
  h << "element face " << mesh.triangle_count() << "\n";
  h << "property list uchar int vertex_indices\nend_header\n";
  out << h.str();
  if (format == PlyFormat::kAscii) {
    out.precision(17);
    for (Eigen::Index i = 0; i < mesh.vertex_count(); ++i)
      out << mesh.vertices(i, 0) << " " << mesh.vertices(i, 1) << " " << mesh.vertices(i, 2)
          << "\n";
    for (Eigen::Index f = 0; f < mesh.triangle_count(); ++f)
      out << "3 " << mesh.triangles(f, 0) << " " << mesh.triangles(f, 1) << " "
          << mesh.triangles(f, 2) << "\n";
  } else {
    std::string buf;
    for (Eigen::Index i = 0; i < mesh.vertex_count(); ++i) {
      for (int k = 0; k < 3; ++k) {
        const double v = mesh.vertices(i, k);
        append_binary(buf, &v, 8);
      }
    }
    for (Eigen::Index f = 0; f < mesh.triangle_count(); ++f) {
      const uint8_t n = 3;
      append_binary(buf, &n, 1);
      for (int k = 0; k < 3; ++k) {
        const int32_t v = mesh.triangles(f, k);
        append_binary(buf, &v, 4);
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw DataError(path + ": write failed");
}

geom::TriangleMesh read_mesh_ply(const std::string& path) {
  const ParsedPly ply = read_ply(path);
  const int ix = find_prop(ply.vertex_props, "x");
  const int iy = find_prop(ply.vertex_props, "y");
  const int iz = find_prop(ply.vertex_props, "z");
  if (ix < 0 || iy < 0 || iz < 0) throw DataError(path + ": PLY has no x/y/z properties");

  TriangleMesh mesh;
  mesh.vertices.resize(ply.vertex_rows.size(), 3);
  for (std::size_t i = 0; i < ply.vertex_rows.size(); ++i) {
    const auto& row = ply.vertex_rows[i];
    mesh.vertices.row(i) << row[ix], row[iy], row[iz];
  }
  std::vector<std::array<int, 3>> tris;
  for (const auto& face : ply.faces) {
    if (face.size() < 3) throw DataError(path + ": face with fewer than 3 vertices");
    for (std::size_t k = 1; k + 1 < face.size(); ++k)
      tris.push_back({face[0], face[k], face[k + 1]});
  }
  mesh.triangles.resize(tris.size(), 3);
  for (std::size_t f = 0; f < tris.size(); ++f)
    for (int k = 0; k < 3; ++k) mesh.triangles(f, k) = tris[f][k];
  geom::update_watertight_flag(mesh);
  return mesh;
}

}  // namespace sclab::io
