// Domain parsing (JSON and .poly dialects), mesh serialization (Gmsh 2.2
// ASCII and JSON), and standalone SVG rendering.

#include "trigen/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "trigen/cdt.hpp"

namespace trigen {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

PolygonDomain normalize_or_throw(const PolygonDomain& raw) {
  PolygonValidation val = validate_polygon(raw);
  if (!val.ok()) {
    std::string what = "invalid polygon:";
    for (const auto& d : val.defects) what += "\n  - " + d;
    throw InvalidPolygonError(what, val.defects);
  }
  return std::move(val.normalized);
}

// --------------------------- JSON domain -----------------------------------

std::vector<Point2> parse_loop_json(const nlohmann::json& arr, const std::string& what) {
  if (!arr.is_array()) throw IoError(what + " must be an array of [x, y] pairs");
  std::vector<Point2> loop;
  loop.reserve(arr.size());
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw IoError(what + " entries must be [x, y] number pairs");
    }
    loop.push_back({item[0].get<double>(), item[1].get<double>()});
  }
  return loop;
}

PolygonDomain parse_domain_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("outer")) {
    throw IoError("domain JSON must be an object with an \"outer\" loop");
  }
  PolygonDomain domain;
  domain.outer = parse_loop_json(doc["outer"], "\"outer\"");
  if (doc.contains("holes")) {
    if (!doc["holes"].is_array()) throw IoError("\"holes\" must be an array of loops");
    for (const auto& hole : doc["holes"]) {
      domain.holes.push_back(parse_loop_json(hole, "hole"));
    }
  }
  return domain;
}

// --------------------------- .poly domain ----------------------------------

// Tokenized view of a .poly file: '#' comments stripped, blank lines skipped.
struct PolyReader {
  std::vector<std::vector<std::string>> lines;
  std::size_t next = 0;

  explicit PolyReader(std::istream& in) {
    std::string raw;
    while (std::getline(in, raw)) {
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ss(raw);
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (!tokens.empty()) lines.push_back(std::move(tokens));
    }
  }

  bool done() const { return next >= lines.size(); }
  const std::vector<std::string>& take() {
    if (done()) throw IoError(".poly: unexpected end of file");
    return lines[next++];
  }
};

long to_long(const std::string& tok, const char* what) {
  long value = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw IoError(std::string(".poly: expected an integer for ") + what + ", got '" + tok + "'");
  }
  return value;
}

double to_double(const std::string& tok, const char* what) {
  double value = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw IoError(std::string(".poly: expected a number for ") + what + ", got '" + tok + "'");
  }
  return value;
}

PolygonDomain parse_domain_poly(std::istream& in) {
  PolyReader reader(in);

  const auto& vh = reader.take();
  if (vh.size() < 2) throw IoError(".poly: vertex header needs <count> <dim> [attrs] [markers]");
  const long vertex_count = to_long(vh[0], "vertex count");
  if (to_long(vh[1], "dimension") != 2) throw IoError(".poly: only dimension 2 is supported");
  if (vertex_count < 3) throw IoError(".poly: fewer than 3 vertices");

  std::map<long, Point2> coords;
  for (long i = 0; i < vertex_count; ++i) {
    const auto& line = reader.take();
    if (line.size() < 3) throw IoError(".poly: vertex line needs <index> <x> <y>");
    const long idx = to_long(line[0], "vertex index");
    if (!coords.emplace(idx, Point2{to_double(line[1], "x"), to_double(line[2], "y")}).second) {
      throw IoError(".poly: duplicate vertex index " + std::to_string(idx));
    }
  }

  const auto& sh = reader.take();
  if (sh.empty()) throw IoError(".poly: missing segment header");
  const long segment_count = to_long(sh[0], "segment count");
  if (segment_count < 3) throw IoError(".poly: fewer than 3 segments");

  std::map<long, std::vector<long>> adjacency;  // vertex -> neighbors
  for (long i = 0; i < segment_count; ++i) {
    const auto& line = reader.take();
    if (line.size() < 3) throw IoError(".poly: segment line needs <index> <v1> <v2>");
    const long a = to_long(line[1], "segment endpoint");
    const long b = to_long(line[2], "segment endpoint");
    if (!coords.count(a) || !coords.count(b)) {
      throw IoError(".poly: segment references unknown vertex");
    }
    if (a == b) throw IoError(".poly: zero-length segment");
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }

  const auto& hh = reader.take();
  const long hole_count = to_long(hh[0], "hole count");
  std::vector<Point2> seeds;
  for (long i = 0; i < hole_count; ++i) {
    const auto& line = reader.take();
    if (line.size() < 3) throw IoError(".poly: hole line needs <index> <x> <y>");
    seeds.push_back({to_double(line[1], "hole x"), to_double(line[2], "hole y")});
  }
  if (!reader.done()) {
    const auto& rh = reader.take();
    if (to_long(rh[0], "region count") != 0 || !reader.done()) {
      throw IoError(".poly: regional attributes are not supported");
    }
  }

  // Segments must form disjoint simple cycles: degree exactly 2 everywhere,
  // every vertex used.
  for (const auto& [idx, p] : coords) {
    (void)p;
    const auto it = adjacency.find(idx);
    const std::size_t degree = it == adjacency.end() ? 0 : it->second.size();
    if (degree != 2) {
      throw IoError(".poly: vertex " + std::to_string(idx) + " lies on " +
                    std::to_string(degree) + " segments; closed loops need exactly 2");
    }
  }

  std::vector<std::vector<Point2>> loops;
  std::vector<std::vector<long>> loop_indices;
  std::map<long, bool> visited;
  for (const auto& [start, nbrs] : adjacency) {
    if (visited[start]) continue;
    std::vector<long> cycle{start};
    visited[start] = true;
    long prev = start;
    long cur = std::min(nbrs[0], nbrs[1]);
    while (cur != start) {
      if (visited[cur]) throw IoError(".poly: segments cross-link between loops");
      visited[cur] = true;
      cycle.push_back(cur);
      const auto& nn = adjacency.at(cur);
      const long nxt = nn[0] == prev ? nn[1] : nn[0];
      prev = cur;
      cur = nxt;
    }
    if (cycle.size() < 3) throw IoError(".poly: degenerate 2-vertex loop");
    loop_indices.push_back(cycle);
    std::vector<Point2> pts;
    pts.reserve(cycle.size());
    for (const long idx : cycle) pts.push_back(coords.at(idx));
    loops.push_back(std::move(pts));
  }
  if (loops.empty()) throw IoError(".poly: no closed loops");

  // The outer loop is the one with the largest absolute area; hole seeds
  // pick the smallest loop containing them.
  std::vector<double> abs_area(loops.size());
  std::size_t outer = 0;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    abs_area[i] = std::fabs(polygon_area(loops[i]));
    if (abs_area[i] > abs_area[outer]) outer = i;
  }

  std::vector<std::uint8_t> is_hole(loops.size(), 0);
  for (const Point2& seed : seeds) {
    std::size_t best = loops.size();
    for (std::size_t i = 0; i < loops.size(); ++i) {
      if (point_in_polygon(loops[i], seed) != PointLocation::Inside) continue;
      if (best == loops.size() || abs_area[i] < abs_area[best]) best = i;
    }
    if (best == loops.size() || best == outer) {
      throw IoError(".poly: hole seed (" + fmt_double(seed.x) + "," + fmt_double(seed.y) +
                    ") is not inside any inner loop");
    }
    is_hole[best] = 1;
  }
  for (std::size_t i = 0; i < loops.size(); ++i) {
    if (i != outer && !is_hole[i]) {
      throw IoError(".poly: inner loop without a hole seed");
    }
  }

  PolygonDomain domain;
  domain.outer = std::move(loops[outer]);
  for (std::size_t i = 0; i < loops.size(); ++i) {
    if (is_hole[i]) domain.holes.push_back(std::move(loops[i]));
  }
  return domain;
}

}  // namespace

PolygonDomain parse_domain(std::istream& in, DomainFormat format) {
  PolygonDomain raw =
      format == DomainFormat::Json ? parse_domain_json(in) : parse_domain_poly(in);
  return normalize_or_throw(raw);
}

PolygonDomain parse_domain_file(const std::string& path, std::optional<DomainFormat> format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  if (!format) {
    format = std::filesystem::path(path).extension() == ".poly" ? DomainFormat::Poly
                                                                : DomainFormat::Json;
  }
  return parse_domain(in, *format);
}

// ----------------------------- mesh output ---------------------------------

std::string write_mesh(const TriMesh& mesh, MeshFormat format) {
  if (format == MeshFormat::Json) {
    nlohmann::json doc;
    auto& verts = doc["vertices"] = nlohmann::json::array();
    for (const Point2& p : mesh.vertices) verts.push_back({p.x, p.y});
    auto& tris = doc["triangles"] = nlohmann::json::array();
    for (const Tri& t : mesh.triangles) tris.push_back({t[0], t[1], t[2]});
    auto& cons = doc["constrained_edges"] = nlohmann::json::array();
    for (const auto& [u, v] : mesh.constrained.sorted()) cons.push_back({u, v});
    return doc.dump(2) + "\n";
  }

  std::string out;
  out += "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n";
  out += std::to_string(mesh.vertices.size()) + "\n";
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    out += std::to_string(v + 1) + " " + fmt_double(mesh.vertices[v].x) + " " +
           fmt_double(mesh.vertices[v].y) + " 0\n";
  }
  out += "$EndNodes\n$Elements\n";
  const auto lines = mesh.constrained.sorted();
  out += std::to_string(lines.size() + mesh.triangles.size()) + "\n";
  std::size_t id = 1;
  for (const auto& [u, v] : lines) {
    out += std::to_string(id++) + " 1 2 0 0 " + std::to_string(u + 1) + " " +
           std::to_string(v + 1) + "\n";
  }
  for (const Tri& t : mesh.triangles) {
    out += std::to_string(id++) + " 2 2 0 0 " + std::to_string(t[0] + 1) + " " +
           std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
  }
  out += "$EndElements\n";
  return out;
}

TriMesh parse_mesh_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("mesh JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("triangles")) {
    throw IoError("mesh JSON needs \"vertices\" and \"triangles\"");
  }
  TriMesh mesh;
  for (const auto& item : doc["vertices"]) {
    if (!item.is_array() || item.size() != 2) throw IoError("mesh JSON: bad vertex entry");
    mesh.vertices.push_back({item[0].get<double>(), item[1].get<double>()});
  }
  for (const auto& item : doc["triangles"]) {
    if (!item.is_array() || item.size() != 3) throw IoError("mesh JSON: bad triangle entry");
    Tri t{item[0].get<VertexIndex>(), item[1].get<VertexIndex>(), item[2].get<VertexIndex>()};
    for (const VertexIndex v : t) {
      if (v >= mesh.vertices.size()) throw IoError("mesh JSON: triangle index out of range");
    }
    mesh.triangles.push_back(t);
  }
  if (doc.contains("constrained_edges")) {
    for (const auto& item : doc["constrained_edges"]) {
      if (!item.is_array() || item.size() != 2) throw IoError("mesh JSON: bad edge entry");
      const auto u = item[0].get<VertexIndex>();
      const auto v = item[1].get<VertexIndex>();
      if (u >= mesh.vertices.size() || v >= mesh.vertices.size()) {
        throw IoError("mesh JSON: edge index out of range");
      }
      mesh.constrained.insert(u, v);
    }
  }
  build_adjacency(mesh);
  return mesh;
}

// ------------------------------- SVG ---------------------------------------

namespace {

std::string color_hex(double t) {
  // Three-stop linear map: cool blue -> light grey -> warm red.
  constexpr double stops[3][3] = {
      {0.230, 0.299, 0.754}, {0.865, 0.865, 0.865}, {0.706, 0.016, 0.150}};
  t = std::clamp(t, 0.0, 1.0);
  const int seg = t < 0.5 ? 0 : 1;
  const double s = (t - 0.5 * seg) * 2.0;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                int(std::lround(255.0 * (stops[seg][0] + s * (stops[seg + 1][0] - stops[seg][0])))),
                int(std::lround(255.0 * (stops[seg][1] + s * (stops[seg + 1][1] - stops[seg][1])))),
                int(std::lround(255.0 * (stops[seg][2] + s * (stops[seg + 1][2] - stops[seg][2])))));
  return buf;
}

}  // namespace

std::string render_svg(const TriMesh& mesh, ColorBy color_by, std::span<const double> scalars) {
  if (mesh.triangles.empty()) throw MeshError("render_svg: empty mesh");
  if (color_by == ColorBy::Eta && scalars.size() != mesh.triangles.size()) {
    throw Error("render_svg: Eta coloring needs one scalar per triangle");
  }

  double minx = mesh.vertices[0].x, maxx = minx, miny = mesh.vertices[0].y, maxy = miny;
  for (const Point2& p : mesh.vertices) {
    minx = std::fmin(minx, p.x);
    maxx = std::fmax(maxx, p.x);
    miny = std::fmin(miny, p.y);
    maxy = std::fmax(maxy, p.y);
  }
  const double pad_x = 0.02 * (maxx - minx);
  const double pad_y = 0.02 * (maxy - miny);
  const double width = (maxx - minx) + 2.0 * pad_x;
  const double height = (maxy - miny) + 2.0 * pad_y;
  const auto sx = [&](double x) { return x - minx + pad_x; };
  const auto sy = [&](double y) { return (maxy + pad_y) - y; };  // flip to screen axes

  std::vector<double> values;
  double lo = 0.0, hi = 1.0;
  if (color_by == ColorBy::Quality) {
    values.reserve(mesh.triangles.size());
    for (const Tri& t : mesh.triangles) {
      const auto m =
          try_tri_metrics(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
      values.push_back(m ? m->quality : 0.0);
    }
  } else if (color_by == ColorBy::Eta) {
    values.assign(scalars.begin(), scalars.end());
    lo = *std::min_element(values.begin(), values.end());
    hi = *std::max_element(values.begin(), values.end());
  }

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"" +
         fmt_double(800.0 * height / width) + "\" viewBox=\"0 0 " + fmt_double(width) + " " +
         fmt_double(height) + "\">\n";
  const std::string stroke_width = fmt_double(0.002 * std::fmax(width, height));
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Tri& tri = mesh.triangles[t];
    std::string fill = "none";
    if (!values.empty()) {
      const double v = values[t];
      fill = color_hex(hi > lo ? (v - lo) / (hi - lo) : 0.5);
    }
    out += "<polygon points=\"";
    for (int k = 0; k < 3; ++k) {
      const Point2& p = mesh.vertices[tri[k]];
      out += fmt_double(sx(p.x)) + "," + fmt_double(sy(p.y));
      if (k < 2) out += " ";
    }
    out += "\" fill=\"" + fill + "\" stroke=\"#333333\" stroke-width=\"" + stroke_width + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace trigen
