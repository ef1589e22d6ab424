#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "trigen/fem.hpp"
#include "trigen/mesh.hpp"

namespace trigen {

enum class DomainFormat { Json, Poly };

/// Parse a domain description.
///  - Json: {"outer": [[x,y],...], "holes": [[[x,y],...],...]} (holes optional)
///  - Poly: planar straight line graph dialect (nodes, segments, holes);
///    segments must form closed loops; hole seed points select hole loops.
/// The result is validated and normalized. Throws IoError on malformed
/// input, InvalidPolygonError (with the defect list) on invalid geometry.
PolygonDomain parse_domain(std::istream& in, DomainFormat format);

/// File variant; the format defaults by extension (.poly -> Poly, else Json).
PolygonDomain parse_domain_file(const std::string& path,
                                std::optional<DomainFormat> format = std::nullopt);

enum class MeshFormat { Msh2, Json };

/// Serialize a mesh.
///  - Msh2: Gmsh 2.2 ASCII; constrained edges as line elements first, then
///    triangles, all 1-based.
///  - Json: {"vertices", "triangles", "constrained_edges"}, 0-based; numbers
///    round-trip bitwise.
std::string write_mesh(const TriMesh& mesh, MeshFormat format);

/// Inverse of write_mesh(-, Json), adjacency rebuilt.
TriMesh parse_mesh_json(const std::string& text);

enum class ColorBy { None, Quality, Eta };

/// Standalone SVG rendering of the mesh, one polygon per triangle, y axis
/// flipped to screen orientation, viewBox padded 2%. Quality coloring uses
/// per-triangle quality; Eta coloring uses `scalars` (one value per
/// triangle, required for Eta).
std::string render_svg(const TriMesh& mesh, ColorBy color_by = ColorBy::None,
                       std::span<const double> scalars = {});

}  // namespace trigen
