#pragma once

#include <filesystem>

#include "quicci/mesh.hpp"

namespace quicci {

enum class MeshFormat { OBJ, PLY };

/// Load a triangle mesh. Quads and larger polygons are fan-triangulated.
/// When the file supplies no usable normals, per-vertex normals are computed
/// as area-weighted averages of incident face normals.
Mesh load_mesh(const std::filesystem::path& path, MeshFormat format);

/// Format inferred from the file extension (.obj / .ply).
Mesh load_mesh(const std::filesystem::path& path);

/// Write positions, normals and faces as OBJ (v / vn / f v//vn records).
void save_obj(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace quicci
