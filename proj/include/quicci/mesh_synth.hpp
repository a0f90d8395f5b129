#pragma once

#include <cstdint>

#include "quicci/mesh.hpp"

namespace quicci {

/// Unit icosphere centred at the origin. Subdivision level 0 is the
/// icosahedron (20 triangles); each level quadruples the triangle count.
/// Normals are radial.
Mesh make_unit_icosphere(int subdivisions);

/// Axis-aligned cube centred at the origin, 24 vertices (4 per face, face
/// normals), 12 triangles.
Mesh make_cube(double edge);

/// Smoothly deformed icosphere; a cheap source of varied closed test
/// shapes. The deformation field is a fixed sum of sinusoids whose
/// directions, frequencies and phases are drawn from the seed.
Mesh make_blob(uint64_t seed, int subdivisions = 2, double amplitude = 0.3);

}  // namespace quicci
