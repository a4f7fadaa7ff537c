// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shapemetric/mesh.hpp"
#include "shapemetric/sdf.hpp"

namespace shapemetric {

/// Classic 256-case marching cubes with linear edge interpolation.
///
/// Output vertices are in the grid's world coordinates and face normals
/// point toward increasing field values. Vertices on shared lattice edges
/// are welded by edge identity, so the result is identical for any thread
/// count. A grid with no crossing yields an empty mesh.
///
/// Throws Error(Data) if any grid value is non-finite.
TriangleMesh marching_cubes(const SdfGrid& grid, double iso);

}  // namespace shapemetric
