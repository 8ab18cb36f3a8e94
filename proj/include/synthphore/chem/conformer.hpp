//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "synthphore/chem/molgraph.hpp"

namespace synthphore::chem {

using Vec3 = std::array<double, 3>;

// Heavy-atom 3D embedding: random 4D start, minimization of a distance-
// geometry style force field (bond lengths, 1-3 distances from ideal angles,
// ring polygons, planarity, soft non-bonded walls), then collapse to 3D.
// Deterministic for a fixed seed. Throws EmbedFailure after three attempts.
std::vector<Vec3> embed_molecule(const MolGraph& g, std::uint64_t seed);

// Residual strain of the embedding force field for the given coordinates.
double embedding_energy(const MolGraph& g, const std::vector<Vec3>& coords);

// MDL V2000 mol block terminated by "$$$$".
std::string to_sdf(const MolGraph& g, const std::vector<Vec3>& coords, const std::string& title);

}  // namespace synthphore::chem
