//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "synthphore/chem/conformer.hpp"
#include "synthphore/chem/molgraph.hpp"

namespace synthphore::chem {

enum class FeatureClass : int { HBD = 0, HBA = 1, AR = 2, HC = 3, PIF = 4, NIF = 5 };

inline constexpr int kFeatureClasses = 6;

std::string_view feature_name(FeatureClass c);
// Throws ParseError for unknown names.
FeatureClass feature_from_name(std::string_view name);

struct PharmacophorePoint {
  FeatureClass cls;
  Vec3 xyz;
};

// Fully connected point set; edges are implicit.
struct PharmacophoreGraph {
  std::vector<PharmacophorePoint> points;

  std::size_t size() const { return points.size(); }
  std::array<double, kFeatureClasses> one_hot(std::size_t i) const;
};

// Atom indices (or ring atom lists for AR) carrying each feature class.
struct FeatureSites {
  std::vector<std::vector<int>> sites[kFeatureClasses];
};

FeatureSites find_feature_sites(const MolGraph& g);

// One point per (class, site): ring centroids for AR, atom positions otherwise.
// Throws EmptyPharmacophore when no feature is found.
PharmacophoreGraph extract_pharmacophores(const MolGraph& g, const std::vector<Vec3>& coords);

}  // namespace synthphore::chem
