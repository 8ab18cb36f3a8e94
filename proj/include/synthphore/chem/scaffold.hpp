//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "synthphore/chem/molgraph.hpp"

namespace synthphore::chem {

// Ring systems plus linkers; side chains stripped, exocyclic double-bonded
// atoms on kept atoms retained. Acyclic input yields an empty graph.
MolGraph murcko_scaffold(const MolGraph& g);

}  // namespace synthphore::chem
