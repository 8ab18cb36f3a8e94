//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "synthphore/chem/adapter.hpp"

namespace synthphore::eval {

struct DockingJob {
  std::filesystem::path receptor;
  std::vector<chem::Molecule> ligands;
  // Box centre in Å; defaults to each ligand's conformer centroid.
  std::optional<std::array<double, 3>> center;
  double box_edge = 25.0;
  int num_modes = 9;  // at most 10
  std::string executable = "smina";
  int workers = 4;
  std::uint64_t seed = 0;
  std::filesystem::path work_dir;  // empty: a fresh directory under the temp path
};

struct DockingResult {
  std::string smiles;
  double best_score = 0.0;  // kcal/mol, lower is better
  std::vector<double> mode_scores;
};

// Resolves a program name against PATH (names containing '/' are taken as paths).
std::optional<std::filesystem::path> find_executable(const std::string& name);

// Affinities from the "mode | affinity | ..." table. Throws ToolFailure when absent.
std::vector<double> parse_affinity_table(const std::string& output);

// Heavy-atom rigid ligand in PDBQT with AutoDock atom types.
std::string to_pdbqt(const chem::Conformer& conf);

std::vector<std::string> docking_command(const DockingJob& job, const std::filesystem::path& exe,
                                         const std::filesystem::path& ligand, const std::filesystem::path& out,
                                         const std::array<double, 3>& center);

// Throws ExternalToolMissing and ToolFailure (message carries captured output).
std::vector<DockingResult> dock(const DockingJob& job);

}  // namespace synthphore::eval
