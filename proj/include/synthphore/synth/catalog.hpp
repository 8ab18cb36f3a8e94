//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "synthphore/chem/adapter.hpp"
#include "synthphore/chem/reaction.hpp"

namespace synthphore::synth {

inline constexpr int kBlockFingerprintRadius = 3;

struct BuildingBlock {
  int id;
  chem::Molecule mol;
  chem::BitFingerprint fp;
};

class Catalog {
 public:
  Catalog() = default;
  // Throws DuplicateEntry (id or canonical SMILES) and EmptyCatalog.
  explicit Catalog(std::vector<BuildingBlock> blocks);

  std::size_t size() const { return blocks_.size(); }
  const std::vector<BuildingBlock>& blocks() const { return blocks_; }
  const BuildingBlock& operator[](std::size_t index) const { return blocks_[index]; }
  // Throws UnknownBlock.
  const BuildingBlock& by_id(int id) const;
  bool contains(int id) const { return index_of_id_.count(id) != 0; }
  std::size_t index_of(int id) const;
  // Index of the block with this canonical SMILES, or -1.
  long find_smiles(const std::string& smiles) const;
  // FNV-1a digest over (id, canonical SMILES) pairs.
  std::uint64_t digest() const;

 private:
  std::vector<BuildingBlock> blocks_;
  std::unordered_map<int, std::size_t> index_of_id_;
  std::unordered_map<std::string, std::size_t> index_of_smiles_;
};

// TSV "id<TAB>SMILES"; blank lines and lines starting with '#' are skipped.
// Throws ParseError (message carries the line number), DuplicateEntry, EmptyCatalog.
Catalog load_catalog(const std::filesystem::path& path);
Catalog read_catalog(std::istream& in, const std::string& source = "<stream>");

inline constexpr int kNoReaction = 0;

struct ReactionTemplate {
  int id;
  std::string smarts;
  int arity;
  std::string name;
  chem::ReactionSmarts rxn;
};

class TemplateSet {
 public:
  TemplateSet() = default;
  // Ids must be positive (0 is the reserved no-reaction token). Throws DuplicateEntry.
  explicit TemplateSet(std::vector<ReactionTemplate> templates);

  std::size_t size() const { return templates_.size(); }
  const std::vector<ReactionTemplate>& templates() const { return templates_; }
  const ReactionTemplate& operator[](std::size_t index) const { return templates_[index]; }
  // Throws UnknownBlock-style lookup failure as ParseError.
  const ReactionTemplate& by_id(int id) const;
  bool contains(int id) const { return index_of_id_.count(id) != 0; }
  std::size_t index_of(int id) const;
  int max_id() const;
  std::uint64_t digest() const;

 private:
  std::vector<ReactionTemplate> templates_;
  std::unordered_map<int, std::size_t> index_of_id_;
};

// Text file "id<TAB>arity<TAB>reaction-SMARTS[<TAB>name]". Throws ParseError
// with line number (including arity disagreeing with the SMARTS) and DuplicateEntry.
TemplateSet load_templates(const std::filesystem::path& path);
TemplateSet read_templates(std::istream& in, const std::string& source = "<stream>");

// Bundled desk data.
std::filesystem::path default_catalog_path();
std::filesystem::path default_templates_path();

}  // namespace synthphore::synth
