//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/synth/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "synthphore/util/error.hpp"
#include "synthphore/util/hash.hpp"

namespace synthphore::synth {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

int parse_int(const std::string& text, const std::string& source, std::size_t line, const char* field) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) fail(source, line, std::string("invalid ") + field + " '" + text + "'");
  return value;
}

bool skip_line(const std::string& line) { return line.empty() || line[0] == '#'; }

}  // namespace

Catalog::Catalog(std::vector<BuildingBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw EmptyCatalog("building-block catalog is empty");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (!index_of_id_.emplace(blocks_[i].id, i).second) {
      throw DuplicateEntry("duplicate block id " + std::to_string(blocks_[i].id));
    }
    if (!index_of_smiles_.emplace(blocks_[i].mol.smiles, i).second) {
      throw DuplicateEntry("duplicate block SMILES " + blocks_[i].mol.smiles + " (id " + std::to_string(blocks_[i].id) + ")");
    }
  }
}

const BuildingBlock& Catalog::by_id(int id) const { return blocks_[index_of(id)]; }

std::size_t Catalog::index_of(int id) const {
  const auto it = index_of_id_.find(id);
  if (it == index_of_id_.end()) throw UnknownBlock("unknown building block id " + std::to_string(id));
  return it->second;
}

long Catalog::find_smiles(const std::string& smiles) const {
  const auto it = index_of_smiles_.find(smiles);
  return it == index_of_smiles_.end() ? -1 : static_cast<long>(it->second);
}

std::uint64_t Catalog::digest() const {
  Fnv1a64 h;
  for (const auto& b : blocks_) {
    h.update(std::to_string(b.id));
    h.update("\t");
    h.update(b.mol.smiles);
    h.update("\n");
  }
  return h.digest();
}

Catalog read_catalog(std::istream& in, const std::string& source) {
  std::vector<BuildingBlock> blocks;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (skip_line(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() < 2) fail(source, lineno, "expected id<TAB>SMILES");
    const int id = parse_int(trim(fields[0]), source, lineno, "block id");
    chem::Molecule mol;
    try {
      mol = chem::canonicalize(trim(fields[1]));
    } catch (const ParseError& e) {
      fail(source, lineno, e.what());
    }
    auto fp = chem::morgan_fp(mol, kBlockFingerprintRadius);
    blocks.push_back({id, std::move(mol), std::move(fp)});
  }
  return Catalog(std::move(blocks));
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open catalog " + path.string());
  return read_catalog(in, path.string());
}

TemplateSet::TemplateSet(std::vector<ReactionTemplate> templates) : templates_(std::move(templates)) {
  for (std::size_t i = 0; i < templates_.size(); ++i) {
    if (templates_[i].id <= 0) throw ParseError("template ids must be positive");
    if (!index_of_id_.emplace(templates_[i].id, i).second) {
      throw DuplicateEntry("duplicate template id " + std::to_string(templates_[i].id));
    }
  }
}

const ReactionTemplate& TemplateSet::by_id(int id) const { return templates_[index_of(id)]; }

std::size_t TemplateSet::index_of(int id) const {
  const auto it = index_of_id_.find(id);
  if (it == index_of_id_.end()) throw ParseError("unknown reaction template id " + std::to_string(id));
  return it->second;
}

int TemplateSet::max_id() const {
  int m = 0;
  for (const auto& t : templates_) m = std::max(m, t.id);
  return m;
}

std::uint64_t TemplateSet::digest() const {
  Fnv1a64 h;
  for (const auto& t : templates_) {
    h.update(std::to_string(t.id));
    h.update("\t");
    h.update(t.smarts);
    h.update("\n");
  }
  return h.digest();
}

TemplateSet read_templates(std::istream& in, const std::string& source) {
  std::vector<ReactionTemplate> templates;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (skip_line(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() < 3) fail(source, lineno, "expected id<TAB>arity<TAB>reaction-SMARTS");
    const int id = parse_int(trim(fields[0]), source, lineno, "template id");
    const int arity = parse_int(trim(fields[1]), source, lineno, "arity");
    if (arity != 1 && arity != 2) fail(source, lineno, "arity must be 1 or 2");
    const std::string smarts = trim(fields[2]);
    ReactionTemplate t{id, smarts, arity, fields.size() > 3 ? trim(fields[3]) : std::string(), {}};
    try {
      t.rxn = chem::ReactionSmarts::parse(smarts);
    } catch (const ParseError& e) {
      fail(source, lineno, e.what());
    }
    if (static_cast<int>(t.rxn.arity()) != arity) fail(source, lineno, "arity disagrees with reaction SMARTS");
    templates.push_back(std::move(t));
  }
  return TemplateSet(std::move(templates));
}

TemplateSet load_templates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open templates " + path.string());
  return read_templates(in, path.string());
}

std::filesystem::path default_catalog_path() { return std::filesystem::path(SYNTHPHORE_DATA_DIR) / "catalog.tsv"; }
std::filesystem::path default_templates_path() { return std::filesystem::path(SYNTHPHORE_DATA_DIR) / "templates.tsv"; }

}  // namespace synthphore::synth
