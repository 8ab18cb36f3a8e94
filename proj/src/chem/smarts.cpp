//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/smarts.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

#include "synthphore/chem/element.hpp"
#include "synthphore/util/error.hpp"

namespace synthphore::chem {

class SmartsParser {
 public:
  explicit SmartsParser(std::string_view text) : text_(text) {}

  SmartsPattern parse() {
    SmartsPattern p;
    p.text_ = std::string(text_);
    if (text_.empty()) fail("empty pattern");
    int prev = -1;
    bool have_bond = false;
    BondExpr bond;
    std::vector<int> branches;
    std::map<int, std::pair<int, std::optional<BondExpr>>> rings;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') {
        if (prev < 0) fail("branch without atom");
        branches.push_back(prev);
        ++pos_;
      } else if (c == ')') {
        if (branches.empty()) fail("unbalanced ')'");
        prev = branches.back();
        branches.pop_back();
        ++pos_;
      } else if (c == '.') {
        prev = -1;
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0) fail("ring closure without atom");
        int digit;
        if (c == '%') {
          if (pos_ + 2 >= text_.size()) fail("bad ring number");
          digit = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
          pos_ += 3;
        } else {
          digit = c - '0';
          ++pos_;
        }
        auto it = rings.find(digit);
        if (it == rings.end()) {
          rings[digit] = {prev, have_bond ? std::optional<BondExpr>(bond) : std::nullopt};
        } else {
          BondExpr e = have_bond ? bond : (it->second.second ? *it->second.second : BondExpr{});
          add_bond(p, it->second.first, prev, e);
          rings.erase(it);
        }
        have_bond = false;
        bond = BondExpr{};
      } else if (is_bond_char(c)) {
        bond = parse_bond_expr();
        have_bond = true;
      } else {
        const int atom = parse_atom(p);
        if (prev >= 0) add_bond(p, prev, atom, have_bond ? bond : BondExpr{});
        have_bond = false;
        bond = BondExpr{};
        prev = atom;
      }
    }
    if (!branches.empty()) fail("unbalanced '('");
    if (!rings.empty()) fail("unclosed ring");
    p.atom_bonds_.assign(p.atoms_.size(), {});
    for (std::size_t b = 0; b < p.bonds_.size(); ++b) {
      p.atom_bonds_[static_cast<std::size_t>(p.bonds_[b].begin)].push_back(static_cast<int>(b));
      p.atom_bonds_[static_cast<std::size_t>(p.bonds_[b].end)].push_back(static_cast<int>(b));
    }
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SmartsError("SMARTS parse error at position " + std::to_string(pos_) + ": " + what + " in '" +
                      std::string(text_) + "'");
  }

  static bool is_bond_char(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '~' || c == '@' || c == '!' || c == '/' ||
           c == '\\' || c == '&' || c == ';' || c == ',';
  }

  static int order_spec(const BondExpr& e) {
    switch (e.kind) {
      case BondExpr::Kind::Single: return 1;
      case BondExpr::Kind::Double: return 2;
      case BondExpr::Kind::Triple: return 3;
      case BondExpr::Kind::Aromatic: return 4;
      case BondExpr::Kind::Any: return -1;
      case BondExpr::Kind::Default: return 0;
      default: return -1;
    }
  }

  void add_bond(SmartsPattern& p, int a, int b, const BondExpr& e) {
    p.bonds_.push_back(QueryBond{a, b, e, order_spec(e)});
  }

  // Bond expressions: '!' > '&'/implicit > ',' > ';'.
  BondExpr parse_bond_expr() {
    BondExpr low = parse_bond_or();
    while (pos_ < text_.size() && text_[pos_] == ';') {
      ++pos_;
      low = combine(BondExpr::Kind::And, std::move(low), parse_bond_or());
    }
    return low;
  }
  BondExpr parse_bond_or() {
    BondExpr e = parse_bond_and();
    while (pos_ < text_.size() && text_[pos_] == ',') {
      ++pos_;
      e = combine(BondExpr::Kind::Or, std::move(e), parse_bond_and());
    }
    return e;
  }
  BondExpr parse_bond_and() {
    BondExpr e = parse_bond_unary();
    while (pos_ < text_.size()) {
      if (text_[pos_] == '&') {
        ++pos_;
        e = combine(BondExpr::Kind::And, std::move(e), parse_bond_unary());
      } else if (pos_ < text_.size() && is_bond_primitive(text_[pos_])) {
        e = combine(BondExpr::Kind::And, std::move(e), parse_bond_unary());
      } else {
        break;
      }
    }
    return e;
  }
  static bool is_bond_primitive(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '~' || c == '@' || c == '!' || c == '/' || c == '\\';
  }
  BondExpr parse_bond_unary() {
    if (pos_ >= text_.size()) fail("truncated bond");
    const char c = text_[pos_++];
    BondExpr e;
    switch (c) {
      case '!': {
        BondExpr inner = parse_bond_unary();
        e.kind = BondExpr::Kind::Not;
        e.children.push_back(std::move(inner));
        return e;
      }
      case '-':
      case '/':
      case '\\': e.kind = BondExpr::Kind::Single; break;
      case '=': e.kind = BondExpr::Kind::Double; break;
      case '#': e.kind = BondExpr::Kind::Triple; break;
      case ':': e.kind = BondExpr::Kind::Aromatic; break;
      case '~': e.kind = BondExpr::Kind::Any; break;
      case '@': e.kind = BondExpr::Kind::Ring; break;
      default: --pos_; fail("bad bond primitive");
    }
    return e;
  }
  static BondExpr combine(BondExpr::Kind kind, BondExpr a, BondExpr b) {
    BondExpr e;
    e.kind = kind;
    e.children.push_back(std::move(a));
    e.children.push_back(std::move(b));
    return e;
  }

  int parse_atom(SmartsPattern& p) {
    QueryAtom q;
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      q.expr = parse_low();
      if (pos_ < text_.size() && text_[pos_] == ':') {
        ++pos_;
        q.spec.map = parse_int(0);
      }
      if (pos_ >= text_.size() || text_[pos_] != ']') fail("expected ']'");
      ++pos_;
    } else {
      q.expr = parse_organic();
    }
    fill_spec(q.expr, q.spec, true);
    p.atoms_.push_back(std::move(q));
    return static_cast<int>(p.atoms_.size()) - 1;
  }

  // Records primitives reachable through top-level conjunctions only.
  static void fill_spec(const AtomExpr& e, AtomSpec& spec, bool top) {
    switch (e.kind) {
      case AtomExpr::Kind::And:
        for (const auto& c : e.children) fill_spec(c, spec, top);
        break;
      case AtomExpr::Kind::Element:
        spec.element = e.value;
        if (e.flag != 0) spec.aromatic = e.flag == 2 ? 1 : 0;
        break;
      case AtomExpr::Kind::Aromatic: spec.aromatic = 1; break;
      case AtomExpr::Kind::Aliphatic: spec.aromatic = 0; break;
      case AtomExpr::Kind::Charge: spec.charge = e.value; break;
      case AtomExpr::Kind::TotalH: spec.hydrogens = e.value; break;
      default: break;
    }
    (void)top;
  }

  AtomExpr parse_organic() {
    AtomExpr e;
    const char c = text_[pos_];
    if (c == '*') {
      ++pos_;
      return e;
    }
    if (c == 'a') {
      ++pos_;
      e.kind = AtomExpr::Kind::Aromatic;
      return e;
    }
    if (c == 'A') {
      ++pos_;
      e.kind = AtomExpr::Kind::Aliphatic;
      return e;
    }
    if (text_.substr(pos_, 2) == "Cl") {
      pos_ += 2;
      return element(17, 1);
    }
    if (text_.substr(pos_, 2) == "Br") {
      pos_ += 2;
      return element(35, 1);
    }
    ++pos_;
    switch (c) {
      case 'B': return element(5, 1);
      case 'C': return element(6, 1);
      case 'N': return element(7, 1);
      case 'O': return element(8, 1);
      case 'P': return element(15, 1);
      case 'S': return element(16, 1);
      case 'F': return element(9, 1);
      case 'I': return element(53, 1);
      case 'b': return element(5, 2);
      case 'c': return element(6, 2);
      case 'n': return element(7, 2);
      case 'o': return element(8, 2);
      case 'p': return element(15, 2);
      case 's': return element(16, 2);
      default: --pos_; fail(std::string("unexpected character '") + c + "'");
    }
  }

  static AtomExpr element(int z, int flag) {
    AtomExpr e;
    e.kind = AtomExpr::Kind::Element;
    e.value = z;
    e.flag = flag;
    return e;
  }

  static AtomExpr combine(AtomExpr::Kind kind, AtomExpr a, AtomExpr b) {
    AtomExpr e;
    e.kind = kind;
    e.children.push_back(std::move(a));
    e.children.push_back(std::move(b));
    return e;
  }

  AtomExpr parse_low() {
    AtomExpr e = parse_or();
    while (pos_ < text_.size() && text_[pos_] == ';') {
      ++pos_;
      e = combine(AtomExpr::Kind::And, std::move(e), parse_or());
    }
    return e;
  }
  AtomExpr parse_or() {
    AtomExpr e = parse_and();
    while (pos_ < text_.size() && text_[pos_] == ',') {
      ++pos_;
      e = combine(AtomExpr::Kind::Or, std::move(e), parse_and());
    }
    return e;
  }
  AtomExpr parse_and() {
    AtomExpr e = parse_unary();
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '&') {
        ++pos_;
        e = combine(AtomExpr::Kind::And, std::move(e), parse_unary());
      } else if (c == ';' || c == ',' || c == ']' || c == ':' || c == ')') {
        break;
      } else {
        e = combine(AtomExpr::Kind::And, std::move(e), parse_unary());
      }
    }
    return e;
  }
  AtomExpr parse_unary() {
    if (pos_ >= text_.size()) fail("truncated atom expression");
    if (text_[pos_] == '!') {
      ++pos_;
      AtomExpr e;
      e.kind = AtomExpr::Kind::Not;
      e.children.push_back(parse_unary());
      return e;
    }
    return parse_primitive();
  }

  int parse_int(int fallback) {
    int v = 0;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
      any = true;
    }
    return any ? v : fallback;
  }

  AtomExpr numeric(AtomExpr::Kind kind, int fallback) {
    AtomExpr e;
    e.kind = kind;
    e.value = parse_int(fallback);
    return e;
  }

  AtomExpr parse_primitive() {
    const char c = text_[pos_];
    AtomExpr e;
    if (c == '$') {
      if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '(') fail("expected '(' after '$'");
      const std::size_t start = pos_ + 2;
      int depth = 1;
      std::size_t i = start;
      for (; i < text_.size() && depth > 0; ++i) {
        if (text_[i] == '(') ++depth;
        if (text_[i] == ')') --depth;
      }
      if (depth != 0) fail("unbalanced recursive SMARTS");
      const std::string_view inner = text_.substr(start, i - 1 - start);
      e.kind = AtomExpr::Kind::Recursive;
      e.recursive = std::make_shared<SmartsPattern>(SmartsParser(inner).parse());
      pos_ = i;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return numeric(AtomExpr::Kind::Isotope, 0);
    // Two-letter element symbols take precedence over one-letter primitives (Ru vs R, Hg vs H).
    if (std::isupper(static_cast<unsigned char>(c)) && pos_ + 1 < text_.size() &&
        std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
      const int z = element_from_symbol(std::string{c, text_[pos_ + 1]});
      if (z > 0) {
        pos_ += 2;
        return element(z, 1);
      }
    }
    switch (c) {
      case '*': ++pos_; return e;
      case '#': ++pos_; return element(parse_int(-1), 0);
      case 'D': ++pos_; return numeric(AtomExpr::Kind::Degree, 1);
      case 'X': ++pos_; return numeric(AtomExpr::Kind::TotalConnections, 1);
      case 'h': ++pos_; return numeric(AtomExpr::Kind::TotalH, 1);
      case 'v': ++pos_; return numeric(AtomExpr::Kind::Valence, 1);
      case 'x': ++pos_; return numeric(AtomExpr::Kind::RingConnectivity, 1);
      case 'R': ++pos_; return numeric(AtomExpr::Kind::RingCount, -1);
      case 'r': ++pos_; return numeric(AtomExpr::Kind::RingSize, -1);
      case '@':
        while (pos_ < text_.size() && text_[pos_] == '@') ++pos_;
        return e;
      case '+':
      case '-': {
        const int sign = c == '+' ? 1 : -1;
        ++pos_;
        int magnitude = 1;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          magnitude = parse_int(1);
        } else {
          while (pos_ < text_.size() && text_[pos_] == c) {
            ++magnitude;
            ++pos_;
          }
        }
        e.kind = AtomExpr::Kind::Charge;
        e.value = sign * magnitude;
        return e;
      }
      case 'H': {
        ++pos_;
        const bool next_digit = pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
        if (!next_digit && pos_ < text_.size() && text_[pos_] == ']' && text_[pos_ - 2] == '[') {
          return element(1, 0);
        }
        return numeric(AtomExpr::Kind::TotalH, 1);
      }
      case 'a':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == 's') {
          pos_ += 2;
          return element(33, 2);
        }
        ++pos_;
        e.kind = AtomExpr::Kind::Aromatic;
        return e;
      default: break;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      static constexpr std::pair<std::string_view, int> kAromatic[] = {
          {"se", 34}, {"te", 52}, {"c", 6}, {"n", 7}, {"o", 8}, {"s", 16}, {"p", 15}, {"b", 5}};
      for (const auto& [sym, z] : kAromatic) {
        if (text_.substr(pos_, sym.size()) == sym) {
          pos_ += sym.size();
          return element(z, 2);
        }
      }
      fail("unknown aromatic primitive");
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        const std::string two = sym + text_[pos_ + 1];
        if (element_from_symbol(two) > 0) sym = two;
      }
      if (sym == "A") {
        ++pos_;
        e.kind = AtomExpr::Kind::Aliphatic;
        return e;
      }
      const int z = element_from_symbol(sym);
      if (z == 0) fail("unknown element '" + sym + "'");
      pos_ += sym.size();
      return element(z, 1);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

SmartsPattern SmartsPattern::parse(std::string_view smarts) { return SmartsParser(smarts).parse(); }

class Matcher {
 public:
  Matcher(const SmartsPattern& p, const MolGraph& g,
          std::unordered_map<const SmartsPattern*, std::vector<signed char>>& cache)
      : p_(p), g_(g), cache_(cache) {}

  void run(int pinned_root, bool first_only, std::size_t max_matches, bool uniquify, std::vector<Match>& out) {
    const std::size_t nq = p_.atoms_.size();
    q2t_.assign(nq, -1);
    used_.assign(g_.atom_count(), false);
    pinned_ = pinned_root;
    first_only_ = first_only;
    max_ = max_matches;
    uniquify_ = uniquify;
    out_ = &out;
    if (nq == 0) return;
    search(0);
  }

  bool atom_matches(const AtomExpr& e, int t) {
    const Atom& a = g_.atom(t);
    switch (e.kind) {
      case AtomExpr::Kind::True: return true;
      case AtomExpr::Kind::And:
        for (const auto& c : e.children) {
          if (!atom_matches(c, t)) return false;
        }
        return true;
      case AtomExpr::Kind::Or:
        for (const auto& c : e.children) {
          if (atom_matches(c, t)) return true;
        }
        return false;
      case AtomExpr::Kind::Not: return !atom_matches(e.children[0], t);
      case AtomExpr::Kind::Element:
        if (a.element != e.value) return false;
        if (e.flag == 1) return !a.aromatic;
        if (e.flag == 2) return a.aromatic;
        return true;
      case AtomExpr::Kind::Aromatic: return a.aromatic;
      case AtomExpr::Kind::Aliphatic: return !a.aromatic;
      case AtomExpr::Kind::Degree: return g_.degree(t) == e.value;
      case AtomExpr::Kind::TotalConnections: return g_.degree(t) + a.hydrogens == e.value;
      case AtomExpr::Kind::TotalH: return a.hydrogens == e.value;
      case AtomExpr::Kind::Valence: return g_.valence(t) == e.value;
      case AtomExpr::Kind::Charge: return a.charge == e.value;
      case AtomExpr::Kind::RingCount: {
        const int count = g_.rings().atom_ring_count[static_cast<std::size_t>(t)];
        return e.value < 0 ? count > 0 : count == e.value;
      }
      case AtomExpr::Kind::RingSize: {
        const int size = g_.rings().atom_min_ring[static_cast<std::size_t>(t)];
        return e.value < 0 ? size > 0 : size == e.value;
      }
      case AtomExpr::Kind::RingConnectivity: {
        int ring_bonds = 0;
        for (const auto& nb : g_.neighbors(t)) ring_bonds += g_.rings().bond_in_ring(nb.bond) ? 1 : 0;
        return ring_bonds == e.value;
      }
      case AtomExpr::Kind::Isotope: return a.isotope == e.value;
      case AtomExpr::Kind::Recursive: {
        auto& memo = cache_[e.recursive.get()];
        if (memo.empty()) memo.assign(g_.atom_count(), -1);
        auto& slot = memo[static_cast<std::size_t>(t)];
        if (slot < 0) {
          std::vector<Match> found;
          Matcher inner(*e.recursive, g_, cache_);
          inner.run(t, true, 1, false, found);
          slot = found.empty() ? 0 : 1;
        }
        return slot == 1;
      }
    }
    return false;
  }

  bool bond_matches(const BondExpr& e, int b) const {
    const Bond& bond = g_.bond(b);
    switch (e.kind) {
      case BondExpr::Kind::Default: return bond.aromatic || bond.order == 1;
      case BondExpr::Kind::Any: return true;
      case BondExpr::Kind::Single: return !bond.aromatic && bond.order == 1;
      case BondExpr::Kind::Double: return !bond.aromatic && bond.order == 2;
      case BondExpr::Kind::Triple: return bond.order == 3;
      case BondExpr::Kind::Aromatic: return bond.aromatic;
      case BondExpr::Kind::Ring: return g_.rings().bond_in_ring(b);
      case BondExpr::Kind::And:
        for (const auto& c : e.children) {
          if (!bond_matches(c, b)) return false;
        }
        return true;
      case BondExpr::Kind::Or:
        for (const auto& c : e.children) {
          if (bond_matches(c, b)) return true;
        }
        return false;
      case BondExpr::Kind::Not: return !bond_matches(e.children[0], b);
    }
    return false;
  }

 private:
  bool done() const { return (first_only_ && !out_->empty()) || out_->size() >= max_; }

  bool feasible(int q, int t) {
    if (used_[static_cast<std::size_t>(t)]) return false;
    if (!atom_matches(p_.atoms_[static_cast<std::size_t>(q)].expr, t)) return false;
    for (int qb : p_.atom_bonds_[static_cast<std::size_t>(q)]) {
      const auto& bond = p_.bonds_[static_cast<std::size_t>(qb)];
      const int other = bond.begin == q ? bond.end : bond.begin;
      if (other >= q) continue;
      const int tb = g_.bond_between(t, q2t_[static_cast<std::size_t>(other)]);
      if (tb < 0 || !bond_matches(bond.expr, tb)) return false;
    }
    return true;
  }

  void record() {
    if (uniquify_) {
      std::vector<int> key = q2t_;
      std::sort(key.begin(), key.end());
      if (!seen_.insert(key).second) return;
    }
    out_->push_back(q2t_);
  }

  void search(int q) {
    if (done()) return;
    if (q == static_cast<int>(p_.atoms_.size())) {
      record();
      return;
    }
    auto attempt = [&](int t) {
      if (!feasible(q, t)) return;
      q2t_[static_cast<std::size_t>(q)] = t;
      used_[static_cast<std::size_t>(t)] = true;
      search(q + 1);
      used_[static_cast<std::size_t>(t)] = false;
      q2t_[static_cast<std::size_t>(q)] = -1;
    };
    if (q == 0 && pinned_ >= 0) {
      attempt(pinned_);
      return;
    }
    // Anchor on an already-mapped neighbour when one exists.
    int anchor = -1;
    for (int qb : p_.atom_bonds_[static_cast<std::size_t>(q)]) {
      const auto& bond = p_.bonds_[static_cast<std::size_t>(qb)];
      const int other = bond.begin == q ? bond.end : bond.begin;
      if (other < q) {
        anchor = other;
        break;
      }
    }
    if (anchor >= 0) {
      for (const auto& nb : g_.neighbors(q2t_[static_cast<std::size_t>(anchor)])) {
        attempt(nb.atom);
        if (done()) return;
      }
    } else {
      for (int t = 0; t < static_cast<int>(g_.atom_count()); ++t) {
        attempt(t);
        if (done()) return;
      }
    }
  }

  const SmartsPattern& p_;
  const MolGraph& g_;
  std::unordered_map<const SmartsPattern*, std::vector<signed char>>& cache_;
  std::vector<int> q2t_;
  std::vector<bool> used_;
  int pinned_ = -1;
  bool first_only_ = false;
  std::size_t max_ = 0;
  bool uniquify_ = true;
  std::vector<Match>* out_ = nullptr;
  std::set<std::vector<int>> seen_;
};

std::vector<Match> SmartsPattern::matches(const MolGraph& g, bool uniquify, std::size_t max_matches) const {
  std::unordered_map<const SmartsPattern*, std::vector<signed char>> cache;
  std::vector<Match> out;
  Matcher(*this, g, cache).run(-1, false, max_matches, uniquify, out);
  return out;
}

bool SmartsPattern::has_match(const MolGraph& g) const {
  std::unordered_map<const SmartsPattern*, std::vector<signed char>> cache;
  std::vector<Match> out;
  Matcher(*this, g, cache).run(-1, true, 1, false, out);
  return !out.empty();
}

bool SmartsPattern::matches_at(const MolGraph& g, int atom) const {
  std::unordered_map<const SmartsPattern*, std::vector<signed char>> cache;
  std::vector<Match> out;
  Matcher(*this, g, cache).run(atom, true, 1, false, out);
  return !out.empty();
}

}  // namespace synthphore::chem
