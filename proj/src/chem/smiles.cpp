//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "synthphore/chem/element.hpp"
#include "synthphore/util/error.hpp"

namespace synthphore::chem {
namespace {

enum class BondSymbol { None, Single, Double, Triple, Aromatic, Any };

struct Pending {
  int atom;
  BondSymbol symbol;
};

class SmilesParser {
 public:
  explicit SmilesParser(std::string_view text) : text_(text) {}

  MolGraph parse() {
    if (text_.empty()) throw ParseError("empty SMILES");
    int prev = -1;
    BondSymbol bond = BondSymbol::None;
    std::vector<int> branch_stack;
    std::map<int, Pending> open_rings;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') {
        if (prev < 0) fail("branch without preceding atom");
        branch_stack.push_back(prev);
        ++pos_;
      } else if (c == ')') {
        if (branch_stack.empty()) fail("unbalanced ')'");
        if (bond != BondSymbol::None) fail("dangling bond before ')'");
        prev = branch_stack.back();
        branch_stack.pop_back();
        ++pos_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\' || c == '$') {
        if (bond != BondSymbol::None) fail("two consecutive bond symbols");
        bond = c == '=' ? BondSymbol::Double
               : c == '#' ? BondSymbol::Triple
               : c == ':' ? BondSymbol::Aromatic
                          : BondSymbol::Single;
        if (c == '$') fail("quadruple bonds are not supported");
        ++pos_;
      } else if (c == '.') {
        if (bond != BondSymbol::None) fail("bond before '.'");
        prev = -1;
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0) fail("ring closure without atom");
        int digit;
        if (c == '%') {
          if (pos_ + 2 >= text_.size()) fail("truncated ring number");
          if (!std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
              !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
            fail("bad ring number");
          }
          digit = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
          pos_ += 3;
        } else {
          digit = c - '0';
          ++pos_;
        }
        auto it = open_rings.find(digit);
        if (it == open_rings.end()) {
          open_rings[digit] = {prev, bond};
        } else {
          const Pending open = it->second;
          open_rings.erase(it);
          if (open.atom == prev) fail("ring closure to self");
          if (g_.bond_between(open.atom, prev) >= 0) fail("duplicate ring closure bond");
          BondSymbol sym = bond != BondSymbol::None ? bond : open.symbol;
          if (bond != BondSymbol::None && open.symbol != BondSymbol::None && bond != open.symbol) {
            fail("conflicting ring closure bonds");
          }
          connect(open.atom, prev, sym);
        }
        bond = BondSymbol::None;
      } else {
        const int atom = parse_atom();
        if (prev >= 0) connect(prev, atom, bond);
        else if (bond != BondSymbol::None) fail("bond without preceding atom");
        bond = BondSymbol::None;
        prev = atom;
      }
    }
    if (!branch_stack.empty()) fail("unbalanced '('");
    if (!open_rings.empty()) fail("unclosed ring");
    if (bond != BondSymbol::None) fail("trailing bond");
    if (g_.empty()) fail("no atoms");
    return finish();
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("SMILES parse error at position " + std::to_string(pos_) + ": " + what + " in '" +
                     std::string(text_) + "'");
  }

  void connect(int a, int b, BondSymbol sym) {
    bool aromatic = false;
    int order = 1;
    switch (sym) {
      case BondSymbol::None:
        aromatic = g_.atom(a).aromatic && g_.atom(b).aromatic;
        break;
      case BondSymbol::Double:
        order = 2;
        break;
      case BondSymbol::Triple:
        order = 3;
        break;
      case BondSymbol::Aromatic:
        aromatic = true;
        break;
      default:
        break;
    }
    g_.add_bond(a, b, order, aromatic);
  }

  int parse_atom() {
    const char c = text_[pos_];
    if (c == '[') return parse_bracket();
    Atom atom;
    static constexpr std::pair<std::string_view, int> kTwo[] = {{"Cl", 17}, {"Br", 35}};
    for (const auto& [sym, num] : kTwo) {
      if (text_.substr(pos_, 2) == sym) {
        atom.element = num;
        pos_ += 2;
        return add(atom, false);
      }
    }
    switch (c) {
      case 'B': atom.element = 5; break;
      case 'C': atom.element = 6; break;
      case 'N': atom.element = 7; break;
      case 'O': atom.element = 8; break;
      case 'P': atom.element = 15; break;
      case 'S': atom.element = 16; break;
      case 'F': atom.element = 9; break;
      case 'I': atom.element = 53; break;
      case 'b': atom.element = 5; atom.aromatic = true; break;
      case 'c': atom.element = 6; atom.aromatic = true; break;
      case 'n': atom.element = 7; atom.aromatic = true; break;
      case 'o': atom.element = 8; atom.aromatic = true; break;
      case 'p': atom.element = 15; atom.aromatic = true; break;
      case 's': atom.element = 16; atom.aromatic = true; break;
      case '*': atom.element = 0; break;
      default: fail(std::string("unexpected character '") + c + "'");
    }
    ++pos_;
    return add(atom, false);
  }

  int parse_number() {
    int value = 0;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      ++pos_;
      any = true;
    }
    return any ? value : -1;
  }

  int parse_bracket() {
    ++pos_;  // '['
    Atom atom;
    const int isotope = parse_number();
    if (isotope > 0) atom.isotope = isotope;
    if (pos_ >= text_.size()) fail("unterminated bracket atom");
    if (text_[pos_] == '*') {
      atom.element = 0;
      ++pos_;
    } else if (std::islower(static_cast<unsigned char>(text_[pos_]))) {
      static constexpr std::pair<std::string_view, int> kAromatic[] = {
          {"se", 34}, {"as", 33}, {"te", 52}, {"b", 5}, {"c", 6}, {"n", 7}, {"o", 8}, {"p", 15}, {"s", 16}};
      bool found = false;
      for (const auto& [sym, num] : kAromatic) {
        if (text_.substr(pos_, sym.size()) == sym) {
          atom.element = num;
          atom.aromatic = true;
          pos_ += sym.size();
          found = true;
          break;
        }
      }
      if (!found) fail("unknown aromatic symbol");
    } else {
      std::string sym(1, text_[pos_]);
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        const std::string two = sym + text_[pos_ + 1];
        if (element_from_symbol(two) > 0) sym = two;
      }
      atom.element = element_from_symbol(sym);
      if (atom.element == 0) fail("unknown element '" + sym + "'");
      pos_ += sym.size();
    }
    while (pos_ < text_.size() && text_[pos_] == '@') ++pos_;
    if (pos_ + 1 < text_.size() && (text_.substr(pos_, 2) == "TH" || text_.substr(pos_, 2) == "AL" ||
                                    text_.substr(pos_, 2) == "SP" || text_.substr(pos_, 2) == "TB" ||
                                    text_.substr(pos_, 2) == "OH")) {
      pos_ += 2;
      parse_number();
    }
    if (pos_ < text_.size() && text_[pos_] == 'H') {
      ++pos_;
      const int h = parse_number();
      atom.hydrogens = h < 0 ? 1 : h;
    }
    while (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const int sign = text_[pos_] == '+' ? 1 : -1;
      ++pos_;
      const int magnitude = parse_number();
      atom.charge += sign * (magnitude < 0 ? 1 : magnitude);
    }
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      atom.map = std::max(0, parse_number());
    }
    if (pos_ >= text_.size() || text_[pos_] != ']') fail("expected ']'");
    ++pos_;
    return add(atom, true);
  }

  int add(const Atom& atom, bool bracket) {
    explicit_h_.push_back(bracket);
    return g_.add_atom(atom);
  }

  MolGraph finish() {
    // Aromatic bonds outside rings (biaryl links written without '-') are single.
    const RingInfo topology = find_sssr(g_);
    for (std::size_t b = 0; b < g_.bond_count(); ++b) {
      auto& bond = g_.bond(static_cast<int>(b));
      if (bond.aromatic && !topology.bond_in_ring(static_cast<int>(b))) bond.aromatic = false;
    }
    kekulize(g_, explicit_h_);
    for (std::size_t a = 0; a < g_.atom_count(); ++a) {
      if (explicit_h_[a]) continue;
      auto& atom = g_.atom(static_cast<int>(a));
      const int used = g_.bond_order_sum(static_cast<int>(a));
      const int cap = charge_adjusted_valence(atom.element, atom.charge, used);
      atom.hydrogens = cap < 0 ? 0 : std::max(0, cap - used);
    }
    for (std::size_t b = 0; b < g_.bond_count(); ++b) g_.bond(static_cast<int>(b)).aromatic = false;
    try {
      check_valences(g_);
    } catch (const SanitizeError& e) {
      throw ParseError(std::string(e.what()) + " in '" + std::string(text_) + "'");
    }
    g_.perceive();
    return std::move(g_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  MolGraph g_;
  std::vector<bool> explicit_h_;
};

int bond_code(const Bond& b) { return b.aromatic ? 4 : b.order; }

std::vector<int> dense_ranks(const std::vector<std::uint64_t>& keys) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
  std::vector<int> ranks(keys.size());
  int r = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && keys[static_cast<std::size_t>(order[i])] != keys[static_cast<std::size_t>(order[i - 1])]) ++r;
    ranks[static_cast<std::size_t>(order[i])] = r;
  }
  return ranks;
}

int count_classes(const std::vector<int>& ranks) {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()) + 1;
}

// Iterative neighbourhood refinement until the partition stops splitting.
std::vector<int> refine(const MolGraph& g, std::vector<int> ranks) {
  const std::size_t n = g.atom_count();
  int classes = count_classes(ranks);
  while (true) {
    using Key = std::pair<int, std::vector<int>>;
    std::vector<Key> keys(n);
    for (std::size_t a = 0; a < n; ++a) {
      keys[a].first = ranks[a];
      for (const auto& nb : g.neighbors(static_cast<int>(a))) {
        keys[a].second.push_back(ranks[static_cast<std::size_t>(nb.atom)] * 8 + bond_code(g.bond(nb.bond)));
      }
      std::sort(keys[a].second.begin(), keys[a].second.end());
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
    std::vector<int> next(n);
    int r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && keys[static_cast<std::size_t>(order[i])] != keys[static_cast<std::size_t>(order[i - 1])]) ++r;
      next[static_cast<std::size_t>(order[i])] = r;
    }
    const int next_classes = count_classes(next);
    ranks = std::move(next);
    if (next_classes == classes) return ranks;
    classes = next_classes;
  }
}

std::string atom_token(const MolGraph& g, int a) {
  const Atom& atom = g.atom(a);
  const ElementInfo* info = element_info(atom.element);
  std::string symbol = info ? std::string(info->symbol) : "*";
  bool aromatic_ok = atom.aromatic;
  if (aromatic_ok) {
    if (atom.element == 6 || atom.element == 7 || atom.element == 8 || atom.element == 16 || atom.element == 15 ||
        atom.element == 5 || atom.element == 34 || atom.element == 33) {
      symbol[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(symbol[0])));
    }
  }
  const bool simple_aromatic = !atom.aromatic || atom.element == 5 || atom.element == 6 || atom.element == 7 ||
                               atom.element == 8 || atom.element == 15 || atom.element == 16;
  const bool bare = atom.element == 0 ||
                    (in_organic_subset(atom.element) && simple_aromatic && atom.charge == 0 && atom.isotope == 0 &&
                     atom.map == 0 && atom.hydrogens == implicit_hydrogens(g, a));
  if (bare && atom.element != 0) return symbol;
  if (atom.element == 0 && atom.hydrogens == 0 && atom.charge == 0 && atom.map == 0) return "*";
  std::string out = "[";
  if (atom.isotope > 0) out += std::to_string(atom.isotope);
  out += symbol;
  if (atom.hydrogens == 1) out += "H";
  if (atom.hydrogens > 1) out += "H" + std::to_string(atom.hydrogens);
  if (atom.charge != 0) {
    out += atom.charge > 0 ? "+" : "-";
    if (std::abs(atom.charge) > 1) out += std::to_string(std::abs(atom.charge));
  }
  if (atom.map > 0) out += ":" + std::to_string(atom.map);
  out += "]";
  return out;
}

std::string bond_token(const MolGraph& g, int b) {
  const Bond& bond = g.bond(b);
  if (bond.aromatic) return "";
  if (bond.order == 2) return "=";
  if (bond.order == 3) return "#";
  if (g.atom(bond.begin).aromatic && g.atom(bond.end).aromatic) return "-";
  return "";
}

class SmilesWriter {
 public:
  SmilesWriter(const MolGraph& g, const std::vector<int>& priority) : g_(g), priority_(priority) {}

  std::string write() {
    const std::size_t n = g_.atom_count();
    if (n == 0) return "";
    visited_.assign(n, false);
    bond_used_.assign(g_.bond_count(), false);
    children_.assign(n, {});
    opens_.assign(n, {});
    closes_.assign(n, {});
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return priority_[static_cast<std::size_t>(a)] < priority_[static_cast<std::size_t>(b)]; });
    std::vector<int> roots;
    for (int a : order) {
      if (visited_[static_cast<std::size_t>(a)]) continue;
      roots.push_back(a);
      discover(a, -1);
    }
    std::string out;
    for (std::size_t r = 0; r < roots.size(); ++r) {
      if (r > 0) out += '.';
      emit(roots[r], out);
    }
    return out;
  }

 private:
  std::vector<Neighbor> sorted_neighbors(int a) const {
    auto span = g_.neighbors(a);
    std::vector<Neighbor> nbs(span.begin(), span.end());
    std::sort(nbs.begin(), nbs.end(), [&](const Neighbor& x, const Neighbor& y) {
      return priority_[static_cast<std::size_t>(x.atom)] < priority_[static_cast<std::size_t>(y.atom)];
    });
    return nbs;
  }

  void discover(int a, int parent_bond) {
    visited_[static_cast<std::size_t>(a)] = true;
    for (const auto& nb : sorted_neighbors(a)) {
      if (nb.bond == parent_bond || bond_used_[static_cast<std::size_t>(nb.bond)]) continue;
      bond_used_[static_cast<std::size_t>(nb.bond)] = true;
      if (visited_[static_cast<std::size_t>(nb.atom)]) {
        // Ring closure: opened at the earlier atom, closed here.
        opens_[static_cast<std::size_t>(nb.atom)].push_back({a, nb.bond});
        closes_[static_cast<std::size_t>(a)].push_back({nb.atom, nb.bond});
      } else {
        children_[static_cast<std::size_t>(a)].push_back({nb.atom, nb.bond});
        discover(nb.atom, nb.bond);
      }
    }
  }

  void emit(int a, std::string& out) {
    out += atom_token(g_, a);
    // Closures ending here were opened earlier and already hold a digit.
    for (const auto& c : closes_[static_cast<std::size_t>(a)]) {
      const int digit = ring_digit_.at(c.bond);
      out += ring_label(digit);
      free_digit(digit);
    }
    auto opens = opens_[static_cast<std::size_t>(a)];
    std::sort(opens.begin(), opens.end(), [&](const Neighbor& x, const Neighbor& y) {
      return priority_[static_cast<std::size_t>(x.atom)] < priority_[static_cast<std::size_t>(y.atom)];
    });
    for (const auto& o : opens) {
      const int digit = take_digit();
      ring_digit_[o.bond] = digit;
      out += bond_token(g_, o.bond) + ring_label(digit);
    }
    const auto& kids = children_[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool branch = i + 1 < kids.size();
      if (branch) out += '(';
      out += bond_token(g_, kids[i].bond);
      emit(kids[i].atom, out);
      if (branch) out += ')';
    }
  }

  static std::string ring_label(int digit) {
    return digit < 10 ? std::to_string(digit) : "%" + std::to_string(digit);
  }

  int take_digit() {
    for (int d = 1;; ++d) {
      if (std::find(in_use_.begin(), in_use_.end(), d) == in_use_.end()) {
        in_use_.push_back(d);
        return d;
      }
    }
  }

  void free_digit(int d) { in_use_.erase(std::find(in_use_.begin(), in_use_.end(), d)); }

  const MolGraph& g_;
  const std::vector<int>& priority_;
  std::vector<bool> visited_;
  std::vector<bool> bond_used_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<Neighbor>> opens_;
  std::vector<std::vector<Neighbor>> closes_;
  std::map<int, int> ring_digit_;
  std::vector<int> in_use_;
};

}  // namespace

MolGraph parse_smiles(std::string_view smiles) { return SmilesParser(smiles).parse(); }

std::vector<int> canonical_ranks(const MolGraph& g) {
  const std::size_t n = g.atom_count();
  std::vector<std::uint64_t> keys(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Atom& atom = g.atom(static_cast<int>(a));
    int ring_bonds = 0;
    for (const auto& nb : g.neighbors(static_cast<int>(a))) ring_bonds += g.rings().bond_in_ring(nb.bond) ? 1 : 0;
    std::uint64_t key = static_cast<std::uint64_t>(atom.element);
    key = key * 16 + static_cast<std::uint64_t>(g.degree(static_cast<int>(a)));
    key = key * 8 + static_cast<std::uint64_t>(atom.hydrogens);
    key = key * 16 + static_cast<std::uint64_t>(atom.charge + 8);
    key = key * 2 + (atom.aromatic ? 1 : 0);
    key = key * 8 + static_cast<std::uint64_t>(std::min(ring_bonds, 7));
    key = key * 512 + static_cast<std::uint64_t>(std::min(atom.isotope, 511));
    keys[a] = key;
  }
  std::vector<int> ranks = refine(g, dense_ranks(keys));
  // Break remaining ties one atom at a time.
  while (count_classes(ranks) < static_cast<int>(n)) {
    std::vector<int> class_size(n, 0);
    for (int r : ranks) ++class_size[static_cast<std::size_t>(r)];
    int tied = -1;
    for (std::size_t r = 0; r < n; ++r) {
      if (class_size[r] > 1) {
        tied = static_cast<int>(r);
        break;
      }
    }
    int chosen = -1;
    for (std::size_t a = 0; a < n; ++a) {
      if (ranks[a] == tied) {
        chosen = static_cast<int>(a);
        break;
      }
    }
    std::vector<int> split(n);
    for (std::size_t a = 0; a < n; ++a) split[a] = ranks[a] * 2 + (static_cast<int>(a) == chosen ? 0 : 1);
    std::vector<std::uint64_t> split_keys(split.begin(), split.end());
    ranks = refine(g, dense_ranks(split_keys));
  }
  return ranks;
}

std::string write_smiles(const MolGraph& g) {
  const auto ranks = canonical_ranks(g);
  return SmilesWriter(g, ranks).write();
}

std::string write_smiles(const MolGraph& g, const std::vector<int>& priority) {
  return SmilesWriter(g, priority).write();
}

}  // namespace synthphore::chem
