//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/element.hpp"

#include <array>
#include <cstdlib>

namespace synthphore::chem {
namespace {

constexpr std::array<ElementInfo, 54> kElements = {{
    {0, "*", 0.0, 0.0},
    {1, "H", 1.008, 0.31},
    {2, "He", 4.003, 0.28},
    {3, "Li", 6.94, 1.28},
    {4, "Be", 9.012, 0.96},
    {5, "B", 10.812, 0.84},
    {6, "C", 12.011, 0.76},
    {7, "N", 14.007, 0.71},
    {8, "O", 15.999, 0.66},
    {9, "F", 18.998, 0.57},
    {10, "Ne", 20.180, 0.58},
    {11, "Na", 22.990, 1.66},
    {12, "Mg", 24.305, 1.41},
    {13, "Al", 26.982, 1.21},
    {14, "Si", 28.086, 1.11},
    {15, "P", 30.974, 1.07},
    {16, "S", 32.067, 1.05},
    {17, "Cl", 35.453, 1.02},
    {18, "Ar", 39.948, 1.06},
    {19, "K", 39.098, 2.03},
    {20, "Ca", 40.078, 1.76},
    {21, "Sc", 44.956, 1.70},
    {22, "Ti", 47.867, 1.60},
    {23, "V", 50.942, 1.53},
    {24, "Cr", 51.996, 1.39},
    {25, "Mn", 54.938, 1.39},
    {26, "Fe", 55.845, 1.32},
    {27, "Co", 58.933, 1.26},
    {28, "Ni", 58.693, 1.24},
    {29, "Cu", 63.546, 1.32},
    {30, "Zn", 65.38, 1.22},
    {31, "Ga", 69.723, 1.22},
    {32, "Ge", 72.630, 1.20},
    {33, "As", 74.922, 1.19},
    {34, "Se", 78.96, 1.20},
    {35, "Br", 79.904, 1.20},
    {36, "Kr", 83.798, 1.16},
    {37, "Rb", 85.468, 2.20},
    {38, "Sr", 87.62, 1.95},
    {39, "Y", 88.906, 1.90},
    {40, "Zr", 91.224, 1.75},
    {41, "Nb", 92.906, 1.64},
    {42, "Mo", 95.95, 1.54},
    {43, "Tc", 98.0, 1.47},
    {44, "Ru", 101.07, 1.46},
    {45, "Rh", 102.906, 1.42},
    {46, "Pd", 106.42, 1.39},
    {47, "Ag", 107.868, 1.45},
    {48, "Cd", 112.414, 1.44},
    {49, "In", 114.818, 1.42},
    {50, "Sn", 118.710, 1.39},
    {51, "Sb", 121.760, 1.39},
    {52, "Te", 127.60, 1.38},
    {53, "I", 126.904, 1.39},
}};

struct HeavyElement {
  int number;
  std::string_view symbol;
  double mass;
};

constexpr std::array<HeavyElement, 11> kHeavyElements = {{
    {55, "Cs", 132.905},
    {56, "Ba", 137.327},
    {72, "Hf", 178.49},
    {74, "W", 183.84},
    {78, "Pt", 195.084},
    {79, "Au", 196.967},
    {80, "Hg", 200.592},
    {81, "Tl", 204.38},
    {82, "Pb", 207.2},
    {83, "Bi", 208.980},
    {67, "Ho", 164.930},
}};

// Storage for heavy elements (radius approximated).
const std::array<ElementInfo, kHeavyElements.size()>& heavy_table() {
  static const auto table = [] {
    std::array<ElementInfo, kHeavyElements.size()> t{};
    for (std::size_t i = 0; i < kHeavyElements.size(); ++i) {
      t[i] = {kHeavyElements[i].number, kHeavyElements[i].symbol, kHeavyElements[i].mass, 1.45};
    }
    return t;
  }();
  return table;
}

constexpr std::array<int, 1> kVal1 = {1};
constexpr std::array<int, 1> kVal2 = {2};
constexpr std::array<int, 1> kVal3 = {3};
constexpr std::array<int, 1> kVal4 = {4};
constexpr std::array<int, 2> kVal35 = {3, 5};
constexpr std::array<int, 3> kVal246 = {2, 4, 6};
constexpr std::array<int, 4> kVal1357 = {1, 3, 5, 7};

}  // namespace

const ElementInfo* element_info(int atomic_number) {
  if (atomic_number >= 0 && atomic_number < static_cast<int>(kElements.size())) {
    return &kElements[static_cast<std::size_t>(atomic_number)];
  }
  for (const auto& e : heavy_table()) {
    if (e.number == atomic_number) return &e;
  }
  return nullptr;
}

int element_from_symbol(std::string_view symbol) {
  for (const auto& e : kElements) {
    if (e.number > 0 && e.symbol == symbol) return e.number;
  }
  for (const auto& e : heavy_table()) {
    if (e.symbol == symbol) return e.number;
  }
  return 0;
}

std::span<const int> default_valences(int atomic_number) {
  switch (atomic_number) {
    case 1:
    case 9:
      return kVal1;
    case 5:
      return kVal3;
    case 6:
    case 14:
      return kVal4;
    case 7:
    case 15:
    case 33:
      return kVal35;
    case 8:
      return kVal2;
    case 16:
    case 34:
    case 52:
      return kVal246;
    case 17:
    case 35:
    case 53:
      return kVal1357;
    default:
      return {};
  }
}

int charge_adjusted_valence(int atomic_number, int charge, int minimum_needed) {
  auto valences = default_valences(atomic_number);
  if (valences.empty()) return -1;
  // Group 13/14 lose valence either way; the others gain on positive charge.
  const bool electron_poor = atomic_number == 5 || atomic_number == 6 || atomic_number == 14;
  const int shift = electron_poor ? -std::abs(charge) : charge;
  for (int v : valences) {
    const int adjusted = v + shift;
    if (adjusted >= minimum_needed && adjusted >= 0) return adjusted;
  }
  const int last = valences.back() + shift;
  return last >= 0 ? last : -1;
}

bool in_organic_subset(int atomic_number) {
  switch (atomic_number) {
    case 5:
    case 6:
    case 7:
    case 8:
    case 9:
    case 15:
    case 16:
    case 17:
    case 35:
    case 53:
      return true;
    default:
      return false;
  }
}

double hydrogen_mass() { return kElements[1].mass; }

}  // namespace synthphore::chem
