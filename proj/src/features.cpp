//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/features.h"

#include <algorithm>

namespace fabind {
namespace {

constexpr std::array<std::string_view, 34> kElements = {
  "H",  "B",  "C",  "N",  "O",  "F",  "Si", "P",  "S",  "Cl", "Br", "I",
  "Li", "Na", "K",  "Mg", "Ca", "Fe", "Zn", "Cu", "Mn", "Co", "Ni", "Se",
  "As", "Al", "Sn", "Hg", "Pt", "Ru", "Rh", "Ir", "V",  "Cr",
};

constexpr std::array<FeatureBlock, 6> kBlocks = { {
    { "element", 0, 34 },
    { "degree", 34, 6 },
    { "h_count", 40, 5 },
    { "valence", 45, 6 },
    { "charge", 51, 3 },
    { "aromatic", 54, 2 },
} };

static_assert(kBlocks.back().offset + kBlocks.back().width == kLigandFeatureDim);

constexpr std::array<std::string_view, kNumResidueTypes> kResidueCodes = {
  "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE", "LEU",
  "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL", "UNK",
};

}  // namespace

std::span<const FeatureBlock> ligand_feature_blocks() { return kBlocks; }

std::span<const std::string_view> supported_elements() { return kElements; }

std::vector<double> encode_ligand_features(const AtomDescriptor &atom) {
  const auto it = std::find(kElements.begin(), kElements.end(), atom.element);
  if (it == kElements.end())
    throw FeatureError("unsupported element '" + atom.element + "'");
  if (atom.degree < 0 || atom.h_count < 0 || atom.valence < 0)
    throw FeatureError("negative count in descriptor of element "
                       + atom.element);

  std::vector<double> f(kLigandFeatureDim, 0.0);
  auto set = [&f](const FeatureBlock &b, int bin) {
    f[b.offset + std::clamp(bin, 0, b.width - 1)] = 1.0;
  };
  set(kBlocks[0], static_cast<int>(it - kElements.begin()));
  set(kBlocks[1], atom.degree);
  set(kBlocks[2], atom.h_count);
  set(kBlocks[3], atom.valence);
  set(kBlocks[4], atom.charge + 1);
  set(kBlocks[5], atom.aromatic ? 1 : 0);
  return f;
}

int residue_type_from_code(std::string_view code) {
  const auto it = std::find(kResidueCodes.begin(), kResidueCodes.end(), code);
  if (it == kResidueCodes.end())
    return kUnknownResidue;
  return static_cast<int>(it - kResidueCodes.begin());
}

std::string_view residue_code(int type_id) {
  if (type_id < 0 || type_id >= kNumResidueTypes)
    return kResidueCodes[kUnknownResidue];
  return kResidueCodes[type_id];
}

}  // namespace fabind
