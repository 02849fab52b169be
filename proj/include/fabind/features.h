//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_FEATURES_H_
#define FABIND_FEATURES_H_

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fabind {

class FeatureError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct AtomDescriptor {
  std::string element;
  int degree = 0;
  int h_count = 0;
  int valence = 0;
  int charge = 0;
  bool aromatic = false;

  bool operator==(const AtomDescriptor &) const = default;
};

inline constexpr int kLigandFeatureDim = 56;

// Ligand atom feature layout. Every block is a one-hot; out-of-range values
// clamp to the nearest end bin.
//
//   [ 0, 34)  element (table below; unknown elements are rejected)
//   [34, 40)  degree 0..5
//   [40, 45)  attached hydrogens 0..4
//   [45, 51)  total valence 0..5
//   [51, 54)  formal charge -1, 0, +1
//   [54, 56)  aromatic: no, yes
struct FeatureBlock {
  std::string_view name;
  int offset;
  int width;
};

std::span<const FeatureBlock> ligand_feature_blocks();
std::span<const std::string_view> supported_elements();

std::vector<double> encode_ligand_features(const AtomDescriptor &atom);

// Residue vocabulary: the 20 standard amino acids in alphabetical order of
// their three-letter codes, then a shared row for anything else.
inline constexpr int kNumResidueTypes = 21;
inline constexpr int kUnknownResidue = 20;

int residue_type_from_code(std::string_view code);
std::string_view residue_code(int type_id);

}  // namespace fabind

#endif  // FABIND_FEATURES_H_
