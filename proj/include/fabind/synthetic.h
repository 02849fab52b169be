//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_SYNTHETIC_H_
#define FABIND_SYNTHETIC_H_

#include <string>

#include "fabind/complex_io.h"
#include "fabind/rng.h"

namespace fabind {

struct SyntheticSpec {
  int min_residues = 60;
  int max_residues = 100;
  int min_atoms = 6;
  int max_atoms = 12;
  double ring_probability = 0.5;
  // Ligand centroid sits this fraction of the blob radius away from its center.
  double site_depth = 0.55;
  double conformer_noise = 0.1;  // Å, per coordinate

  void validate() const;
};

// Folded-blob protein from a self-avoiding C-alpha walk, a small tree ligand
// with an optional six-ring nestled inside it, labels from the 20 Å rule, and
// a conformer that is the noisy truth under a random proper rigid motion.
// All coordinates are quantized to the file precision.
ComplexRecord generate_synthetic_complex(const SyntheticSpec &spec, Rng &rng,
                                         const std::string &name);

std::vector<int> pocket_labels_for(const ProteinGraph &protein,
                                   const std::vector<Vec3> &ligand_truth,
                                   double radius = kPocketRadius);

}  // namespace fabind

#endif  // FABIND_SYNTHETIC_H_
