//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_CHECKS_H_
#define FABIND_CHECKS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fabind/complex_io.h"
#include "fabind/model.h"

namespace fabind::checks {

struct CheckLine {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
};

// Chain ligand near a cloud of residues that all sit within interfacial range
// of some atom. Labels mark residues within 6 Å of the truth centroid.
ComplexRecord make_toy_complex(Rng &rng, int atoms, int residues);

// Small dimensions for property checks; the layout matches the full model.
ModelConfig toy_model_config(int iterations = 8);

std::vector<CheckLine> gradient_suite(std::uint64_t seed, bool inject_fault);
std::vector<CheckLine> equivariance_suite(std::uint64_t seed, int trials);

}  // namespace fabind::checks

#endif  // FABIND_CHECKS_H_
