//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_GRADCHECK_H_
#define FABIND_GRADCHECK_H_

#include <functional>
#include <string>
#include <vector>

#include "fabind/rng.h"
#include "fabind/tensor.h"

namespace fabind::gradcheck {

struct Options {
  double step = 1e-5;
  // Cap on finite-difference probes per input tensor; 0 checks every element.
  int max_probes_per_input = 0;
  std::uint64_t probe_seed = 0;
  // Normalize by the largest analytic entry over all inputs instead of per
  // input. Needed when some parameters have exactly zero gradient.
  bool global_scale = false;
};

// Compares reverse-mode gradients of loss() with central differences. The
// error for each input is max|analytic - numeric| / max(|analytic|_inf,
// |numeric|_inf); the maximum over inputs is returned.
double max_relative_error(const std::function<Tensor()> &loss,
                          const std::vector<Tensor> &inputs,
                          const Options &options = {});

struct Case {
  std::string name;
  std::vector<Tensor> inputs;
  std::function<Tensor()> loss;
};

// One case per differentiable primitive in ops/losses, each contracted
// against fixed random weights so every output element matters.
std::vector<Case> primitive_cases(Rng &rng);

// A primitive with a deliberately wrong derivative, for checking that the
// checker itself can fail.
Case broken_case(Rng &rng);

}  // namespace fabind::gradcheck

#endif  // FABIND_GRADCHECK_H_
