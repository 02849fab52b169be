//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_LOSSES_H_
#define FABIND_LOSSES_H_

#include "fabind/rng.h"
#include "fabind/tensor.h"

namespace fabind::losses {

inline constexpr double kHuberDelta = 1.0;
inline constexpr double kProbEps = 1e-7;

// Mean over all elements of the Huber penalty on (a - b): r^2 / 2 inside
// |r| <= delta, delta (|r| - delta / 2) outside.
Tensor huber(const Tensor &a, const Tensor &b, double delta = kHuberDelta);

// Mean binary cross-entropy; p is clamped to [eps, 1 - eps] first.
Tensor bce(const Tensor &p, const Tensor &y, double eps = kProbEps);

// -log(-log u), u clamped to [eps, 1 - eps].
double gumbel_from_uniform(double u, double eps = kProbEps);
double sample_gumbel(Rng &rng, double eps = kProbEps);

}  // namespace fabind::losses

#endif  // FABIND_LOSSES_H_
