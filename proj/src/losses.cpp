//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/losses.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fabind::losses {

using ad::Node;

Tensor huber(const Tensor &a, const Tensor &b, double delta) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("huber: shape mismatch");
  if (!(delta > 0))
    throw std::invalid_argument("huber: delta must be positive");
  const std::size_t n = a.size();
  if (n == 0)
    throw std::invalid_argument("huber: empty input");
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::abs(a.values()[i] - b.values()[i]);
    s += r <= delta ? 0.5 * r * r : delta * (r - 0.5 * delta);
  }
  s /= static_cast<double>(n);
  return ad::make_result("huber", 1, 1, { s }, { a.node(), b.node() },
                         [delta, n](Node &self) {
                           Node &pa = *self.parents[0];
                           Node &pb = *self.parents[1];
                           const double g = self.grad[0] / static_cast<double>(n);
                           if (pa.requires_grad)
                             pa.ensure_grad();
                           if (pb.requires_grad)
                             pb.ensure_grad();
                           for (std::size_t i = 0; i < n; ++i) {
                             const double r = pa.value[i] - pb.value[i];
                             const double d = std::clamp(r, -delta, delta) * g;
                             if (pa.requires_grad)
                               pa.grad[i] += d;
                             if (pb.requires_grad)
                               pb.grad[i] -= d;
                           }
                         });
}

Tensor bce(const Tensor &p, const Tensor &y, double eps) {
  if (p.size() != y.size())
    throw std::invalid_argument("bce: length mismatch");
  const std::size_t n = p.size();
  if (n == 0)
    throw std::invalid_argument("bce: empty input");
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = std::clamp(p.values()[i], eps, 1.0 - eps);
    const double t = y.values()[i];
    s -= t * std::log(q) + (1.0 - t) * std::log(1.0 - q);
  }
  s /= static_cast<double>(n);
  return ad::make_result(
      "bce", 1, 1, { s }, { p.node(), y.node() }, [eps, n](Node &self) {
        Node &pp = *self.parents[0];
        const Node &py = *self.parents[1];
        if (!pp.requires_grad)
          return;
        pp.ensure_grad();
        const double g = self.grad[0] / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double v = pp.value[i];
          if (v < eps || v > 1.0 - eps)
            continue;
          const double t = py.value[i];
          pp.grad[i] += g * (-t / v + (1.0 - t) / (1.0 - v));
        }
      });
}

double gumbel_from_uniform(double u, double eps) {
  u = std::clamp(u, eps, 1.0 - eps);
  return -std::log(-std::log(u));
}

double sample_gumbel(Rng &rng, double eps) {
  return gumbel_from_uniform(rng.uniform(), eps);
}

}  // namespace fabind::losses
