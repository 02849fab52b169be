//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/geometry.h"

#include <stdexcept>

namespace fabind {

std::vector<Vec3> RigidMotion::apply(std::span<const Vec3> xs) const {
  std::vector<Vec3> out;
  out.reserve(xs.size());
  for (const auto &x: xs)
    out.push_back(apply(x));
  return out;
}

Vec3 centroid(std::span<const Vec3> xs) {
  if (xs.empty())
    throw std::invalid_argument("centroid of an empty point set");
  Vec3 c = Vec3::Zero();
  for (const auto &x: xs)
    c += x;
  return c / static_cast<double>(xs.size());
}

Mat3 random_orthogonal(Rng &rng, bool allow_reflection) {
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat3> qr(g);
  Mat3 q = qr.householderQ();
  const Mat3 r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Sign fix makes Q Haar distributed.
  for (int j = 0; j < 3; ++j)
    if (r(j, j) < 0)
      q.col(j) = -q.col(j);
  if (q.determinant() < 0)
    q.col(0) = -q.col(0);
  if (allow_reflection && rng.uniform() < 0.5)
    q.col(2) = -q.col(2);
  return q;
}

RigidMotion random_rigid_motion(Rng &rng, bool allow_reflection,
                                double translation_scale) {
  RigidMotion m;
  m.rotation = random_orthogonal(rng, allow_reflection);
  for (int i = 0; i < 3; ++i)
    m.translation[i] = rng.uniform(-translation_scale, translation_scale);
  return m;
}

}  // namespace fabind
