//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_GEOMETRY_H_
#define FABIND_GEOMETRY_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fabind/rng.h"

namespace fabind {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// x -> R x + t. R is orthogonal; det(R) = -1 is allowed (E(3), not SE(3)).
struct RigidMotion {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3 &x) const { return rotation * x + translation; }
  std::vector<Vec3> apply(std::span<const Vec3> xs) const;
};

Vec3 centroid(std::span<const Vec3> xs);

// Haar-uniform orthogonal matrix; with allow_reflection the determinant is
// +1 or -1 with equal probability.
Mat3 random_orthogonal(Rng &rng, bool allow_reflection);

RigidMotion random_rigid_motion(Rng &rng, bool allow_reflection,
                                double translation_scale = 10.0);

}  // namespace fabind

#endif  // FABIND_GEOMETRY_H_
