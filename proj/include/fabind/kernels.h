//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_KERNELS_H_
#define FABIND_KERNELS_H_

#include <span>
#include <utility>
#include <vector>

#include "fabind/geometry.h"

// Data-parallel inner loops. Every kernel in fabind::kernels has a plain
// loop twin in fabind::kernels::serial with the same accumulation order, so
// the two produce bit-identical results regardless of the thread count.
namespace fabind::kernels {

using IndexPair = std::pair<int, int>;

enum class EdgeMode { kInternal, kInterfacial };

// All matrices are dense row-major. When accumulate is false C is
// overwritten, otherwise the product is added to C.

// C[m x n] (+)= A[m x k] B[k x n]
void matmul(std::span<const double> a, std::span<const double> b,
            std::span<double> c, int m, int k, int n, bool accumulate = false);
// C[m x n] (+)= A[m x k] B[n x k]^T
void matmul_nt(std::span<const double> a, std::span<const double> b,
               std::span<double> c, int m, int k, int n,
               bool accumulate = false);
// C[m x n] (+)= A[k x m]^T B[k x n]
void matmul_tn(std::span<const double> a, std::span<const double> b,
               std::span<double> c, int m, int k, int n,
               bool accumulate = false);

// Pairs with |a_i - b_j| <= cutoff. kInternal requires a and b to be the same
// set and returns i < j only; kInterfacial returns every cross pair. Output
// is sorted lexicographically.
std::vector<IndexPair> radius_pairs(std::span<const Vec3> a,
                                    std::span<const Vec3> b, double cutoff,
                                    EdgeMode mode);

// Ascending indices of points with |p - center| <= radius.
std::vector<int> within_sphere(std::span<const Vec3> points, const Vec3 &center,
                               double radius);

namespace serial {

void matmul(std::span<const double> a, std::span<const double> b,
            std::span<double> c, int m, int k, int n, bool accumulate = false);
void matmul_nt(std::span<const double> a, std::span<const double> b,
               std::span<double> c, int m, int k, int n,
               bool accumulate = false);
void matmul_tn(std::span<const double> a, std::span<const double> b,
               std::span<double> c, int m, int k, int n,
               bool accumulate = false);
std::vector<IndexPair> radius_pairs(std::span<const Vec3> a,
                                    std::span<const Vec3> b, double cutoff,
                                    EdgeMode mode);
std::vector<int> within_sphere(std::span<const Vec3> points, const Vec3 &center,
                               double radius);

}  // namespace serial

// Problems smaller than this many multiply-adds run on one thread.
inline constexpr long kParallelGrain = 1L << 15;

}  // namespace fabind::kernels

#endif  // FABIND_KERNELS_H_
