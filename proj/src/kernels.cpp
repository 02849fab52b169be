//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/kernels.h"

#include <algorithm>

namespace fabind::kernels {
namespace {

inline void row_matmul(const double *a, const double *b, double *crow, int i,
                       int k, int n, bool accumulate) {
  if (!accumulate)
    std::fill(crow, crow + n, 0.0);
  const double *arow = a + static_cast<long>(i) * k;
  for (int p = 0; p < k; ++p) {
    const double av = arow[p];
    const double *brow = b + static_cast<long>(p) * n;
    for (int j = 0; j < n; ++j)
      crow[j] += av * brow[j];
  }
}

inline void row_matmul_nt(const double *a, const double *b, double *crow, int i,
                          int k, int n, bool accumulate) {
  const double *arow = a + static_cast<long>(i) * k;
  for (int j = 0; j < n; ++j) {
    const double *brow = b + static_cast<long>(j) * k;
    double s = 0.0;
    for (int p = 0; p < k; ++p)
      s += arow[p] * brow[p];
    crow[j] = accumulate ? crow[j] + s : s;
  }
}

inline void row_matmul_tn(const double *a, const double *b, double *crow, int i,
                          int m, int k, int n, bool accumulate) {
  if (!accumulate)
    std::fill(crow, crow + n, 0.0);
  for (int p = 0; p < k; ++p) {
    const double av = a[static_cast<long>(p) * m + i];
    if (av == 0.0)
      continue;
    const double *brow = b + static_cast<long>(p) * n;
    for (int j = 0; j < n; ++j)
      crow[j] += av * brow[j];
  }
}

inline void row_pairs(std::span<const Vec3> a, std::span<const Vec3> b,
                      double cutoff, EdgeMode mode, int i,
                      std::vector<IndexPair> &out) {
  const int start = mode == EdgeMode::kInternal ? i + 1 : 0;
  for (int j = start; j < static_cast<int>(b.size()); ++j)
    if ((a[i] - b[j]).norm() <= cutoff)
      out.emplace_back(i, j);
}

}  // namespace

void matmul(std::span<const double> a, std::span<const double> b,
            std::span<double> c, int m, int k, int n, bool accumulate) {
  const bool par = static_cast<long>(m) * k * n >= kParallelGrain;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < m; ++i)
    row_matmul(a.data(), b.data(), c.data() + static_cast<long>(i) * n, i, k,
               n, accumulate);
}

void matmul_nt(std::span<const double> a, std::span<const double> b,
               std::span<double> c, int m, int k, int n, bool accumulate) {
  const bool par = static_cast<long>(m) * k * n >= kParallelGrain;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < m; ++i)
    row_matmul_nt(a.data(), b.data(), c.data() + static_cast<long>(i) * n, i,
                  k, n, accumulate);
}

void matmul_tn(std::span<const double> a, std::span<const double> b,
               std::span<double> c, int m, int k, int n, bool accumulate) {
  const bool par = static_cast<long>(m) * k * n >= kParallelGrain;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < m; ++i)
    row_matmul_tn(a.data(), b.data(), c.data() + static_cast<long>(i) * n, i,
                  m, k, n, accumulate);
}

std::vector<IndexPair> radius_pairs(std::span<const Vec3> a,
                                    std::span<const Vec3> b, double cutoff,
                                    EdgeMode mode) {
  const int na = static_cast<int>(a.size());
  std::vector<std::vector<IndexPair>> rows(na);
  const bool par = static_cast<long>(na) * static_cast<long>(b.size()) >= 4096;
#pragma omp parallel for schedule(dynamic, 8) if (par)
  for (int i = 0; i < na; ++i)
    row_pairs(a, b, cutoff, mode, i, rows[i]);

  std::vector<IndexPair> out;
  for (auto &r: rows)
    out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<int> within_sphere(std::span<const Vec3> points, const Vec3 &center,
                               double radius) {
  const int n = static_cast<int>(points.size());
  std::vector<char> keep(n, 0);
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (int i = 0; i < n; ++i)
    keep[i] = (points[i] - center).norm() <= radius;

  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (keep[i])
      out.push_back(i);
  return out;
}

namespace serial {

void matmul(std::span<const double> a, std::span<const double> b,
            std::span<double> c, int m, int k, int n, bool accumulate) {
  for (int i = 0; i < m; ++i)
    row_matmul(a.data(), b.data(), c.data() + static_cast<long>(i) * n, i, k,
               n, accumulate);
}

void matmul_nt(std::span<const double> a, std::span<const double> b,
               std::span<double> c, int m, int k, int n, bool accumulate) {
  for (int i = 0; i < m; ++i)
    row_matmul_nt(a.data(), b.data(), c.data() + static_cast<long>(i) * n, i,
                  k, n, accumulate);
}

void matmul_tn(std::span<const double> a, std::span<const double> b,
               std::span<double> c, int m, int k, int n, bool accumulate) {
  for (int i = 0; i < m; ++i)
    row_matmul_tn(a.data(), b.data(), c.data() + static_cast<long>(i) * n, i,
                  m, k, n, accumulate);
}

std::vector<IndexPair> radius_pairs(std::span<const Vec3> a,
                                    std::span<const Vec3> b, double cutoff,
                                    EdgeMode mode) {
  std::vector<IndexPair> out;
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    row_pairs(a, b, cutoff, mode, i, out);
  return out;
}

std::vector<int> within_sphere(std::span<const Vec3> points, const Vec3 &center,
                               double radius) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(points.size()); ++i)
    if ((points[i] - center).norm() <= radius)
      out.push_back(i);
  return out;
}

}  // namespace serial
}  // namespace fabind::kernels
