//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_METRICS_H_
#define FABIND_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "fabind/geometry.h"

namespace fabind::metrics {

// No alignment: poses live in the receptor frame.
double ligand_rmsd(std::span<const Vec3> pred, std::span<const Vec3> truth);
double centroid_distance(std::span<const Vec3> pred, std::span<const Vec3> truth);
double dcc(const Vec3 &pred_center, const Vec3 &native_center);

// Linear interpolation between order statistics, q in [0, 100].
double percentile(std::vector<double> values, double q);
// Strict less-than.
double fraction_below(std::span<const double> values, double threshold);

struct Summary {
  double mean = 0, p25 = 0, p50 = 0, p75 = 0;
  std::vector<std::pair<double, double>> below;  // (threshold, fraction)

  bool operator==(const Summary &) const = default;
};

Summary summarize(std::span<const double> values,
                  std::span<const double> thresholds);

struct ComplexMetrics {
  std::string name;
  double rmsd = 0;
  double centroid = 0;
  double dcc = -1;  // negative when no pocket center is available
};

struct MetricReport {
  std::vector<ComplexMetrics> rows;
  Summary rmsd;      // % below 2, 5
  Summary centroid;  // % below 2, 5
  Summary dcc;       // % below 3, 4, 5
  bool has_dcc = false;
};

MetricReport metric_table(std::vector<ComplexMetrics> rows);

std::string render_table(const MetricReport &report);
std::string render_csv(const MetricReport &report);

}  // namespace fabind::metrics

#endif  // FABIND_METRICS_H_
