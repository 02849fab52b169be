//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fabind::metrics {

double ligand_rmsd(std::span<const Vec3> pred, std::span<const Vec3> truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("RMSD: atom counts differ ("
                                + std::to_string(pred.size()) + " vs "
                                + std::to_string(truth.size()) + ")");
  if (pred.empty())
    throw std::invalid_argument("RMSD of an empty pose");
  double s = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    s += (pred[i] - truth[i]).squaredNorm();
  return std::sqrt(s / static_cast<double>(pred.size()));
}

double centroid_distance(std::span<const Vec3> pred, std::span<const Vec3> truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("centroid distance: atom counts differ");
  return (centroid(pred) - centroid(truth)).norm();
}

double dcc(const Vec3 &pred_center, const Vec3 &native_center) {
  return (pred_center - native_center).norm();
}

double percentile(std::vector<double> values, double q) {
  if (values.empty())
    throw std::invalid_argument("percentile of an empty set");
  if (!(q >= 0 && q <= 100))
    throw std::invalid_argument("percentile rank outside [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double fraction_below(std::span<const double> values, double threshold) {
  if (values.empty())
    throw std::invalid_argument("fraction of an empty set");
  std::size_t n = 0;
  for (double v: values)
    n += v < threshold ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(values.size());
}

Summary summarize(std::span<const double> values,
                  std::span<const double> thresholds) {
  if (values.empty())
    throw std::invalid_argument("cannot summarize an empty metric column");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Summary s;
  double total = 0;
  for (double v: sorted)
    total += v;
  s.mean = total / static_cast<double>(sorted.size());
  s.p25 = percentile(sorted, 25);
  s.p50 = percentile(sorted, 50);
  s.p75 = percentile(sorted, 75);
  for (double t: thresholds)
    s.below.emplace_back(t, fraction_below(sorted, t));
  return s;
}

MetricReport metric_table(std::vector<ComplexMetrics> rows) {
  if (rows.empty())
    throw std::invalid_argument("metric table needs at least one complex");
  MetricReport r;
  std::vector<double> rmsd, cent, dccs;
  for (const auto &row: rows) {
    rmsd.push_back(row.rmsd);
    cent.push_back(row.centroid);
    if (row.dcc >= 0)
      dccs.push_back(row.dcc);
  }
  const double pose_t[] = { 2.0, 5.0 };
  const double dcc_t[] = { 3.0, 4.0, 5.0 };
  r.rmsd = summarize(rmsd, pose_t);
  r.centroid = summarize(cent, pose_t);
  r.has_dcc = !dccs.empty();
  if (r.has_dcc)
    r.dcc = summarize(dccs, dcc_t);
  r.rows = std::move(rows);
  return r;
}

namespace {

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string summary_line(const std::string &label, const Summary &s) {
  std::string line = label;
  line.resize(18, ' ');
  line += fmt("%8.2f", s.p25) + fmt("%8.2f", s.p50) + fmt("%8.2f", s.p75)
          + fmt("%8.2f", s.mean);
  for (const auto &[t, f]: s.below)
    line += fmt("  <%.0fA:", t) + fmt("%6.1f%%", 100.0 * f);
  return line + "\n";
}

}  // namespace

std::string render_table(const MetricReport &r) {
  std::string out = "metric               p25     p50     p75    mean  % below\n";
  out += summary_line("ligand RMSD", r.rmsd);
  out += summary_line("centroid distance", r.centroid);
  if (r.has_dcc)
    out += summary_line("DCC", r.dcc);
  out += "complexes: " + std::to_string(r.rows.size()) + "\n";
  return out;
}

std::string render_csv(const MetricReport &r) {
  std::string out = "name,rmsd,centroid_distance,dcc\n";
  for (const auto &row: r.rows)
    out += row.name + fmt(",%.6f", row.rmsd) + fmt(",%.6f", row.centroid)
           + (row.dcc >= 0 ? fmt(",%.6f", row.dcc) : std::string(",")) + "\n";
  return out;
}

}  // namespace fabind::metrics
