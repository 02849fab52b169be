//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/optimizer.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fabind {

AdamW::AdamW(const nn::ParamStore &store, AdamWConfig config)
    : store_(store), config_(config) {
  for (const auto &[name, t]: store_.entries()) {
    m_.emplace_back(t.size(), 0.0);
    v_.emplace_back(t.size(), 0.0);
  }
}

void AdamW::step(double lr) {
  const auto &entries = store_.entries();
  if (entries.size() != m_.size())
    throw std::logic_error("AdamW: parameters registered after construction");
  const bool any = std::any_of(entries.begin(), entries.end(), [](const auto &e) {
    return !e.second.node()->grad.empty();
  });
  if (!any)
    throw std::logic_error("AdamW::step without any computed gradient");

  double gscale = 1.0;
  if (config_.max_grad_norm > 0) {
    double sq = 0;
    for (const auto &e: entries)
      for (double g: e.second.node()->grad)
        sq += g * g;
    const double norm = std::sqrt(sq);
    if (norm > config_.max_grad_norm)
      gscale = config_.max_grad_norm / norm;
  }

  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    Tensor p = entries[k].second;
    const auto &g = p.node()->grad;
    auto w = p.mutable_values();
    auto &m = m_[k];
    auto &v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g.empty() ? 0.0 : gscale * g[i];
      w[i] *= 1.0 - lr * config_.weight_decay;
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * gi;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * gi * gi;
      w[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.eps);
    }
  }
}

double scheduled_lr(double base_lr, int epoch, int warmup_epochs,
                    int total_epochs) {
  if (warmup_epochs > 0 && epoch < warmup_epochs)
    return base_lr * static_cast<double>(epoch + 1) / warmup_epochs;
  const int decay = total_epochs - warmup_epochs;
  if (decay <= 0)
    return base_lr;
  const double frac = static_cast<double>(total_epochs - epoch) / decay;
  return base_lr * std::clamp(frac, 0.0, 1.0);
}

}  // namespace fabind
