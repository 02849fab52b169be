//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_OPTIMIZER_H_
#define FABIND_OPTIMIZER_H_

#include <cstdint>
#include <vector>

#include "fabind/nn.h"

namespace fabind {

struct AdamWConfig {
  double lr = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-2;
  double max_grad_norm = 0;  // global L2 clip; 0 disables

  bool operator==(const AdamWConfig &) const = default;
};

// Adam with decoupled weight decay: p <- p (1 - lr wd), then the
// bias-corrected moment step.
class AdamW {
public:
  AdamW(const nn::ParamStore &store, AdamWConfig config);

  // Applies one update from the gradients currently stored on the
  // parameters. Parameters the loss did not reach count as zero gradient;
  // a step with no gradient anywhere is an error. With max_grad_norm set,
  // all gradients are scaled by min(1, max_grad_norm / global norm).
  void step(double lr);
  void step() { step(config_.lr); }

  const AdamWConfig &config() const { return config_; }
  std::int64_t step_count() const { return t_; }

  std::vector<std::vector<double>> &first_moments() { return m_; }
  std::vector<std::vector<double>> &second_moments() { return v_; }
  const std::vector<std::vector<double>> &first_moments() const { return m_; }
  const std::vector<std::vector<double>> &second_moments() const { return v_; }
  void set_step_count(std::int64_t t) { t_ = t; }

private:
  const nn::ParamStore &store_;
  AdamWConfig config_;
  std::int64_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

// Linear warm-up over warmup_epochs, then linear decay reaching zero after
// total_epochs.
double scheduled_lr(double base_lr, int epoch, int warmup_epochs,
                    int total_epochs);

}  // namespace fabind

#endif  // FABIND_OPTIMIZER_H_
