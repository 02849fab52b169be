//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_POCKET_MODULE_H_
#define FABIND_POCKET_MODULE_H_

#include <span>
#include <string>
#include <vector>

#include "fabind/complex_graph.h"
#include "fabind/encoders.h"

namespace fabind {

struct PocketConfig {
  LayerConfig layer;
  int layers = 1;
  double threshold = 0.5;
  double tau = 1.0;
  double alpha = 0.2;
  double radius = kPocketRadius;

  void validate() const;
};

struct PocketParams {
  EncoderParams encoders;
  std::vector<FabindLayerParams> layers;
  nn::Mlp classifier;  // hidden -> hidden -> 1
};

PocketParams make_pocket_params(nn::ParamStore &store, const std::string &name,
                                const PocketConfig &config, Rng &rng);

struct PocketPrediction {
  Tensor probs;              // n_p x 1
  Tensor gumbel_weights;     // n_p x 1, sums to 1
  Tensor gumbel_center;      // 1 x 3, model units
  std::vector<int> positive; // residues with p > threshold
  Vec3 hard_center = Vec3::Zero();  // Å, meaningful when positive is non-empty
  Vec3 gumbel_center_A = Vec3::Zero();
  Vec3 decided_center = Vec3::Zero();
};

// Ligand conformer is translated to the protein centroid before the forward
// pass. Without an rng the Gumbel noise is zero.
PocketPrediction predict_pocket(const PocketParams &p, const PocketConfig &config,
                                const LigandGraph &ligand,
                                const ProteinGraph &protein, Rng *rng);

// gamma_j = softmax_j((log p_j + g_j) / tau), probs clamped to [eps, 1].
Tensor gumbel_weights(const Tensor &probs, std::span<const double> noise,
                      double tau);
Tensor gumbel_center(const Tensor &probs, const Tensor &coords,
                     std::span<const double> noise, double tau);

Vec3 hard_center(std::span<const Vec3> coords, std::span<const int> positive);

struct PocketLossReport {
  Tensor classification;
  Tensor center;
  Tensor total;
  double alpha = 0.2;
};

Tensor classification_loss(const Tensor &probs, std::span<const int> labels);
Tensor center_constraint_loss(const Tensor &center, const Vec3 &native_model);
PocketLossReport pocket_loss(const Tensor &classification, const Tensor &center,
                             double alpha);

PocketSubgraph decide_pocket(const PocketPrediction &prediction,
                             const ProteinGraph &protein,
                             double radius = kPocketRadius);

}  // namespace fabind

#endif  // FABIND_POCKET_MODULE_H_
