//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/pocket_module.h"

#include <cmath>
#include <stdexcept>

#include "fabind/losses.h"
#include "fabind/ops.h"

namespace fabind {

void PocketConfig::validate() const {
  layer.validate();
  if (layers < 1)
    throw std::invalid_argument("pocket module needs at least one layer");
  if (!(tau > 0))
    throw std::invalid_argument("Gumbel temperature must be positive");
  if (!(threshold > 0 && threshold < 1))
    throw std::invalid_argument("classification threshold must lie in (0, 1)");
  if (!(alpha >= 0) || !(radius > 0))
    throw std::invalid_argument("pocket alpha must be >= 0 and radius > 0");
}

PocketParams make_pocket_params(nn::ParamStore &store, const std::string &name,
                                const PocketConfig &config, Rng &rng) {
  config.validate();
  PocketParams p;
  p.encoders = make_encoders(store, name + ".enc", config.layer, rng);
  for (int l = 0; l < config.layers; ++l)
    p.layers.push_back(make_fabind_layer(
        store, name + ".layer" + std::to_string(l), config.layer, rng));
  const int d = config.layer.hidden;
  p.classifier = nn::make_mlp(store, name + ".classifier", { d, d, 1 },
                              nn::Activation::kRelu, rng);
  return p;
}

Tensor gumbel_weights(const Tensor &probs, std::span<const double> noise,
                      double tau) {
  const int n = probs.rows();
  if (!(tau > 0))
    throw std::invalid_argument("Gumbel temperature must be positive");
  Tensor logits = ops::log(ops::clamp(probs, losses::kProbEps, 1.0));
  if (!noise.empty()) {
    if (static_cast<int>(noise.size()) != n)
      throw std::invalid_argument("Gumbel noise length mismatch");
    logits = ops::add(logits, Tensor::from(n, 1, { noise.begin(), noise.end() }));
  }
  return ops::transpose(ops::softmax_rows(ops::transpose(ops::scale(logits, 1.0 / tau))));
}

Tensor gumbel_center(const Tensor &probs, const Tensor &coords,
                     std::span<const double> noise, double tau) {
  const Tensor w = gumbel_weights(probs, noise, tau);
  return ops::matmul(ops::transpose(w), coords);
}

Vec3 hard_center(std::span<const Vec3> coords, std::span<const int> positive) {
  if (positive.empty())
    throw std::invalid_argument("hard center of an empty residue set");
  Vec3 s = Vec3::Zero();
  for (int j: positive)
    s += coords[j];
  return s / static_cast<double>(positive.size());
}

PocketPrediction predict_pocket(const PocketParams &p, const PocketConfig &config,
                                const LigandGraph &ligand,
                                const ProteinGraph &protein, Rng *rng) {
  const double scale = config.layer.coord_scale;
  const Vec3 protein_center = centroid(protein.coords);
  const auto ligand_coords = translate_to(ligand.coords, protein_center);

  const Embeddings emb = encode(p.encoders, ligand, protein.types);
  LayerState state = assemble_state(emb, config.layer,
                                    coords_tensor(ligand_coords, scale),
                                    coords_tensor(protein.coords, scale));
  const Topology topo = make_topology(ligand, protein.edges);
  for (const auto &layer: p.layers)
    state = fabind_layer_forward(layer, config.layer, state, topo);

  const int np = protein.size();
  const Tensor residues = ops::slice_rows(state.protein_h, 0, np);
  PocketPrediction out;
  out.probs = ops::sigmoid(p.classifier(residues));

  std::vector<double> noise(np, 0.0);
  if (rng)
    for (auto &g: noise)
      g = losses::sample_gumbel(*rng);
  const Tensor native_x = coords_tensor(protein.coords, scale);
  out.gumbel_weights = gumbel_weights(out.probs, noise, config.tau);
  out.gumbel_center = ops::matmul(ops::transpose(out.gumbel_weights), native_x);
  out.gumbel_center_A = Vec3(out.gumbel_center(0, 0), out.gumbel_center(0, 1),
                             out.gumbel_center(0, 2)) * scale;

  for (int j = 0; j < np; ++j)
    if (out.probs(j, 0) > config.threshold)
      out.positive.push_back(j);
  if (!out.positive.empty()) {
    out.hard_center = hard_center(protein.coords, out.positive);
    out.decided_center = out.hard_center;
  } else {
    out.decided_center = out.gumbel_center_A;
  }
  return out;
}

Tensor classification_loss(const Tensor &probs, std::span<const int> labels) {
  if (static_cast<int>(labels.size()) != probs.rows())
    throw std::invalid_argument("label count does not match residues");
  std::vector<double> y(labels.begin(), labels.end());
  return losses::bce(probs, Tensor::from(probs.rows(), 1, std::move(y)));
}

Tensor center_constraint_loss(const Tensor &center, const Vec3 &native_model) {
  return losses::huber(center, Tensor::from(1, 3, { native_model.x(), native_model.y(),
                                            native_model.z() }));
}

PocketLossReport pocket_loss(const Tensor &classification, const Tensor &center,
                             double alpha) {
  PocketLossReport r;
  r.classification = classification;
  r.center = center;
  r.alpha = alpha;
  r.total = ops::add(classification, ops::scale(center, alpha));
  return r;
}

PocketSubgraph decide_pocket(const PocketPrediction &prediction,
                             const ProteinGraph &protein, double radius) {
  return extract_pocket(protein, prediction.decided_center, radius);
}

}  // namespace fabind
