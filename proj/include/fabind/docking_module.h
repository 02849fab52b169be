//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_DOCKING_MODULE_H_
#define FABIND_DOCKING_MODULE_H_

#include <span>
#include <string>
#include <vector>

#include "fabind/complex_graph.h"
#include "fabind/encoders.h"

namespace fabind {

struct DockingConfig {
  LayerConfig layer;
  int layers = 4;
  int iterations = 8;
  double beta = 1.0;   // distance-map term
  double gamma = 1.0;  // consistency term inside the distance-map loss
  double w_las = 1.0;

  void validate() const;
};

struct DockingParams {
  EncoderParams encoders;
  std::vector<FabindLayerParams> layers;
  EgclParams final_ligand;
  EgclParams final_protein;
  nn::Mlp distance_head;  // pair_dim -> pair_dim -> 1, softplus on output
};

DockingParams make_docking_params(nn::ParamStore &store, const std::string &name,
                                  const DockingConfig &config, Rng &rng);

struct DockingResult {
  Tensor ligand_x;   // n_l x 3, model units
  Tensor ligand_h;
  Tensor pair;
  Tensor protein_x;  // n_p x 3, model units
  Tensor d_coord;    // n_l x n_p, from coordinates
  Tensor d_pair;     // n_l x n_p, from pair embeddings
  int iterations = 0;
};

// Ligand coordinates and pocket are given in Å; the ligand is expected to be
// placed at the pocket center. Only the last iteration carries gradients;
// every iteration restarts from the initial embeddings.
DockingResult dock(const DockingParams &p, const DockingConfig &config,
                   const LigandGraph &ligand, std::span<const Vec3> ligand_init,
                   const ProteinGraph &pocket, int iterations);

Tensor distance_direct(const Tensor &ligand_x, const Tensor &protein_x);
Tensor distance_from_pair(const nn::Mlp &head, const Tensor &pair, int n_ligand,
                          int n_protein);
Tensor distance_target(std::span<const Vec3> ligand, std::span<const Vec3> protein,
                       double scale);

Tensor dist_map_loss(const Tensor &d, const Tensor &d_coord, const Tensor &d_pair,
                     double gamma);
Tensor coord_loss(const Tensor &pred, const Tensor &truth);

struct LasPairs {
  std::vector<int> a, b;
  std::vector<double> reference;  // conformer distances, model units
};

LasPairs las_pairs(const LigandGraph &ligand, std::span<const Vec3> conformer,
                   double scale);
Tensor las_constraint(const Tensor &ligand_x, const LasPairs &pairs);

struct DockingLossReport {
  Tensor coord, dist, las, total;
};

DockingLossReport docking_loss(const Tensor &coord, const Tensor &dist,
                               const Tensor &las, double beta, double w_las);

}  // namespace fabind

#endif  // FABIND_DOCKING_MODULE_H_
