//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_FABIND_LAYER_H_
#define FABIND_FABIND_LAYER_H_

#include <string>
#include <vector>

#include "fabind/kernels.h"
#include "fabind/nn.h"
#include "fabind/tensor.h"

namespace fabind {

struct LayerConfig {
  int hidden = 128;
  int pair_dim = 32;
  int heads = 4;
  int opm_dim = 16;
  // Cutoffs in Å; coordinates inside the network are divided by coord_scale.
  double internal_cutoff = 8.0;
  double interfacial_cutoff = 10.0;
  double coord_scale = 5.0;
  // Bound on the per-edge coordinate scalars produced by phi_x / phi_xv.
  double coord_clamp = 20.0;
  bool update_protein_coords = false;
  bool global_nodes = true;

  int head_dim() const { return hidden / heads; }
  double interfacial_cutoff_model() const {
    return interfacial_cutoff / coord_scale;
  }
  void validate() const;
};

// EGNN-style layer parameters: phi_e (edge message), phi_h (node update) and
// phi_x (coordinate scalar; absent when the component is rigid).
struct EgclParams {
  nn::Mlp edge;
  nn::Mlp node;
  nn::Mlp coord;
  bool moves_coords = true;
};

EgclParams make_egcl(nn::ParamStore &store, const std::string &name,
                     const LayerConfig &config, bool moves_coords, Rng &rng);

// z_ij = vec(left(h_i) (x) right(h_j)) W + b. The inner Linears are
// bias-free.
struct OpmParams {
  nn::Linear left;
  nn::Linear right;
  Tensor weight;
  Tensor bias;
};

OpmParams make_opm(nn::ParamStore &store, const std::string &name,
                   const LayerConfig &config, Rng &rng);

Tensor opm(const OpmParams &p, const Tensor &ligand_h, const Tensor &protein_h);

struct CrossAttentionParams {
  nn::Linear ligand_q, ligand_k, ligand_v;
  nn::Linear protein_q, protein_k, protein_v;
  nn::Linear ligand_bias, protein_bias;  // pair_dim -> heads
  nn::Linear ligand_out, protein_out;
  OpmParams pair_update;
};

struct InterfacialSideParams {
  nn::Mlp q, k, v, b;
  nn::Mlp xv;  // only used on the side whose coordinates move
};

struct InterfacialParams {
  InterfacialSideParams ligand;
  InterfacialSideParams protein;
};

struct FabindLayerParams {
  EgclParams ligand_mp;
  EgclParams protein_mp;
  CrossAttentionParams cross;
  InterfacialParams interfacial;
};

FabindLayerParams make_fabind_layer(nn::ParamStore &store,
                                    const std::string &name,
                                    const LayerConfig &config, Rng &rng);

// Node embeddings and coordinates of both components plus the dense pair
// grid (row i * n_protein + j). With global nodes the last row of each
// component holds its global node; n_ligand / n_protein count real nodes.
struct LayerState {
  Tensor ligand_h, ligand_x;
  Tensor protein_h, protein_x;
  Tensor pair;
  int n_ligand = 0;
  int n_protein = 0;
  bool has_global = false;
};

// Edges that do not depend on coordinates during a forward pass: ligand
// bonds and protein radius edges, undirected with i < j.
struct Topology {
  std::vector<kernels::IndexPair> ligand_edges;
  std::vector<kernels::IndexPair> protein_edges;
};

struct DirectedEdges {
  std::vector<int> src;
  std::vector<int> dst;
};

DirectedEdges both_directions(const std::vector<kernels::IndexPair> &edges);

// m_ik = phi_e(h_i, h_k, |x_i - x_k|^2); h_i += phi_h(h_i, sum_k m_ik);
// x_i += mean_k (x_i - x_k) phi_x(m_ik). Messages flow src -> dst. Nodes
// without incoming edges keep their coordinates.
struct NodeUpdate {
  Tensor h;
  Tensor x;
};

NodeUpdate independent_mp(const EgclParams &p, const Tensor &h, const Tensor &x,
                          const DirectedEdges &edges, double coord_clamp);

struct CrossAttentionResult {
  Tensor ligand_h, protein_h, pair;
  std::vector<Tensor> ligand_attention;   // per head, n_ligand x n_protein
  std::vector<Tensor> protein_attention;  // per head, n_protein x n_ligand
};

CrossAttentionResult cross_attention_update(const CrossAttentionParams &p,
                                            const LayerConfig &config,
                                            const Tensor &ligand_h,
                                            const Tensor &protein_h,
                                            const Tensor &pair);

struct InterfacialResult {
  Tensor ligand_h, ligand_x;
  Tensor protein_h, protein_x;
  Tensor ligand_alpha;   // per edge, normalized per ligand atom
  Tensor protein_alpha;  // per edge, normalized per residue
};

// edges are (atom, residue) pairs; pair rows are looked up as
// atom * n_protein + residue.
InterfacialResult interfacial_mp(const InterfacialParams &p,
                                 const LayerConfig &config,
                                 const Tensor &ligand_h, const Tensor &ligand_x,
                                 const Tensor &protein_h,
                                 const Tensor &protein_x, const Tensor &pair,
                                 const std::vector<kernels::IndexPair> &edges);

// Interfacial edges at the current coordinate values (model units).
std::vector<kernels::IndexPair> interfacial_edges(const Tensor &ligand_x,
                                                  const Tensor &protein_x,
                                                  int n_ligand, int n_protein,
                                                  double cutoff);

// Independent MP on both components (with global nodes when present), then
// cross-attention, then interfacial MP with edges rebuilt from the incoming
// coordinates.
LayerState fabind_layer_forward(const FabindLayerParams &p,
                                const LayerConfig &config,
                                const LayerState &state,
                                const Topology &topology);

// The independent-only pass that closes a layer stack.
LayerState final_independent_pass(const EgclParams &ligand,
                                  const EgclParams &protein,
                                  const LayerConfig &config,
                                  const LayerState &state,
                                  const Topology &topology);

}  // namespace fabind

#endif  // FABIND_FABIND_LAYER_H_
