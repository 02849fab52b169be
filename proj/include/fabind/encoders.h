//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_ENCODERS_H_
#define FABIND_ENCODERS_H_

#include <span>
#include <string>
#include <vector>

#include "fabind/complex_graph.h"
#include "fabind/fabind_layer.h"

namespace fabind {

inline constexpr int kResidueEmbedDim = 32;

struct EncoderParams {
  nn::Linear ligand_embed;   // 56 -> hidden
  Tensor residue_table;      // 21 x kResidueEmbedDim
  nn::Linear residue_embed;  // kResidueEmbedDim -> hidden
  Tensor ligand_global;      // 1 x hidden
  Tensor protein_global;     // 1 x hidden
  OpmParams pair_init;
};

EncoderParams make_encoders(nn::ParamStore &store, const std::string &name,
                            const LayerConfig &config, Rng &rng);

// Coordinate-free embeddings; reused across refinement iterations.
struct Embeddings {
  Tensor ligand_h;   // n_l x hidden
  Tensor protein_h;  // n_p x hidden
  Tensor pair;       // (n_l * n_p) x pair_dim
  Tensor ligand_global;
  Tensor protein_global;
};

Embeddings encode(const EncoderParams &p, const LigandGraph &ligand,
                  std::span<const int> residue_types);

// Coordinates are in model units. Global nodes, when enabled, are appended
// as the last row of each component and start at the component centroid.
LayerState assemble_state(const Embeddings &e, const LayerConfig &config,
                          const Tensor &ligand_x, const Tensor &protein_x);

Topology make_topology(const LigandGraph &ligand,
                       std::span<const IndexPair> protein_edges);

Tensor coords_tensor(std::span<const Vec3> coords, double scale);
std::vector<Vec3> tensor_coords(const Tensor &t, double scale, int rows = -1);

}  // namespace fabind

#endif  // FABIND_ENCODERS_H_
