//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/encoders.h"

#include "fabind/features.h"
#include "fabind/ops.h"

namespace fabind {

EncoderParams make_encoders(nn::ParamStore &store, const std::string &name,
                            const LayerConfig &config, Rng &rng) {
  const int d = config.hidden;
  EncoderParams p;
  p.ligand_embed = nn::make_linear(store, name + ".ligand_embed",
                                   kLigandFeatureDim, d, true, rng);
  p.residue_table = store.create(name + ".residue_table", kNumResidueTypes,
                                 kResidueEmbedDim, 1, rng);
  p.residue_embed = nn::make_linear(store, name + ".residue_embed",
                                    kResidueEmbedDim, d, true, rng);
  p.ligand_global = store.create(name + ".ligand_global", 1, d, d, rng);
  p.protein_global = store.create(name + ".protein_global", 1, d, d, rng);
  p.pair_init = make_opm(store, name + ".pair_init", config, rng);
  return p;
}

Embeddings encode(const EncoderParams &p, const LigandGraph &ligand,
                  std::span<const int> residue_types) {
  const int n = ligand.size();
  std::vector<double> feats;
  feats.reserve(static_cast<std::size_t>(n) * kLigandFeatureDim);
  for (const auto &row: ligand.features)
    feats.insert(feats.end(), row.begin(), row.end());
  Embeddings e;
  e.ligand_h = p.ligand_embed(Tensor::from(n, kLigandFeatureDim, std::move(feats)));
  e.protein_h = p.residue_embed(ops::gather_rows(p.residue_table, residue_types));
  e.pair = opm(p.pair_init, e.ligand_h, e.protein_h);
  e.ligand_global = p.ligand_global;
  e.protein_global = p.protein_global;
  return e;
}

LayerState assemble_state(const Embeddings &e, const LayerConfig &config,
                          const Tensor &ligand_x, const Tensor &protein_x) {
  LayerState s;
  s.n_ligand = e.ligand_h.rows();
  s.n_protein = e.protein_h.rows();
  s.pair = e.pair;
  s.has_global = config.global_nodes;
  if (!s.has_global) {
    s.ligand_h = e.ligand_h;
    s.ligand_x = ligand_x;
    s.protein_h = e.protein_h;
    s.protein_x = protein_x;
    return s;
  }
  s.ligand_h = ops::concat_rows({ e.ligand_h, e.ligand_global });
  s.ligand_x = ops::concat_rows({ ligand_x, ops::mean_rows(ligand_x) });
  s.protein_h = ops::concat_rows({ e.protein_h, e.protein_global });
  s.protein_x = ops::concat_rows({ protein_x, ops::mean_rows(protein_x) });
  return s;
}

Topology make_topology(const LigandGraph &ligand,
                       std::span<const IndexPair> protein_edges) {
  Topology t;
  t.ligand_edges = ligand.bonds;
  t.protein_edges.assign(protein_edges.begin(), protein_edges.end());
  return t;
}

Tensor coords_tensor(std::span<const Vec3> coords, double scale) {
  const int n = static_cast<int>(coords.size());
  std::vector<double> v(static_cast<std::size_t>(n) * 3);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c)
      v[3 * i + c] = coords[i][c] / scale;
  return Tensor::from(n, 3, std::move(v));
}

std::vector<Vec3> tensor_coords(const Tensor &t, double scale, int rows) {
  const int n = rows < 0 ? t.rows() : rows;
  std::vector<Vec3> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = Vec3(t(i, 0), t(i, 1), t(i, 2)) * scale;
  return out;
}

}  // namespace fabind
