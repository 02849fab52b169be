//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/docking_module.h"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "fabind/losses.h"
#include "fabind/ops.h"

namespace fabind {

void DockingConfig::validate() const {
  layer.validate();
  if (layers < 1 || iterations < 1)
    throw std::invalid_argument("docking layers and iterations must be >= 1");
  if (!(beta >= 0 && gamma >= 0 && w_las >= 0))
    throw std::invalid_argument("docking loss weights must be >= 0");
}

DockingParams make_docking_params(nn::ParamStore &store, const std::string &name,
                                  const DockingConfig &config, Rng &rng) {
  config.validate();
  DockingParams p;
  p.encoders = make_encoders(store, name + ".enc", config.layer, rng);
  for (int l = 0; l < config.layers; ++l)
    p.layers.push_back(make_fabind_layer(
        store, name + ".layer" + std::to_string(l), config.layer, rng));
  p.final_ligand = make_egcl(store, name + ".final.ligand", config.layer, true, rng);
  p.final_protein = make_egcl(store, name + ".final.protein", config.layer,
                              config.layer.update_protein_coords, rng);
  const int dz = config.layer.pair_dim;
  p.distance_head = nn::make_mlp(store, name + ".distance_head", { dz, dz, 1 },
                                 nn::Activation::kRelu, rng);
  return p;
}

Tensor distance_direct(const Tensor &ligand_x, const Tensor &protein_x) {
  const int nl = ligand_x.rows(), np = protein_x.rows();
  std::vector<int> ia, ib;
  ia.reserve(static_cast<std::size_t>(nl) * np);
  ib.reserve(static_cast<std::size_t>(nl) * np);
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < np; ++j) {
      ia.push_back(i);
      ib.push_back(j);
    }
  const Tensor diff = ops::sub(ops::gather_rows(ligand_x, ia),
                               ops::gather_rows(protein_x, ib));
  return ops::reshape(ops::sqrt(ops::row_sum(ops::square(diff))), nl, np);
}

Tensor distance_from_pair(const nn::Mlp &head, const Tensor &pair, int n_ligand,
                          int n_protein) {
  return ops::reshape(ops::softplus(head(pair)), n_ligand, n_protein);
}

Tensor distance_target(std::span<const Vec3> ligand, std::span<const Vec3> protein,
                       double scale) {
  const int nl = static_cast<int>(ligand.size());
  const int np = static_cast<int>(protein.size());
  std::vector<double> d(static_cast<std::size_t>(nl) * np);
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < np; ++j)
      d[static_cast<std::size_t>(i) * np + j] = (ligand[i] - protein[j]).norm() / scale;
  return Tensor::from(nl, np, std::move(d));
}

DockingResult dock(const DockingParams &p, const DockingConfig &config,
                   const LigandGraph &ligand, std::span<const Vec3> ligand_init,
                   const ProteinGraph &pocket, int iterations) {
  if (iterations < 1)
    throw std::invalid_argument("refinement needs at least one iteration");
  if (static_cast<int>(ligand_init.size()) != ligand.size())
    throw std::invalid_argument("initial coordinates do not match ligand size");
  const double scale = config.layer.coord_scale;
  const int nl = ligand.size();
  const int np = pocket.size();

  const Embeddings emb = encode(p.encoders, ligand, pocket.types);
  const Topology topo = make_topology(ligand, pocket.edges);
  const Tensor protein_x = coords_tensor(pocket.coords, scale);
  Tensor ligand_x = coords_tensor(ligand_init, scale);

  DockingResult out;
  for (int it = 0; it < iterations; ++it) {
    const bool last = it + 1 == iterations;
    std::optional<ad::NoGradGuard> guard;
    if (!last)
      guard.emplace();
    try {
      LayerState s = assemble_state(emb, config.layer, ligand_x, protein_x);
      for (const auto &layer: p.layers)
        s = fabind_layer_forward(layer, config.layer, s, topo);
      s = final_independent_pass(p.final_ligand, p.final_protein, config.layer,
                                 s, topo);
      if (!last) {
        ligand_x = ops::slice_rows(s.ligand_x, 0, nl).detach();
        continue;
      }
      out.ligand_x = ops::slice_rows(s.ligand_x, 0, nl);
      out.ligand_h = ops::slice_rows(s.ligand_h, 0, nl);
      out.protein_x = ops::slice_rows(s.protein_x, 0, np);
      out.pair = s.pair;
    } catch (const NumericalError &e) {
      throw NumericalError("refinement iteration " + std::to_string(it + 1)
                           + " of " + std::to_string(iterations) + ": " + e.what());
    }
  }
  out.iterations = iterations;
  out.d_coord = distance_direct(out.ligand_x, out.protein_x);
  out.d_pair = distance_from_pair(p.distance_head, out.pair, nl, np);
  return out;
}

Tensor dist_map_loss(const Tensor &d, const Tensor &d_coord, const Tensor &d_pair,
                     double gamma) {
  if (d.rows() != d_coord.rows() || d.cols() != d_coord.cols()
      || d.rows() != d_pair.rows() || d.cols() != d_pair.cols())
    throw std::invalid_argument("distance map shapes differ");
  const double inv_n = 1.0 / (static_cast<double>(d.rows()) * d.cols());
  Tensor s = ops::add(ops::sum(ops::square(ops::sub(d, d_coord))),
                      ops::sum(ops::square(ops::sub(d, d_pair))));
  if (gamma != 0.0)
    s = ops::add(s, ops::scale(ops::sum(ops::square(ops::sub(d_coord, d_pair))), gamma));
  return ops::scale(s, inv_n);
}

Tensor coord_loss(const Tensor &pred, const Tensor &truth) {
  return losses::huber(pred, truth);
}

LasPairs las_pairs(const LigandGraph &ligand, std::span<const Vec3> conformer,
                   double scale) {
  LasPairs out;
  for (auto [i, k]: local_structure_pairs(ligand)) {
    out.a.push_back(i);
    out.b.push_back(k);
    out.reference.push_back((conformer[i] - conformer[k]).norm() / scale);
  }
  return out;
}

Tensor las_constraint(const Tensor &ligand_x, const LasPairs &pairs) {
  if (pairs.a.empty())
    return Tensor::scalar(0.0);
  const int m = static_cast<int>(pairs.a.size());
  const Tensor diff = ops::sub(ops::gather_rows(ligand_x, pairs.a),
                               ops::gather_rows(ligand_x, pairs.b));
  const Tensor dist = ops::sqrt(ops::row_sum(ops::square(diff)));
  const Tensor ref = Tensor::from(m, 1, pairs.reference);
  return ops::mean(ops::square(ops::sub(dist, ref)));
}

DockingLossReport docking_loss(const Tensor &coord, const Tensor &dist,
                               const Tensor &las, double beta, double w_las) {
  DockingLossReport r{ coord, dist, las, {} };
  r.total = ops::add(ops::add(coord, ops::scale(dist, beta)),
                     ops::scale(las, w_las));
  return r;
}

}  // namespace fabind
