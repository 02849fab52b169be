//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/fabind_layer.h"

#include <cmath>
#include <stdexcept>

#include "fabind/ops.h"

namespace fabind {

using nn::Activation;
using nn::make_linear;
using nn::make_mlp;

void LayerConfig::validate() const {
  if (hidden <= 0 || pair_dim <= 0 || heads <= 0 || opm_dim <= 0)
    throw std::invalid_argument("layer dimensions must be positive");
  if (hidden % heads != 0)
    throw std::invalid_argument("hidden dim " + std::to_string(hidden)
                                + " not divisible by " + std::to_string(heads)
                                + " heads");
  if (!(internal_cutoff > 0 && interfacial_cutoff > 0 && coord_scale > 0))
    throw std::invalid_argument("cutoffs and coordinate scale must be positive");
}

EgclParams make_egcl(nn::ParamStore &store, const std::string &name,
                     const LayerConfig &config, bool moves_coords, Rng &rng) {
  const int d = config.hidden;
  EgclParams p;
  p.edge = make_mlp(store, name + ".phi_e", { 2 * d + 1, d, d },
                    Activation::kRelu, rng);
  p.node = make_mlp(store, name + ".phi_h", { 2 * d, d, d }, Activation::kRelu,
                    rng);
  p.moves_coords = moves_coords;
  if (moves_coords)
    p.coord = make_mlp(store, name + ".phi_x", { d, d, 1 },
                       Activation::kSoftplus, rng);
  return p;
}

OpmParams make_opm(nn::ParamStore &store, const std::string &name,
                   const LayerConfig &config, Rng &rng) {
  const int o = config.opm_dim;
  OpmParams p;
  p.left = make_linear(store, name + ".left", config.hidden, o, false, rng);
  p.right = make_linear(store, name + ".right", config.hidden, o, false, rng);
  p.weight = store.create(name + ".out.weight", o * o, config.pair_dim, o * o,
                          rng);
  p.bias = store.create(name + ".out.bias", 1, config.pair_dim, o * o, rng);
  return p;
}

Tensor opm(const OpmParams &p, const Tensor &ligand_h, const Tensor &protein_h) {
  return ops::outer_product_linear(p.left(ligand_h), p.right(protein_h),
                                   p.weight, p.bias);
}

namespace {

InterfacialSideParams make_interfacial_side(nn::ParamStore &store,
                                            const std::string &name,
                                            const LayerConfig &config,
                                            bool moves_coords, Rng &rng) {
  const int d = config.hidden;
  InterfacialSideParams p;
  p.q = make_mlp(store, name + ".phi_q", { d, d, d }, Activation::kRelu, rng);
  p.k = make_mlp(store, name + ".phi_k", { d + 1, d, d }, Activation::kRelu, rng);
  p.v = make_mlp(store, name + ".phi_v", { d + 1, d, d }, Activation::kRelu, rng);
  p.b = make_mlp(store, name + ".phi_b", { config.pair_dim, config.pair_dim, 1 },
                 Activation::kRelu, rng);
  if (moves_coords)
    p.xv = make_mlp(store, name + ".phi_xv", { d, d, 1 }, Activation::kSoftplus,
                    rng);
  return p;
}

// m([d2, h[idx]]) with the first layer applied per node before the gather.
Tensor neighbour_mlp(const nn::Mlp &m, const Tensor &dist2, const Tensor &h,
                     const std::vector<int> &idx) {
  const nn::Linear &first = m.layers.front();
  const Tensor pre = ops::add(
      ops::gather_rows(ops::matmul(h, ops::slice_rows(first.weight, 1, h.cols())),
                       idx),
      ops::add(ops::matmul(dist2, ops::slice_rows(first.weight, 0, 1)),
               first.bias));
  return m.from_first(pre);
}

Tensor constant_column(std::vector<double> v) {
  const int n = static_cast<int>(v.size());
  return Tensor::from(n, 1, std::move(v));
}

}  // namespace

FabindLayerParams make_fabind_layer(nn::ParamStore &store,
                                    const std::string &name,
                                    const LayerConfig &config, Rng &rng) {
  config.validate();
  const int d = config.hidden;
  FabindLayerParams p;
  p.ligand_mp = make_egcl(store, name + ".ligand_mp", config, true, rng);
  p.protein_mp = make_egcl(store, name + ".protein_mp", config,
                           config.update_protein_coords, rng);

  auto &c = p.cross;
  c.ligand_q = make_linear(store, name + ".cross.ligand_q", d, d, false, rng);
  c.ligand_k = make_linear(store, name + ".cross.ligand_k", d, d, false, rng);
  c.ligand_v = make_linear(store, name + ".cross.ligand_v", d, d, false, rng);
  c.protein_q = make_linear(store, name + ".cross.protein_q", d, d, false, rng);
  c.protein_k = make_linear(store, name + ".cross.protein_k", d, d, false, rng);
  c.protein_v = make_linear(store, name + ".cross.protein_v", d, d, false, rng);
  c.ligand_bias = make_linear(store, name + ".cross.ligand_bias",
                              config.pair_dim, config.heads, true, rng);
  c.protein_bias = make_linear(store, name + ".cross.protein_bias",
                               config.pair_dim, config.heads, true, rng);
  c.ligand_out = make_linear(store, name + ".cross.ligand_out", d, d, true, rng);
  c.protein_out = make_linear(store, name + ".cross.protein_out", d, d, true,
                              rng);
  c.pair_update = make_opm(store, name + ".cross.opm", config, rng);

  p.interfacial.ligand = make_interfacial_side(
      store, name + ".interfacial.ligand", config, true, rng);
  p.interfacial.protein = make_interfacial_side(
      store, name + ".interfacial.protein", config,
      config.update_protein_coords, rng);
  return p;
}

DirectedEdges both_directions(const std::vector<kernels::IndexPair> &edges) {
  DirectedEdges out;
  out.src.reserve(2 * edges.size());
  out.dst.reserve(2 * edges.size());
  for (auto [i, j]: edges) {
    out.src.push_back(j);
    out.dst.push_back(i);
    out.src.push_back(i);
    out.dst.push_back(j);
  }
  return out;
}

NodeUpdate independent_mp(const EgclParams &p, const Tensor &h, const Tensor &x,
                          const DirectedEdges &edges, double coord_clamp) {
  const int n = h.rows();
  const int d = h.cols();
  const Tensor diff = ops::sub(ops::gather_rows(x, edges.dst),
                               ops::gather_rows(x, edges.src));
  const Tensor dist2 = ops::row_sum(ops::square(diff));
  // First edge layer on [h_dst, h_src, d2], projected per node then gathered.
  const nn::Linear &first = p.edge.layers.front();
  const Tensor pre = ops::add(
      ops::add(ops::gather_rows(ops::matmul(h, ops::slice_rows(first.weight, 0, d)),
                                edges.dst),
               ops::gather_rows(ops::matmul(h, ops::slice_rows(first.weight, d, d)),
                                edges.src)),
      ops::add(ops::matmul(dist2, ops::slice_rows(first.weight, 2 * d, 1)),
               first.bias));
  const Tensor msg = p.edge.from_first(pre);
  const Tensor agg = ops::scatter_add_rows(msg, edges.dst, n);

  NodeUpdate out;
  out.h = ops::add(h, p.node(ops::concat_cols({ h, agg })));
  if (!p.moves_coords || edges.dst.empty()) {
    out.x = x;
    return out;
  }

  std::vector<double> inv_degree(n, 0.0);
  for (int i: edges.dst)
    inv_degree[i] += 1.0;
  for (double &v: inv_degree)
    v = v > 0 ? 1.0 / v : 0.0;
  const Tensor scalar = ops::clamp(p.coord(msg), -coord_clamp, coord_clamp);
  const Tensor shift = ops::scatter_add_rows(ops::mul(diff, scalar), edges.dst, n);
  out.x = ops::add(x, ops::mul(shift, constant_column(std::move(inv_degree))));
  return out;
}

CrossAttentionResult cross_attention_update(const CrossAttentionParams &p,
                                            const LayerConfig &config,
                                            const Tensor &ligand_h,
                                            const Tensor &protein_h,
                                            const Tensor &pair) {
  const int nl = ligand_h.rows();
  const int np = protein_h.rows();
  const int c = config.head_dim();
  const double inv_sqrt_c = 1.0 / std::sqrt(static_cast<double>(c));
  if (pair.rows() != nl * np)
    throw std::invalid_argument("pair grid does not match node counts");

  CrossAttentionResult out;
  const Tensor ligand_bias = p.ligand_bias(pair);
  const Tensor protein_bias = p.protein_bias(pair);

  // Ligand atoms attend over all residues.
  {
    const Tensor q = p.ligand_q(ligand_h);
    const Tensor k = p.protein_k(protein_h);
    const Tensor v = p.protein_v(protein_h);
    std::vector<Tensor> heads;
    for (int h = 0; h < config.heads; ++h) {
      const Tensor logits = ops::add(
          ops::scale(ops::matmul_nt(ops::slice_cols(q, h * c, c),
                                    ops::slice_cols(k, h * c, c)),
                     inv_sqrt_c),
          ops::reshape(ops::slice_cols(ligand_bias, h, 1), nl, np));
      const Tensor a = ops::softmax_rows(logits);
      out.ligand_attention.push_back(a);
      heads.push_back(ops::matmul(a, ops::slice_cols(v, h * c, c)));
    }
    out.ligand_h = ops::add(ligand_h, p.ligand_out(ops::concat_cols(heads)));
  }
  // Residues attend over all ligand atoms.
  {
    const Tensor q = p.protein_q(protein_h);
    const Tensor k = p.ligand_k(ligand_h);
    const Tensor v = p.ligand_v(ligand_h);
    std::vector<Tensor> heads;
    for (int h = 0; h < config.heads; ++h) {
      const Tensor logits = ops::add(
          ops::scale(ops::matmul_nt(ops::slice_cols(q, h * c, c),
                                    ops::slice_cols(k, h * c, c)),
                     inv_sqrt_c),
          ops::transpose(
              ops::reshape(ops::slice_cols(protein_bias, h, 1), nl, np)));
      const Tensor a = ops::softmax_rows(logits);
      out.protein_attention.push_back(a);
      heads.push_back(ops::matmul(a, ops::slice_cols(v, h * c, c)));
    }
    out.protein_h = ops::add(protein_h, p.protein_out(ops::concat_cols(heads)));
  }
  out.pair = ops::add(pair, opm(p.pair_update, out.ligand_h, out.protein_h));
  return out;
}

InterfacialResult interfacial_mp(const InterfacialParams &p,
                                 const LayerConfig &config,
                                 const Tensor &ligand_h, const Tensor &ligand_x,
                                 const Tensor &protein_h,
                                 const Tensor &protein_x, const Tensor &pair,
                                 const std::vector<kernels::IndexPair> &edges) {
  const int nl = ligand_h.rows();
  const int np = protein_h.rows();
  InterfacialResult out;
  if (edges.empty()) {
    out.ligand_h = ligand_h;
    out.ligand_x = ligand_x;
    out.protein_h = protein_h;
    out.protein_x = protein_x;
    out.ligand_alpha = Tensor::zeros(0, 1);
    out.protein_alpha = Tensor::zeros(0, 1);
    return out;
  }

  std::vector<int> atom, residue, pair_row;
  for (auto [i, j]: edges) {
    atom.push_back(i);
    residue.push_back(j);
    pair_row.push_back(i * np + j);
  }
  const Tensor diff = ops::sub(ops::gather_rows(ligand_x, atom),
                               ops::gather_rows(protein_x, residue));
  const Tensor dist2 = ops::row_sum(ops::square(diff));
  const Tensor z = ops::gather_rows(pair, pair_row);
  const double clamp = config.coord_clamp;

  // Ligand side: atom i aggregates over its residue neighbours j.
  {
    const auto &s = p.ligand;
    const Tensor k = neighbour_mlp(s.k, dist2, protein_h, residue);
    const Tensor v = neighbour_mlp(s.v, dist2, protein_h, residue);
    const Tensor logits = ops::add(
        ops::row_sum(ops::mul(ops::gather_rows(s.q(ligand_h), atom), k)), s.b(z));
    const Tensor alpha = ops::segment_softmax(logits, atom, nl);
    out.ligand_alpha = alpha;
    out.ligand_h = ops::add(ligand_h, ops::scatter_add_rows(ops::mul(v, alpha), atom, nl));
    const Tensor scalar = ops::clamp(s.xv(v), -clamp, clamp);
    out.ligand_x = ops::add(
        ligand_x,
        ops::scatter_add_rows(ops::mul(diff, ops::mul(alpha, scalar)), atom, nl));
  }
  // Protein side: residue j aggregates over its atom neighbours i.
  {
    const auto &s = p.protein;
    const Tensor k = neighbour_mlp(s.k, dist2, ligand_h, atom);
    const Tensor v = neighbour_mlp(s.v, dist2, ligand_h, atom);
    const Tensor logits = ops::add(
        ops::row_sum(ops::mul(ops::gather_rows(s.q(protein_h), residue), k)),
        s.b(z));
    const Tensor alpha = ops::segment_softmax(logits, residue, np);
    out.protein_alpha = alpha;
    out.protein_h = ops::add(protein_h,
                             ops::scatter_add_rows(ops::mul(v, alpha), residue, np));
    if (config.update_protein_coords) {
      const Tensor scalar = ops::clamp(s.xv(v), -clamp, clamp);
      out.protein_x = ops::sub(
          protein_x, ops::scatter_add_rows(ops::mul(diff, ops::mul(alpha, scalar)),
                                           residue, np));
    } else {
      out.protein_x = protein_x;
    }
  }
  return out;
}

std::vector<kernels::IndexPair> interfacial_edges(const Tensor &ligand_x,
                                                  const Tensor &protein_x,
                                                  int n_ligand, int n_protein,
                                                  double cutoff) {
  std::vector<Vec3> a(n_ligand), b(n_protein);
  for (int i = 0; i < n_ligand; ++i)
    a[i] = Vec3(ligand_x(i, 0), ligand_x(i, 1), ligand_x(i, 2));
  for (int j = 0; j < n_protein; ++j)
    b[j] = Vec3(protein_x(j, 0), protein_x(j, 1), protein_x(j, 2));
  return kernels::radius_pairs(a, b, cutoff, kernels::EdgeMode::kInterfacial);
}

namespace {

// Edge list of one component with its global node at index n and the other
// component's global node appended read-only at index n + 1.
DirectedEdges component_edges(const std::vector<kernels::IndexPair> &edges,
                              int n, bool global) {
  if (!global)
    return both_directions(edges);
  std::vector<kernels::IndexPair> all = edges;
  for (int i = 0; i < n; ++i)
    all.emplace_back(i, n);
  DirectedEdges out = both_directions(all);
  out.src.push_back(n + 1);
  out.dst.push_back(n);
  return out;
}

struct IndependentOut {
  Tensor ligand_h, ligand_x, protein_h, protein_x;
};

IndependentOut independent_both(const EgclParams &lp, const EgclParams &pp,
                                const LayerConfig &config, const LayerState &s,
                                const Topology &topo) {
  const int nl = s.n_ligand, np = s.n_protein;
  IndependentOut out;
  if (!s.has_global) {
    auto l = independent_mp(lp, s.ligand_h, s.ligand_x,
                            component_edges(topo.ligand_edges, nl, false),
                            config.coord_clamp);
    auto p = independent_mp(pp, s.protein_h, s.protein_x,
                            component_edges(topo.protein_edges, np, false),
                            config.coord_clamp);
    return { l.h, l.x, p.h, p.x };
  }
  const Tensor lh = ops::concat_rows({ s.ligand_h, ops::slice_rows(s.protein_h, np, 1) });
  const Tensor lx = ops::concat_rows({ s.ligand_x, ops::slice_rows(s.protein_x, np, 1) });
  const Tensor ph = ops::concat_rows({ s.protein_h, ops::slice_rows(s.ligand_h, nl, 1) });
  const Tensor px = ops::concat_rows({ s.protein_x, ops::slice_rows(s.ligand_x, nl, 1) });
  auto l = independent_mp(lp, lh, lx, component_edges(topo.ligand_edges, nl, true),
                          config.coord_clamp);
  auto p = independent_mp(pp, ph, px, component_edges(topo.protein_edges, np, true),
                          config.coord_clamp);
  out.ligand_h = ops::slice_rows(l.h, 0, nl + 1);
  out.ligand_x = ops::slice_rows(l.x, 0, nl + 1);
  out.protein_h = ops::slice_rows(p.h, 0, np + 1);
  out.protein_x = pp.moves_coords ? ops::slice_rows(p.x, 0, np + 1) : s.protein_x;
  return out;
}

Tensor real_rows(const Tensor &t, int n, bool global) {
  return global ? ops::slice_rows(t, 0, n) : t;
}

Tensor with_global(const Tensor &real, const Tensor &full, int n, bool global) {
  return global ? ops::concat_rows({ real, ops::slice_rows(full, n, 1) }) : real;
}

}  // namespace

LayerState fabind_layer_forward(const FabindLayerParams &p,
                                const LayerConfig &config,
                                const LayerState &state,
                                const Topology &topology) {
  const int nl = state.n_ligand, np = state.n_protein;
  const bool g = state.has_global;

  // Interfacial edges come from the coordinates entering the layer.
  const auto edges = interfacial_edges(state.ligand_x, state.protein_x, nl, np,
                                       config.interfacial_cutoff_model());

  const auto ind = independent_both(p.ligand_mp, p.protein_mp, config, state,
                                    topology);
  const auto cross = cross_attention_update(
      p.cross, config, real_rows(ind.ligand_h, nl, g),
      real_rows(ind.protein_h, np, g), state.pair);
  const auto inter = interfacial_mp(
      p.interfacial, config, cross.ligand_h, real_rows(ind.ligand_x, nl, g),
      cross.protein_h, real_rows(ind.protein_x, np, g), cross.pair, edges);

  LayerState out = state;
  out.ligand_h = with_global(inter.ligand_h, ind.ligand_h, nl, g);
  out.ligand_x = with_global(inter.ligand_x, ind.ligand_x, nl, g);
  out.protein_h = with_global(inter.protein_h, ind.protein_h, np, g);
  out.protein_x = with_global(inter.protein_x, ind.protein_x, np, g);
  out.pair = cross.pair;
  return out;
}

LayerState final_independent_pass(const EgclParams &ligand,
                                  const EgclParams &protein,
                                  const LayerConfig &config,
                                  const LayerState &state,
                                  const Topology &topology) {
  const auto ind = independent_both(ligand, protein, config, state, topology);
  LayerState out = state;
  out.ligand_h = ind.ligand_h;
  out.ligand_x = ind.ligand_x;
  out.protein_h = ind.protein_h;
  out.protein_x = ind.protein_x;
  return out;
}

}  // namespace fabind
