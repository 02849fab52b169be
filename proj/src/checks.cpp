//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/checks.h"

#include <algorithm>
#include <cmath>

#include "fabind/gradcheck.h"
#include "fabind/ops.h"
#include "fabind/training.h"

namespace fabind::checks {

namespace {

Vec3 random_unit(Rng &rng) {
  for (;;) {
    Vec3 v(rng.normal(), rng.normal(), rng.normal());
    if (v.norm() > 1e-6)
      return v.normalized();
  }
}

double max_abs_diff(const Tensor &a, const Tensor &b) {
  double m = 0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

// Maximum |M x - x'| over rows, with M acting in model units.
double coord_deviation(const Tensor &x, const Tensor &x_moved,
                       const RigidMotion &m, double scale) {
  double dev = 0;
  for (int i = 0; i < x.rows(); ++i) {
    const Vec3 a(x(i, 0), x(i, 1), x(i, 2));
    const Vec3 b(x_moved(i, 0), x_moved(i, 1), x_moved(i, 2));
    dev = std::max(dev, (m.rotation * a + m.translation / scale - b).cwiseAbs().maxCoeff());
  }
  return dev;
}

std::vector<Vec3> moved(const std::vector<Vec3> &xs, const RigidMotion &m) {
  std::vector<Vec3> out;
  for (const auto &x: xs)
    out.push_back(m.apply(x));
  return out;
}

RigidMotion trial_motion(Rng &rng, int trial) {
  RigidMotion m = random_rigid_motion(rng, false);
  if (trial % 2 == 1)
    m.rotation.col(0) *= -1.0;
  return m;
}

}  // namespace

ComplexRecord make_toy_complex(Rng &rng, int atoms, int residues) {
  std::vector<AtomDescriptor> desc;
  std::vector<Vec3> truth;
  std::vector<IndexPair> bonds;
  const char *elements[] = { "C", "N", "O" };
  for (int i = 0; i < atoms; ++i) {
    AtomDescriptor a;
    a.element = elements[rng.uniform_int(0, 2)];
    a.degree = (i > 0) + (i + 1 < atoms);
    a.h_count = rng.uniform_int(0, 2);
    a.valence = a.degree + a.h_count;
    desc.push_back(a);
    truth.push_back(i == 0 ? Vec3::Zero() : Vec3(truth.back() + 1.5 * random_unit(rng)));
    if (i > 0)
      bonds.emplace_back(i - 1, i);
  }
  std::vector<Vec3> res;
  std::vector<int> types;
  for (int j = 0; j < residues; ++j) {
    const Vec3 anchor = truth[rng.uniform_int(0, atoms - 1)];
    res.push_back(anchor + rng.uniform(3.5, 9.0) * random_unit(rng));
    types.push_back(rng.uniform_int(0, kNumResidueTypes - 1));
  }
  const RigidMotion conf_motion = random_rigid_motion(rng, false, 3.0);
  std::vector<Vec3> conformer;
  for (const auto &x: truth)
    conformer.push_back(conf_motion.apply(
        Vec3(x + 0.2 * Vec3(rng.normal(), rng.normal(), rng.normal()))));

  ComplexRecord r;
  r.name = "toy";
  r.ligand = LigandGraph::build(desc, conformer, bonds);
  r.protein = ProteinGraph::build(types, res);
  r.truth = truth;
  const Vec3 c = centroid(truth);
  for (const auto &x: res)
    r.pocket_labels.push_back((x - c).norm() <= 6.0 ? 1 : 0);
  return r;
}

ModelConfig toy_model_config(int iterations) {
  ModelConfig c;
  for (LayerConfig *l: { &c.pocket.layer, &c.docking.layer }) {
    l->hidden = 8;
    l->pair_dim = 4;
    l->heads = 2;
    l->opm_dim = 3;
  }
  c.pocket.layers = 1;
  c.docking.layers = 2;
  c.docking.iterations = iterations;
  c.init_seed = 7;
  return c;
}

std::vector<CheckLine> gradient_suite(std::uint64_t seed, bool inject_fault) {
  std::vector<CheckLine> out;
  Rng rng(seed);
  auto cases = gradcheck::primitive_cases(rng);
  if (inject_fault)
    cases.push_back(gradcheck::broken_case(rng));
  for (const auto &c: cases) {
    const double err = gradcheck::max_relative_error(c.loss, c.inputs);
    out.push_back({ "primitive " + c.name, err, 1e-6, err < 1e-6 });
  }

  // End to end on a 4-atom / 8-residue toy with a single refinement round, so
  // the detached rounds do not hide parameter paths from the probes.
  const ComplexRecord toy = make_toy_complex(rng, 4, 8);
  Model model(toy_model_config(1));
  TrainConfig tc;
  tc.sample_iterations = false;
  const std::uint64_t loss_seed = rng.next_u64();
  auto loss = [&]() {
    Rng r(loss_seed);
    return complex_loss(model, toy, 1, tc, r).total;
  };
  std::vector<Tensor> params;
  for (const auto &[name, t]: model.store().entries())
    params.push_back(t);
  gradcheck::Options opts;
  opts.max_probes_per_input = 6;
  opts.probe_seed = seed;
  opts.global_scale = true;
  const double err = gradcheck::max_relative_error(loss, params, opts);
  out.push_back({ "end-to-end L_pocket + L_docking", err, 1e-4, err < 1e-4 });
  return out;
}

std::vector<CheckLine> equivariance_suite(std::uint64_t seed, int trials) {
  Rng rng(seed);
  double dev_ind = 0, dev_cross = 0, dev_inter = 0, dev_layer = 0, dev_dock = 0;
  const ModelConfig mc = toy_model_config(8);
  const LayerConfig &lc = mc.docking.layer;
  const Model model(mc);
  nn::ParamStore store;
  Rng init(seed ^ 0x5eedULL);
  const FabindLayerParams layer = make_fabind_layer(store, "probe", lc, init);
  const EncoderParams enc = make_encoders(store, "probe.enc", lc, init);

  for (int t = 0; t < trials; ++t) {
    const ComplexRecord cx = make_toy_complex(rng, rng.uniform_int(2, 10),
                                              rng.uniform_int(3, 15));
    const RigidMotion m = trial_motion(rng, t);
    const double s = lc.coord_scale;
    const auto lig_a = cx.truth;
    const auto lig_b = moved(cx.truth, m);
    const auto prot_b = moved(cx.protein.coords, m);

    const Embeddings e = encode(enc, cx.ligand, cx.protein.types);
    const LayerState sa = assemble_state(e, lc, coords_tensor(lig_a, s),
                                         coords_tensor(cx.protein.coords, s));
    const LayerState sb = assemble_state(e, lc, coords_tensor(lig_b, s),
                                         coords_tensor(prot_b, s));
    const Topology topo = make_topology(cx.ligand, cx.protein.edges);

    // Independent message passing on the ligand.
    const DirectedEdges de = both_directions(topo.ligand_edges);
    const NodeUpdate ua = independent_mp(layer.ligand_mp, sa.ligand_h, sa.ligand_x,
                                         de, lc.coord_clamp);
    const NodeUpdate ub = independent_mp(layer.ligand_mp, sb.ligand_h, sb.ligand_x,
                                         de, lc.coord_clamp);
    dev_ind = std::max({ dev_ind, coord_deviation(ua.x, ub.x, m, s),
                         max_abs_diff(ua.h, ub.h) });

    // Cross attention consumes the invariant outputs of the previous block.
    const int nl = sa.n_ligand, np = sa.n_protein;
    const NodeUpdate pa = independent_mp(layer.protein_mp, sa.protein_h,
                                         sa.protein_x, both_directions(topo.protein_edges),
                                         lc.coord_clamp);
    const NodeUpdate pb = independent_mp(layer.protein_mp, sb.protein_h,
                                         sb.protein_x, both_directions(topo.protein_edges),
                                         lc.coord_clamp);
    const auto ca = cross_attention_update(layer.cross, lc, ops::slice_rows(ua.h, 0, nl),
                                           ops::slice_rows(pa.h, 0, np), sa.pair);
    const auto cb = cross_attention_update(layer.cross, lc, ops::slice_rows(ub.h, 0, nl),
                                           ops::slice_rows(pb.h, 0, np), sb.pair);
    dev_cross = std::max({ dev_cross, max_abs_diff(ca.ligand_h, cb.ligand_h),
                           max_abs_diff(ca.protein_h, cb.protein_h),
                           max_abs_diff(ca.pair, cb.pair) });

    // Interfacial message passing.
    const auto edges_a = interfacial_edges(ua.x, pa.x, nl, np, lc.interfacial_cutoff_model());
    const auto ia = interfacial_mp(layer.interfacial, lc, ca.ligand_h,
                                   ops::slice_rows(ua.x, 0, nl), ca.protein_h,
                                   ops::slice_rows(pa.x, 0, np), ca.pair, edges_a);
    const auto ib = interfacial_mp(layer.interfacial, lc, cb.ligand_h,
                                   ops::slice_rows(ub.x, 0, nl), cb.protein_h,
                                   ops::slice_rows(pb.x, 0, np), cb.pair, edges_a);
    dev_inter = std::max({ dev_inter, coord_deviation(ia.ligand_x, ib.ligand_x, m, s),
                           coord_deviation(ia.protein_x, ib.protein_x, m, s),
                           max_abs_diff(ia.ligand_h, ib.ligand_h),
                           max_abs_diff(ia.protein_h, ib.protein_h) });

    // Composed layer.
    const LayerState la = fabind_layer_forward(layer, lc, sa, topo);
    const LayerState lb = fabind_layer_forward(layer, lc, sb, topo);
    dev_layer = std::max({ dev_layer, coord_deviation(la.ligand_x, lb.ligand_x, m, s),
                           coord_deviation(la.protein_x, lb.protein_x, m, s),
                           max_abs_diff(la.ligand_h, lb.ligand_h),
                           max_abs_diff(la.protein_h, lb.protein_h),
                           max_abs_diff(la.pair, lb.pair) });

    // Full docking with eight refinement rounds from a conformer at the
    // pocket center.
    const PocketSubgraph pocket = extract_pocket(cx.protein, centroid(cx.protein.coords));
    const auto init_a = translate_to(cx.ligand.coords, pocket.center);
    const auto init_b = moved(init_a, m);
    ProteinGraph pocket_b = pocket.graph;
    pocket_b.coords = moved(pocket.graph.coords, m);
    ad::NoGradGuard ng;
    const DockingResult da = dock(model.docking(), mc.docking, cx.ligand, init_a,
                                  pocket.graph, mc.docking.iterations);
    const DockingResult db = dock(model.docking(), mc.docking, cx.ligand, init_b,
                                  pocket_b, mc.docking.iterations);
    dev_dock = std::max({ dev_dock, coord_deviation(da.ligand_x, db.ligand_x, m, s),
                          max_abs_diff(da.ligand_h, db.ligand_h),
                          max_abs_diff(da.d_coord, db.d_coord),
                          max_abs_diff(da.d_pair, db.d_pair) });
  }
  return {
    { "independent message passing", dev_ind, 1e-8, dev_ind < 1e-8 },
    { "cross attention", dev_cross, 1e-8, dev_cross < 1e-8 },
    { "interfacial message passing", dev_inter, 1e-8, dev_inter < 1e-8 },
    { "composed layer", dev_layer, 1e-8, dev_layer < 1e-8 },
    { "full dock k=8", dev_dock, 1e-6, dev_dock < 1e-6 },
  };
}

}  // namespace fabind::checks
