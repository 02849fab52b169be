//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fabind/checks.h"
#include "fabind/docking_module.h"
#include "fabind/encoders.h"
#include "fabind/model.h"
#include "fabind/ops.h"

using namespace fabind;

namespace {

std::vector<double> vec(const Tensor &t) {
  return { t.values().begin(), t.values().end() };
}

Tensor random_tensor(Rng &rng, int r, int c, double s = 1.0) {
  std::vector<double> v(static_cast<std::size_t>(r) * c);
  for (auto &x: v)
    x = rng.uniform(-s, s);
  return Tensor::from(r, c, v);
}

struct Docked {
  ComplexRecord cx;
  std::vector<Vec3> init;
};

Docked toy(Rng &rng, int atoms = 4, int residues = 8) {
  Docked d{ checks::make_toy_complex(rng, atoms, residues), {} };
  d.init = translate_to(d.cx.ligand.coords, centroid(d.cx.protein.coords));
  return d;
}

}  // namespace

TEST(DistanceDirect, ThreeFourFiveTriangle) {
  const Tensor d = distance_direct(Tensor::from(1, 3, { 0, 0, 0 }), Tensor::from(2, 3, { 3, 4, 0, 0, 0, 0 }));
  EXPECT_EQ(d.rows(), 1);
  EXPECT_EQ(d.cols(), 2);
  EXPECT_DOUBLE_EQ(d(0, 0), 5.0);
  EXPECT_EQ(d(0, 1), 0.0);
}

TEST(DistanceDirect, MatchesBruteForce) {
  Rng rng(1);
  const Tensor a = random_tensor(rng, 4, 3, 5), b = random_tensor(rng, 5, 3, 5);
  const Tensor d = distance_direct(a, b);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j)
      EXPECT_NEAR(d(i, j), std::hypot(a(i, 0) - b(j, 0), a(i, 1) - b(j, 1), a(i, 2) - b(j, 2)), 1e-14);
}

TEST(DistanceFromPair, ZeroWeightHeadGivesSoftplusBias) {
  Rng rng(2);
  Model model(checks::toy_model_config());
  nn::Mlp head = model.docking().distance_head;
  for (auto &layer: head.layers)
    nn::fill_zero(layer.weight);
  head.layers.back().bias.mutable_values()[0] = 0.3;
  const Tensor d = distance_from_pair(head, random_tensor(rng, 12, 4), 3, 4);
  EXPECT_EQ(d.rows(), 3);
  EXPECT_EQ(d.cols(), 4);
  for (double v: d.values())
    EXPECT_NEAR(v, std::log1p(std::exp(0.3)), 1e-15);
}

TEST(DistMapLoss, Examples) {
  const auto s = [](double v) { return Tensor::from(1, 1, { v }); };
  EXPECT_DOUBLE_EQ(dist_map_loss(s(1), s(2), s(3), 1.0).item(), 6.0);
  EXPECT_DOUBLE_EQ(dist_map_loss(s(1), s(2), s(3), 0.0).item(), 5.0);
  EXPECT_EQ(dist_map_loss(s(2), s(2), s(2), 1.0).item(), 0.0);
  EXPECT_THROW(dist_map_loss(Tensor::zeros(2, 2), Tensor::zeros(2, 3), Tensor::zeros(2, 2), 1),
               std::invalid_argument);
}

TEST(DistMapLoss, MatchesFormulaOnRandomMaps) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = rng.uniform_int(1, 5), c = rng.uniform_int(1, 7);
    const double gamma = rng.uniform(0, 2);
    const Tensor d = random_tensor(rng, r, c, 3), a = random_tensor(rng, r, c, 3),
                 b = random_tensor(rng, r, c, 3);
    double s = 0;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        s += std::pow(d(i, j) - a(i, j), 2) + std::pow(d(i, j) - b(i, j), 2)
             + gamma * std::pow(a(i, j) - b(i, j), 2);
    EXPECT_NEAR(dist_map_loss(d, a, b, gamma).item(), s / (r * c), 1e-12);
  }
}

TEST(CoordLoss, HuberExamples) {
  const Tensor t = Tensor::from(1, 2, { 1.0, -2.0 });
  EXPECT_EQ(coord_loss(t, t).item(), 0.0);
  EXPECT_NEAR(coord_loss(Tensor::from(1, 2, { 1.5, -2.0 }), t).item(), 0.125 / 2, 1e-15);
}

TEST(LasConstraint, RigidMotionOfConformerIsZero) {
  Rng rng(4);
  const auto cx = checks::make_toy_complex(rng, 6, 8);
  const auto pairs = las_pairs(cx.ligand, cx.ligand.coords, 5.0);
  const RigidMotion m = random_rigid_motion(rng, true);
  const Tensor moved = coords_tensor(m.apply(cx.ligand.coords), 5.0);
  EXPECT_LT(las_constraint(moved, pairs).item(), 1e-24);
}

TEST(LasConstraint, StretchedChainMatchesHandComputedGaps) {
  std::vector<AtomDescriptor> atoms(3);
  for (auto &a: atoms)
    a.element = "C";
  const auto lig = LigandGraph::build(atoms, { { 0, 0, 0 }, { 1.5, 0, 0 }, { 3.0, 0, 0 } },
                                      { { 0, 1 }, { 1, 2 } });
  const auto pairs = las_pairs(lig, lig.coords, 1.0);
  ASSERT_EQ(pairs.a.size(), 3u);
  const std::vector<Vec3> far = { { 0, 0, 0 }, { 3.0, 0, 0 }, { 6.0, 0, 0 } };
  const Tensor stretched = coords_tensor(far, 1.0);
  EXPECT_NEAR(las_constraint(stretched, pairs).item(), (1.5 * 1.5 + 1.5 * 1.5 + 3.0 * 3.0) / 3, 1e-12);
}

TEST(LasConstraint, EmptyPairSetIsZero) {
  EXPECT_EQ(las_constraint(Tensor::zeros(1, 3), LasPairs{}).item(), 0.0);
}

TEST(DockingLoss, Composition) {
  const auto s = [](double v) { return Tensor::scalar(v); };
  EXPECT_DOUBLE_EQ(docking_loss(s(1), s(2), s(0.5), 1.0, 1.0).total.item(), 3.5);
  EXPECT_EQ(docking_loss(s(0.7), s(0), s(0), 1.0, 1.0).total.item(), 0.7);
  EXPECT_EQ(docking_loss(s(0), s(0), s(0), 1.0, 1.0).total.item(), 0.0);
}

TEST(Dock, SingleIterationEqualsOneStackedPass) {
  Rng rng(5);
  const auto d = toy(rng);
  const Model model(checks::toy_model_config(1));
  const auto &p = model.docking();
  const auto &c = model.config().docking;
  const DockingResult r = dock(p, c, d.cx.ligand, d.init, d.cx.protein, 1);

  const Embeddings emb = encode(p.encoders, d.cx.ligand, d.cx.protein.types);
  const Topology topo = make_topology(d.cx.ligand, d.cx.protein.edges);
  LayerState s = assemble_state(emb, c.layer, coords_tensor(d.init, c.layer.coord_scale),
                                coords_tensor(d.cx.protein.coords, c.layer.coord_scale));
  for (const auto &layer: p.layers)
    s = fabind_layer_forward(layer, c.layer, s, topo);
  s = final_independent_pass(p.final_ligand, p.final_protein, c.layer, s, topo);
  EXPECT_EQ(vec(r.ligand_x), vec(ops::slice_rows(s.ligand_x, 0, d.cx.ligand.size())));
  EXPECT_EQ(vec(r.pair), vec(s.pair));
}

TEST(Dock, DeterministicAcrossRuns) {
  Rng rng(6);
  const auto d = toy(rng, 5, 10);
  const Model model(checks::toy_model_config());
  const auto a = dock(model.docking(), model.config().docking, d.cx.ligand, d.init, d.cx.protein, 8);
  const auto b = dock(model.docking(), model.config().docking, d.cx.ligand, d.init, d.cx.protein, 8);
  EXPECT_EQ(vec(a.ligand_x), vec(b.ligand_x));
  EXPECT_EQ(vec(a.d_pair), vec(b.d_pair));
}

TEST(Dock, DistanceMapsShapedAndConsistent) {
  Rng rng(7);
  const auto d = toy(rng, 5, 9);
  const Model model(checks::toy_model_config());
  const auto r = dock(model.docking(), model.config().docking, d.cx.ligand, d.init, d.cx.protein, 3);
  EXPECT_EQ(r.d_coord.rows(), 5);
  EXPECT_EQ(r.d_coord.cols(), 9);
  EXPECT_EQ(r.d_pair.rows(), 5);
  EXPECT_EQ(r.d_pair.cols(), 9);
  for (double v: r.d_pair.values())
    EXPECT_GE(v, 0.0);
  const Tensor again = distance_direct(r.ligand_x, r.protein_x);
  EXPECT_EQ(vec(again), vec(r.d_coord));
  const RigidMotion m = random_rigid_motion(rng, true);
  const Tensor moved = distance_direct(
      coords_tensor(m.apply(tensor_coords(r.ligand_x, 1.0)), 1.0),
      coords_tensor(m.apply(tensor_coords(r.protein_x, 1.0)), 1.0));
  for (std::size_t k = 0; k < moved.size(); ++k)
    EXPECT_NEAR(moved.values()[k], r.d_coord.values()[k], 1e-9);
}

TEST(Dock, OnlyFinalIterationCarriesGradient) {
  Rng rng(8);
  const auto d = toy(rng);
  Model model(checks::toy_model_config());
  const auto r = dock(model.docking(), model.config().docking, d.cx.ligand, d.init, d.cx.protein, 4);
  EXPECT_TRUE(r.ligand_x.requires_grad());
  ops::sum(r.ligand_x).backward();
  double norm = 0;
  for (double g: model.docking().layers[0].ligand_mp.node.layers[0].weight.grad())
    norm += g * g;
  EXPECT_GT(norm, 0.0);
}

TEST(Dock, NonFiniteCoordinatesNameTheIteration) {
  Rng rng(9);
  const auto d = toy(rng);
  Model model(checks::toy_model_config());
  Tensor w = model.docking().layers[0].ligand_mp.edge.layers[0].weight;
  w.mutable_values()[0] = std::numeric_limits<double>::quiet_NaN();
  try {
    dock(model.docking(), model.config().docking, d.cx.ligand, d.init, d.cx.protein, 3);
    FAIL() << "expected a numerical error";
  } catch (const NumericalError &e) {
    EXPECT_NE(std::string(e.what()).find("refinement iteration 1 of 3"), std::string::npos) << e.what();
  }
}

TEST(Dock, RejectsBadArguments) {
  Rng rng(10);
  const auto d = toy(rng);
  const Model model(checks::toy_model_config());
  EXPECT_THROW(dock(model.docking(), model.config().docking, d.cx.ligand, d.init, d.cx.protein, 0),
               std::invalid_argument);
  std::vector<Vec3> short_init(d.init.begin(), d.init.end() - 1);
  EXPECT_THROW(dock(model.docking(), model.config().docking, d.cx.ligand, short_init, d.cx.protein, 1),
               std::invalid_argument);
}
