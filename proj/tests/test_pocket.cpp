//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fabind/checkpoint.h"
#include "fabind/checks.h"
#include "fabind/losses.h"
#include "fabind/model.h"
#include "fabind/ops.h"
#include "fabind/optimizer.h"
#include "fabind/pocket_module.h"

using namespace fabind;

namespace {

Tensor column(const std::vector<double> &v) {
  return Tensor::from(static_cast<int>(v.size()), 1, v);
}

Tensor coords_of(const std::vector<Vec3> &xs) {
  std::vector<double> v;
  for (const auto &x: xs)
    v.insert(v.end(), { x.x(), x.y(), x.z() });
  return Tensor::from(static_cast<int>(xs.size()), 3, v);
}

std::vector<Vec3> random_points(Rng &rng, int n, double s) {
  std::vector<Vec3> out(n);
  for (auto &x: out)
    x = Vec3(rng.uniform(-s, s), rng.uniform(-s, s), rng.uniform(-s, s));
  return out;
}

}  // namespace

TEST(ClassificationLoss, HalfProbabilitiesGiveLn2) {
  const Tensor p = column(std::vector<double>(7, 0.5));
  const std::vector<int> y = { 1, 0, 1, 1, 0, 0, 1 };
  EXPECT_NEAR(classification_loss(p, y).item(), std::log(2.0), 1e-15);
}

TEST(ClassificationLoss, PerfectProbabilitiesNearZero) {
  const std::vector<int> y = { 1, 0, 1 };
  EXPECT_LT(classification_loss(column({ 1.0, 0.0, 1.0 }), y).item(), 1e-6);
}

TEST(ClassificationLoss, FlippingOneLabelChangesByDirectRecomputation) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(10);
    std::vector<int> y(10);
    for (int j = 0; j < 10; ++j) {
      p[j] = rng.uniform(0.05, 0.95);
      y[j] = rng.uniform() < 0.5;
    }
    const int k = rng.uniform_int(0, 9);
    auto flipped = y;
    flipped[k] = 1 - y[k];
    const double delta = classification_loss(column(p), flipped).item()
                         - classification_loss(column(p), y).item();
    const double pos = -std::log(p[k]), neg = -std::log(1 - p[k]);
    EXPECT_NEAR(delta, (y[k] ? neg - pos : pos - neg) / 10.0, 1e-12);
  }
}

TEST(ClassificationLoss, LabelCountMismatchThrows) {
  const std::vector<int> y = { 1 };
  EXPECT_THROW(classification_loss(column({ 0.2, 0.3 }), y), std::invalid_argument);
}

TEST(GumbelWeights, SumToOneForAnyTemperature) {
  Rng rng(4);
  for (double tau: { 1e-3, 0.1, 1.0, 7.5, 100.0 }) {
    std::vector<double> p(9), g(9);
    for (int j = 0; j < 9; ++j) {
      p[j] = rng.uniform();
      g[j] = losses::sample_gumbel(rng);
    }
    const Tensor w = gumbel_weights(column(p), g, tau);
    double s = 0;
    for (int j = 0; j < 9; ++j)
      s += w(j, 0);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(GumbelWeights, MatchesSoftmaxOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 12);
    const double tau = rng.uniform(0.2, 3.0);
    std::vector<double> p(n), g(n);
    for (int j = 0; j < n; ++j) {
      p[j] = rng.uniform(0.01, 1.0);
      g[j] = losses::sample_gumbel(rng);
    }
    const Tensor w = gumbel_weights(column(p), g, tau);
    double z = 0;
    for (int j = 0; j < n; ++j)
      z += std::pow(p[j], 1 / tau) * std::exp(g[j] / tau);
    for (int j = 0; j < n; ++j)
      EXPECT_NEAR(w(j, 0), std::pow(p[j], 1 / tau) * std::exp(g[j] / tau) / z, 1e-12);
  }
}

TEST(GumbelCenter, LowTemperatureSelectsDominantResidue) {
  Rng rng(6);
  const auto xs = random_points(rng, 5, 10);
  const Tensor c = gumbel_center(column({ 0.1, 0.2, 0.95, 0.1, 0.3 }), coords_of(xs), {}, 0.01);
  for (int a = 0; a < 3; ++a)
    EXPECT_NEAR(c(0, a), xs[2][a], 1e-9);
}

TEST(GumbelCenter, EqualProbabilitiesGiveCentroid) {
  Rng rng(7);
  const auto xs = random_points(rng, 6, 10);
  const Tensor c = gumbel_center(column(std::vector<double>(6, 0.4)), coords_of(xs), {}, 1.0);
  const Vec3 m = centroid(xs);
  for (int a = 0; a < 3; ++a)
    EXPECT_NEAR(c(0, a), m[a], 1e-12);
}

TEST(GumbelCenter, ArgmaxIndependentOfTemperature) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(8), g(8);
    for (int j = 0; j < 8; ++j) {
      p[j] = rng.uniform();
      g[j] = losses::sample_gumbel(rng);
    }
    auto argmax = [&](double tau) {
      const Tensor w = gumbel_weights(column(p), g, tau);
      const auto &v = w.values();
      return std::max_element(v.begin(), v.end()) - v.begin();
    };
    const auto ref = argmax(1.0);
    for (double tau: { 0.05, 0.5, 4.0, 50.0 })
      EXPECT_EQ(argmax(tau), ref);
  }
}

TEST(GumbelCenter, InsideBoundingBoxOfResidues) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto xs = random_points(rng, 7, 20);
    std::vector<double> p(7), g(7);
    for (int j = 0; j < 7; ++j) {
      p[j] = rng.uniform();
      g[j] = losses::sample_gumbel(rng);
    }
    const Tensor c = gumbel_center(column(p), coords_of(xs), g, rng.uniform(0.1, 2));
    for (int a = 0; a < 3; ++a) {
      double lo = 1e9, hi = -1e9;
      for (const auto &x: xs) {
        lo = std::min(lo, x[a]);
        hi = std::max(hi, x[a]);
      }
      EXPECT_GE(c(0, a), lo - 1e-12);
      EXPECT_LE(c(0, a), hi + 1e-12);
    }
  }
}

TEST(CenterConstraint, HalfOffsetGivesHuberMean) {
  const Tensor c = Tensor::from(1, 3, { 1.5, 2.0, -1.0 });
  EXPECT_NEAR(center_constraint_loss(c, Vec3(1.0, 2.0, -1.0)).item(), 0.125 / 3, 1e-15);
  EXPECT_EQ(center_constraint_loss(c, Vec3(1.5, 2.0, -1.0)).item(), 0.0);
}

TEST(PocketLoss, WeightedCombination) {
  const auto r = pocket_loss(Tensor::scalar(1.0), Tensor::scalar(0.5), 0.2);
  EXPECT_NEAR(r.total.item(), 1.1, 1e-15);
  EXPECT_EQ(pocket_loss(Tensor::scalar(0.7), Tensor::scalar(0.0), 0.2).total.item(), 0.7);
}

TEST(HardCenter, AllPositiveIsResidueMean) {
  Rng rng(10);
  const auto xs = random_points(rng, 5, 10);
  const Vec3 c = hard_center(xs, std::vector<int>{ 0, 1, 2, 3, 4 });
  EXPECT_LT((c - centroid(xs)).norm(), 1e-12);
  EXPECT_THROW(hard_center(xs, std::vector<int>{}), std::invalid_argument);
}

TEST(DecidePocket, SingletonAndFallback) {
  Rng rng(11);
  const auto cx = checks::make_toy_complex(rng, 4, 8);
  PocketPrediction pred;
  pred.positive = { 3 };
  pred.hard_center = cx.protein.coords[3];
  pred.decided_center = pred.hard_center;
  auto pocket = decide_pocket(pred, cx.protein);
  EXPECT_LT((pocket.center - cx.protein.coords[3]).norm(), 1e-15);

  const Model model(checks::toy_model_config());
  auto full = predict_pocket(model.pocket(), model.config().pocket, cx.ligand, cx.protein, nullptr);
  if (full.positive.empty())
    EXPECT_EQ(full.decided_center, full.gumbel_center_A);
  else
    EXPECT_EQ(full.decided_center, full.hard_center);
  full.positive.clear();
  full.decided_center = full.gumbel_center_A;
  pocket = decide_pocket(full, cx.protein);
  for (std::size_t k = 0; k < pocket.parent_indices.size(); ++k)
    EXPECT_LE((cx.protein.coords[pocket.parent_indices[k]] - full.gumbel_center_A).norm(), 20.0);
}

TEST(DecidePocket, EmptySphereIsAnError) {
  Rng rng(12);
  const auto cx = checks::make_toy_complex(rng, 4, 8);
  PocketPrediction pred;
  pred.decided_center = Vec3(1e4, 0, 0);
  EXPECT_THROW(decide_pocket(pred, cx.protein), EmptyPocketError);
}

TEST(PredictPocket, RigidMotionMovesCentersAndKeepsProbabilities) {
  Rng rng(13);
  const Model model(checks::toy_model_config());
  for (int trial = 0; trial < 6; ++trial) {
    const auto cx = checks::make_toy_complex(rng, 5, 10);
    const RigidMotion m = random_rigid_motion(rng, trial % 2 == 1);
    const auto moved_ligand = LigandGraph::build(cx.ligand.atoms, m.apply(cx.ligand.coords),
                                                 cx.ligand.bonds);
    const auto moved_protein = ProteinGraph::build(cx.protein.types, m.apply(cx.protein.coords));
    Rng g1(99), g2(99);
    const auto a = predict_pocket(model.pocket(), model.config().pocket, cx.ligand, cx.protein, &g1);
    const auto b = predict_pocket(model.pocket(), model.config().pocket, moved_ligand,
                                  moved_protein, &g2);
    for (int j = 0; j < a.probs.rows(); ++j)
      EXPECT_NEAR(a.probs(j, 0), b.probs(j, 0), 1e-10);
    EXPECT_EQ(a.positive, b.positive);
    EXPECT_LT((m.apply(a.gumbel_center_A) - b.gumbel_center_A).norm(), 1e-9);
    EXPECT_LT((m.apply(a.decided_center) - b.decided_center).norm(), 1e-9);
    if (!a.positive.empty())
      EXPECT_LT((m.apply(a.hard_center) - b.hard_center).norm(), 1e-9);
  }
}

TEST(PredictPocket, ReplayFromCheckpointIsBitExact) {
  Rng rng(14);
  const auto cx = checks::make_toy_complex(rng, 4, 6);
  const Model model(checks::toy_model_config());
  const Model replay = Model::load(checkpoint::decode(checkpoint::encode(model.save(nullptr))));
  Rng g1(5), g2(5);
  const auto a = predict_pocket(model.pocket(), model.config().pocket, cx.ligand, cx.protein, &g1);
  const auto b = predict_pocket(replay.pocket(), replay.config().pocket, cx.ligand, cx.protein, &g2);
  const auto vec = [](const Tensor &t) {
    return std::vector<double>(t.values().begin(), t.values().end());
  };
  EXPECT_EQ(vec(a.probs), vec(b.probs));
  EXPECT_EQ(vec(a.gumbel_weights), vec(b.gumbel_weights));
}

TEST(PredictPocket, ClassifierOverfitsThreeToys) {
  Rng rng(15);
  std::vector<ComplexRecord> toys;
  for (int i = 0; i < 3; ++i)
    toys.push_back(checks::make_toy_complex(rng, 5, 10));
  Model model(checks::toy_model_config());
  AdamWConfig oc;
  oc.lr = 1e-2;
  oc.weight_decay = 0;
  AdamW opt(model.store(), oc);
  const auto &pc = model.config().pocket;
  double worst = 0;
  for (int step = 0; step < 2000; ++step) {
    model.store().zero_grad();
    worst = 0;
    Tensor total = Tensor::scalar(0.0);
    for (const auto &cx: toys) {
      Rng g(static_cast<std::uint64_t>(step));
      const auto pred = predict_pocket(model.pocket(), pc, cx.ligand, cx.protein, &g);
      const Vec3 native = cx.native_pocket_center() / pc.layer.coord_scale;
      const auto loss = pocket_loss(classification_loss(pred.probs, cx.pocket_labels),
                                    center_constraint_loss(pred.gumbel_center, native), pc.alpha);
      worst = std::max(worst, loss.total.item());
      total = ops::add(total, loss.total);
    }
    if (worst < 0.05)
      break;
    total.backward();
    opt.step();
  }
  EXPECT_LT(worst, 0.05);
}
