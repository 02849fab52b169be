//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>

#include "fabind/checks.h"
#include "fabind/complex_io.h"
#include "fabind/model.h"
#include "fabind/synthetic.h"
#include "fabind/training.h"

using namespace fabind;

namespace {

std::vector<ComplexRecord> toys(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<ComplexRecord> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(checks::make_toy_complex(rng, 4 + i % 2, 8 + i));
    out.back().name = "toy" + std::to_string(i);
  }
  return out;
}

TrainConfig toy_train_config() {
  TrainConfig c;
  c.epochs = 4;
  c.batch_size = 2;
  c.optimizer.lr = 1e-3;
  c.warmup_epochs = 1;
  c.seed = 17;
  return c;
}

std::vector<double> flat_params(const Model &m) {
  std::vector<double> out;
  for (const auto &[name, t]: m.store().entries())
    out.insert(out.end(), t.values().begin(), t.values().end());
  return out;
}

}  // namespace

TEST(Normalize, ScaleFiveExample) {
  const std::vector<Vec3> x = { { 5, 10, -5 } };
  const auto y = normalize(x, 5.0);
  EXPECT_EQ(y[0], Vec3(1, 2, -1));
  EXPECT_EQ(unnormalize(y, 5.0)[0], x[0]);
}

TEST(Normalize, RoundTripWithinOneUlpAndDistancesScale) {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<Vec3> x = { { rng.uniform(-80, 80), rng.uniform(-80, 80), rng.uniform(-80, 80) },
                                  { rng.uniform(-80, 80), rng.uniform(-80, 80), rng.uniform(-80, 80) } };
    const auto y = normalize(x, 5.0);
    const auto back = unnormalize(y, 5.0);
    for (int k = 0; k < 2; ++k)
      for (int c = 0; c < 3; ++c)
        EXPECT_LE(std::abs(back[k][c] - x[k][c]), std::abs(x[k][c]) * 0x1p-52);
    EXPECT_NEAR((y[0] - y[1]).norm(), (x[0] - x[1]).norm() / 5.0, 1e-13);
  }
}

TEST(PocketSource, StageOneAlwaysNative) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i)
    EXPECT_EQ(choose_pocket_source(1, rng, 0.25), PocketSource::kNative);
  EXPECT_EQ(rng, Rng(2));
}

TEST(PocketSource, StageTwoFollowsDraw) {
  Rng a(3), b(3);
  for (int i = 0; i < 1000; ++i) {
    const bool predicted = b.uniform() < 0.25;
    EXPECT_EQ(choose_pocket_source(2, a, 0.25) == PocketSource::kPredicted, predicted);
  }
}

TEST(PocketShift, ComponentsWithinRangeAndZeroIsIdentity) {
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 s = sample_pocket_shift(rng, 5.0);
    for (int c = 0; c < 3; ++c) {
      EXPECT_GE(s[c], -5.0);
      EXPECT_LE(s[c], 5.0);
    }
  }
  const auto cx = checks::make_toy_complex(rng, 4, 10);
  const Vec3 center = cx.native_pocket_center();
  const auto a = augment_pocket_shift(cx.protein, center, Vec3::Zero());
  const auto b = extract_pocket(cx.protein, center);
  EXPECT_EQ(a.parent_indices, b.parent_indices);
  EXPECT_EQ(a.center, b.center);
}

TEST(PocketShift, MembershipMatchesBruteForceAtShiftedCenter) {
  Rng rng(5);
  SyntheticSpec spec;
  for (int trial = 0; trial < 20; ++trial) {
    const auto cx = generate_synthetic_complex(spec, rng, "s");
    const Vec3 shift = sample_pocket_shift(rng, 5.0);
    const Vec3 center = cx.native_pocket_center();
    const auto p = augment_pocket_shift(cx.protein, center, shift);
    std::vector<int> expect;
    for (int j = 0; j < cx.protein.size(); ++j)
      if ((cx.protein.coords[j] - (center + shift)).norm() <= 20.0)
        expect.push_back(j);
    EXPECT_EQ(p.parent_indices, expect);
  }
}

TEST(RefinementIterations, UniformChiSquare) {
  Rng rng(6);
  std::vector<int> counts(9, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    ++counts[sample_refinement_iterations(rng, 8)];
  EXPECT_EQ(counts[0], 0);
  double chi = 0;
  for (int k = 1; k <= 8; ++k)
    chi += std::pow(counts[k] - n / 8.0, 2) / (n / 8.0);
  EXPECT_LT(chi, 18.475);  // 1% critical value, 7 degrees of freedom
}

TEST(RefinementIterations, SingleIterationCap) {
  Rng rng(7);
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(sample_refinement_iterations(rng, 1), 1);
  EXPECT_THROW(sample_refinement_iterations(rng, 0), std::invalid_argument);
}

TEST(ComplexLoss, TotalIsSumOfComponents) {
  const auto data = toys(8, 3);
  const Model model(checks::toy_model_config());
  Rng rng(9);
  for (int stage: { 1, 2 })
    for (const auto &rec: data) {
      const ComplexLoss l = complex_loss(model, rec, stage, toy_train_config(), rng);
      EXPECT_NEAR(l.info.l_total, l.info.l_pocket + l.info.l_docking, 1e-10);
      EXPECT_NEAR(l.pocket.total.item(),
                  l.pocket.classification.item() + 0.2 * l.pocket.center.item(), 1e-12);
      EXPECT_NEAR(l.docking.total.item(),
                  l.docking.coord.item() + l.docking.dist.item() + l.docking.las.item(), 1e-12);
      EXPECT_GE(l.info.iterations, 1);
      EXPECT_LE(l.info.iterations, 8);
    }
}

TEST(ComplexLoss, DoesNotTouchGroundTruth) {
  const auto data = toys(10, 1);
  const auto before = data[0].truth;
  const Model model(checks::toy_model_config());
  Rng rng(11);
  complex_loss(model, data[0], 2, toy_train_config(), rng);
  EXPECT_EQ(data[0].truth, before);
}

TEST(Trainer, StageOneNeverSelectsPredictedPocketAndLogsAreConsistent) {
  auto config = toy_train_config();
  config.stage_gate = 1e-300;
  Model model(checks::toy_model_config());
  Trainer t(model, config, toys(12, 3), {});
  t.run();
  EXPECT_EQ(t.stage(), 1);
  ASSERT_FALSE(t.trace().empty());
  for (const auto &s: t.trace()) {
    double sum = 0;
    for (const auto &c: s.complexes) {
      EXPECT_FALSE(c.prediction_used_for_selection);
      EXPECT_EQ(c.source, PocketSource::kNative);
      EXPECT_NEAR(c.l_total, c.l_pocket + c.l_docking, 1e-10);
      sum += c.l_total;
    }
    EXPECT_NEAR(s.l_total, sum / s.complexes.size(), 1e-10);
    EXPECT_NEAR(s.l_total, s.l_pocket + s.l_docking, 1e-10);
  }
}

TEST(Trainer, StageFlipsAtFirstValidationBelowGate) {
  auto config = toy_train_config();
  config.epochs = 1;
  const auto data = toys(13, 3);
  double dcc = 0;
  {
    Model model(checks::toy_model_config());
    Trainer t(model, config, data, {});
    dcc = t.run().front().val_dcc;
  }
  config.stage_gate = dcc;
  {
    Model model(checks::toy_model_config());
    Trainer t(model, config, data, {});
    t.run();
    EXPECT_EQ(t.stage(), 1);
  }
  config.stage_gate = std::nextafter(dcc, 1e300);
  {
    Model model(checks::toy_model_config());
    Trainer t(model, config, data, {});
    const auto rec = t.run();
    EXPECT_EQ(rec.front().stage, 1);
    EXPECT_EQ(t.stage(), 2);
  }
}

TEST(Trainer, StageTwoSamplesPredictedPockets) {
  auto config = toy_train_config();
  config.stage_gate = 1e300;
  config.epochs = 6;
  config.batch_size = 1;
  config.predicted_pocket_prob = 0.5;
  Model model(checks::toy_model_config());
  Trainer t(model, config, toys(14, 3), {});
  t.run();
  int predicted = 0, stage2 = 0;
  for (const auto &s: t.trace())
    for (const auto &c: s.complexes) {
      if (s.stage == 2) {
        ++stage2;
        predicted += c.prediction_used_for_selection;
      } else {
        EXPECT_FALSE(c.prediction_used_for_selection);
      }
    }
  EXPECT_GT(stage2, 0);
  EXPECT_GT(predicted, 0);
}

TEST(Trainer, SeedFixedRunsGiveIdenticalLossCurves) {
  const auto data = toys(15, 3);
  std::vector<double> curve[2];
  for (int run = 0; run < 2; ++run) {
    Model model(checks::toy_model_config());
    Trainer t(model, toy_train_config(), data, {});
    for (const auto &e: t.run())
      curve[run].insert(curve[run].end(), { e.l_total, e.val_dcc, e.val_rmsd });
  }
  EXPECT_EQ(curve[0], curve[1]);
}

TEST(Trainer, CheckpointResumeReproducesNextStepBitExactly) {
  const auto data = toys(16, 3);
  auto config = toy_train_config();
  config.stage_gate = 1e300;
  Model model(checks::toy_model_config());
  Trainer t(model, config, data, {});
  t.run_epoch();
  t.step();
  const auto ckpt = checkpoint::decode(checkpoint::encode(t.save()));
  const EpochRecord e1 = t.run_epoch(), e2 = t.run_epoch();

  Model resumed = Model::load(ckpt);
  Trainer r(resumed, config, data, {});
  r.load(ckpt);
  EXPECT_EQ(r.stage(), 2);
  const EpochRecord f1 = r.run_epoch(), f2 = r.run_epoch();
  EXPECT_EQ(flat_params(resumed), flat_params(model));
  for (const auto &[a, b]: { std::pair{ e1, f1 }, std::pair{ e2, f2 } }) {
    EXPECT_EQ(a.l_total, b.l_total);
    EXPECT_EQ(a.l_docking, b.l_docking);
    EXPECT_EQ(a.val_rmsd, b.val_rmsd);
    EXPECT_EQ(a.steps, b.steps);
  }
  EXPECT_EQ(r.rng(), t.rng());
}

TEST(Trainer, StepCapStopsTraining) {
  auto config = toy_train_config();
  config.max_steps = 3;
  config.epochs = 50;
  Model model(checks::toy_model_config());
  Trainer t(model, config, toys(17, 3), {});
  t.run();
  EXPECT_EQ(t.steps(), 3);
  EXPECT_TRUE(t.finished());
}

TEST(Trainer, EmptyDatasetRejected) {
  Model model(checks::toy_model_config());
  EXPECT_THROW(Trainer(model, toy_train_config(), {}, {}), std::invalid_argument);
}

TEST(TrainConfig, ReadsKeysAndRejectsBadValues) {
  auto cfg = KeyValueConfig::parse("train.epochs=7\ntrain.lr=0.01\ntrain.pocket_shift=2\n"
                                   "train.max_grad_norm=0.5\n");
  const auto c = TrainConfig::from(cfg);
  EXPECT_EQ(c.epochs, 7);
  EXPECT_EQ(c.optimizer.lr, 0.01);
  EXPECT_EQ(c.pocket_shift, 2.0);
  EXPECT_EQ(c.optimizer.max_grad_norm, 0.5);
  EXPECT_DOUBLE_EQ(c.native_pocket_prob() + c.predicted_pocket_prob, 1.0);
  auto bad = KeyValueConfig::parse("train.predicted_pocket_prob=1.5\n");
  EXPECT_THROW(TrainConfig::from(bad).validate(), ConfigError);
  auto bad_clip = KeyValueConfig::parse("train.max_grad_norm=-1\n");
  EXPECT_THROW(TrainConfig::from(bad_clip).validate(), ConfigError);
}

TEST(Synthetic, HundredComplexesPassInvariantsAndRoundTrip) {
  Rng rng(18);
  SyntheticSpec spec;
  for (int i = 0; i < 100; ++i) {
    const auto cx = generate_synthetic_complex(spec, rng, "c" + std::to_string(i));
    EXPECT_NO_THROW(cx.validate());
    EXPECT_NO_THROW(cx.ligand.validate());
    EXPECT_NO_THROW(cx.protein.validate());
    EXPECT_GE(cx.protein.size(), spec.min_residues);
    EXPECT_LE(cx.protein.size(), spec.max_residues);
    EXPECT_GE(cx.ligand.size(), spec.min_atoms);
    EXPECT_LE(cx.ligand.size(), spec.max_atoms);
    EXPECT_LT((centroid(cx.truth) - cx.native_pocket_center()).norm(), 20.0);
    const std::string text = render_complex(cx);
    EXPECT_EQ(render_complex(parse_complex(text)), text);
  }
}

TEST(Synthetic, SameSeedSameComplex) {
  Rng a(19), b(19);
  SyntheticSpec spec;
  EXPECT_EQ(render_complex(generate_synthetic_complex(spec, a, "x")),
            render_complex(generate_synthetic_complex(spec, b, "x")));
}
