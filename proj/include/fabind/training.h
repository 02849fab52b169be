//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_TRAINING_H_
#define FABIND_TRAINING_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fabind/model.h"
#include "fabind/optimizer.h"

namespace fabind {

struct TrainConfig {
  int epochs = 100;
  long max_steps = 0;  // 0: no cap
  int batch_size = 2;
  AdamWConfig optimizer;
  int warmup_epochs = 15;
  double stage_gate = 4.0;             // Å, validation mean DCC
  double predicted_pocket_prob = 0.25; // stage 2 only
  double pocket_shift = 5.0;           // Å per axis
  bool sample_iterations = true;
  std::uint64_t seed = 0;

  double native_pocket_prob() const { return 1.0 - predicted_pocket_prob; }
  static TrainConfig from(const KeyValueConfig &cfg);
  void write(KeyValueConfig &cfg) const;
  void validate() const;
};

enum class PocketSource { kNative, kPredicted };

// Stage 1 never draws; stage 2 draws once per complex.
PocketSource choose_pocket_source(int stage, Rng &rng, double predicted_prob);

// Each component uniform on [-range, range].
Vec3 sample_pocket_shift(Rng &rng, double range);
PocketSubgraph augment_pocket_shift(const ProteinGraph &protein,
                                    const Vec3 &center, const Vec3 &shift,
                                    double radius = kPocketRadius);

std::vector<Vec3> normalize(std::span<const Vec3> coords, double scale);
std::vector<Vec3> unnormalize(std::span<const Vec3> coords, double scale);

int sample_refinement_iterations(Rng &rng, int k_max);

struct ComplexStep {
  int index = 0;
  PocketSource source = PocketSource::kNative;
  bool prediction_used_for_selection = false;
  bool fell_back_to_native = false;
  int iterations = 0;
  double l_pocket = 0, l_docking = 0, l_total = 0;
};

// Full training objective for one complex: L = L_pocket + L_docking. The rng
// drives Gumbel noise, the pocket source draw, the shift and the iteration
// count, in that order.
struct ComplexLoss {
  PocketLossReport pocket;
  DockingLossReport docking;
  Tensor total;
  ComplexStep info;
};

ComplexLoss complex_loss(const Model &model, const ComplexRecord &record,
                         int stage, const TrainConfig &config, Rng &rng);

struct StepRecord {
  long step = 0;
  int epoch = 0;
  int stage = 1;
  double lr = 0;
  double l_pocket = 0, l_docking = 0, l_total = 0;  // batch means
  std::vector<ComplexStep> complexes;
};

struct EpochRecord {
  int epoch = 0;
  int stage = 1;  // stage the epoch trained in
  double l_pocket = 0, l_docking = 0, l_total = 0;
  double val_dcc = 0, val_rmsd = 0;
  long steps = 0;  // cumulative
};

struct ValidationResult {
  double mean_dcc = 0;
  double mean_rmsd = 0;
  std::vector<double> dcc, rmsd;
};

ValidationResult evaluate_model(const Model &model,
                                std::span<const ComplexRecord> data,
                                int iterations = -1);

class Trainer {
public:
  Trainer(Model &model, TrainConfig config, std::vector<ComplexRecord> train,
          std::vector<ComplexRecord> val);

  // One optimizer step on the next batch of the current epoch. Returns false
  // at the end of the epoch or when the step cap is reached.
  bool step();
  EpochRecord run_epoch();
  std::vector<EpochRecord> run(const std::function<void(const EpochRecord &)> &on_epoch = {});

  checkpoint::Checkpoint save() const;
  void load(const checkpoint::Checkpoint &ckpt);

  int stage() const { return stage_; }
  int epoch() const { return epoch_; }
  long steps() const { return steps_; }
  bool finished() const;
  const std::vector<StepRecord> &trace() const { return trace_; }
  void set_trace_enabled(bool on) { trace_enabled_ = on; }
  Rng &rng() { return rng_; }
  const AdamW &optimizer() const { return optimizer_; }

private:
  ComplexStep train_complex(int index, double weight);
  void begin_epoch();

  Model &model_;
  TrainConfig config_;
  std::vector<ComplexRecord> train_;
  std::vector<ComplexRecord> val_;
  AdamW optimizer_;
  Rng rng_;
  int stage_ = 1;
  int epoch_ = 0;
  long steps_ = 0;
  std::vector<int> order_;
  std::size_t cursor_ = 0;
  bool in_epoch_ = false;
  double sum_pocket_ = 0, sum_docking_ = 0, sum_total_ = 0;
  int epoch_complexes_ = 0;
  bool trace_enabled_ = true;
  std::vector<StepRecord> trace_;
};

std::string epoch_csv_header();
std::string epoch_csv_row(const EpochRecord &r);

}  // namespace fabind

#endif  // FABIND_TRAINING_H_
