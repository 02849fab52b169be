//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/training.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "fabind/metrics.h"
#include "fabind/ops.h"

namespace fabind {

TrainConfig TrainConfig::from(const KeyValueConfig &cfg) {
  TrainConfig c;
  c.epochs = cfg.get_int("train.epochs", c.epochs);
  c.max_steps = cfg.get_int("train.max_steps", static_cast<int>(c.max_steps));
  c.batch_size = cfg.get_int("train.batch_size", c.batch_size);
  c.optimizer.lr = cfg.get_double("train.lr", c.optimizer.lr);
  c.optimizer.beta1 = cfg.get_double("train.beta1", c.optimizer.beta1);
  c.optimizer.beta2 = cfg.get_double("train.beta2", c.optimizer.beta2);
  c.optimizer.eps = cfg.get_double("train.eps", c.optimizer.eps);
  c.optimizer.weight_decay = cfg.get_double("train.weight_decay",
                                            c.optimizer.weight_decay);
  c.optimizer.max_grad_norm = cfg.get_double("train.max_grad_norm",
                                             c.optimizer.max_grad_norm);
  c.warmup_epochs = cfg.get_int("train.warmup_epochs", c.warmup_epochs);
  c.stage_gate = cfg.get_double("train.stage_gate", c.stage_gate);
  c.predicted_pocket_prob = cfg.get_double("train.predicted_pocket_prob",
                                           c.predicted_pocket_prob);
  c.pocket_shift = cfg.get_double("train.pocket_shift", c.pocket_shift);
  c.sample_iterations = cfg.get_bool("train.sample_iterations", c.sample_iterations);
  const std::string seed = cfg.get_string("train.seed", "0");
  try {
    c.seed = std::stoull(seed);
  } catch (const std::exception &) {
    throw ConfigError("key 'train.seed': '" + seed + "' is not an integer");
  }
  c.validate();
  return c;
}

void TrainConfig::write(KeyValueConfig &cfg) const {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  cfg.set("train.epochs", std::to_string(epochs));
  cfg.set("train.max_steps", std::to_string(max_steps));
  cfg.set("train.batch_size", std::to_string(batch_size));
  cfg.set("train.lr", num(optimizer.lr));
  cfg.set("train.beta1", num(optimizer.beta1));
  cfg.set("train.beta2", num(optimizer.beta2));
  cfg.set("train.eps", num(optimizer.eps));
  cfg.set("train.weight_decay", num(optimizer.weight_decay));
  cfg.set("train.max_grad_norm", num(optimizer.max_grad_norm));
  cfg.set("train.warmup_epochs", std::to_string(warmup_epochs));
  cfg.set("train.stage_gate", num(stage_gate));
  cfg.set("train.predicted_pocket_prob", num(predicted_pocket_prob));
  cfg.set("train.pocket_shift", num(pocket_shift));
  cfg.set("train.sample_iterations", sample_iterations ? "true" : "false");
  cfg.set("train.seed", std::to_string(seed));
}

void TrainConfig::validate() const {
  if (epochs < 1 || batch_size < 1 || max_steps < 0 || warmup_epochs < 0)
    throw ConfigError("epochs and batch size must be >= 1, step cap and warm-up >= 0");
  if (!(predicted_pocket_prob >= 0 && predicted_pocket_prob <= 1))
    throw ConfigError("predicted pocket probability must lie in [0, 1]");
  if (!(pocket_shift >= 0) || !(stage_gate > 0) || !(optimizer.lr > 0))
    throw ConfigError("pocket shift >= 0, stage gate > 0 and lr > 0 required");
  if (!(optimizer.max_grad_norm >= 0))
    throw ConfigError("gradient clip norm must be >= 0");
}

PocketSource choose_pocket_source(int stage, Rng &rng, double predicted_prob) {
  if (stage < 2)
    return PocketSource::kNative;
  return rng.uniform() < predicted_prob ? PocketSource::kPredicted
                                        : PocketSource::kNative;
}

Vec3 sample_pocket_shift(Rng &rng, double range) {
  Vec3 s;
  for (int c = 0; c < 3; ++c)
    s[c] = rng.uniform(-range, range);
  return s;
}

PocketSubgraph augment_pocket_shift(const ProteinGraph &protein,
                                    const Vec3 &center, const Vec3 &shift,
                                    double radius) {
  return extract_pocket(protein, center + shift, radius);
}

std::vector<Vec3> normalize(std::span<const Vec3> coords, double scale) {
  std::vector<Vec3> out;
  out.reserve(coords.size());
  for (const auto &x: coords)
    out.push_back(x / scale);
  return out;
}

std::vector<Vec3> unnormalize(std::span<const Vec3> coords, double scale) {
  std::vector<Vec3> out;
  out.reserve(coords.size());
  for (const auto &x: coords)
    out.push_back(x * scale);
  return out;
}

int sample_refinement_iterations(Rng &rng, int k_max) {
  if (k_max < 1)
    throw std::invalid_argument("iteration cap must be >= 1");
  return rng.uniform_int(1, k_max);
}

ValidationResult evaluate_model(const Model &model,
                                std::span<const ComplexRecord> data,
                                int iterations) {
  ValidationResult r;
  if (data.empty())
    return r;
  for (const auto &rec: data) {
    const Prediction p = model.predict(rec.ligand, rec.protein, iterations);
    r.dcc.push_back(metrics::dcc(p.pocket.decided_center, rec.native_pocket_center()));
    r.rmsd.push_back(metrics::ligand_rmsd(p.pose, rec.truth));
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    r.mean_dcc += r.dcc[i];
    r.mean_rmsd += r.rmsd[i];
  }
  r.mean_dcc /= static_cast<double>(data.size());
  r.mean_rmsd /= static_cast<double>(data.size());
  return r;
}

Trainer::Trainer(Model &model, TrainConfig config,
                 std::vector<ComplexRecord> train, std::vector<ComplexRecord> val)
    : model_(model), config_(std::move(config)), train_(std::move(train)),
      val_(std::move(val)), optimizer_(model.store(), config_.optimizer),
      rng_(config_.seed) {
  config_.validate();
  if (train_.empty())
    throw std::invalid_argument("training set is empty");
}

bool Trainer::finished() const {
  return epoch_ >= config_.epochs
         || (config_.max_steps > 0 && steps_ >= config_.max_steps);
}

void Trainer::begin_epoch() {
  order_.resize(train_.size());
  for (std::size_t i = 0; i < order_.size(); ++i)
    order_[i] = static_cast<int>(i);
  for (std::size_t i = order_.size(); i > 1; --i)
    std::swap(order_[i - 1], order_[rng_.uniform_int(0, static_cast<int>(i) - 1)]);
  cursor_ = 0;
  in_epoch_ = true;
  sum_pocket_ = sum_docking_ = sum_total_ = 0;
  epoch_complexes_ = 0;
}

ComplexLoss complex_loss(const Model &model, const ComplexRecord &rec,
                         int stage, const TrainConfig &config, Rng &rng) {
  const ModelConfig &mc = model.config();
  const double scale = mc.docking.layer.coord_scale;
  ComplexLoss out;

  const PocketPrediction pred = predict_pocket(model.pocket(), mc.pocket,
                                               rec.ligand, rec.protein, &rng);
  const Vec3 native = rec.native_pocket_center();
  out.pocket = pocket_loss(
      classification_loss(pred.probs, rec.pocket_labels),
      center_constraint_loss(pred.gumbel_center, native / scale), mc.pocket.alpha);

  ComplexStep &cs = out.info;
  cs.source = choose_pocket_source(stage, rng, config.predicted_pocket_prob);
  const Vec3 shift = sample_pocket_shift(rng, config.pocket_shift);
  PocketSubgraph pocket;
  bool have_pocket = false;
  if (cs.source == PocketSource::kPredicted) {
    cs.prediction_used_for_selection = true;
    try {
      pocket = augment_pocket_shift(rec.protein, pred.decided_center, shift,
                                    mc.pocket.radius);
      have_pocket = true;
    } catch (const EmptyPocketError &) {
      cs.fell_back_to_native = true;
      std::fprintf(stderr, "warning: predicted pocket for '%s' is empty, using native\n",
                   rec.name.c_str());
    }
  }
  if (!have_pocket) {
    try {
      pocket = augment_pocket_shift(rec.protein, native, shift, mc.pocket.radius);
    } catch (const EmptyPocketError &) {
      pocket = extract_pocket(rec.protein, native, mc.pocket.radius);
    }
  }

  cs.iterations = config.sample_iterations
                      ? sample_refinement_iterations(rng, mc.docking.iterations)
                      : mc.docking.iterations;
  const auto init = translate_to(rec.ligand.coords, pocket.center);
  const DockingResult dr = dock(model.docking(), mc.docking, rec.ligand, init,
                                pocket.graph, cs.iterations);
  out.docking = docking_loss(
      coord_loss(dr.ligand_x, coords_tensor(rec.truth, scale)),
      dist_map_loss(distance_target(rec.truth, pocket.graph.coords, scale),
                    dr.d_coord, dr.d_pair, mc.docking.gamma),
      las_constraint(dr.ligand_x, las_pairs(rec.ligand, rec.ligand.coords, scale)),
      mc.docking.beta, mc.docking.w_las);

  out.total = ops::add(out.pocket.total, out.docking.total);
  cs.l_pocket = out.pocket.total.item();
  cs.l_docking = out.docking.total.item();
  cs.l_total = out.total.item();
  return out;
}

ComplexStep Trainer::train_complex(int index, double weight) {
  ComplexLoss loss = complex_loss(model_, train_[index], stage_, config_, rng_);
  loss.info.index = index;
  ops::scale(loss.total, weight).backward();
  return loss.info;
}

bool Trainer::step() {
  if (finished())
    return false;
  if (!in_epoch_)
    begin_epoch();
  if (cursor_ >= order_.size())
    return false;

  const std::size_t end = std::min(order_.size(), cursor_ + config_.batch_size);
  const double weight = 1.0 / static_cast<double>(end - cursor_);
  StepRecord rec;
  rec.epoch = epoch_;
  rec.stage = stage_;
  rec.lr = scheduled_lr(config_.optimizer.lr, epoch_, config_.warmup_epochs,
                        config_.epochs);
  model_.store().zero_grad();
  for (; cursor_ < end; ++cursor_) {
    ComplexStep cs;
    try {
      cs = train_complex(order_[cursor_], weight);
    } catch (const NumericalError &e) {
      throw NumericalError("epoch " + std::to_string(epoch_ + 1) + ", step "
                           + std::to_string(steps_ + 1) + ", complex '"
                           + train_[order_[cursor_]].name + "': " + e.what());
    }
    rec.l_pocket += weight * cs.l_pocket;
    rec.l_docking += weight * cs.l_docking;
    rec.l_total += weight * cs.l_total;
    sum_pocket_ += cs.l_pocket;
    sum_docking_ += cs.l_docking;
    sum_total_ += cs.l_total;
    ++epoch_complexes_;
    rec.complexes.push_back(cs);
  }
  optimizer_.step(rec.lr);
  rec.step = ++steps_;
  if (trace_enabled_)
    trace_.push_back(std::move(rec));
  return !finished() && cursor_ < order_.size();
}

EpochRecord Trainer::run_epoch() {
  if (!in_epoch_)
    begin_epoch();
  while (step()) {
  }
  EpochRecord r;
  r.epoch = epoch_ + 1;
  r.stage = stage_;
  const double n = std::max(1, epoch_complexes_);
  r.l_pocket = sum_pocket_ / n;
  r.l_docking = sum_docking_ / n;
  r.l_total = sum_total_ / n;
  r.steps = steps_;
  const auto v = evaluate_model(model_, val_.empty() ? train_ : val_);
  r.val_dcc = v.mean_dcc;
  r.val_rmsd = v.mean_rmsd;
  if (stage_ == 1 && v.mean_dcc < config_.stage_gate)
    stage_ = 2;
  ++epoch_;
  in_epoch_ = false;
  return r;
}

std::vector<EpochRecord> Trainer::run(
    const std::function<void(const EpochRecord &)> &on_epoch) {
  std::vector<EpochRecord> out;
  while (!finished()) {
    out.push_back(run_epoch());
    if (on_epoch)
      on_epoch(out.back());
  }
  return out;
}

checkpoint::Checkpoint Trainer::save() const {
  std::ostringstream order;
  for (std::size_t i = 0; i < order_.size(); ++i)
    order << (i ? "," : "") << order_[i];
  char sums[160];
  std::snprintf(sums, sizeof sums, "%a,%a,%a,%d", sum_pocket_, sum_docking_,
                sum_total_, epoch_complexes_);
  KeyValueConfig tc;
  config_.write(tc);
  return model_.save(&optimizer_,
                     { { "train_config", tc.render() },
                       { "trainer.stage", std::to_string(stage_) },
                       { "trainer.epoch", std::to_string(epoch_) },
                       { "trainer.steps", std::to_string(steps_) },
                       { "trainer.in_epoch", in_epoch_ ? "1" : "0" },
                       { "trainer.order", order.str() },
                       { "trainer.cursor", std::to_string(cursor_) },
                       { "trainer.sums", sums },
                       { "trainer.rng", rng_.serialize() } });
}

void Trainer::load(const checkpoint::Checkpoint &ckpt) {
  auto get = [&](const std::string &k) {
    const auto it = ckpt.metadata.find(k);
    if (it == ckpt.metadata.end())
      throw checkpoint::FormatError("checkpoint lacks trainer entry '" + k + "'");
    return it->second;
  };
  checkpoint::restore(ckpt, model_.store(), &optimizer_);
  stage_ = std::stoi(get("trainer.stage"));
  epoch_ = std::stoi(get("trainer.epoch"));
  steps_ = std::stol(get("trainer.steps"));
  in_epoch_ = get("trainer.in_epoch") == "1";
  order_.clear();
  std::istringstream os(get("trainer.order"));
  for (std::string tok; std::getline(os, tok, ',');)
    order_.push_back(std::stoi(tok));
  cursor_ = std::stoul(get("trainer.cursor"));
  const std::string sums = get("trainer.sums");
  if (std::sscanf(sums.c_str(), "%la,%la,%la,%d", &sum_pocket_, &sum_docking_,
                  &sum_total_, &epoch_complexes_) != 4)
    throw checkpoint::FormatError("malformed trainer.sums entry");
  rng_.deserialize(get("trainer.rng"));
}

std::string epoch_csv_header() {
  return "epoch,stage,L_pocket,L_docking,L_total,val_DCC_mean,val_RMSD_mean";
}

std::string epoch_csv_row(const EpochRecord &r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%d,%.10g,%.10g,%.10g,%.6f,%.6f", r.epoch,
                r.stage, r.l_pocket, r.l_docking, r.l_total, r.val_dcc, r.val_rmsd);
  return buf;
}

}  // namespace fabind
