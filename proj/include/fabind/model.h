//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_MODEL_H_
#define FABIND_MODEL_H_

#include <cstdint>
#include <vector>

#include "fabind/checkpoint.h"
#include "fabind/complex_io.h"
#include "fabind/config.h"
#include "fabind/docking_module.h"
#include "fabind/pocket_module.h"

namespace fabind {

struct ModelConfig {
  PocketConfig pocket;
  DockingConfig docking;
  std::uint64_t init_seed = 0;

  // Pocket 128 hidden with one layer; docking 512 hidden, 4 layers, k = 8.
  static ModelConfig full_size();
  // Reads the model.* keys; missing keys keep the full-size values.
  static ModelConfig from(const KeyValueConfig &cfg);
  void write(KeyValueConfig &cfg) const;
  void validate() const;
};

struct Prediction {
  PocketPrediction pocket;
  PocketSubgraph pocket_subgraph;
  bool docked = false;
  DockingResult docking;
  std::vector<Vec3> pose;  // Å
};

class Model {
public:
  explicit Model(const ModelConfig &config);

  const ModelConfig &config() const { return config_; }
  nn::ParamStore &store() { return store_; }
  const nn::ParamStore &store() const { return store_; }
  const PocketParams &pocket() const { return pocket_; }
  const DockingParams &docking() const { return docking_; }

  // Inference: no Gumbel noise, always the configured (or overridden)
  // iteration count.
  Prediction predict(const LigandGraph &ligand, const ProteinGraph &protein,
                     int iterations = -1, bool pocket_only = false) const;

  checkpoint::Checkpoint save(const AdamW *optimizer,
                              std::map<std::string, std::string> extra = {}) const;
  static Model load(const checkpoint::Checkpoint &ckpt);

private:
  ModelConfig config_;
  nn::ParamStore store_;
  PocketParams pocket_;
  DockingParams docking_;
};

}  // namespace fabind

#endif  // FABIND_MODEL_H_
