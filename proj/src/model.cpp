//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/model.h"

#include <cstdio>
#include <stdexcept>

namespace fabind {

ModelConfig ModelConfig::full_size() {
  ModelConfig c;
  c.pocket.layer.hidden = 128;
  c.pocket.layers = 1;
  c.docking.layer.hidden = 512;
  c.docking.layers = 4;
  c.docking.iterations = 8;
  return c;
}

ModelConfig ModelConfig::from(const KeyValueConfig &cfg) {
  ModelConfig c = full_size();
  auto shared = [&](LayerConfig &l) {
    l.pair_dim = cfg.get_int("model.pair_dim", l.pair_dim);
    l.heads = cfg.get_int("model.heads", l.heads);
    l.opm_dim = cfg.get_int("model.opm_dim", l.opm_dim);
    l.coord_scale = cfg.get_double("model.coord_scale", l.coord_scale);
    l.coord_clamp = cfg.get_double("model.coord_clamp", l.coord_clamp);
    l.internal_cutoff = cfg.get_double("model.internal_cutoff", l.internal_cutoff);
    l.interfacial_cutoff = cfg.get_double("model.interfacial_cutoff",
                                          l.interfacial_cutoff);
    l.global_nodes = cfg.get_bool("model.global_nodes", l.global_nodes);
    l.update_protein_coords = cfg.get_bool("model.update_protein_coords",
                                           l.update_protein_coords);
  };
  shared(c.pocket.layer);
  shared(c.docking.layer);
  c.pocket.layer.hidden = cfg.get_int("model.pocket.hidden", c.pocket.layer.hidden);
  c.pocket.layers = cfg.get_int("model.pocket.layers", c.pocket.layers);
  c.pocket.threshold = cfg.get_double("model.pocket.threshold", c.pocket.threshold);
  c.pocket.tau = cfg.get_double("model.pocket.tau", c.pocket.tau);
  c.pocket.alpha = cfg.get_double("model.pocket.alpha", c.pocket.alpha);
  c.pocket.radius = cfg.get_double("model.pocket.radius", c.pocket.radius);
  c.docking.layer.hidden = cfg.get_int("model.docking.hidden",
                                       c.docking.layer.hidden);
  c.docking.layers = cfg.get_int("model.docking.layers", c.docking.layers);
  c.docking.iterations = cfg.get_int("model.docking.iterations",
                                     c.docking.iterations);
  c.docking.beta = cfg.get_double("model.docking.beta", c.docking.beta);
  c.docking.gamma = cfg.get_double("model.docking.gamma", c.docking.gamma);
  c.docking.w_las = cfg.get_double("model.docking.w_las", c.docking.w_las);
  const std::string seed = cfg.get_string("model.init_seed", "0");
  try {
    c.init_seed = std::stoull(seed);
  } catch (const std::exception &) {
    throw ConfigError("key 'model.init_seed': '" + seed + "' is not an integer");
  }
  c.validate();
  return c;
}

void ModelConfig::write(KeyValueConfig &cfg) const {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  const LayerConfig &l = docking.layer;
  cfg.set("model.pair_dim", std::to_string(l.pair_dim));
  cfg.set("model.heads", std::to_string(l.heads));
  cfg.set("model.opm_dim", std::to_string(l.opm_dim));
  cfg.set("model.coord_scale", num(l.coord_scale));
  cfg.set("model.coord_clamp", num(l.coord_clamp));
  cfg.set("model.internal_cutoff", num(l.internal_cutoff));
  cfg.set("model.interfacial_cutoff", num(l.interfacial_cutoff));
  cfg.set("model.global_nodes", l.global_nodes ? "true" : "false");
  cfg.set("model.update_protein_coords", l.update_protein_coords ? "true" : "false");
  cfg.set("model.pocket.hidden", std::to_string(pocket.layer.hidden));
  cfg.set("model.pocket.layers", std::to_string(pocket.layers));
  cfg.set("model.pocket.threshold", num(pocket.threshold));
  cfg.set("model.pocket.tau", num(pocket.tau));
  cfg.set("model.pocket.alpha", num(pocket.alpha));
  cfg.set("model.pocket.radius", num(pocket.radius));
  cfg.set("model.docking.hidden", std::to_string(l.hidden));
  cfg.set("model.docking.layers", std::to_string(docking.layers));
  cfg.set("model.docking.iterations", std::to_string(docking.iterations));
  cfg.set("model.docking.beta", num(docking.beta));
  cfg.set("model.docking.gamma", num(docking.gamma));
  cfg.set("model.docking.w_las", num(docking.w_las));
  cfg.set("model.init_seed", std::to_string(init_seed));
}

void ModelConfig::validate() const {
  pocket.validate();
  docking.validate();
}

Model::Model(const ModelConfig &config) : config_(config) {
  config_.validate();
  Rng rng(config_.init_seed);
  pocket_ = make_pocket_params(store_, "pocket", config_.pocket, rng);
  docking_ = make_docking_params(store_, "docking", config_.docking, rng);
}

Prediction Model::predict(const LigandGraph &ligand, const ProteinGraph &protein,
                          int iterations, bool pocket_only) const {
  ad::NoGradGuard no_grad;
  Prediction out;
  out.pocket = predict_pocket(pocket_, config_.pocket, ligand, protein, nullptr);
  out.pocket_subgraph = decide_pocket(out.pocket, protein, config_.pocket.radius);
  if (pocket_only)
    return out;
  const int k = iterations > 0 ? iterations : config_.docking.iterations;
  const auto init = translate_to(ligand.coords, out.pocket.decided_center);
  out.docking = dock(docking_, config_.docking, ligand, init,
                     out.pocket_subgraph.graph, k);
  out.pose = tensor_coords(out.docking.ligand_x, config_.docking.layer.coord_scale);
  out.docked = true;
  return out;
}

checkpoint::Checkpoint Model::save(const AdamW *optimizer,
                                   std::map<std::string, std::string> extra) const {
  KeyValueConfig cfg;
  config_.write(cfg);
  extra["model_config"] = cfg.render();
  return checkpoint::capture(store_, optimizer, std::move(extra));
}

Model Model::load(const checkpoint::Checkpoint &ckpt) {
  const auto it = ckpt.metadata.find("model_config");
  if (it == ckpt.metadata.end())
    throw checkpoint::FormatError("checkpoint has no model_config entry");
  const KeyValueConfig cfg = KeyValueConfig::parse(it->second);
  Model m(ModelConfig::from(cfg));
  cfg.check_all_used();
  checkpoint::restore(ckpt, m.store_, nullptr);
  return m;
}

}  // namespace fabind
