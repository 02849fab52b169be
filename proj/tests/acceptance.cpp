//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Usage: acceptance [--config desk.cfg] [criterion numbers...]

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "fabind/checkpoint.h"
#include "fabind/checks.h"
#include "fabind/complex_io.h"
#include "fabind/config.h"
#include "fabind/docking_module.h"
#include "fabind/losses.h"
#include "fabind/metrics.h"
#include "fabind/model.h"
#include "fabind/pocket_module.h"
#include "fabind/synthetic.h"
#include "fabind/training.h"

using namespace fabind;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Tensor random_tensor(Rng &rng, int r, int c, double lo, double hi) {
  std::vector<double> v(static_cast<std::size_t>(r) * c);
  for (auto &x: v)
    x = rng.uniform(lo, hi);
  return Tensor::from(r, c, v);
}

std::vector<Vec3> random_cloud(Rng &rng, int n, double s) {
  std::vector<Vec3> out(n);
  for (auto &x: out)
    x = Vec3(rng.uniform(-s, s), rng.uniform(-s, s), rng.uniform(-s, s));
  return out;
}

Outcome suite_outcome(const std::vector<checks::CheckLine> &lines, double seconds,
                      double budget) {
  Outcome o;
  o.pass = !lines.empty() && seconds < budget;
  std::string worst;
  double worst_ratio = -1;
  for (const auto &l: lines) {
    o.pass = o.pass && l.pass;
    const double ratio = l.value / l.tolerance;
    if (!l.pass || ratio > worst_ratio) {
      worst_ratio = l.pass ? ratio : 1e300;
      worst = fmt("%s=%.3g (tol %.0e)", l.name.c_str(), l.value, l.tolerance);
    }
  }
  o.detail = fmt("%zu checks, worst %s, %.1fs (budget %.0fs)", lines.size(),
                 worst.c_str(), seconds, budget);
  return o;
}

Outcome criterion_equivariance() {
  const auto t0 = Clock::now();
  const auto lines = checks::equivariance_suite(2024, 20);
  return suite_outcome(lines, seconds_since(t0), 30);
}

Outcome criterion_gradients() {
  const auto t0 = Clock::now();
  const auto lines = checks::gradient_suite(2024, false);
  return suite_outcome(lines, seconds_since(t0), 120);
}

// Each formula is recomputed with plain loops over raw values.
Outcome criterion_formulas() {
  Rng rng(303);
  const int instances = 200;
  double err_dist = 0, err_pocket = 0, err_dock = 0, err_gumbel = 0, err_huber = 0,
         err_bce = 0;
  for (int t = 0; t < instances; ++t) {
    const int nl = rng.uniform_int(1, 9), np = rng.uniform_int(1, 15);
    const Tensor d = random_tensor(rng, nl, np, 0, 6), dc = random_tensor(rng, nl, np, 0, 6),
                 dp = random_tensor(rng, nl, np, 0, 6);
    double s = 0;
    for (int i = 0; i < nl * np; ++i) {
      const double a = d.values()[i], b = dc.values()[i], c = dp.values()[i];
      s += (a - b) * (a - b) + (a - c) * (a - c) + 1.0 * (b - c) * (b - c);
    }
    const double dist = dist_map_loss(d, dc, dp, 1.0).item();
    err_dist = std::max(err_dist, std::abs(dist - s / (nl * np)));

    const double cls = rng.uniform(0, 3), ctr = rng.uniform(0, 3);
    err_pocket = std::max(err_pocket, std::abs(pocket_loss(Tensor::scalar(cls), Tensor::scalar(ctr), 0.2).total.item()
                                               - (cls + 0.2 * ctr)));
    const double coord = rng.uniform(0, 3), las = rng.uniform(0, 3);
    err_dock = std::max(err_dock, std::abs(docking_loss(Tensor::scalar(coord), Tensor::scalar(dist),
                                                        Tensor::scalar(las), 1.0, 1.0).total.item()
                                           - (coord + 1.0 * dist + 1.0 * las)));

    const double tau = rng.uniform(0.1, 4.0);
    std::vector<double> p(np), g(np);
    for (int j = 0; j < np; ++j) {
      p[j] = rng.uniform(1e-4, 1.0);
      g[j] = losses::sample_gumbel(rng);
    }
    const Tensor w = gumbel_weights(Tensor::from(np, 1, p), g, tau);
    double z = 0;
    std::vector<double> e(np);
    for (int j = 0; j < np; ++j)
      z += e[j] = std::exp((std::log(p[j]) + g[j]) / tau);
    for (int j = 0; j < np; ++j)
      err_gumbel = std::max(err_gumbel, std::abs(w(j, 0) - e[j] / z));

    const int n = rng.uniform_int(1, 20);
    const Tensor a = random_tensor(rng, 1, n, -3, 3), b = random_tensor(rng, 1, n, -3, 3);
    double h = 0;
    for (int i = 0; i < n; ++i) {
      const double r = std::abs(a.values()[i] - b.values()[i]);
      h += r <= 1.0 ? 0.5 * r * r : r - 0.5;
    }
    err_huber = std::max(err_huber, std::abs(losses::huber(a, b).item() - h / n));

    std::vector<double> q(n), y(n);
    double c = 0;
    for (int i = 0; i < n; ++i) {
      q[i] = rng.uniform(0, 1);
      y[i] = rng.uniform() < 0.5 ? 0.0 : 1.0;
      const double qc = std::clamp(q[i], losses::kProbEps, 1 - losses::kProbEps);
      c += -(y[i] * std::log(qc) + (1 - y[i]) * std::log(1 - qc));
    }
    err_bce = std::max(err_bce, std::abs(losses::bce(Tensor::from(n, 1, q), Tensor::from(n, 1, y)).item()
                                         - c / n));
  }
  const double worst = std::max({ err_dist, err_pocket, err_dock, err_gumbel, err_huber, err_bce });
  return { worst < 1e-10,
           fmt("%d instances; max |err| dist %.1e pocket %.1e docking %.1e gumbel %.1e huber %.1e "
               "bce %.1e (tol 1e-10)",
               instances, err_dist, err_pocket, err_dock, err_gumbel, err_huber, err_bce) };
}

Outcome criterion_edges() {
  Rng rng(404);
  int mismatches = 0, edges = 0;
  for (int t = 0; t < 100; ++t) {
    const auto lig = random_cloud(rng, rng.uniform_int(1, 40), 15);
    const auto pro = random_cloud(rng, rng.uniform_int(1, 300), 30);
    std::vector<IndexPair> internal, inter;
    for (std::size_t i = 0; i < pro.size(); ++i)
      for (std::size_t j = i + 1; j < pro.size(); ++j)
        if ((pro[i] - pro[j]).norm() <= 8.0)
          internal.emplace_back(i, j);
    for (std::size_t i = 0; i < lig.size(); ++i)
      for (std::size_t j = 0; j < pro.size(); ++j)
        if ((lig[i] - pro[j]).norm() <= 10.0)
          inter.emplace_back(i, j);
    auto got_internal = build_edges(pro, pro, kInternalCutoff, EdgeMode::kInternal);
    auto got_inter = build_edges(lig, pro, kInterfacialCutoff, EdgeMode::kInterfacial);
    std::sort(got_internal.begin(), got_internal.end());
    std::sort(got_inter.begin(), got_inter.end());
    mismatches += got_internal != internal;
    mismatches += got_inter != inter;
    edges += static_cast<int>(internal.size() + inter.size());

    const auto protein = ProteinGraph::build(std::vector<int>(pro.size(), 0), pro);
    const Vec3 center = pro[rng.uniform_int(0, static_cast<int>(pro.size()) - 1)]
                        + Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    std::vector<int> members;
    for (std::size_t j = 0; j < pro.size(); ++j)
      if ((pro[j] - center).norm() <= 20.0)
        members.push_back(static_cast<int>(j));
    try {
      mismatches += extract_pocket(protein, center).parent_indices != members;
    } catch (const EmptyPocketError &) {
      mismatches += !members.empty();
    }
  }
  return { mismatches == 0,
           fmt("100 instances, %d brute-force edges, %d mismatching sets (edges 8/10 A, pocket 20 A)",
               edges, mismatches) };
}

struct Trained {
  bool ready = false;
  ModelConfig config;
  checkpoint::Checkpoint ckpt;
  std::vector<ComplexRecord> data;
};

std::vector<ComplexRecord> overfit_data() {
  Rng rng(11);
  SyntheticSpec spec;
  std::vector<ComplexRecord> out;
  for (int i = 0; i < 5; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "complex_%04d", i);
    out.push_back(generate_synthetic_complex(spec, rng, name));
  }
  return out;
}

Outcome criterion_overfit(const std::string &config_path, Trained &trained) {
  const auto t0 = Clock::now();
  const KeyValueConfig cfg = KeyValueConfig::read_file(config_path);
  const ModelConfig mc = ModelConfig::from(cfg);
  const TrainConfig tc = TrainConfig::from(cfg);
  cfg.check_all_used();
  trained.data = overfit_data();
  Model model(mc);
  Trainer trainer(model, tc, trained.data, {});
  trainer.set_trace_enabled(false);
  trainer.run();
  const auto v = evaluate_model(model, trained.data);
  const double seconds = seconds_since(t0);
  trained.ready = true;
  trained.config = mc;
  trained.ckpt = model.save(nullptr);
  const bool pass = tc.max_steps > 0 && tc.max_steps <= 5000 && trainer.steps() <= 5000
                    && v.mean_rmsd < 1.0 && v.mean_dcc < 2.0 && seconds < 900;
  return { pass, fmt("%ld steps; mean RMSD %.3f A (tol 1.0), mean DCC %.3f A (tol 2.0), %.0fs "
                     "(budget 900s)",
                     trainer.steps(), v.mean_rmsd, v.mean_dcc, seconds) };
}

Outcome criterion_sampling() {
  Rng rng(606);
  const int n = 10000;
  int predicted = 0;
  for (int i = 0; i < n; ++i)
    predicted += choose_pocket_source(2, rng, TrainConfig{}.predicted_pocket_prob)
                 == PocketSource::kPredicted;
  int stage1 = 0;
  for (int i = 0; i < n; ++i)
    stage1 += choose_pocket_source(1, rng, 0.25) == PocketSource::kPredicted;
  const double f = static_cast<double>(predicted) / n;
  return { std::abs(f - 0.25) <= 0.02 && stage1 == 0,
           fmt("predicted fraction %.4f over %d stage-2 draws (0.25 +/- 0.02); stage 1 "
               "predicted %d",
               f, n, stage1) };
}

Outcome criterion_refinement(const std::string &config_path, Trained &trained) {
  if (!trained.ready)
    criterion_overfit(config_path, trained);
  const Model model = Model::load(trained.ckpt);
  const auto k8 = evaluate_model(model, trained.data, 8);
  const auto k1 = evaluate_model(model, trained.data, 1);
  const Model again = Model::load(trained.ckpt);
  bool identical = true;
  for (const auto &rec: trained.data) {
    const auto a = model.predict(rec.ligand, rec.protein);
    const auto b = again.predict(rec.ligand, rec.protein);
    const auto c = model.predict(rec.ligand, rec.protein);
    identical = identical && a.pose == b.pose && a.pose == c.pose;
  }
  return { k8.mean_rmsd <= k1.mean_rmsd && identical,
           fmt("mean RMSD k=8 %.3f A vs k=1 %.3f A; repeated predictions %s", k8.mean_rmsd,
               k1.mean_rmsd, identical ? "identical" : "DIFFER") };
}

Outcome criterion_gumbel_max() {
  Rng rng(808);
  const std::vector<double> p = { 0.9, 0.5, 0.3, 0.15, 0.05, 0.6 };
  const int n = static_cast<int>(p.size()), draws = 100000;
  std::vector<int> counts(n, 0);
  std::vector<double> g(n);
  const Tensor probs = Tensor::from(n, 1, p);
  for (int d = 0; d < draws; ++d) {
    for (auto &x: g)
      x = losses::sample_gumbel(rng);
    const Tensor w = gumbel_weights(probs, g, 1.0);
    const auto v = w.values();
    ++counts[std::max_element(v.begin(), v.end()) - v.begin()];
  }
  double total = 0, worst = 0;
  for (double x: p)
    total += x;
  for (int j = 0; j < n; ++j)
    worst = std::max(worst, std::abs(counts[j] / static_cast<double>(draws) - p[j] / total));
  return { worst < 0.01, fmt("%d residues, %d draws, max |freq - softmax(log p)| %.4f (tol 0.01)",
                             n, draws, worst) };
}

Outcome criterion_round_trips() {
  Rng rng(909);
  SyntheticSpec spec;
  int complex_fail = 0;
  for (int i = 0; i < 20; ++i) {
    const auto rec = generate_synthetic_complex(spec, rng, "rt" + std::to_string(i));
    const std::string text = render_complex(rec);
    const auto back = parse_complex(text);
    const bool same = render_complex(back) == text && back.truth == rec.truth
                      && back.ligand.coords == rec.ligand.coords
                      && back.protein.coords == rec.protein.coords
                      && back.pocket_labels == rec.pocket_labels
                      && back.ligand.atoms == rec.ligand.atoms
                      && back.ligand.bonds == rec.ligand.bonds
                      && back.protein.types == rec.protein.types;
    complex_fail += !same;
  }
  Model model(checks::toy_model_config());
  const auto data = [&] {
    std::vector<ComplexRecord> d;
    for (int i = 0; i < 2; ++i)
      d.push_back(checks::make_toy_complex(rng, 4, 8));
    return d;
  }();
  TrainConfig tc;
  tc.epochs = 2;
  tc.seed = 5;
  Trainer trainer(model, tc, data, {});
  trainer.run();
  const auto ckpt = trainer.save();
  const std::string bytes = checkpoint::encode(ckpt);
  const auto decoded = checkpoint::decode(bytes);
  const Model reloaded = Model::load(decoded);
  bool params_equal = reloaded.store().size() == model.store().size();
  for (std::size_t k = 0; params_equal && k < model.store().size(); ++k) {
    const auto &a = model.store().entries()[k].second, &b = reloaded.store().entries()[k].second;
    params_equal = std::equal(a.values().begin(), a.values().end(), b.values().begin(),
                              b.values().end(), [](double x, double y) {
                                return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
                              });
  }
  const bool ckpt_ok = decoded == ckpt && checkpoint::encode(decoded) == bytes && params_equal
                       && decoded.has_optimizer;
  return { complex_fail == 0 && ckpt_ok,
           fmt("20 complex files: %d mismatches; checkpoint (%zu bytes, optimizer state): %s",
               complex_fail, bytes.size(), ckpt_ok ? "bit-exact" : "MISMATCH") };
}

}  // namespace

int main(int argc, char **argv) {
  std::string config_path = FABIND_DESK_CONFIG;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc)
      config_path = argv[++i];
    else
      only.insert(std::stoi(a));
  }
  Trained trained;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
    { "equivariance", criterion_equivariance },
    { "gradients", criterion_gradients },
    { "formula oracles", criterion_formulas },
    { "edge/pocket oracles", criterion_edges },
    { "overfit proxy", [&] { return criterion_overfit(config_path, trained); } },
    { "scheduled sampling", criterion_sampling },
    { "refinement", [&] { return criterion_refinement(config_path, trained); } },
    { "gumbel-max identity", criterion_gumbel_max },
    { "round trips", criterion_round_trips },
  };
  int failed = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id))
      continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = { false, std::string("exception: ") + e.what() };
    }
    ++ran;
    failed += !o.pass;
    std::printf("[%s] criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
