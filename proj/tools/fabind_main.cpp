//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

// Command-line entry point. Exit codes: 0 success, 1 checks failed,
// 2 I/O or configuration error, 3 numerical abort.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fabind/checks.h"
#include "fabind/metrics.h"
#include "fabind/synthetic.h"
#include "fabind/training.h"

namespace fs = std::filesystem;
using namespace fabind;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kIoError = 2;
constexpr int kNumerical = 3;

class IoError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw IoError("cannot write '" + path + "'");
}

std::vector<fs::path> complex_files(const std::string &dir) {
  if (!fs::is_directory(dir))
    throw IoError("'" + dir + "' is not a directory");
  std::vector<fs::path> out;
  for (const auto &e: fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".complex")
      out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ComplexRecord> load_dir(const std::string &dir) {
  std::vector<ComplexRecord> out;
  for (const auto &p: complex_files(dir))
    out.push_back(read_complex_file(p.string()));
  return out;
}

std::string xyz(const Vec3 &v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", v.x(), v.y(), v.z());
  return buf;
}

Vec3 parse_xyz(const std::string &s) {
  Vec3 v;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v.x(), &v.y(), &v.z()) != 3)
    throw IoError("malformed coordinate triple '" + s + "'");
  return v;
}

int print_checks(const std::vector<checks::CheckLine> &lines) {
  bool ok = true;
  for (const auto &l: lines) {
    std::printf("%-4s %-40s value=%.3e tol=%.0e\n", l.pass ? "PASS" : "FAIL",
                l.name.c_str(), l.value, l.tolerance);
    ok = ok && l.pass;
  }
  return ok ? kOk : kCheckFailed;
}

// gen-data ----------------------------------------------------------------

struct GenOptions {
  std::string out;
  int count = 10;
  std::uint64_t seed = 0;
  SyntheticSpec spec;
};

int run_gen_data(const GenOptions &o) {
  o.spec.validate();
  fs::create_directories(o.out);
  Rng rng(o.seed);
  for (int i = 0; i < o.count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "complex_%04d", i);
    const ComplexRecord r = generate_synthetic_complex(o.spec, rng, name);
    write_complex_file((fs::path(o.out) / (std::string(name) + ".complex")).string(), r);
  }
  std::printf("wrote %d complexes to %s\n", o.count, o.out.c_str());
  return kOk;
}

// train -------------------------------------------------------------------

struct TrainOptions {
  std::string config, train_dir, val_dir, checkpoint, log, resume;
};

int run_train(const TrainOptions &o) {
  const KeyValueConfig cfg = KeyValueConfig::read_file(o.config);
  const ModelConfig mc = ModelConfig::from(cfg);
  const TrainConfig tc = TrainConfig::from(cfg);
  cfg.check_all_used();

  auto train = load_dir(o.train_dir);
  if (train.empty())
    throw IoError("no .complex files in '" + o.train_dir + "'");
  auto val = o.val_dir.empty() ? std::vector<ComplexRecord>{} : load_dir(o.val_dir);

  Model model = o.resume.empty() ? Model(mc) : Model::load(checkpoint::read_file(o.resume));
  Trainer trainer(model, tc, std::move(train), std::move(val));
  trainer.set_trace_enabled(false);
  if (!o.resume.empty())
    trainer.load(checkpoint::read_file(o.resume));

  std::ofstream log;
  if (!o.log.empty()) {
    log.open(o.log);
    if (!log)
      throw IoError("cannot write '" + o.log + "'");
    log << epoch_csv_header() << '\n';
  }
  std::printf("%s\n", epoch_csv_header().c_str());
  trainer.run([&](const EpochRecord &r) {
    const std::string row = epoch_csv_row(r);
    std::printf("%s\n", row.c_str());
    std::fflush(stdout);
    if (log)
      log << row << '\n' << std::flush;
    checkpoint::write_file(o.checkpoint, trainer.save());
  });
  checkpoint::write_file(o.checkpoint, trainer.save());
  std::printf("checkpoint written to %s after %ld steps\n", o.checkpoint.c_str(),
              trainer.steps());
  return kOk;
}

// predict -----------------------------------------------------------------

struct PredictOptions {
  std::string checkpoint, complex, out;
  bool pocket_only = false;
  int iterations = -1;
};

std::string pocket_report(const ComplexRecord &rec, const Prediction &p) {
  std::ostringstream os;
  os << "name=" << rec.name << '\n';
  os << "pocket_center=" << xyz(p.pocket.decided_center) << '\n';
  os << "pocket_source=" << (p.pocket.positive.empty() ? "gumbel" : "classified") << '\n';
  os << "pocket_residues=" << p.pocket_subgraph.parent_indices.size() << '\n';
  os << "dcc=" << metrics::dcc(p.pocket.decided_center, rec.native_pocket_center()) << '\n';
  return os.str();
}

std::string pose_report(const ComplexRecord &rec, const Prediction &p) {
  std::ostringstream os;
  os << pocket_report(rec, p);
  os << "iterations=" << p.docking.iterations << '\n';
  os << "rmsd=" << metrics::ligand_rmsd(p.pose, rec.truth) << '\n';
  os << "centroid_distance=" << metrics::centroid_distance(p.pose, rec.truth) << '\n';
  return os.str();
}

std::string probability_table(const Prediction &p) {
  std::ostringstream os;
  os << "RESIDUE_PROBABILITIES\n";
  for (int j = 0; j < p.pocket.probs.rows(); ++j) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%d,%.6f\n", j, p.pocket.probs(j, 0));
    os << buf;
  }
  return os.str();
}

int run_predict(const PredictOptions &o) {
  if (!fs::exists(o.checkpoint))
    throw IoError("checkpoint '" + o.checkpoint + "' does not exist");
  const Model model = Model::load(checkpoint::read_file(o.checkpoint));
  const bool batch = fs::is_directory(o.complex);
  std::vector<fs::path> inputs = batch ? complex_files(o.complex)
                                       : std::vector<fs::path>{ o.complex };
  if (batch) {
    if (o.out.empty())
      throw IoError("--out must name a directory when --complex is a directory");
    fs::create_directories(o.out);
  }
  for (const auto &path: inputs) {
    const ComplexRecord rec = read_complex_file(path.string());
    const Prediction p = model.predict(rec.ligand, rec.protein, o.iterations,
                                       o.pocket_only);
    const std::string body = o.pocket_only ? probability_table(p) : render_pose(p.pose);
    const std::string report = o.pocket_only ? pocket_report(rec, p) : pose_report(rec, p);
    if (batch) {
      const fs::path stem = fs::path(o.out) / path.stem();
      write_text(stem.string() + (o.pocket_only ? ".pocket" : ".pose"), body);
      write_text(stem.string() + ".report", report);
    } else if (!o.out.empty()) {
      write_text(o.out, body);
      write_text(o.out + ".report", report);
    } else {
      std::cout << body << report;
    }
  }
  if (batch)
    std::printf("predicted %zu complexes into %s\n", inputs.size(), o.out.c_str());
  return kOk;
}

// eval --------------------------------------------------------------------

struct EvalOptions {
  std::string pred, truth, csv;
};

int run_eval(const EvalOptions &o) {
  const auto truths = complex_files(o.truth);
  if (truths.empty())
    throw IoError("no .complex files in '" + o.truth + "'");
  std::vector<metrics::ComplexMetrics> rows(truths.size());
  std::vector<std::string> errors(truths.size());
  // Per-complex work is independent; rows keep input order.
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < truths.size(); ++i) {
    try {
      const ComplexRecord rec = read_complex_file(truths[i].string());
      const fs::path stem = fs::path(o.pred) / truths[i].stem();
      const auto pose = parse_pose(read_text(stem.string() + ".pose"));
      metrics::ComplexMetrics m;
      m.name = rec.name.empty() ? truths[i].stem().string() : rec.name;
      m.rmsd = metrics::ligand_rmsd(pose, rec.truth);
      m.centroid = metrics::centroid_distance(pose, rec.truth);
      if (fs::exists(stem.string() + ".report")) {
        std::istringstream rep(read_text(stem.string() + ".report"));
        for (std::string line; std::getline(rep, line);)
          if (line.rfind("pocket_center=", 0) == 0)
            m.dcc = metrics::dcc(parse_xyz(line.substr(14)), rec.native_pocket_center());
      }
      rows[i] = m;
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  }
  for (const auto &e: errors)
    if (!e.empty())
      throw IoError(e);
  const auto report = metrics::metric_table(std::move(rows));
  std::cout << metrics::render_table(report);
  const std::string csv = o.csv.empty() ? (fs::path(o.pred) / "metrics.csv").string() : o.csv;
  write_text(csv, metrics::render_csv(report));
  std::printf("per-complex metrics written to %s\n", csv.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{ "fabind: pocket prediction and docking on protein-ligand complexes" };
  app.require_subcommand(1);

  GenOptions gen;
  auto *gen_cmd = app.add_subcommand("gen-data", "Write synthetic complex files");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--count", gen.count, "Number of complexes")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--min-residues", gen.spec.min_residues);
  gen_cmd->add_option("--max-residues", gen.spec.max_residues);
  gen_cmd->add_option("--min-atoms", gen.spec.min_atoms);
  gen_cmd->add_option("--max-atoms", gen.spec.max_atoms);
  gen_cmd->add_option("--ring-prob", gen.spec.ring_probability);
  gen_cmd->add_option("--noise", gen.spec.conformer_noise, "Conformer noise in Å");

  TrainOptions tr;
  auto *train_cmd = app.add_subcommand("train", "Two-stage training");
  train_cmd->add_option("--config", tr.config, "key=value config file")->required();
  train_cmd->add_option("--train", tr.train_dir, "Training complexes")->required();
  train_cmd->add_option("--val", tr.val_dir, "Validation complexes (default: training set)");
  train_cmd->add_option("--checkpoint", tr.checkpoint, "Checkpoint output path")->required();
  train_cmd->add_option("--log", tr.log, "Per-epoch CSV log");
  train_cmd->add_option("--resume", tr.resume, "Resume from a checkpoint");

  PredictOptions pr;
  auto *pred_cmd = app.add_subcommand("predict", "Pocket prediction and docking");
  pred_cmd->add_option("--checkpoint", pr.checkpoint)->required();
  pred_cmd->add_option("--complex", pr.complex, "Complex file or directory")->required();
  pred_cmd->add_option("--out", pr.out, "Output file (directory in batch mode)");
  pred_cmd->add_flag("--pocket-only", pr.pocket_only, "Stop after the pocket stage");
  pred_cmd->add_option("--iterations", pr.iterations, "Refinement iterations")
      ->check(CLI::PositiveNumber);

  EvalOptions ev;
  auto *eval_cmd = app.add_subcommand("eval", "Metric table for predicted poses");
  eval_cmd->add_option("--pred", ev.pred, "Directory of .pose/.report files")->required();
  eval_cmd->add_option("--truth", ev.truth, "Directory of .complex files")->required();
  eval_cmd->add_option("--csv", ev.csv, "CSV output (default <pred>/metrics.csv)");

  std::uint64_t grad_seed = 0;
  bool inject_fault = false;
  auto *grad_cmd = app.add_subcommand("grad-check", "Finite-difference gradient checks");
  grad_cmd->add_option("--seed", grad_seed);
  grad_cmd->add_flag("--inject-fault", inject_fault, "Add a case with a wrong derivative");

  std::uint64_t equiv_seed = 0;
  int trials = 20;
  auto *equiv_cmd = app.add_subcommand("equiv-check", "E(3) equivariance checks");
  equiv_cmd->add_option("--seed", equiv_seed);
  equiv_cmd->add_option("--trials", trials)->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kIoError;
  }

  try {
    if (*gen_cmd)
      return run_gen_data(gen);
    if (*train_cmd)
      return run_train(tr);
    if (*pred_cmd)
      return run_predict(pr);
    if (*eval_cmd)
      return run_eval(ev);
    if (*grad_cmd)
      return print_checks(checks::gradient_suite(grad_seed, inject_fault));
    if (*equiv_cmd) {
      if (trials == 0) {
        std::fprintf(stderr, "warning: zero trials, nothing checked\n");
        return kOk;
      }
      return print_checks(checks::equivariance_suite(equiv_seed, trials));
    }
  } catch (const NumericalError &e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoError;
  }
  return kOk;
}
