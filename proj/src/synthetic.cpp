//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/synthetic.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fabind {

namespace {

constexpr double kBond = 1.5;
constexpr double kAtomClash = 1.2;
constexpr double kStep = 3.8;
constexpr double kResidueClash = 4.0;
constexpr double kLigandClash = 4.0;

Vec3 random_unit(Rng &rng) {
  for (;;) {
    Vec3 v(rng.normal(), rng.normal(), rng.normal());
    const double n = v.norm();
    if (n > 1e-6)
      return v / n;
  }
}

int max_degree(const std::string &element) {
  if (element == "O")
    return 2;
  if (element == "N")
    return 3;
  return 4;
}

int typical_valence(const std::string &element) {
  if (element == "O")
    return 2;
  if (element == "N")
    return 3;
  return 4;
}

struct RawLigand {
  std::vector<std::string> elements;
  std::vector<Vec3> coords;
  std::vector<IndexPair> bonds;
  std::vector<bool> aromatic;
};

RawLigand random_ligand(const SyntheticSpec &spec, Rng &rng) {
  const int n = rng.uniform_int(spec.min_atoms, spec.max_atoms);
  for (;;) {
    RawLigand lig;
    std::vector<int> degree;
    if (n >= 6 && rng.uniform() < spec.ring_probability) {
      for (int k = 0; k < 6; ++k) {
        const double t = k * std::numbers::pi / 3.0;
        lig.elements.push_back("C");
        lig.coords.emplace_back(kBond * std::cos(t), kBond * std::sin(t), 0.0);
        lig.aromatic.push_back(true);
        lig.bonds.emplace_back(std::min(k, (k + 1) % 6), std::max(k, (k + 1) % 6));
        degree.push_back(2);
      }
    } else {
      lig.elements.push_back("C");
      lig.coords.emplace_back(0.0, 0.0, 0.0);
      lig.aromatic.push_back(false);
      degree.push_back(0);
    }
    bool stuck = false;
    while (static_cast<int>(lig.elements.size()) < n && !stuck) {
      const double u = rng.uniform();
      const std::string element = u < 0.7 ? "C" : (u < 0.85 ? "N" : "O");
      bool placed = false;
      for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
        const int parent = rng.uniform_int(0, static_cast<int>(lig.elements.size()) - 1);
        if (degree[parent] >= std::min(3, max_degree(lig.elements[parent])))
          continue;
        const Vec3 x = lig.coords[parent] + kBond * random_unit(rng);
        bool clash = false;
        for (std::size_t a = 0; a < lig.coords.size() && !clash; ++a)
          clash = static_cast<int>(a) != parent && (lig.coords[a] - x).norm() < kAtomClash * 1.5;
        if (clash)
          continue;
        const int idx = static_cast<int>(lig.elements.size());
        lig.elements.push_back(element);
        lig.coords.push_back(x);
        lig.aromatic.push_back(false);
        lig.bonds.emplace_back(parent, idx);
        degree.push_back(1);
        ++degree[parent];
        placed = true;
      }
      stuck = !placed;
    }
    if (!stuck)
      return lig;
  }
}

std::vector<AtomDescriptor> describe(const RawLigand &lig) {
  std::vector<int> degree(lig.elements.size(), 0);
  for (auto [i, j]: lig.bonds) {
    ++degree[i];
    ++degree[j];
  }
  std::vector<AtomDescriptor> atoms;
  for (std::size_t i = 0; i < lig.elements.size(); ++i) {
    AtomDescriptor a;
    a.element = lig.elements[i];
    a.degree = degree[i];
    a.aromatic = lig.aromatic[i];
    const int bonds_used = degree[i] + (a.aromatic ? 1 : 0);
    a.h_count = std::max(0, typical_valence(a.element) - bonds_used);
    a.valence = bonds_used + a.h_count;
    atoms.push_back(a);
  }
  return atoms;
}

bool residue_walk(int n, double radius, const std::vector<Vec3> &ligand,
                  Rng &rng, std::vector<Vec3> &out) {
  out.clear();
  auto admissible = [&](const Vec3 &x, std::size_t skip_last) {
    if (x.norm() > radius)
      return false;
    for (const auto &a: ligand)
      if ((a - x).norm() < kLigandClash)
        return false;
    for (std::size_t r = 0; r + skip_last < out.size(); ++r)
      if ((out[r] - x).norm() < kResidueClash)
        return false;
    return true;
  };
  for (int attempt = 0; attempt < 200 && out.empty(); ++attempt) {
    const Vec3 x = radius * rng.uniform() * random_unit(rng);
    if (admissible(x, 0))
      out.push_back(x);
  }
  while (!out.empty() && static_cast<int>(out.size()) < n) {
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      const Vec3 x = out.back() + kStep * random_unit(rng);
      if (admissible(x, 1)) {
        out.push_back(x);
        placed = true;
      }
    }
    if (!placed)
      return false;
  }
  return static_cast<int>(out.size()) == n;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (min_residues < 1 || max_residues < min_residues)
    throw std::invalid_argument("invalid residue count range");
  if (min_atoms < 2 || max_atoms < min_atoms)
    throw std::invalid_argument("invalid ligand atom count range");
  if (!(ring_probability >= 0 && ring_probability <= 1))
    throw std::invalid_argument("ring probability must lie in [0, 1]");
  if (!(site_depth >= 0 && site_depth < 1) || !(conformer_noise >= 0))
    throw std::invalid_argument("invalid site depth or conformer noise");
}

std::vector<int> pocket_labels_for(const ProteinGraph &protein,
                                   const std::vector<Vec3> &ligand_truth,
                                   double radius) {
  const Vec3 c = centroid(ligand_truth);
  std::vector<int> labels(protein.size(), 0);
  for (int j = 0; j < protein.size(); ++j)
    labels[j] = (protein.coords[j] - c).norm() <= radius ? 1 : 0;
  return labels;
}

ComplexRecord generate_synthetic_complex(const SyntheticSpec &spec, Rng &rng,
                                         const std::string &name) {
  spec.validate();
  const int n_res = rng.uniform_int(spec.min_residues, spec.max_residues);
  double radius = 1.15 * kStep * std::cbrt(static_cast<double>(n_res)) + 4.0;

  for (;;) {
    RawLigand lig = random_ligand(spec, rng);
    const Mat3 rot = random_orthogonal(rng, false);
    const Vec3 site = spec.site_depth * radius * random_unit(rng);
    const Vec3 c0 = centroid(lig.coords);
    std::vector<Vec3> truth;
    for (const auto &x: lig.coords)
      truth.push_back(quantize(Vec3(rot * (x - c0) + site)));

    std::vector<Vec3> residues;
    bool ok = false;
    for (int attempt = 0; attempt < 20 && !ok; ++attempt)
      ok = residue_walk(n_res, radius, truth, rng, residues);
    if (!ok) {
      radius *= 1.1;
      continue;
    }
    for (auto &x: residues)
      x = quantize(x);

    std::vector<int> types(n_res);
    for (auto &t: types)
      t = rng.uniform_int(0, kNumResidueTypes - 2);

    const RigidMotion motion = random_rigid_motion(rng, false);
    std::vector<Vec3> conformer;
    for (const auto &x: truth) {
      const Vec3 noisy = x + spec.conformer_noise
                                 * Vec3(rng.normal(), rng.normal(), rng.normal());
      conformer.push_back(quantize(motion.apply(noisy)));
    }

    ComplexRecord r;
    r.name = name;
    r.ligand = LigandGraph::build(describe(lig), conformer, lig.bonds);
    r.protein = ProteinGraph::build(std::move(types), std::move(residues));
    r.truth = truth;
    r.pocket_labels = pocket_labels_for(r.protein, truth);
    bool any = false;
    for (int l: r.pocket_labels)
      any = any || l == 1;
    if (!any)
      continue;
    r.validate();
    return r;
  }
}

}  // namespace fabind
