//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fabind/complex_io.h"
#include "fabind/kernels.h"
#include "fabind/rings.h"
#include "fabind/synthetic.h"

using namespace fabind;

namespace {

std::vector<Vec3> random_points(Rng &rng, int n, double box) {
  std::vector<Vec3> v(n);
  for (auto &p: v)
    p = Vec3(rng.uniform(0, box), rng.uniform(0, box), rng.uniform(0, box));
  return v;
}

AtomDescriptor carbon(int degree, bool aromatic = false) {
  AtomDescriptor a;
  a.element = "C";
  a.degree = degree;
  a.aromatic = aromatic;
  a.h_count = 4 - degree - (aromatic ? 1 : 0);
  a.valence = 4;
  return a;
}

LigandGraph benzene() {
  std::vector<AtomDescriptor> atoms;
  std::vector<Vec3> xs;
  std::vector<IndexPair> bonds;
  for (int k = 0; k < 6; ++k) {
    atoms.push_back(carbon(2, true));
    const double t = k * std::numbers::pi / 3;
    xs.emplace_back(1.4 * std::cos(t), 1.4 * std::sin(t), 0);
    bonds.emplace_back(k, (k + 1) % 6);
  }
  return LigandGraph::build(atoms, xs, bonds);
}

}  // namespace

TEST(Kernels, ParallelMatmulIsBitIdenticalToSerial) {
  Rng rng(1);
  const int m = 67, k = 45, n = 39;
  std::vector<double> a(m * k), b(k * n), bt(n * k), at(k * m);
  for (auto *v: { &a, &b, &bt, &at })
    for (auto &x: *v)
      x = rng.uniform(-1, 1);
  std::vector<double> c1(m * n), c2(m * n);
  kernels::matmul(a, b, c1, m, k, n);
  kernels::serial::matmul(a, b, c2, m, k, n);
  EXPECT_EQ(c1, c2);
  kernels::matmul_nt(a, bt, c1, m, k, n);
  kernels::serial::matmul_nt(a, bt, c2, m, k, n);
  EXPECT_EQ(c1, c2);
  kernels::matmul_tn(at, b, c1, m, k, n);
  kernels::serial::matmul_tn(at, b, c2, m, k, n);
  EXPECT_EQ(c1, c2);
}

TEST(Kernels, RadiusPairsMatchBruteForce) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_points(rng, rng.uniform_int(1, 60), 30);
    const auto b = random_points(rng, rng.uniform_int(1, 60), 30);
    const double cutoff = t % 2 ? kInternalCutoff : kInterfacialCutoff;
    std::vector<IndexPair> internal, cross;
    for (int i = 0; i < static_cast<int>(a.size()); ++i) {
      for (int j = i + 1; j < static_cast<int>(a.size()); ++j)
        if ((a[i] - a[j]).norm() <= cutoff)
          internal.emplace_back(i, j);
      for (int j = 0; j < static_cast<int>(b.size()); ++j)
        if ((a[i] - b[j]).norm() <= cutoff)
          cross.emplace_back(i, j);
    }
    EXPECT_EQ(kernels::radius_pairs(a, a, cutoff, EdgeMode::kInternal), internal);
    EXPECT_EQ(kernels::radius_pairs(a, b, cutoff, EdgeMode::kInterfacial), cross);
    EXPECT_EQ(kernels::serial::radius_pairs(a, b, cutoff, EdgeMode::kInterfacial), cross);
  }
}

TEST(Kernels, CutoffBoundaryIsInclusive) {
  const std::vector<Vec3> a = { Vec3(0, 0, 0) };
  const std::vector<Vec3> b = { Vec3(8, 0, 0), Vec3(0, 8.000001, 0) };
  const auto e = kernels::radius_pairs(a, b, 8.0, EdgeMode::kInterfacial);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], IndexPair(0, 0));
}

TEST(Features, LayoutAndOneHots) {
  AtomDescriptor a{ "N", 3, 1, 4, 1, true };
  const auto f = encode_ligand_features(a);
  ASSERT_EQ(f.size(), 56u);
  double total = 0;
  for (double v: f)
    total += v;
  EXPECT_DOUBLE_EQ(total, 6.0);
  EXPECT_EQ(f[3], 1.0);        // N is the fourth element
  EXPECT_EQ(f[34 + 3], 1.0);   // degree 3
  EXPECT_EQ(f[40 + 1], 1.0);   // one hydrogen
  EXPECT_EQ(f[45 + 4], 1.0);   // valence 4
  EXPECT_EQ(f[51 + 2], 1.0);   // charge +1
  EXPECT_EQ(f[54 + 1], 1.0);   // aromatic
}

TEST(Features, UnknownElementRejected) {
  AtomDescriptor a{ "Xx", 1, 0, 1, 0, false };
  EXPECT_THROW(encode_ligand_features(a), FeatureError);
}

TEST(Features, ResidueCodes) {
  EXPECT_EQ(residue_type_from_code("GLY"), 7);
  EXPECT_EQ(residue_type_from_code("XYZ"), kUnknownResidue);
  for (int t = 0; t < kNumResidueTypes; ++t)
    EXPECT_EQ(residue_type_from_code(residue_code(t)), t);
}

TEST(Rings, BenzeneAndFusedRings) {
  EXPECT_EQ(find_sssr(6, { { 0, 1 }, { 1, 2 }, { 2, 3 }, { 3, 4 }, { 4, 5 }, { 0, 5 } }).size(), 1u);
  // Naphthalene: two six-rings sharing the 0-5 bond.
  std::vector<IndexPair> e = { { 0, 1 }, { 1, 2 }, { 2, 3 }, { 3, 4 }, { 4, 5 }, { 0, 5 },
                               { 5, 6 }, { 6, 7 }, { 7, 8 }, { 8, 9 }, { 0, 9 } };
  const auto rings = find_sssr(10, e);
  ASSERT_EQ(rings.size(), 2u);
  EXPECT_EQ(rings[0].size(), 6u);
  EXPECT_EQ(rings[1].size(), 6u);
  EXPECT_TRUE(find_sssr(4, { { 0, 1 }, { 1, 2 }, { 2, 3 } }).empty());
}

TEST(LigandGraph, LocalStructurePairsForBenzeneCoverRing) {
  const auto pairs = local_structure_pairs(benzene());
  EXPECT_EQ(pairs.size(), 15u);
}

TEST(LigandGraph, ChainLocalPairs) {
  const auto g = LigandGraph::build({ carbon(1), carbon(2), carbon(1) },
                                    { Vec3(0, 0, 0), Vec3(1.5, 0, 0), Vec3(3, 0, 0) },
                                    { { 0, 1 }, { 1, 2 } });
  const std::vector<IndexPair> expect = { { 0, 1 }, { 0, 2 }, { 1, 2 } };
  EXPECT_EQ(local_structure_pairs(g), expect);
}

TEST(LigandGraph, InvalidInputsRejected) {
  EXPECT_THROW(LigandGraph::build({ carbon(1), carbon(1) }, { Vec3::Zero() }, { { 0, 1 } }),
               GraphError);
  EXPECT_THROW(LigandGraph::build({ carbon(1), carbon(1) }, { Vec3::Zero(), Vec3::Ones() },
                                  { { 0, 2 } }),
               GraphError);
}

TEST(ProteinGraph, EdgesFollowCutoffAndGlobalNodesLinkEverything) {
  Rng rng(3);
  const auto coords = random_points(rng, 30, 25);
  const auto p = ProteinGraph::build(std::vector<int>(30, 0), coords);
  for (auto [i, j]: p.edges)
    EXPECT_LE((coords[i] - coords[j]).norm(), kInternalCutoff);
  const auto c = ComplexGraph::build(benzene(), p, true);
  const auto g = insert_global_nodes(c);
  EXPECT_EQ(g.ligand.size(), c.ligand.bonds.size() + 6);
  EXPECT_EQ(g.protein.size(), p.edges.size() + 30);
  EXPECT_EQ(g.cross_links, 1);
}

TEST(Pocket, ExtractionMatchesBruteForceSphere) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto coords = random_points(rng, rng.uniform_int(5, 80), 50);
    const auto p = ProteinGraph::build(std::vector<int>(coords.size(), 1), coords);
    const Vec3 center = coords[rng.uniform_int(0, static_cast<int>(coords.size()) - 1)]
                        + Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    std::vector<int> expect;
    for (int j = 0; j < p.size(); ++j)
      if ((coords[j] - center).norm() <= kPocketRadius)
        expect.push_back(j);
    if (expect.empty()) {
      EXPECT_THROW(extract_pocket(p, center), EmptyPocketError);
      continue;
    }
    const auto pocket = extract_pocket(p, center);
    EXPECT_EQ(pocket.parent_indices, expect);
    EXPECT_NO_THROW(pocket.graph.validate());
  }
}

TEST(Pocket, EmptySphereIsAnError) {
  const auto p = ProteinGraph::build({ 0 }, { Vec3(0, 0, 0) });
  EXPECT_THROW(extract_pocket(p, Vec3(100, 0, 0)), EmptyPocketError);
}

TEST(ComplexIo, RoundTripIsBitExact) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto r = generate_synthetic_complex({}, rng, "c" + std::to_string(t));
    const std::string text = render_complex(r);
    const auto back = parse_complex(text);
    EXPECT_EQ(render_complex(back), text);
    EXPECT_EQ(back.ligand.coords, r.ligand.coords);
    EXPECT_EQ(back.truth, r.truth);
    EXPECT_EQ(back.protein.coords, r.protein.coords);
    EXPECT_EQ(back.ligand.atoms, r.ligand.atoms);
    EXPECT_EQ(back.pocket_labels, r.pocket_labels);
  }
}

TEST(ComplexIo, MalformedFilesRejected) {
  Rng rng(6);
  const std::string text = render_complex(generate_synthetic_complex({}, rng, "x"));
  EXPECT_THROW(parse_complex(text.substr(0, text.find("RESIDUES"))), std::exception);
  std::string bad = text;
  bad.replace(bad.find("LIGAND_BONDS\n") + 13, 1, "9");
  EXPECT_THROW(parse_complex(bad), std::exception);
  EXPECT_THROW(parse_complex("LIGAND_ATOMS\n0,C,1,0,1,0,0,abc,0,0\n"), std::exception);
}

TEST(ComplexIo, PoseRoundTrip) {
  const std::vector<Vec3> pose = { Vec3(1.25, -0.000001, 3), Vec3(-7.123456, 0, 1e-6) };
  EXPECT_EQ(parse_pose(render_pose(pose)), pose);
}
