//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/complex_graph.h"

#include <algorithm>
#include <set>

#include "fabind/rings.h"

namespace fabind {

LigandGraph LigandGraph::build(std::vector<AtomDescriptor> atoms,
                               std::vector<Vec3> coords,
                               std::vector<IndexPair> bonds) {
  LigandGraph g;
  g.atoms = std::move(atoms);
  g.coords = std::move(coords);
  for (auto [i, j]: bonds) {
    if (i > j)
      std::swap(i, j);
    g.bonds.emplace_back(i, j);
  }
  std::sort(g.bonds.begin(), g.bonds.end());
  g.bonds.erase(std::unique(g.bonds.begin(), g.bonds.end()), g.bonds.end());
  for (const auto &a: g.atoms)
    g.features.push_back(encode_ligand_features(a));

  if (g.coords.size() != g.atoms.size())
    throw GraphError("ligand has " + std::to_string(g.atoms.size())
                     + " atoms but " + std::to_string(g.coords.size())
                     + " coordinates");
  for (auto [i, j]: g.bonds)
    if (i == j || i < 0 || j >= g.size())
      throw GraphError("bond (" + std::to_string(i) + "," + std::to_string(j)
                       + ") references an invalid atom");

  g.rings = find_sssr(g.size(), g.bonds);
  g.ring_membership.assign(g.size(), {});
  for (int r = 0; r < static_cast<int>(g.rings.size()); ++r)
    for (int a: g.rings[r])
      g.ring_membership[a].push_back(r);
  g.validate();
  return g;
}

void LigandGraph::validate() const {
  if (size() < 2)
    throw GraphError("ligand needs at least 2 atoms");
  if (coords.size() != atoms.size() || features.size() != atoms.size()
      || ring_membership.size() != atoms.size())
    throw GraphError("ligand per-atom arrays disagree in length");
  for (const auto &f: features)
    if (f.size() != kLigandFeatureDim)
      throw GraphError("ligand feature vector is not 56-dimensional");
  std::set<IndexPair> bond_set;
  for (auto [i, j]: bonds) {
    if (!(0 <= i && i < j && j < size()))
      throw GraphError("malformed bond list");
    bond_set.insert({ i, j });
  }
  for (const auto &ring: rings)
    for (std::size_t k = 0; k < ring.size(); ++k) {
      int a = ring[k], b = ring[(k + 1) % ring.size()];
      if (a > b)
        std::swap(a, b);
      if (!bond_set.contains({ a, b }))
        throw GraphError("ring is not a cycle of the bond graph");
    }
  for (const auto &x: coords)
    if (!x.allFinite())
      throw GraphError("non-finite ligand coordinate");
}

ProteinGraph ProteinGraph::build(std::vector<int> types,
                                 std::vector<Vec3> coords, double cutoff) {
  ProteinGraph g;
  g.types = std::move(types);
  g.coords = std::move(coords);
  if (g.types.size() != g.coords.size())
    throw GraphError("protein types and coordinates disagree in length");
  g.edges = build_edges(g.coords, g.coords, cutoff, EdgeMode::kInternal);
  g.validate(cutoff);
  return g;
}

void ProteinGraph::validate(double cutoff) const {
  if (size() < 1)
    throw GraphError("protein needs at least one residue");
  for (int t: types)
    if (t < 0 || t >= kNumResidueTypes)
      throw GraphError("residue type out of range");
  for (const auto &x: coords)
    if (!x.allFinite())
      throw GraphError("non-finite residue coordinate");
  if (edges != kernels::serial::radius_pairs(coords, coords, cutoff,
                                             EdgeMode::kInternal))
    throw GraphError("protein edges disagree with the distance rule");
}

ComplexGraph ComplexGraph::build(LigandGraph ligand, ProteinGraph protein,
                                 bool global_nodes, double cutoff) {
  ComplexGraph c;
  c.interfacial_edges = build_edges(ligand.coords, protein.coords, cutoff,
                                    EdgeMode::kInterfacial);
  c.ligand = std::move(ligand);
  c.protein = std::move(protein);
  c.has_global_nodes = global_nodes;
  return c;
}

GlobalNodeEdges insert_global_nodes(const ComplexGraph &graph) {
  GlobalNodeEdges out;
  out.ligand = graph.ligand.bonds;
  out.protein = graph.protein.edges;
  out.ligand_global = graph.ligand.size();
  out.protein_global = graph.protein.size();
  for (int i = 0; i < graph.ligand.size(); ++i)
    out.ligand.emplace_back(i, out.ligand_global);
  for (int j = 0; j < graph.protein.size(); ++j)
    out.protein.emplace_back(j, out.protein_global);
  return out;
}

std::vector<IndexPair> build_edges(std::span<const Vec3> a,
                                   std::span<const Vec3> b, double cutoff,
                                   EdgeMode mode) {
  if (!(cutoff > 0))
    throw std::invalid_argument("edge cutoff must be positive");
  if (mode == EdgeMode::kInternal && a.data() != b.data()
      && a.size() != b.size())
    throw std::invalid_argument("internal edges need a single point set");
  return kernels::radius_pairs(a, b, cutoff, mode);
}

PocketSubgraph extract_pocket(const ProteinGraph &protein, const Vec3 &center,
                              double radius) {
  if (!(radius > 0))
    throw std::invalid_argument("pocket radius must be positive");
  PocketSubgraph p;
  p.center = center;
  p.radius = radius;
  p.parent_indices = kernels::within_sphere(protein.coords, center, radius);
  if (p.parent_indices.empty())
    throw EmptyPocketError("no residue within " + std::to_string(radius)
                           + " A of the pocket center");
  std::vector<int> types;
  std::vector<Vec3> coords;
  for (int j: p.parent_indices) {
    types.push_back(protein.types[j]);
    coords.push_back(protein.coords[j]);
  }
  p.graph = ProteinGraph::build(std::move(types), std::move(coords));
  return p;
}

std::vector<Vec3> translate_to(std::span<const Vec3> coords, const Vec3 &target) {
  const Vec3 shift = target - centroid(coords);
  std::vector<Vec3> out;
  out.reserve(coords.size());
  for (const auto &x: coords)
    out.push_back(x + shift);
  return out;
}

LigandGraph place_ligand_at(const LigandGraph &ligand, const Vec3 &target) {
  if (ligand.coords.empty())
    throw GraphError("cannot place an empty ligand");
  LigandGraph moved = ligand;
  moved.coords = translate_to(ligand.coords, target);
  return moved;
}

std::vector<IndexPair> local_structure_pairs(const LigandGraph &ligand) {
  const int n = ligand.size();
  std::vector<std::vector<int>> adj(n);
  for (auto [i, j]: ligand.bonds) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::set<IndexPair> pairs;
  auto add = [&pairs](int a, int b) {
    if (a != b)
      pairs.insert({ std::min(a, b), std::max(a, b) });
  };
  for (int i = 0; i < n; ++i)
    for (int k: adj[i]) {
      add(i, k);
      for (int l: adj[k])
        add(i, l);
    }
  for (const auto &ring: ligand.rings)
    for (std::size_t a = 0; a < ring.size(); ++a)
      for (std::size_t b = a + 1; b < ring.size(); ++b)
        add(ring[a], ring[b]);
  return { pairs.begin(), pairs.end() };
}

}  // namespace fabind
