//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_COMPLEX_GRAPH_H_
#define FABIND_COMPLEX_GRAPH_H_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fabind/features.h"
#include "fabind/geometry.h"
#include "fabind/kernels.h"

namespace fabind {

using kernels::EdgeMode;
using kernels::IndexPair;

inline constexpr double kInternalCutoff = 8.0;     // protein-protein, Å
inline constexpr double kInterfacialCutoff = 10.0; // ligand-protein, Å
inline constexpr double kPocketRadius = 20.0;      // Å

class GraphError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class EmptyPocketError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LigandGraph {
  std::vector<AtomDescriptor> atoms;
  std::vector<std::vector<double>> features;  // 56-dim, derived from atoms
  std::vector<Vec3> coords;
  std::vector<IndexPair> bonds;               // i < j, sorted, unique
  std::vector<std::vector<int>> rings;        // SSSR
  std::vector<std::vector<int>> ring_membership;

  // Normalizes the bond list, encodes features, perceives rings and checks
  // every invariant.
  static LigandGraph build(std::vector<AtomDescriptor> atoms,
                           std::vector<Vec3> coords,
                           std::vector<IndexPair> bonds);

  int size() const { return static_cast<int>(atoms.size()); }
  void validate() const;
};

struct ProteinGraph {
  std::vector<int> types;
  std::vector<Vec3> coords;     // C-alpha
  std::vector<IndexPair> edges; // distance <= internal cutoff, i < j

  static ProteinGraph build(std::vector<int> types, std::vector<Vec3> coords,
                            double cutoff = kInternalCutoff);

  int size() const { return static_cast<int>(types.size()); }
  void validate(double cutoff = kInternalCutoff) const;
};

struct ComplexGraph {
  LigandGraph ligand;
  ProteinGraph protein;
  std::vector<IndexPair> interfacial_edges;  // (atom, residue)
  bool has_global_nodes = false;

  static ComplexGraph build(LigandGraph ligand, ProteinGraph protein,
                            bool global_nodes,
                            double cutoff = kInterfacialCutoff);
};

// Edge lists after inserting one global node per component. The ligand
// global node is index n_ligand in the ligand list, the protein one index
// n_protein in the protein list; each joins every node of its component.
struct GlobalNodeEdges {
  std::vector<IndexPair> ligand;
  std::vector<IndexPair> protein;
  int ligand_global = 0;
  int protein_global = 0;
  // The two global nodes are also linked to each other.
  int cross_links = 1;
};

GlobalNodeEdges insert_global_nodes(const ComplexGraph &graph);

struct PocketSubgraph {
  std::vector<int> parent_indices;
  Vec3 center = Vec3::Zero();
  double radius = kPocketRadius;
  ProteinGraph graph;  // residues in parent order, edges rebuilt
};

std::vector<IndexPair> build_edges(std::span<const Vec3> a,
                                   std::span<const Vec3> b, double cutoff,
                                   EdgeMode mode);

// Residues within radius of center. Throws EmptyPocketError if none.
PocketSubgraph extract_pocket(const ProteinGraph &protein, const Vec3 &center,
                              double radius = kPocketRadius);

// Rigid translation moving the centroid onto target.
LigandGraph place_ligand_at(const LigandGraph &ligand, const Vec3 &target);
std::vector<Vec3> translate_to(std::span<const Vec3> coords, const Vec3 &target);

// Atom pairs (i < j) constrained by the local-structure penalty: 1-hop and
// 2-hop bond neighbours plus every pair sharing a ring.
std::vector<IndexPair> local_structure_pairs(const LigandGraph &ligand);

}  // namespace fabind

#endif  // FABIND_COMPLEX_GRAPH_H_
