//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_COMPLEX_IO_H_
#define FABIND_COMPLEX_IO_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "fabind/complex_graph.h"

// Text complex format. One document per complex; '#' starts a comment line,
// fields are comma separated, coordinates carry 6 decimals:
//
//   LIGAND_ATOMS    index,element,degree,h_count,valence,charge,aromatic,x,y,z
//   LIGAND_BONDS    i,j
//   RESIDUES        index,aa_code,x,y,z
//   POCKET_LABELS   index,label           (label 0 or 1, one per residue)
//   LIGAND_TRUTH    index,x,y,z
//
// LIGAND_ATOMS coordinates are the input conformer; LIGAND_TRUTH is the bound
// pose. A pose file written by the predictor is a document holding only a
// LIGAND_TRUTH section.
namespace fabind {

class ParseError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ComplexRecord {
  std::string name;
  LigandGraph ligand;     // coords = input conformer
  ProteinGraph protein;
  std::vector<int> pocket_labels;
  std::vector<Vec3> truth;

  // Mean C-alpha of residues labelled as pocket.
  Vec3 native_pocket_center() const;
  void validate() const;
};

std::string render_complex(const ComplexRecord &record);
ComplexRecord parse_complex(const std::string &text);

ComplexRecord read_complex_file(const std::string &path);
void write_complex_file(const std::string &path, const ComplexRecord &record);

std::string render_pose(const std::vector<Vec3> &coords);
std::vector<Vec3> parse_pose(const std::string &text);

// Rounds to the printed precision, so parse(render(x)) == x holds bitwise.
double quantize_coordinate(double v);
Vec3 quantize(const Vec3 &v);

}  // namespace fabind

#endif  // FABIND_COMPLEX_IO_H_
