//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/complex_io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fabind {
namespace {

std::string fmt_coord(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  // Never emit "-0.000000"; it parses back to -0.0 which is not bit-equal.
  if (std::string_view(buf).find_first_not_of("-0.") == std::string_view::npos)
    return "0.000000";
  return buf;
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ','))
    out.push_back(field);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string &s, int line) {
  int v = 0;
  const auto t = trim(s);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ParseError("line " + std::to_string(line) + ": expected integer, got '"
                     + s + "'");
  return v;
}

double to_double(const std::string &s, int line) {
  const auto t = trim(s);
  double v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ParseError("line " + std::to_string(line) + ": expected number, got '"
                     + s + "'");
  return v;
}

void expect_fields(const std::vector<std::string> &f, std::size_t n,
                   const std::string &section, int line) {
  if (f.size() != n)
    throw ParseError("line " + std::to_string(line) + ": " + section
                     + " rows need " + std::to_string(n) + " fields, got "
                     + std::to_string(f.size()));
}

void expect_index(int got, std::size_t want, const std::string &section,
                  int line) {
  if (got != static_cast<int>(want))
    throw ParseError("line " + std::to_string(line) + ": " + section
                     + " index " + std::to_string(got) + " out of sequence");
}

// Section name -> rows of (line number, fields).
using Sections = std::map<std::string, std::vector<std::pair<int, std::vector<std::string>>>>;

Sections split_sections(const std::string &text) {
  static const std::set<std::string> known = { "LIGAND_ATOMS", "LIGAND_BONDS",
                                               "RESIDUES", "POCKET_LABELS",
                                               "LIGAND_TRUTH" };
  Sections sections;
  std::string current;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#')
      continue;
    if (line.find(',') == std::string::npos && known.contains(line)) {
      current = line;
      if (sections.contains(current))
        throw ParseError("line " + std::to_string(lineno) + ": duplicate section "
                         + current);
      sections[current];
      continue;
    }
    if (current.empty())
      throw ParseError("line " + std::to_string(lineno)
                       + ": data before any section header");
    sections[current].emplace_back(lineno, split(line));
  }
  return sections;
}

Vec3 read_xyz(const std::vector<std::string> &f, std::size_t at, int line) {
  return { to_double(f[at], line), to_double(f[at + 1], line),
           to_double(f[at + 2], line) };
}

std::vector<Vec3> read_truth(const Sections &s) {
  std::vector<Vec3> truth;
  for (const auto &[line, f]: s.at("LIGAND_TRUTH")) {
    expect_fields(f, 4, "LIGAND_TRUTH", line);
    expect_index(to_int(f[0], line), truth.size(), "LIGAND_TRUTH", line);
    truth.push_back(read_xyz(f, 1, line));
  }
  return truth;
}

void write_xyz(std::ostringstream &os, const Vec3 &x) {
  os << fmt_coord(x.x()) << ',' << fmt_coord(x.y()) << ',' << fmt_coord(x.z());
}

}  // namespace

double quantize_coordinate(double v) {
  const std::string s = fmt_coord(v);
  double out = 0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

Vec3 quantize(const Vec3 &v) {
  return { quantize_coordinate(v.x()), quantize_coordinate(v.y()),
           quantize_coordinate(v.z()) };
}

Vec3 ComplexRecord::native_pocket_center() const {
  Vec3 c = Vec3::Zero();
  int n = 0;
  for (int j = 0; j < protein.size(); ++j)
    if (pocket_labels[j] != 0) {
      c += protein.coords[j];
      ++n;
    }
  if (n == 0)
    throw GraphError("complex " + name + " has no labelled pocket residue");
  return c / n;
}

void ComplexRecord::validate() const {
  ligand.validate();
  protein.validate();
  if (static_cast<int>(pocket_labels.size()) != protein.size())
    throw GraphError("POCKET_LABELS length differs from residue count");
  for (int l: pocket_labels)
    if (l != 0 && l != 1)
      throw GraphError("pocket labels must be 0 or 1");
  if (static_cast<int>(truth.size()) != ligand.size())
    throw GraphError("LIGAND_TRUTH length differs from atom count");
}

std::string render_complex(const ComplexRecord &r) {
  std::ostringstream os;
  os << "# fabind complex";
  if (!r.name.empty())
    os << ' ' << r.name;
  os << '\n';
  os << "LIGAND_ATOMS\n";
  for (int i = 0; i < r.ligand.size(); ++i) {
    const auto &a = r.ligand.atoms[i];
    os << i << ',' << a.element << ',' << a.degree << ',' << a.h_count << ','
       << a.valence << ',' << a.charge << ',' << (a.aromatic ? 1 : 0) << ',';
    write_xyz(os, r.ligand.coords[i]);
    os << '\n';
  }
  os << "LIGAND_BONDS\n";
  for (auto [i, j]: r.ligand.bonds)
    os << i << ',' << j << '\n';
  os << "RESIDUES\n";
  for (int j = 0; j < r.protein.size(); ++j) {
    os << j << ',' << residue_code(r.protein.types[j]) << ',';
    write_xyz(os, r.protein.coords[j]);
    os << '\n';
  }
  os << "POCKET_LABELS\n";
  for (std::size_t j = 0; j < r.pocket_labels.size(); ++j)
    os << j << ',' << r.pocket_labels[j] << '\n';
  os << render_pose(r.truth);
  return os.str();
}

ComplexRecord parse_complex(const std::string &text) {
  const Sections s = split_sections(text);
  for (const char *need: { "LIGAND_ATOMS", "LIGAND_BONDS", "RESIDUES",
                           "POCKET_LABELS", "LIGAND_TRUTH" })
    if (!s.contains(need))
      throw ParseError(std::string("missing section ") + need);

  ComplexRecord r;
  {
    std::istringstream is(text);
    std::string first;
    std::getline(is, first);
    const std::string prefix = "# fabind complex ";
    if (first.rfind(prefix, 0) == 0)
      r.name = trim(first.substr(prefix.size()));
  }

  std::vector<AtomDescriptor> atoms;
  std::vector<Vec3> coords;
  for (const auto &[line, f]: s.at("LIGAND_ATOMS")) {
    expect_fields(f, 10, "LIGAND_ATOMS", line);
    expect_index(to_int(f[0], line), atoms.size(), "LIGAND_ATOMS", line);
    AtomDescriptor a;
    a.element = trim(f[1]);
    a.degree = to_int(f[2], line);
    a.h_count = to_int(f[3], line);
    a.valence = to_int(f[4], line);
    a.charge = to_int(f[5], line);
    a.aromatic = to_int(f[6], line) != 0;
    atoms.push_back(a);
    coords.push_back(read_xyz(f, 7, line));
  }
  std::vector<IndexPair> bonds;
  for (const auto &[line, f]: s.at("LIGAND_BONDS")) {
    expect_fields(f, 2, "LIGAND_BONDS", line);
    bonds.emplace_back(to_int(f[0], line), to_int(f[1], line));
  }
  r.ligand = LigandGraph::build(std::move(atoms), std::move(coords),
                                std::move(bonds));

  std::vector<int> types;
  std::vector<Vec3> rcoords;
  for (const auto &[line, f]: s.at("RESIDUES")) {
    expect_fields(f, 5, "RESIDUES", line);
    expect_index(to_int(f[0], line), types.size(), "RESIDUES", line);
    types.push_back(residue_type_from_code(trim(f[1])));
    rcoords.push_back(read_xyz(f, 2, line));
  }
  r.protein = ProteinGraph::build(std::move(types), std::move(rcoords));

  for (const auto &[line, f]: s.at("POCKET_LABELS")) {
    expect_fields(f, 2, "POCKET_LABELS", line);
    expect_index(to_int(f[0], line), r.pocket_labels.size(), "POCKET_LABELS",
                 line);
    r.pocket_labels.push_back(to_int(f[1], line));
  }
  r.truth = read_truth(s);
  r.validate();
  return r;
}

std::string render_pose(const std::vector<Vec3> &coords) {
  std::ostringstream os;
  os << "LIGAND_TRUTH\n";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    os << i << ',';
    write_xyz(os, coords[i]);
    os << '\n';
  }
  return os.str();
}

std::vector<Vec3> parse_pose(const std::string &text) {
  const Sections s = split_sections(text);
  if (!s.contains("LIGAND_TRUTH"))
    throw ParseError("pose file has no LIGAND_TRUTH section");
  return read_truth(s);
}

ComplexRecord read_complex_file(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open complex file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  try {
    return parse_complex(ss.str());
  } catch (const std::exception &e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_complex_file(const std::string &path, const ComplexRecord &record) {
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot write complex file: " + path);
  os << render_complex(record);
}

}  // namespace fabind
