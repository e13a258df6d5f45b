// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chemcat/errors.hpp"

namespace chemcat {

using Name = std::string;
using NameSet = std::set<Name>;

inline const std::string kAlpha = "alpha";

// Edge labels 0..4 are covalent multiplicities; kIonic is the ionic bond.
using Bond = std::uint8_t;
inline constexpr Bond kIonic = 5;

inline int cov(Bond b) { return b <= 4 ? b : 0; }
inline int ion(Bond b) { return b == kIonic ? 1 : 0; }
std::string bond_str(Bond b);

struct Atom {
  std::string sym;
  int charge = 0;
  bool alpha() const { return sym == kAlpha; }
  bool operator==(const Atom&) const = default;
};

class ValenceTable {
 public:
  ValenceTable();  // H1 C4 N3 O2 P5 S2 Cl1 Na1 alpha1
  static ValenceTable from_text(const std::string& text);
  static ValenceTable from_file(const std::string& path);
  // --valences path, else $CHEMCAT_VALENCES, else defaults
  static ValenceTable resolve(const std::string& path);

  int of(const std::string& sym) const;  // throws ConfigError
  bool knows(const std::string& sym) const { return v_.count(sym) > 0; }
  void set(const std::string& sym, int v);
  const std::map<std::string, int>& table() const { return v_; }

 private:
  std::map<std::string, int> v_;
};

class ChemGraph {
 public:
  using Edge = std::pair<Name, Name>;  // (min, max)

  ChemGraph() = default;

  void add_vertex(const Name& v, const std::string& sym, int charge = 0);
  void remove_vertex(const Name& v);
  bool has(const Name& v) const { return atoms_.count(v) > 0; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  const Atom& atom(const Name& v) const;
  const std::string& sym(const Name& v) const { return atom(v).sym; }
  int charge(const Name& v) const { return atom(v).charge; }
  bool is_alpha(const Name& v) const { return atom(v).alpha(); }
  bool is_chem(const Name& v) const { return !atom(v).alpha(); }
  void set_charge(const Name& v, int c);
  void set_atom(const Name& v, Atom a);

  Bond bond(const Name& u, const Name& v) const;
  void set_bond(const Name& u, const Name& v, Bond b);  // 0 removes

  const std::map<Name, Atom>& atoms() const { return atoms_; }
  const std::map<Edge, Bond>& bonds() const { return bonds_; }
  // adjacency view: neighbour -> label, nonzero labels only
  const std::map<Name, Bond>& adjacent(const Name& v) const;

  NameSet names() const;
  NameSet alpha_vertices() const;
  NameSet chem_vertices() const;
  NameSet charged() const;
  NameSet positive() const;
  NameSet negative() const;

  bool operator==(const ChemGraph& o) const {
    return atoms_ == o.atoms_ && bonds_ == o.bonds_;
  }

 private:
  static Edge key(const Name& u, const Name& v) {
    return u < v ? Edge{u, v} : Edge{v, u};
  }
  std::map<Name, Atom> atoms_;
  std::map<Edge, Bond> bonds_;
  std::map<Name, std::map<Name, Bond>> adj_;
};

int net_charge(const ChemGraph& g, const NameSet& u);
NameSet neighbours(const ChemGraph& g, const Name& v);
NameSet covalent_neighbours(const ChemGraph& g, const Name& v);
NameSet ionic_neighbours(const ChemGraph& g, const Name& v);

Violations validate_prechemical(const ChemGraph& g);
Violations validate_chemical(const ChemGraph& g, const ValenceTable& vt);
// valence equation only (no pre-chemical clauses)
Violations valence_violations(const ChemGraph& g, const ValenceTable& vt);
bool is_chemical(const ChemGraph& g, const ValenceTable& vt);
bool is_valence_complete(const ChemGraph& g, const ValenceTable& vt);
bool is_molecular(const ChemGraph& g, const ValenceTable& vt);

ChemGraph rename(const ChemGraph& g, const Name& u, const Name& v);
ChemGraph rename_all(const ChemGraph& g, const std::map<Name, Name>& f);
ChemGraph disjoint_union(const ChemGraph& g, const ChemGraph& h);
// rewrite names of h that clash with g as name + suffix + k
ChemGraph freshen(const ChemGraph& h, const ChemGraph& g, const std::string& suffix,
                  std::map<Name, Name>* renaming = nullptr);
ChemGraph induced(const ChemGraph& g, const NameSet& u);
std::vector<NameSet> components(const ChemGraph& g);
bool connected(const ChemGraph& g);

// first name of the form prefix<k> (k = 1, 2, ...) not in `used`
Name fresh_name(const std::string& prefix, const NameSet& used);

}  // namespace chemcat
