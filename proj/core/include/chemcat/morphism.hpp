// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "chemcat/reaction.hpp"

namespace chemcat {

// A vertex function dom -> cod. Whether it is a morphism, an embedding or a
// matching is computed by the checks below, never stored.
struct GraphMorphism {
  ChemGraph dom, cod;
  VMap map;
  bool operator==(const GraphMorphism&) const = default;
};

// Clause ids: map, chem-injective, chem-alpha-disjoint, atom, sign,
// fibre-charge, ionic, chem-bond, alpha-bond. Throws PreconditionError
// when dom or cod is not pre-chemical.
Violations check_morphism(const GraphMorphism& f);
// Both throw PreconditionError when f is not a morphism.
bool check_embedding(const GraphMorphism& f);
bool check_matching(const GraphMorphism& f);
// the strict clauses a matching adds on top of a morphism
Violations matching_violations(const GraphMorphism& f);

GraphMorphism compose(const GraphMorphism& f, const GraphMorphism& g);  // f then g
GraphMorphism identity_morphism(const ChemGraph& a);
NameSet image(const GraphMorphism& f);

bool is_ion_closed(const ChemGraph& a, const NameSet& u);
// Throws PreconditionError unless a is valence-complete.
bool is_matchable(const ChemGraph& a, const NameSet& u, const ValenceTable& vt = ValenceTable());

// U^alpha together with its matching into a (identity on U, each indexed
// copy onto its neighbour). Copies are named `<nbr>__<anchor>__<j>` and
// `<nbr>__ib__<anchor>__<j>` for ionic neighbours.
GraphMorphism valence_completion(const ChemGraph& a, const NameSet& u, const ValenceTable& vt = ValenceTable());
// B^crg with its map onto the charged vertices; copies `<b>__pos__<j>` and
// `<b>__neg__<j>`.
GraphMorphism charge_decomposition(const ChemGraph& a, const NameSet& b);
// U^alpha + B^crg -> a with image exactly s. Throws PreconditionError when s
// is not matchable.
GraphMorphism matching_from_matchable(const ChemGraph& a, const NameSet& s, const ValenceTable& vt = ValenceTable());

// `morphism <domfile> <codfile>` followed by `map <u> <v>` lines
GraphMorphism parse_morphism(const std::string& text, const std::string& base = "");

}  // namespace chemcat
