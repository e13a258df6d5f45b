// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "chemcat/graph.hpp"

namespace chemcat {

using VMap = std::map<Name, Name>;

// A morphism dom -> cod of the reaction category: changed subsets UA, UB,
// an atom-preserving bijection b on their chemical parts and an isomorphism
// i between the unchanged parts.
struct Reaction {
  ChemGraph dom, cod;
  NameSet UA, UB;
  VMap b;
  VMap i;

  bool operator==(const Reaction&) const = default;
};

Violations validate_reaction(const Reaction& r, const ValenceTable& vt = ValenceTable());

Reaction identity_reaction(const ChemGraph& a);
// (U, U', id, id) with the unchanged parts identified by name
Reaction named_reaction(const ChemGraph& a, const ChemGraph& b, const NameSet& ua, const NameSet& ub);
// r;s. Throws TypeError when cod(r) != dom(s).
Reaction compose(const Reaction& r, const Reaction& s);
Reaction dagger(const Reaction& r);
// r + s on disjoint graphs. Throws DomainError on a name clash.
Reaction tensor(const Reaction& r, const Reaction& s);
bool equal(const Reaction& r, const Reaction& s);
// human-readable list of differing components, empty when equal
std::vector<std::string> differences(const Reaction& r, const Reaction& s);

VMap invert(const VMap& f);  // throws DomainError if not injective

// Text form: changed-dom/changed-cod lists, b/i lines, then the two graphs
// either inline (`graph dom`, `graph cod` blocks) or by `dom <path>` and
// `cod <path>` relative to `base`.
Reaction parse_reaction(const std::string& text, const std::string& base = "");
std::string print_reaction(const Reaction& r);

}  // namespace chemcat
