// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "chemcat/reaction.hpp"
#include "chemcat/term.hpp"

namespace chemcat {

// Changed-set pair of a term; b and i are the identity throughout, so this
// is all of R(t) apart from the two boundary graphs.
using RPair = std::pair<NameSet, NameSet>;
RPair gen_pair(const Gen& g);
RPair compose_pairs(const RPair& p, const RPair& q);
RPair term_pair(const Term& t);

// R(t) on the typed term t : a -> eval(t, a). Throws PreconditionError when
// t is ill-typed on a.
Reaction translate(const Term& t, const ChemGraph& a);
// same value, computed by composing one reaction per generator
Reaction translate_stepwise(const Term& t, const ChemGraph& a);

struct Decomposition {
  Term t;
  Reaction iota;  // (empty, empty, !, iso) : eval(t, dom) -> r.cod
};

// r = translate(t);iota. Throws PreconditionError for an invalid r, or for
// the rare reaction that is not reachable by the rules (logged in README).
Decomposition decompose(const Reaction& r, const ValenceTable& vt = ValenceTable());
// r is (UA, UB, id, id)
bool image_check(const Reaction& r);

}  // namespace chemcat
