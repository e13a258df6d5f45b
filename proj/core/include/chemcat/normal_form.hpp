// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "chemcat/bridge.hpp"
#include "chemcat/term.hpp"

namespace chemcat {

// Rewrites accepted per pass (indexed by Block) and the number of
// termination-measure checks made; filled in when a pointer is passed.
struct PassStats {
  std::array<long, 11> rewrites{};
  long measure_checks = 0;
  long cancellations = 0;
};

bool is_ice_form(const Term& t);

// Bubble passes I, C, E<0, E>=0, ~E>=0, ~E<0, ~C, ~I, then R before S.
// Throws PreconditionError if t is ill-typed on g, InvariantError if a pass
// gets stuck or its measure fails to decrease.
Term to_ice_form(const Term& t, const ChemGraph& g, PassStats* stats = nullptr);

struct RenamingForm {
  Term A, B;
  NameSet a, b, c, d;  // sources/targets of A, sources/targets of B
};

// r must consist of R- and S-terms only, typed on h.
std::pair<RenamingForm, Term> to_renaming_form(const Term& r, const ChemGraph& h);

Term to_normal_form(const Term& t, const ChemGraph& g, PassStats* stats = nullptr);

// Failed conditions, e.g. "ice", "renaming (3)", "(6) C(u,v|a,b) vs ~C(u,v|c,d)".
std::vector<std::string> check_normal_form(const Term& t, const ChemGraph& g);

// Both terms in normal form on g. Canonical comparison first, then a
// bounded search over the name-exchange moves.
bool nf_equivalent(const Term& t, const Term& s, const ChemGraph& g);

struct EquivVerdict {
  bool by_translation = false;
  bool by_normal_form = false;
};
EquivVerdict decide_equiv_both(const Term& t, const Term& s, const ChemGraph& g);
// translate-and-compare; throws InvariantError if the normal-form path disagrees
bool decide_equiv(const Term& t, const Term& s, const ChemGraph& g);

}  // namespace chemcat
