// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chemcat/dpo.hpp"
#include "chemcat/morphism.hpp"
#include "chemcat/reaction.hpp"
#include "chemcat/term.hpp"

namespace chemcat {

// Ordered molecular entities M_1..M_k. Copy j of M_i inside an environment
// sum names its vertices `M<i>.<j>.<v>` (1-based). A morphism out of A
// numbers its copies after the ones already named in A, so that a chain of
// morphisms never reuses a copy name.
struct Environment {
  std::vector<std::string> names;
  std::vector<ChemGraph> entries;
  std::size_t size() const { return entries.size(); }
  bool operator==(const Environment&) const = default;
};

using Mult = std::vector<int>;

Environment parse_environment(const std::string& text);
std::string print_environment(const Environment& env);
Violations validate_environment(const Environment& env, const ValenceTable& vt = ValenceTable());
// n_1 M_1 + ... + n_k M_k, copies of M_i numbered from[i]+1 .. from[i]+n[i]
ChemGraph env_sum(const Environment& env, const Mult& n, const Mult& from = {});
// per entry, the highest copy index with a vertex in a
Mult copy_offset(const Environment& env, const ChemGraph& a);
// env_sum(env, n, copy_offset(env, a)) next to a
ChemGraph env_plus(const Environment& env, const Mult& n, const ChemGraph& a);
std::string env_copy_name(std::size_t i, int copy, const Name& v);

enum class ParaKind { Match, React, Disc };

// A morphism A -> B of M-Match, M-React or M-Disc. `n` has one entry per
// environment entry; the environment copies live beside A in the domain.
struct ParaMorphism {
  ParaKind kind = ParaKind::React;
  Mult n;
  ChemGraph dom, cod;  // A and B
  VMap m;              // Match: the matching A -> B
  VMap inj;            // Match: env_sum(n) -> B
  Reaction r;          // React: env_sum(n) + A -> B
  Term t;              // Disc: typed on env_sum(n) + A, evaluating to B
  bool operator==(const ParaMorphism&) const = default;
};

ParaMorphism para_identity(ParaKind kind, const Environment& env, const ChemGraph& a);
Violations validate_para(const ParaMorphism& x, const Environment& env, const ValenceTable& vt = ValenceTable());
// x ; y. Throws TypeError when the kinds or the middle objects differ and
// PreconditionError when a Match composite's injection is not injective.
ParaMorphism para_compose(const ParaMorphism& x, const ParaMorphism& y, const Environment& env);
// (m, r) |-> m restricted to Chem A, plus r
ParaMorphism embed_match(const ParaMorphism& x, const Environment& env);

struct RetroStep {
  ChemGraph T, B;  // target, byproduct
  Environment M;
  ChemGraph S, E;  // synthons, synthetic equivalents
  Term d;          // T -> S in Disc
  ParaMorphism m;  // S -> E in M-Match
  ParaMorphism r;  // E -> T + B in M-React
  std::string via; // "scheme <k>" or "oracle"
};

// T + B with T's names kept; throws DomainError on a clash
ChemGraph target_plus(const ChemGraph& t, const ChemGraph& b);
Violations validate_step(const RetroStep& s, const ValenceTable& vt = ValenceTable());

struct SequenceLink {
  Environment M;
  ChemGraph E, B;   // r : E -> prev + B
  ParaMorphism r;
};
struct RetroSequence {
  ChemGraph T;
  std::vector<SequenceLink> links;
};
Violations validate_sequence(const RetroSequence& q, const ValenceTable& vt = ValenceTable());

// Template-free oracle: canonical code of E -> canonical codes of possible
// product graphs (T + B).
using Oracle = std::multimap<std::string, std::string>;
Oracle parse_oracle(const std::string& text);

struct SearchBounds {
  std::size_t term_len = 8;      // longest disconnection term tried
  int env = 1;                   // total environment copies per morphism
  std::size_t candidates = 256;  // synthetic-equivalent candidates per term
  std::size_t matchings = 256;   // scheme matchings tried per candidate
  double seconds = 30;           // wall-clock budget
};
SearchBounds parse_bounds(const std::string& spec);  // "k=v,k=v"

struct SearchResult {
  std::vector<RetroStep> steps;
  bool partial = false;  // a bound or the time budget cut the search short
};

// One retrosynthetic step for a target: disconnect, match onto synthetic
// equivalents, then find a reaction back to target plus byproduct. Throws
// DomainError when `rules` is empty. Steps are deduplicated and ordered by
// step_fingerprint.
SearchResult search_step(const ChemGraph& target, const std::vector<Term>& rules,
                         const std::vector<ReactionScheme>& schemes, const std::optional<Oracle>& oracle,
                         const Environment& env, const SearchBounds& bounds, const ValenceTable& vt = ValenceTable());
std::string step_fingerprint(const RetroStep& s);

}  // namespace chemcat
