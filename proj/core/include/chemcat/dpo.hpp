// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>

#include "chemcat/morphism.hpp"

namespace chemcat {

// Square results. Labels follow the usual picture: the new object is `obj`,
// the two new arrows are named after the arrow they are parallel to.
struct Pullback {
  ChemGraph obj;        // Z
  GraphMorphism e_star; // Z -> A, an embedding
  GraphMorphism f_star; // Z -> C
};
struct Pushout {
  ChemGraph obj;        // Y
  GraphMorphism e_star; // B -> Y, an embedding
  GraphMorphism m_star; // C -> Y, a matching
};
struct Complement {
  ChemGraph obj;        // Z
  GraphMorphism m_hat;  // B -> Z, a matching
  GraphMorphism e_hat;  // Z -> C, an embedding
};

// f : A -> B any morphism, e : C -> B an embedding.
Pullback pullback_along_embedding(const GraphMorphism& f, const GraphMorphism& e);
// m : A -> B a matching, e : A -> C an embedding. Vertices of C outside
// e(A) keep their names unless they clash with B, then get `<name>_<k>`.
Pushout pushout_em(const GraphMorphism& m, const GraphMorphism& e);
// e : B -> A an embedding, m : A -> C a matching. Throws PreconditionError
// when the construction does not give an embedding and a matching.
Complement pushout_complement(const GraphMorphism& e, const GraphMorphism& m);

// Every matching a -> c, by backtracking over chemical vertices first;
// stops early when `f` returns false.
void for_each_matching(const ChemGraph& a, const ChemGraph& c, const std::function<bool(const GraphMorphism&)>& f);

struct ReactionScheme {
  ChemGraph A, K, B;
  VMap f;  // K -> A
  VMap g;  // K -> B
  bool operator==(const ReactionScheme&) const = default;
  GraphMorphism left() const { return {K, A, f}; }
  GraphMorphism right() const { return {K, B, g}; }
};

struct ReactionInstance {
  ReactionScheme scheme;
  ChemGraph C, D, E;
  VMap m;   // A -> C
  VMap mk;  // K -> D
  VMap mb;  // B -> E
  VMap f1;  // D -> C
  VMap g1;  // D -> E
  bool operator==(const ReactionInstance&) const = default;
};

Violations validate_scheme(const ReactionScheme& s, const ValenceTable& vt = ValenceTable());
// Both squares commute, legs are in the right classes and each square is the
// computed pushout up to the naming of its new vertices.
Violations validate_instance(const ReactionInstance& x, const ValenceTable& vt = ValenceTable());

// Throws PreconditionError when m is not a matching A -> C, DomainError when
// the result E is not chemical.
ReactionInstance apply_scheme(const ReactionScheme& s, const GraphMorphism& m,
                              const ValenceTable& vt = ValenceTable());
Reaction instance_to_tuple(const ReactionInstance& x);
// Throws PreconditionError when the changed sets are not matchable or the
// interface cannot be built.
ReactionInstance tuple_to_instance(const Reaction& r, const ValenceTable& vt = ValenceTable());
// Grows U_C and U_E by neighbourhoods (and the ionic closure), moving
// unchanged vertices across through i, until both are matchable and every
// originally changed chemical vertex is interior. Graphs are untouched.
Reaction extend_to_matchable(const Reaction& r, const ValenceTable& vt = ValenceTable());
// The scheme A <- K -> B of the interface construction applied to the
// reaction (V_A, V_B, b, !). A and B are returned unchanged.
ReactionScheme canonical_scheme(const ChemGraph& a, const ChemGraph& b, const VMap& bij,
                                const ValenceTable& vt = ValenceTable());
// s equals the canonical scheme of its own boundary data
bool is_canonical(const ReactionScheme& s, const ValenceTable& vt = ValenceTable());

// Scheme file: graph blocks named A, K and B, then `left <k> <a>` and
// `right <k> <b>` lines.
ReactionScheme parse_scheme(const std::string& text);
std::string print_scheme(const ReactionScheme& s);
std::string print_instance(const ReactionInstance& x);

}  // namespace chemcat
