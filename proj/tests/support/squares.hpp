// SPDX-License-Identifier: Apache-2.0
// Checks both squares of a reaction instance against the brute-force
// oracles in brute.hpp. Each failure comes back as a short string.
#pragma once

#include <string>
#include <vector>

#include "brute.hpp"
#include "chemcat/bridge.hpp"
#include "random_chem.hpp"

namespace chemcat::testing {

inline ChemGraph renamed_copy(const ChemGraph& g, const std::string& tag) {
  VMap f;
  for (const auto& n : g.names()) f[n] = n + tag;
  return rename_all(g, f);
}

// Test objects for the universal properties: the object itself, two
// disjoint copies of it, every one-vertex-smaller induced subgraph and the
// extra graphs supplied by the caller. Only pre-chemical graphs are kept.
inline std::vector<ChemGraph> test_objects(const ChemGraph& x, const std::vector<ChemGraph>& extra) {
  std::vector<ChemGraph> out{x, disjoint_union(x, renamed_copy(x, "'"))};
  for (const auto& v : x.names()) {
    NameSet rest = x.names();
    rest.erase(v);
    out.push_back(induced(x, rest));
  }
  out.insert(out.end(), extra.begin(), extra.end());
  std::vector<ChemGraph> keep;
  for (auto& g : out)
    if (validate_prechemical(g).empty()) keep.push_back(std::move(g));
  return keep;
}

struct SquareReport {
  std::vector<std::string> failures;
  long cones = 0;
  long charge_merges = 0;
  void fail(const std::string& s) { failures.push_back(s); }
};

// Pullback of f along e: the square's universal property, its legs'
// classes, and agreement with an expected (obj, to_a, to_c) up to iso.
inline void check_pullback(SquareReport& rep, const std::string& tag, const GraphMorphism& f,
                           const GraphMorphism& e, const ChemGraph& want, const VMap& want_a, const VMap& want_c) {
  Pullback pb = pullback_along_embedding(f, e);
  if (!check_embedding(pb.e_star)) rep.fail(tag + ": pulled-back leg is not an embedding");
  if (check_matching(f) && !check_matching(pb.f_star)) rep.fail(tag + ": pulled-back leg is not a matching");
  if (then(pb.e_star.map, f.map) != then(pb.f_star.map, e.map)) rep.fail(tag + ": square does not commute");
  if (!iso_commuting(want, pb.obj, {}, {{pb.e_star.map, want_a}, {pb.f_star.map, want_c}}))
    rep.fail(tag + ": pullback differs from the expected object");
  for (const auto& q : test_objects(pb.obj, {f.dom, e.dom})) {
    auto u = pullback_universal(pb, f, e, q);
    rep.cones += u.cones;
    if (u.bad) rep.fail(tag + ": " + std::to_string(u.bad) + " cones without a unique mediating map");
  }
}

// Pushout of a matching m and an embedding e with a shared domain.
inline void check_pushout(SquareReport& rep, const std::string& tag, const GraphMorphism& m, const GraphMorphism& e,
                          const ChemGraph& want, const VMap& want_e, const VMap& want_m) {
  Pushout po = pushout_em(m, e);
  if (!check_embedding(po.e_star)) rep.fail(tag + ": pushed-out leg is not an embedding");
  if (!check_matching(po.m_star)) rep.fail(tag + ": pushed-out leg is not a matching");
  if (then(m.map, po.e_star.map) != then(e.map, po.m_star.map)) rep.fail(tag + ": square does not commute");
  if (!iso_commuting(po.obj, want, {{po.e_star.map, want_e}, {po.m_star.map, want_m}}))
    rep.fail(tag + ": pushout differs from the expected object");
  for (const auto& q : test_objects(po.obj, {want})) {
    auto u = pushout_universal(po, m, e, q);
    rep.cones += u.cones;
    rep.charge_merges += u.charge_merges;
    if (u.bad) rep.fail(tag + ": " + std::to_string(u.bad) + " cocones without a unique mediating map");
  }
}

// Complement of (e : K -> A, m : A -> C) against the expected D.
inline void check_complement(SquareReport& rep, const std::string& tag, const GraphMorphism& e,
                             const GraphMorphism& m, const ChemGraph& want, const VMap& want_mhat,
                             const VMap& want_ehat) {
  Complement pc = pushout_complement(e, m);
  if (!iso_commuting(pc.obj, want, {{pc.m_hat.map, want_mhat}}, {{want_ehat, pc.e_hat.map}}))
    rep.fail(tag + ": complement differs from the expected object");
  // and pushing back out recovers C
  Pushout back = pushout_em(pc.m_hat, e);
  if (!iso_commuting(back.obj, m.cod, {{back.e_star.map, pc.e_hat.map}, {back.m_star.map, m.map}}))
    rep.fail(tag + ": pushout of the complement is not C");
}

inline SquareReport check_instance_squares(const ReactionInstance& x) {
  SquareReport rep;
  const ReactionScheme& s = x.scheme;
  GraphMorphism f = s.left(), g = s.right();
  GraphMorphism m{s.A, x.C, x.m}, mk{s.K, x.D, x.mk}, mb{s.B, x.E, x.mb};
  GraphMorphism f1{x.D, x.C, x.f1}, g1{x.D, x.E, x.g1};
  // left square K -> A, K -> D, A -> C, D -> C
  check_pullback(rep, "left pullback", m, f1, s.K, s.f, x.mk);
  check_pushout(rep, "left pushout", mk, f, x.C, x.f1, x.m);
  check_complement(rep, "left complement", f, m, x.D, x.mk, x.f1);
  // right square K -> B, K -> D, B -> E, D -> E
  check_pullback(rep, "right pullback", mb, g1, s.K, s.g, x.mk);
  check_pushout(rep, "right pushout", mk, g, x.E, x.g1, x.mb);
  check_complement(rep, "right complement", g, mb, x.D, x.mk, x.g1);
  return rep;
}

// The instance of the interface construction for the reaction of a random
// term, when every graph has at most max_v vertices.
inline std::optional<ReactionInstance> random_instance(unsigned seed, int max_v, const ValenceTable& vt = ValenceTable()) {
  Rng rng(seed);
  ChemGraph g = random_chemical_graph(rng, max_v, vt);
  Term t = random_term(rng, g, uniform(rng, 1, 4));
  Reaction r = extend_to_matchable(translate(t, g), vt);
  ReactionInstance x;
  try {
    x = tuple_to_instance(r, vt);
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
  for (const auto* h : {&x.scheme.A, &x.scheme.K, &x.scheme.B, &x.C, &x.D, &x.E})
    if (static_cast<int>(h->size()) > max_v) return std::nullopt;
  return x;
}

}  // namespace chemcat::testing
