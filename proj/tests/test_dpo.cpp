// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "chemcat/canon.hpp"
#include "chemcat/dpo.hpp"
#include "chemcat/reaction.hpp"
#include "fixtures.hpp"
#include "squares.hpp"

using namespace chemcat;
using namespace chemcat::testing;

namespace {

ReactionScheme h2_break() { return parse_scheme(read_file(fixture("h2_break.scheme"))); }

GraphMorphism first_matching(const ChemGraph& a, const ChemGraph& c) {
  std::optional<GraphMorphism> out;
  for_each_matching(a, c, [&](const GraphMorphism& m) {
    out = m;
    return false;
  });
  REQUIRE(out);
  return *out;
}

}  // namespace

TEST_CASE("H2 bond-break scheme") {
  ReactionScheme s = h2_break();
  CHECK(validate_scheme(s).empty());
  CHECK(is_canonical(s));
  CHECK(parse_scheme(print_scheme(s)) == s);

  ChemGraph h2 = fixture_graph("h2.cg");
  ReactionInstance x = apply_scheme(s, first_matching(s.A, h2));
  CHECK(validate_instance(x).empty());
  // two hydrogens, each with its own alpha
  CHECK(x.E.size() == 4);
  CHECK(x.E.alpha_vertices().size() == 2);
  CHECK(x.E.bond("h1", "h2") == 0);

  Reaction r = instance_to_tuple(x);
  CHECK(validate_reaction(r).empty());
  CHECK(r.UA == NameSet{"h1", "h2"});
  CHECK(r.UB.size() == 4);
  CHECK(tuple_to_instance(r) == x);
  CHECK(instance_to_tuple(tuple_to_instance(r)) == r);

  SquareReport rep = check_instance_squares(x);
  INFO((rep.failures.empty() ? std::string() : rep.failures.front()));
  CHECK(rep.failures.empty());
  CHECK(rep.cones > 0);
}

TEST_CASE("apply_scheme rejects a non-matching map") {
  ReactionScheme s = h2_break();
  ChemGraph w = fixture_graph("water.cg");
  GraphMorphism m{s.A, w, {{"h1", "h1"}, {"h2", "h2"}}};
  CHECK_THROWS_AS(apply_scheme(s, m), PreconditionError);
}

TEST_CASE("instance and tuple round-trip on random reactions") {
  int got = 0;
  for (unsigned seed = 0; seed < 600 && got < 200; ++seed) {
    auto x = random_instance(seed, 10);
    if (!x) continue;
    ++got;
    CAPTURE(seed);
    CHECK(validate_instance(*x).empty());
    CHECK(is_canonical(x->scheme));
    Reaction r = instance_to_tuple(*x);
    CHECK(tuple_to_instance(r) == *x);
    CHECK(instance_to_tuple(tuple_to_instance(r)) == r);
    // applying the scheme at the instance's own matching gives it back
    ReactionInstance y = apply_scheme(x->scheme, {x->scheme.A, x->C, x->m});
    CHECK(instance_to_tuple(y).UA == r.UA);
    CHECK(graph_code(y.E) == graph_code(x->E));
  }
  CHECK(got >= 150);
}

TEST_CASE("squares of random instances satisfy their universal properties") {
  int got = 0;
  long cones = 0, merges = 0;
  for (unsigned seed = 9000; got < 40; ++seed) {
    auto x = random_instance(seed, 5);
    if (!x) continue;
    ++got;
    CAPTURE(seed);
    SquareReport rep = check_instance_squares(*x);
    INFO((rep.failures.empty() ? std::string() : rep.failures.front()));
    CHECK(rep.failures.empty());
    cones += rep.cones;
    merges += rep.charge_merges;
  }
  CHECK(cones > 500);
  MESSAGE("cocones refused by the fibre-charge clause: " << merges);
}

TEST_CASE("a span with no pushout") {
  // K = {Na, Cl-}. The matching K -> D adds an isolated negative alpha; the
  // embedding K -> A bonds Na+ to Cl- ionically next to another one. The
  // cocone sending both alphas to one negative alpha has no mediating
  // morphism, so no pushout exists.
  ChemGraph k;
  k.add_vertex("na", "Na");
  k.add_vertex("cl", "Cl", -1);
  ChemGraph d = k;
  d.add_vertex("q", kAlpha, -1);
  ChemGraph a;
  a.add_vertex("na", "Na", 1);
  a.add_vertex("cl", "Cl", -1);
  a.set_bond("na", "cl", kIonic);
  a.add_vertex("p", kAlpha, -1);
  VMap id{{"na", "na"}, {"cl", "cl"}};
  GraphMorphism m{k, d, id}, e{k, a, id};
  REQUIRE(check_matching(m));
  REQUIRE(check_embedding(e));
  Pushout po = pushout_em(m, e);
  UniversalCount u;
  for (const auto& q : test_objects(po.obj, {})) {
    auto c = pushout_universal(po, m, e, q);
    u.bad += c.bad;
    u.charge_merges += c.charge_merges;
  }
  CHECK(u.bad == 0);
  CHECK(u.charge_merges > 0);
}

TEST_CASE("pullback along an embedding keeps the matching class") {
  for (unsigned seed = 0; seed < 100; ++seed) {
    auto x = random_instance(seed + 300, 8);
    if (!x) continue;
    GraphMorphism m{x->scheme.A, x->C, x->m}, f1{x->D, x->C, x->f1};
    Pullback pb = pullback_along_embedding(m, f1);
    CHECK(check_embedding(pb.e_star));
    CHECK(check_matching(pb.f_star));
    CHECK(pb.obj.size() == x->scheme.K.size());
  }
}
