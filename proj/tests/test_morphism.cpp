// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "chemcat/io.hpp"
#include "chemcat/morphism.hpp"
#include "fixtures.hpp"
#include "random_chem.hpp"

using namespace chemcat;
using namespace chemcat::testing;

namespace {

bool has_clause(const Violations& vs, const std::string& c) {
  for (const auto& v : vs)
    if (v.clause == c) return true;
  return false;
}

}  // namespace

TEST_CASE("identity is an embedding and a matching") {
  for (const char* f : {"water.cg", "nacl.cg", "benzyl.cg"}) {
    ChemGraph g = fixture_graph(f);
    GraphMorphism id = identity_morphism(g);
    CHECK(check_morphism(id).empty());
    CHECK(check_embedding(id));
    CHECK(check_matching(id));
  }
}

TEST_CASE("morphism clauses are detected") {
  ChemGraph w = fixture_graph("water.cg");
  GraphMorphism f = identity_morphism(w);
  f.map["h2"] = "h1";
  CHECK(has_clause(check_morphism(f), "chem-injective"));
  f = identity_morphism(w);
  f.map["o"] = "h1";
  f.map["h1"] = "o";
  CHECK(has_clause(check_morphism(f), "atom"));
  f = identity_morphism(w);
  f.map.erase("h2");
  CHECK(has_clause(check_morphism(f), "map"));

  // a bond that the codomain lacks
  ChemGraph two;
  two.add_vertex("o", "O");
  two.add_vertex("h1", "H");
  two.add_vertex("h2", "H");
  two.set_bond("o", "h1", 1);
  CHECK(has_clause(check_morphism({w, two, identity_morphism(w).map}), "chem-bond"));
  // the other way round the inclusion drops nothing
  CHECK(check_morphism({two, w, identity_morphism(two).map}).empty());
  CHECK_FALSE(check_matching({two, w, identity_morphism(two).map}));
}

TEST_CASE("alpha fibres must add up") {
  // two alphas on a carbon fold onto one alpha of a double bond's partner
  ChemGraph a, b;
  a.add_vertex("c", "C");
  a.add_vertex("p", kAlpha);
  a.add_vertex("q", kAlpha);
  a.set_bond("c", "p", 1);
  a.set_bond("c", "q", 1);
  b.add_vertex("c", "C");
  b.add_vertex("o", "O");
  b.set_bond("c", "o", 2);
  CHECK(check_morphism({a, b, {{"c", "c"}, {"p", "o"}, {"q", "o"}}}).empty());
  b.set_bond("c", "o", 3);
  CHECK(has_clause(check_morphism({a, b, {{"c", "c"}, {"p", "o"}, {"q", "o"}}}), "alpha-bond"));
}

TEST_CASE("valence completion of one hydrogen of H2") {
  ChemGraph h2 = fixture_graph("h2.cg");
  GraphMorphism m = valence_completion(h2, {"h1"}, ValenceTable());
  CHECK(m.dom.size() == 2);
  CHECK(check_morphism(m).empty());
  CHECK(check_matching(m));
  CHECK(image(m) == NameSet{"h1", "h2"});
}

TEST_CASE("matchable subsets give matchings onto themselves") {
  ValenceTable vt;
  long tried = 0;
  for (int seed = 0; seed < 400; ++seed) {
    Rng rng(seed);
    ChemGraph g = random_chemical_graph(rng, 10, vt);
    NameSet ns = g.names(), s;
    for (const auto& n : ns)
      if (coin(rng, 0.6)) s.insert(n);
    if (!is_matchable(g, s, vt)) continue;
    CAPTURE(seed);
    GraphMorphism m = matching_from_matchable(g, s, vt);
    CHECK(check_morphism(m).empty());
    CHECK(check_matching(m));
    CHECK(image(m) == s);
    ++tried;
  }
  CHECK(tried > 50);
  ChemGraph g = fixture_graph("nacl.cg");
  CHECK_FALSE(is_matchable(g, {"na"}, vt));  // not ion-closed
  CHECK(is_matchable(g, {"na", "cl"}, vt));
}

TEST_CASE("composition of morphisms") {
  ValenceTable vt;
  for (int seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    ChemGraph g = random_chemical_graph(rng, 10, vt);
    NameSet all = g.names();
    GraphMorphism m = matching_from_matchable(g, all, vt);
    // m : dom -> g, then any automorphism-free relabelling of g
    std::map<Name, Name> f;
    for (const auto& n : all) f[n] = n + "'";
    ChemGraph h = rename_all(g, f);
    GraphMorphism r{g, h, f};
    GraphMorphism c = compose(m, r);
    CHECK(check_morphism(c).empty());
    CHECK(check_matching(c));
    CHECK(compose(identity_morphism(m.dom), m).map == m.map);
    CHECK_THROWS_AS(compose(r, m), TypeError);
  }
}

TEST_CASE("morphism file") {
  std::string text =
      "graph dom\natom x H\ngraph cod\natom a H\natom b H\nbond a b 1\nmap x a\n";
  GraphMorphism m = parse_morphism(text, "");
  CHECK(m.map.at("x") == "a");
  CHECK(check_morphism(m).empty());
  CHECK_THROWS_AS(parse_morphism("graph dom\natom x H\nmap x a\n", ""), ParseError);
  CHECK_THROWS_AS(parse_morphism(text + "map x b\n", ""), ParseError);
}
