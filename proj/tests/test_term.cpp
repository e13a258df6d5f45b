// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "chemcat/bridge.hpp"
#include "chemcat/term.hpp"
#include "fixtures.hpp"
#include "random_chem.hpp"

using namespace chemcat;
using namespace chemcat::testing;

TEST_CASE("term grammar round-trips") {
  for (const char* s : {"id", "S(u)", "R(a>b)", "E(u|a,b)", "E(u,v)", "I(u,v)", "C(u,v|a,b)", "~C(u,v|a,b);S(r)",
                        "~E(u|a,b);~E(u,v);~I(u,v)"}) {
    CAPTURE(s);
    CHECK(print_term(parse_term(s)) == s);
  }
  CHECK(print_term(parse_term(" C ( u , v | a , b ) ;\n S ( r ) ")) == "C(u,v|a,b);S(r)");
  CHECK(parse_term("id").size() == 0);
}

TEST_CASE("parse errors carry a column") {
  try {
    parse_term("C(u|a)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.col > 0);
  }
  CHECK_THROWS_AS(parse_term("C(u,v|a,b);"), ParseError);
  CHECK_THROWS_AS(parse_term("Q(u)"), ParseError);
  CHECK_THROWS_AS(parse_term("R(a)"), ParseError);
}

TEST_CASE("benzyl sequence is typed") {
  ChemGraph g = fixture_graph("benzyl.cg");
  Term t = fixture_term("benzyl_seq.term");
  CHECK(t.size() == 29);
  auto out = try_eval(t, g);
  REQUIRE(out);
  CHECK(is_chemical(*out, ValenceTable()));
  CHECK(out->bond("u", "v") == 1);
  CHECK(out->bond("w", "z") == 1);
  CHECK(out->bond("u", "z") == 0);
}

TEST_CASE("single covalent disconnection by hand") {
  ChemGraph h2 = fixture_graph("h2.cg");
  ChemGraph s = eval_term(parse_term("C(h1,h2|a1,a2)"), h2);
  CHECK(s.bond("h1", "h2") == 0);
  CHECK(s.is_alpha("a1"));
  CHECK(s.bond("h1", "a1") == 1);
  CHECK(s.bond("h2", "a2") == 1);
  CHECK(eval_term(parse_term("~C(h1,h2|a1,a2)"), s) == h2);
  // names already in use are rejected
  CHECK_THROWS_AS(parse_term("C(h1,h2|h1,a2)"), ParseError);
  CHECK_FALSE(try_eval(parse_term("C(h1,h2|a1,h2x);C(h1,h2|a1,b)"), h2));
  CHECK_THROWS_AS(eval_term(parse_term("C(h1,h9|a,b)"), h2), TypeError);
}

TEST_CASE("every rule is undone by its bar on random graphs") {
  ValenceTable vt;
  long checked = 0;
  for (int seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    ChemGraph g = random_chemical_graph(rng, 10, vt);
    Fresh fresh;
    for (const auto& n : g.names()) fresh.avoid.insert(n);
    for (const auto& x : applicable(g, fresh, false)) {
      auto h = apply_generator(x, g);
      REQUIRE(h);
      CHECK(is_chemical(*h, vt));
      auto back = apply_generator(dagger(x), *h);
      REQUIRE(back);
      CHECK(*back == g);
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("dagger of a term reverses and bars") {
  Term t = parse_term("C(u,v|a,b);E(u,a);S(r);R(x>y)");
  CHECK(print_term(dagger_term(t)) == "R(y>x);S(r);~E(u,a);~C(u,v|a,b)");
  CHECK(dagger_term(dagger_term(t)) == t);
  ValenceTable vt;
  for (int seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    ChemGraph g = random_chemical_graph(rng, 10, vt);
    Term s = random_term(rng, g, 8);
    ChemGraph h = eval_term(s, g);
    CHECK(eval_term(dagger_term(s), h) == g);
  }
}
