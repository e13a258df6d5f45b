// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>

#include "chemcat/io.hpp"
#include "fixtures.hpp"
#include "random_chem.hpp"

using namespace chemcat;
using namespace chemcat::testing;

namespace {

// valence equation recomputed from the bond list rather than adjacency
bool valence_ok(const ChemGraph& g, const ValenceTable& vt) {
  std::map<Name, int> used;
  for (const auto& [v, a] : g.atoms()) used[v] = std::abs(a.charge);
  for (const auto& [e, b] : g.bonds()) {
    used[e.first] += cov(b);
    used[e.second] += cov(b);
  }
  for (const auto& [v, a] : g.atoms())
    if (used[v] != vt.of(a.sym)) return false;
  return true;
}

}  // namespace

TEST_CASE("water and salt are chemical") {
  ValenceTable vt;
  for (const char* f : {"water.cg", "nacl.cg", "benzyl.cg", "h2.cg"}) {
    CAPTURE(f);
    ChemGraph g = fixture_graph(f);
    CHECK(validate_chemical(g, vt).empty());
  }
  ChemGraph w = fixture_graph("water.cg");
  CHECK(is_molecular(w, vt));
  CHECK_FALSE(is_molecular(fixture_graph("benzyl.cg"), vt));
  CHECK(fixture_graph("nacl.cg").bond("na", "cl") == kIonic);
}

TEST_CASE("parser rejects malformed graphs with a line number") {
  auto line_of = [](const std::string& text) {
    try {
      parse_graph(text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };
  CHECK(line_of("atom a C\natom a O\n") == 2);
  CHECK(line_of("atom a C\nbond a a 1\n") == 2);
  CHECK(line_of("atom a C\natom b O\nbond a b 1\nbond b a 2\n") == 4);
  CHECK(line_of("atom a C\nbond a b 1\n") == 2);
  CHECK(line_of("atom a C\natom b O\nbond a b 7\n") == 3);
  CHECK(line_of("atom a C x\n") == 1);
  CHECK(line_of("frob\n") == 1);
  // the same bond twice with the same label is fine
  CHECK(line_of("atom a C\natom b O\nbond a b 2\nbond b a 2\n") == -1);
}

TEST_CASE("pre-chemical clauses") {
  ChemGraph g;
  g.add_vertex("a", kAlpha, 2);
  CHECK(validate_prechemical(g).front().clause == "alpha-charge");
  ChemGraph h;
  h.add_vertex("c", "C");
  h.add_vertex("a", kAlpha);
  h.set_bond("c", "a", 2);
  CHECK(validate_prechemical(h).front().clause == "alpha-edge");
  ChemGraph k;
  k.add_vertex("na", "Na", 1);
  k.add_vertex("cl", "Cl", -2);
  k.set_bond("na", "cl", kIonic);
  bool ion = false;
  for (const auto& v : validate_prechemical(k)) ion = ion || v.clause == "ion-charge";
  CHECK(ion);
  ChemGraph p;
  p.add_vertex("a", kAlpha, 1);
  CHECK(validate_prechemical(p).empty());
  CHECK_FALSE(validate_chemical(p, ValenceTable()).empty());
}

TEST_CASE("valence table") {
  ValenceTable d;
  CHECK(d.of("C") == 4);
  CHECK(d.of(kAlpha) == 1);
  CHECK_THROWS_AS(d.of("Xe"), ConfigError);
  ValenceTable t = ValenceTable::from_text("# comment\nXe=0\nC = 4\n");
  CHECK(t.of("Xe") == 0);
  CHECK_THROWS_AS(ValenceTable::from_text("C4\n"), ParseError);
  write_file("valences_test.txt", "S=6\n");
  ::setenv("CHEMCAT_VALENCES", "valences_test.txt", 1);
  CHECK(ValenceTable::resolve("").of("S") == 6);
  ::unsetenv("CHEMCAT_VALENCES");
  CHECK(ValenceTable::resolve("").of("S") == 2);
}

TEST_CASE("random graphs: chemical by an independent count, print/parse round-trip") {
  ValenceTable vt;
  for (int seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    ChemGraph g = random_chemical_graph(rng, 12, vt);
    CAPTURE(seed);
    REQUIRE(validate_chemical(g, vt).empty());
    CHECK(valence_ok(g, vt));
    CHECK(parse_graph(print_graph(g, "x")).graph == g);
  }
}

TEST_CASE("renaming, unions and components") {
  ChemGraph w = fixture_graph("water.cg");
  ChemGraph r = rename(w, "o", "O1");
  CHECK(r.has("O1"));
  CHECK(r.bond("O1", "h1") == 1);
  CHECK_THROWS_AS(rename(w, "o", "h1"), DomainError);
  CHECK_THROWS_AS(disjoint_union(w, w), DomainError);
  std::map<Name, Name> ren;
  ChemGraph f = freshen(w, w, "_", &ren);
  ChemGraph two = disjoint_union(w, f);
  CHECK(two.size() == 6);
  CHECK(components(two).size() == 2);
  CHECK_FALSE(connected(two));
  CHECK(induced(two, {"o", "h1"}).bonds().size() == 1);
  CHECK(fresh_name("h", w.names()) == "h3");
}
