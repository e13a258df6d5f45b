// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "chemcat/canon.hpp"
#include "chemcat/chirality.hpp"
#include "fixtures.hpp"
#include "random_chem.hpp"

using namespace chemcat;
using namespace chemcat::testing;

TEST_CASE("codes of small molecules") {
  CHECK(graph_code(fixture_graph("water.cg")) == "H,H,O/0-2:1,1-2:1");
  CHECK(graph_code(fixture_graph("nacl.cg")) == "Cl^-1,Na^1/0-1:i");
  CHECK(graph_code(ChemGraph{}) == "");
}

TEST_CASE("codes are invariant under renaming and decode back") {
  for (unsigned seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    ChemGraph g = random_chemical_graph(rng, 12);
    NameSet ns = g.names();
    std::vector<Name> v(ns.begin(), ns.end()), w = v;
    std::shuffle(w.begin(), w.end(), rng);
    std::map<Name, Name> f;
    for (std::size_t k = 0; k < v.size(); ++k) f[v[k]] = "z" + w[k];
    std::string c = graph_code(g);
    CAPTURE(c);
    CHECK(graph_code(rename_all(g, f)) == c);
    ChemGraph d = decode_graph(c);
    CHECK(graph_code(d) == c);
    CHECK(d.size() == g.size());
    CHECK(!label_isomorphisms(g, d).empty());
  }
}

TEST_CASE("equal codes exactly for isomorphic graphs") {
  std::vector<ChemGraph> gs;
  for (unsigned seed = 0; seed < 120; ++seed) {
    Rng rng(seed);
    gs.push_back(random_chemical_graph(rng, 6));
  }
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j) {
      bool iso = !label_isomorphisms(gs[i], gs[j]).empty();
      CHECK((graph_code(gs[i]) == graph_code(gs[j])) == iso);
    }
}

TEST_CASE("malformed codes are parse errors") {
  CHECK_THROWS_AS(decode_graph("C,O/0-5:1"), ParseError);
  CHECK_THROWS_AS(decode_graph("C/0-0:x"), ParseError);
}
