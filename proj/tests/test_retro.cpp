// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <chrono>
#include <sstream>

#include "chemcat/canon.hpp"
#include "chemcat/retro.hpp"
#include "fixtures.hpp"
#include "random_chem.hpp"

using namespace chemcat;
using namespace chemcat::testing;

namespace {

std::vector<Term> rules_file(const std::string& rel) {
  std::vector<Term> out;
  std::stringstream in(read_file(fixture(rel)));
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(parse_term(line));
  }
  return out;
}

Environment water_env() { return parse_environment(read_file(fixture("water.cg"))); }

}  // namespace

TEST_CASE("toy search: one H2 step through the bond-break scheme") {
  auto t0 = std::chrono::steady_clock::now();
  ChemGraph target = fixture_graph("retro/target.cg");
  std::vector<ReactionScheme> schemes{parse_scheme(read_file(fixture("retro/schemes/h2_break.scheme")))};
  Environment env = parse_environment(read_file(fixture("retro/env.cg")));
  SearchResult res = search_step(target, rules_file("retro/rules.terms"), schemes, std::nullopt, env, parse_bounds("k=1"));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(res.steps.size() == 1);
  const RetroStep& s = res.steps.front();
  CHECK(s.via == "scheme 1");
  CHECK(validate_step(s).empty());
  CHECK(graph_code(s.E) == "H,H/0-1:1");
  CHECK(s.B.empty());
  CHECK(secs < 1.0);
}

TEST_CASE("oracle search: benzoate from an acyl chloride and an alcohol") {
  ChemGraph target = fixture_graph("retro_oracle/target.cg");
  Environment env = parse_environment(read_file(fixture("retro_oracle/env.cg")));
  Oracle o = parse_oracle(read_file(fixture("retro_oracle/oracle.txt")));
  SearchResult res =
      search_step(target, rules_file("retro_oracle/rules.terms"), {}, o, env, parse_bounds("k=2"));
  REQUIRE(res.steps.size() == 1);
  const RetroStep& s = res.steps.front();
  CHECK(s.via == "oracle");
  CHECK(validate_step(s).empty());
  CHECK(graph_code(s.B) == "Cl,H/0-1:1");
  // the three pieces of a step line up
  CHECK(validate_para(s.m, s.M).empty());
  CHECK(validate_para(s.r, s.M).empty());
  CHECK(s.m.dom == s.S);
  CHECK(s.r.cod == target_plus(s.T, s.B));
  CHECK(eval_term(s.d, s.T) == s.S);
  CHECK(validate_para(embed_match(s.m, s.M), s.M).empty());
  // unit laws on the step's morphisms
  CHECK(para_compose(para_identity(ParaKind::Match, s.M, s.S), s.m, s.M) == s.m);
  CHECK(para_compose(s.m, para_identity(ParaKind::Match, s.M, s.E), s.M) == s.m);
  ParaMorphism rr = para_compose(para_identity(ParaKind::React, s.M, s.E), s.r, s.M);
  CHECK(validate_para(rr, s.M).empty());
  CHECK(equal(rr.r, s.r.r));
}

TEST_CASE("Disc composition with environment copies is associative") {
  Environment env = water_env();
  int checked = 0;
  for (unsigned seed = 0; seed < 300 && checked < 60; ++seed) {
    Rng rng(seed);
    ChemGraph a = random_chemical_graph(rng, 6);
    auto step = [&](const ChemGraph& from, int copies) {
      ParaMorphism x;
      x.kind = ParaKind::Disc;
      x.n = {copies};
      x.dom = from;
      Fresh f;
      f.prefix = "s" + std::to_string(seed) + "_" + std::to_string(copies) + "_";
      ChemGraph start = env_plus(env, x.n, from);
      x.t = random_term(rng, start, uniform(rng, 0, 3), f);
      x.cod = eval_term(x.t, start);
      return x;
    };
    ParaMorphism x = step(a, 0);
    ParaMorphism y = step(x.cod, 1);
    ParaMorphism z = step(y.cod, 1);
    CHECK(validate_para(x, env).empty());
    try {
      ParaMorphism l = para_compose(para_compose(x, y, env), z, env);
      ParaMorphism r = para_compose(x, para_compose(y, z, env), env);
      CHECK(l == r);
      CHECK(validate_para(l, env).empty());
      ++checked;
    } catch (const PreconditionError&) {
      // a later step used a name that the shift assigns to a copy
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("para morphisms of the wrong layer or shape do not compose") {
  Environment env = water_env();
  ChemGraph h2 = fixture_graph("h2.cg");
  ParaMorphism m = para_identity(ParaKind::Match, env, h2);
  ParaMorphism r = para_identity(ParaKind::React, env, h2);
  CHECK_THROWS_AS(para_compose(m, r, env), TypeError);
  CHECK_THROWS_AS(para_compose(m, para_identity(ParaKind::Match, env, fixture_graph("water.cg")), env), TypeError);
  CHECK_THROWS_AS(embed_match(r, env), TypeError);
}

TEST_CASE("environments") {
  Environment env = parse_environment("graph water\natom o O\natom h1 H\natom h2 H\nbond o h1 1\nbond o h2 1\n"
                                      "graph hcl\natom h H\natom cl Cl\nbond h cl 1\n");
  CHECK(env.names == std::vector<std::string>{"water", "hcl"});
  CHECK(validate_environment(env).empty());
  CHECK(parse_environment(print_environment(env)) == env);
  ChemGraph sum = env_sum(env, {2, 1});
  CHECK(sum.size() == 8);
  CHECK(sum.has("M1.2.o"));
  CHECK(sum.has("M2.1.cl"));
  CHECK_THROWS_AS(env_sum(env, {1}), DomainError);
  // copies go after the ones a graph already has
  CHECK(copy_offset(env, sum) == Mult{2, 1});
  ChemGraph more = env_plus(env, {1, 0}, sum);
  CHECK(more.has("M1.3.o"));
  CHECK(more.size() == 11);

  Environment bad = parse_environment("graph x\natom c C\natom p alpha\nbond c p 1\n");
  CHECK(!validate_environment(bad).empty());
  CHECK_THROWS_AS(search_step(fixture_graph("h2.cg"), {parse_term("C(h1,h2|a,b)")}, {}, std::nullopt, bad, {}),
                  PreconditionError);
  CHECK_THROWS_AS(search_step(fixture_graph("h2.cg"), {}, {}, std::nullopt, env, {}), DomainError);
}

TEST_CASE("bounds and oracle files") {
  SearchBounds b = parse_bounds("k=3,len=5,candidates=10,matchings=7,seconds=0.5");
  CHECK(b.env == 3);
  CHECK(b.term_len == 5);
  CHECK(b.candidates == 10);
  CHECK(b.matchings == 7);
  CHECK(b.seconds == 0.5);
  CHECK(parse_bounds("env=2").env == 2);
  CHECK_THROWS_AS(parse_bounds("depth=2"), ParseError);
  CHECK_THROWS_AS(parse_bounds("k"), ParseError);
  CHECK_THROWS_AS(parse_bounds("k=-1"), ParseError);
  CHECK_THROWS_AS(parse_oracle("H,H/0-1:1 H,H/0-1:1\n"), ParseError);
  CHECK(parse_oracle("# none\nH,H/0-1:1 -> H,alpha/0-1:1.H,alpha/0-1:1\n").size() == 1);
}

TEST_CASE("a tight budget marks the search partial") {
  ChemGraph target = fixture_graph("retro_oracle/target.cg");
  Environment env = parse_environment(read_file(fixture("retro_oracle/env.cg")));
  Oracle o = parse_oracle(read_file(fixture("retro_oracle/oracle.txt")));
  SearchResult res = search_step(target, rules_file("retro_oracle/rules.terms"), {}, o, env, parse_bounds("k=2,candidates=1"));
  CHECK(res.partial);
}
