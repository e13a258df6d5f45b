// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "chemcat/canon.hpp"
#include "chemcat/chirality.hpp"
#include "chemcat/normal_form.hpp"
#include "chemcat/retro.hpp"
#include "equiv_pairs.hpp"
#include "fixtures.hpp"
#include "squares.hpp"

using namespace chemcat;
using namespace chemcat::testing;

static void BM_BenzylNormalForm(benchmark::State& st) {
  ChemGraph g = fixture_graph("benzyl.cg");
  Term seq = fixture_term("benzyl_seq.term");
  for (auto _ : st) benchmark::DoNotOptimize(to_normal_form(seq, g));
}
BENCHMARK(BM_BenzylNormalForm);

static void BM_Translate(benchmark::State& st) {
  ChemGraph g = fixture_graph("benzyl.cg");
  Term seq = fixture_term("benzyl_seq.term");
  for (auto _ : st) benchmark::DoNotOptimize(translate(seq, g));
}
BENCHMARK(BM_Translate);

// both deciders on a fixed corpus of random pairs
static void BM_DecideBoth(benchmark::State& st) {
  std::vector<TermPair> ps;
  for (unsigned i = 0; i < 64; ++i) ps.push_back(random_pair(1000 + i, static_cast<int>(st.range(0))));
  std::size_t k = 0;
  for (auto _ : st) {
    const TermPair& p = ps[k++ % ps.size()];
    benchmark::DoNotOptimize(decide_equiv_both(p.t, p.s, p.g));
  }
}
BENCHMARK(BM_DecideBoth)->Arg(6)->Arg(12);

static void BM_Decompose(benchmark::State& st) {
  std::vector<Reaction> rs;
  for (unsigned i = 0; i < 64; ++i) {
    Rng rng(50000 + i);
    rs.push_back(random_reaction(rng, 10));
  }
  std::size_t k = 0;
  for (auto _ : st) benchmark::DoNotOptimize(decompose(rs[k++ % rs.size()]));
}
BENCHMARK(BM_Decompose);

static void BM_GraphCode(benchmark::State& st) {
  Rng rng(3);
  ChemGraph g = random_chemical_graph(rng, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(graph_code(g));
}
BENCHMARK(BM_GraphCode)->Arg(8)->Arg(16)->Arg(32);

static void BM_InstanceRoundTrip(benchmark::State& st) {
  std::vector<ReactionInstance> xs;
  for (unsigned seed = 0; xs.size() < 32; ++seed)
    if (auto x = random_instance(seed, 10)) xs.push_back(*x);
  std::size_t k = 0;
  for (auto _ : st) benchmark::DoNotOptimize(tuple_to_instance(instance_to_tuple(xs[k++ % xs.size()])));
}
BENCHMARK(BM_InstanceRoundTrip);

static void BM_Chirality(benchmark::State& st) {
  OrientedGraph l = oriented(parse_graph(read_file(fixture("butanol_left.cg"))));
  OrientedGraph r = oriented(parse_graph(read_file(fixture("butanol_right.cg"))));
  for (auto _ : st) benchmark::DoNotOptimize(chirality(l, r));
}
BENCHMARK(BM_Chirality);

static void BM_RetroOracleStep(benchmark::State& st) {
  ChemGraph target = fixture_graph("retro_oracle/target.cg");
  Environment env = parse_environment(read_file(fixture("retro_oracle/env.cg")));
  Oracle o = parse_oracle(read_file(fixture("retro_oracle/oracle.txt")));
  std::vector<Term> rules{parse_term("C(u,v|a,b)")};
  SearchBounds b = parse_bounds("k=2");
  for (auto _ : st) benchmark::DoNotOptimize(search_step(target, rules, {}, o, env, b));
}
BENCHMARK(BM_RetroOracleStep)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
