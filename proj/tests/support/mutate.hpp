// SPDX-License-Identifier: Apache-2.0
// Term mutations used to build equal-ish pairs for the completeness checks.
#pragma once

#include "random_chem.hpp"

namespace chemcat::testing {

inline Gen rename_in(Gen g, const Name& from, const Name& to) {
  for (Name* n : {&g.u, &g.v, &g.a, &g.b})
    if (*n == from) *n = to;
  return g;
}

// One random local change; the result is typed on g or the input is returned.
inline Term mutate_once(Rng& rng, const Term& t, const ChemGraph& g, Fresh& fresh) {
  if (t.gens.empty()) return t;
  Term s = t;
  int n = static_cast<int>(t.gens.size());
  switch (uniform(rng, 0, 7)) {
    case 0: {  // swap neighbours
      if (n < 2) break;
      int i = uniform(rng, 0, n - 2);
      std::swap(s.gens[i], s.gens[i + 1]);
      break;
    }
    case 1: {  // rename a created vertex from its birth on
      int i = uniform(rng, 0, n - 1);
      const Gen& x = s.gens[i];
      if (!x.has_sub() || x.bar) break;
      Name from = coin(rng) ? x.a : x.b, to = fresh();
      for (int k = i; k < n; ++k) s.gens[k] = rename_in(s.gens[k], from, to);
      break;
    }
    case 2: {  // insert S(u)
      int i = uniform(rng, 0, n);
      auto tr = eval_trace(t, g);
      auto names = tr[i].names();
      if (names.empty()) break;
      std::vector<Name> nv(names.begin(), names.end());
      s.gens.insert(s.gens.begin() + i, Gen::S(pick(rng, nv)));
      break;
    }
    case 3: {  // drop an S or an R
      int i = uniform(rng, 0, n - 1);
      if (s.gens[i].kind == Kind::S) s.gens.erase(s.gens.begin() + i);
      break;
    }
    case 4: {  // insert x;~x
      int i = uniform(rng, 0, n);
      auto tr = eval_trace(t, g);
      auto c = applicable(tr[i], fresh, false);
      if (c.empty()) break;
      Gen x = pick(rng, c);
      s.gens.insert(s.gens.begin() + i, {x, dagger(x)});
      break;
    }
    case 5: {  // flip a covalent generator's orientation
      int i = uniform(rng, 0, n - 1);
      Gen& x = s.gens[i];
      if (x.kind == Kind::Cov) x = Gen::Cov(x.v, x.u, x.b, x.a, x.bar);
      break;
    }
    case 6: {  // dagger twice
      s = dagger_term(dagger_term(s));
      break;
    }
    default: {  // re-roll a suffix
      int i = uniform(rng, 0, n - 1);
      auto tr = eval_trace(t, g);
      Term tail = random_term(rng, tr[i], n - i, fresh);
      s.gens.resize(i);
      s.gens.insert(s.gens.end(), tail.gens.begin(), tail.gens.end());
      break;
    }
  }
  if (!try_eval(s, g)) return t;
  return s;
}

inline Term mutate(Rng& rng, const Term& t, const ChemGraph& g, Fresh& fresh, int steps) {
  Term s = t;
  for (int k = 0; k < steps; ++k) s = mutate_once(rng, s, g, fresh);
  return s;
}

}  // namespace chemcat::testing
