// SPDX-License-Identifier: Apache-2.0
#include "chemcat/bridge.hpp"

#include <algorithm>
#include <tuple>

namespace chemcat {

RPair gen_pair(const Gen& g) {
  switch (g.kind) {
    case Kind::Id: return {};
    case Kind::S: return {{g.u}, {g.u}};
    case Kind::R: return {{g.u}, {g.v}};
    default: break;
  }
  auto u = g.U();
  auto d = g.D();
  NameSet small(u.begin(), u.end());
  NameSet big = small;
  big.insert(d.begin(), d.end());
  if (g.bar) return {big, small};
  return {small, big};
}

RPair compose_pairs(const RPair& p, const RPair& q) {
  RPair out{p.first, q.second};
  for (const auto& x : q.first)
    if (!p.second.count(x)) out.first.insert(x);
  for (const auto& y : p.second)
    if (!q.first.count(y)) out.second.insert(y);
  return out;
}

RPair term_pair(const Term& t) {
  RPair acc;
  for (const auto& g : t.gens) acc = compose_pairs(acc, gen_pair(g));
  return acc;
}

Reaction translate(const Term& t, const ChemGraph& a) {
  ChemGraph b;
  try {
    b = eval_term(t, a);
  } catch (const TypeError& e) {
    throw PreconditionError(std::string("translate: ill-typed term: ") + e.what());
  }
  auto [x, y] = term_pair(t);
  return named_reaction(a, b, x, y);
}

Reaction translate_stepwise(const Term& t, const ChemGraph& a) {
  std::vector<ChemGraph> trace;
  try {
    trace = eval_trace(t, a);
  } catch (const TypeError& e) {
    throw PreconditionError(std::string("translate: ill-typed term: ") + e.what());
  }
  Reaction acc = identity_reaction(a);
  for (std::size_t k = 0; k < t.gens.size(); ++k) {
    auto [x, y] = gen_pair(t.gens[k]);
    acc = compose(acc, named_reaction(trace[k], trace[k + 1], x, y));
  }
  return acc;
}

bool image_check(const Reaction& r) {
  for (const auto& [x, y] : r.b)
    if (x != y) return false;
  for (const auto& [x, y] : r.i)
    if (x != y) return false;
  return true;
}

namespace {

struct Namer {
  NameSet used;
  int k = 0;
  Name next() {
    Name n;
    do n = "_d" + std::to_string(++k);
    while (used.count(n));
    used.insert(n);
    return n;
  }
};

bool has_ionic(const ChemGraph& g, const Name& u) {
  for (const auto& [w, b] : g.adjacent(u))
    if (b == kIonic) return true;
  return false;
}

// Fully disconnect the changed set `u` of g: ionic bonds, covalent bonds,
// negative charges, then the remaining alpha slots. Steps whose output would
// not be chemical are skipped; whatever is left is matched up later.
Term disconnect_all(ChemGraph& g, NameSet& u, NameSet& created, Namer& nm) {
  Term t;
  auto emit = [&](const Gen& gen) {
    if (!apply_gen(gen, g)) return false;
    t.gens.push_back(gen);
    return true;
  };
  std::vector<std::pair<Name, Name>> ionic;
  for (const auto& [e, b] : g.bonds())
    if (b == kIonic && u.count(e.first) && u.count(e.second)) ionic.push_back(e);
  for (auto [x, y] : ionic) {
    if (g.charge(x) < 0) std::swap(x, y);
    emit(Gen::Ion(x, y));
  }
  std::vector<std::pair<Name, Name>> covs;
  for (const auto& [e, b] : g.bonds())
    if (cov(b) > 0 && u.count(e.first) && u.count(e.second) && g.is_chem(e.first) && g.is_chem(e.second))
      covs.push_back(e);
  for (const auto& [x, y] : covs) {
    while (cov(g.bond(x, y)) > 0) {
      Name a = nm.next(), b = nm.next();
      if (!emit(Gen::Cov(x, y, a, b))) break;
      u.insert({a, b});
      created.insert({a, b});
    }
  }
  NameSet chem;
  for (const auto& x : u)
    if (g.is_chem(x)) chem.insert(x);
  for (const auto& x : chem) {
    if (has_ionic(g, x)) continue;
    while (g.charge(x) < 0) {
      Name a = nm.next(), b = nm.next();
      if (!emit(Gen::ENeg(x, a, b))) {
        nm.used.erase(a);
        nm.used.erase(b);
        break;
      }
      u.insert({a, b});
      created.insert({a, b});
    }
  }
  for (const auto& x : chem) {
    if (has_ionic(g, x)) continue;
    std::vector<Name> slots;
    for (const auto& [w, b] : g.adjacent(x))
      if (b == 1 && g.is_alpha(w) && u.count(w)) slots.push_back(w);
    for (const auto& w : slots) emit(Gen::EPos(x, w));
  }
  return t;
}

using AlphaKey = std::tuple<Name, Bond, int>;

AlphaKey alpha_key(const ChemGraph& g, const Name& x) {
  const auto& adj = g.adjacent(x);
  if (adj.empty()) return {"", 0, g.charge(x)};
  return {adj.begin()->first, adj.begin()->second, g.charge(x)};
}

Term substitute(const Term& t, const Name& from, const Name& to) {
  Term out = t;
  for (auto& g : out.gens)
    for (Name* n : {&g.u, &g.v, &g.a, &g.b})
      if (*n == from) *n = to;
  return out;
}

NameSet term_names(const Term& t) {
  NameSet out;
  for (const auto& g : t.gens)
    for (const auto& n : g.names()) out.insert(n);
  return out;
}

}  // namespace

Decomposition decompose(const Reaction& r, const ValenceTable& vt) {
  if (auto v = validate_reaction(r, vt); !v.empty())
    throw PreconditionError("decompose: invalid reaction: " + v.front().str());

  // B: the codomain renamed along b^-1 and i^-1; changed alphas keep their
  // names unless that clashes.
  VMap binv = invert(r.b), iinv = invert(r.i);
  NameSet taken;
  for (const auto& [x, y] : r.b) taken.insert(x);
  for (const auto& [x, y] : r.i) taken.insert(x);
  Namer nm;
  nm.used = r.dom.names();
  for (const auto& n : r.cod.names()) nm.used.insert(n);
  VMap to_b;  // cod name -> B name
  for (const auto& [c, at] : r.cod.atoms()) {
    if (binv.count(c)) to_b[c] = binv.at(c);
    else if (iinv.count(c)) to_b[c] = iinv.at(c);
    else to_b[c] = taken.count(c) ? nm.next() : c;
  }
  ChemGraph bg = rename_all(r.cod, to_b);
  NameSet y;
  for (const auto& c : r.UB) y.insert(to_b.at(c));

  Decomposition out;
  out.iota.dom = bg;
  out.iota.cod = r.cod;
  out.iota.i = invert(to_b);

  for (const auto& n : bg.names()) nm.used.insert(n);
  ChemGraph ga = r.dom, gb = bg;
  NameSet ua = r.UA, ub = y, made_a, made_b;
  Term pa = disconnect_all(ga, ua, made_a, nm);
  Term pb = disconnect_all(gb, ub, made_b, nm);

  if (ga.chem_vertices() != gb.chem_vertices())
    throw PreconditionError("decompose: disconnected chemical parts differ");
  std::map<AlphaKey, std::vector<Name>> ka, kb;
  for (const auto& x : ua)
    if (ga.is_alpha(x)) ka[alpha_key(ga, x)].push_back(x);
  for (const auto& x : ub)
    if (gb.is_alpha(x)) kb[alpha_key(gb, x)].push_back(x);
  if (ka.size() != kb.size())
    throw PreconditionError("decompose: reaction is not reachable by disconnection rules");
  VMap sigma;
  for (auto& [key, la] : ka) {
    auto it = kb.find(key);
    if (it == kb.end() || it->second.size() != la.size())
      throw PreconditionError("decompose: reaction is not reachable by disconnection rules");
    std::vector<Name> ra, rb;
    NameSet sb(it->second.begin(), it->second.end());
    for (const auto& x : la) {
      if (sb.count(x)) sb.erase(x);
      else ra.push_back(x);
    }
    rb.assign(sb.begin(), sb.end());
    std::sort(ra.begin(), ra.end());
    for (std::size_t k = 0; k < ra.size(); ++k) sigma[ra[k]] = rb[k];
  }

  // fold renames into the created names where that is free
  NameSet names_a = r.dom.names(), names_b = bg.names();
  VMap rest;
  for (const auto& [x, t] : sigma) {
    NameSet fa = term_names(pa), fb = term_names(pb);
    if (made_b.count(t) && !names_b.count(x) && !fb.count(x)) {
      pb = substitute(pb, t, x);
      gb = rename(gb, t, x);
    } else if (made_a.count(x) && !names_a.count(t) && !fa.count(t)) {
      pa = substitute(pa, x, t);
      ga = rename(ga, x, t);
    } else {
      rest[x] = t;
    }
  }

  // remaining renames as a parallel move, breaking cycles with temporaries
  Term moves;
  NameSet live = ga.names();
  while (!rest.empty()) {
    bool progress = false;
    for (auto it = rest.begin(); it != rest.end();) {
      if (!live.count(it->second)) {
        moves.gens.push_back(Gen::R(it->first, it->second));
        live.erase(it->first);
        live.insert(it->second);
        it = rest.erase(it);
        progress = true;
      } else {
        ++it;
      }
    }
    if (!progress) {
      auto it = rest.begin();
      Name tmp = nm.next();
      moves.gens.push_back(Gen::R(it->first, tmp));
      live.erase(it->first);
      live.insert(tmp);
      Name target = it->second;
      rest.erase(it);
      rest[tmp] = target;
    }
  }

  Term t = concat(concat(pa, moves), dagger_term(pb));
  RPair p = term_pair(t);
  Term pre;
  for (const auto& x : r.UA)
    if (!p.first.count(x)) pre.gens.push_back(Gen::S(x));
  t = concat(pre, t);
  p = term_pair(t);
  for (const auto& x : y)
    if (!p.second.count(x)) t.gens.push_back(Gen::S(x));

  auto end = try_eval(t, r.dom);
  if (!end || !(*end == bg))
    throw PreconditionError("decompose: reaction is not reachable by disconnection rules");
  if (term_pair(t) != RPair{r.UA, y}) throw InvariantError("decompose: changed sets of the term disagree with r");
  if (!(compose(translate(t, r.dom), out.iota) == r))
    throw InvariantError("decompose: R(t);iota differs from r");
  out.t = std::move(t);
  return out;
}

}  // namespace chemcat
