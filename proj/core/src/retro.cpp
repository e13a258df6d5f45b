// SPDX-License-Identifier: Apache-2.0
#include "chemcat/retro.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <sstream>

#include "chemcat/canon.hpp"
#include "chemcat/chirality.hpp"
#include "chemcat/io.hpp"

namespace chemcat {

// -- environments -----------------------------------------------------------

Environment parse_environment(const std::string& text) {
  GraphFile f = parse_graph_file(text);
  Environment env;
  for (auto& blk : f.blocks) {
    env.names.push_back(blk.name.empty() ? "M" + std::to_string(env.names.size() + 1) : blk.name);
    env.entries.push_back(blk.graph);
  }
  return env;
}

std::string print_environment(const Environment& env) {
  std::string out;
  for (std::size_t i = 0; i < env.size(); ++i) out += print_graph(env.entries[i], env.names[i]);
  return out;
}

Violations validate_environment(const Environment& env, const ValenceTable& vt) {
  Violations out;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const ChemGraph& g = env.entries[i];
    const std::string& n = env.names[i];
    if (!is_chemical(g, vt)) out.push_back({"env-chemical", {n}, "entry is not a chemical graph"});
    if (!g.alpha_vertices().empty()) out.push_back({"env-alpha", {n}, "entry has alpha vertices"});
    if (g.empty() || !connected(g)) out.push_back({"env-connected", {n}, "entry is not connected"});
  }
  return out;
}

std::string env_copy_name(std::size_t i, int copy, const Name& v) {
  return "M" + std::to_string(i + 1) + "." + std::to_string(copy) + "." + v;
}

ChemGraph env_sum(const Environment& env, const Mult& n, const Mult& from) {
  if (n.size() != env.size() || (!from.empty() && from.size() != env.size()))
    throw DomainError("environment multiplicities do not match the environment");
  ChemGraph out;
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (n[i] < 0) throw DomainError("negative environment multiplicity");
    int base = from.empty() ? 0 : from[i];
    for (int j = base + 1; j <= base + n[i]; ++j) {
      VMap f;
      for (const auto& v : env.entries[i].names()) f[v] = env_copy_name(i, j, v);
      out = disjoint_union(out, rename_all(env.entries[i], f));
    }
  }
  return out;
}

Mult copy_offset(const Environment& env, const ChemGraph& a) {
  Mult off(env.size(), 0);
  for (const auto& x : a.names()) {
    // M<i>.<j>.<v>
    if (x.size() < 6 || x[0] != 'M') continue;
    auto d1 = x.find('.'), d2 = d1 == std::string::npos ? d1 : x.find('.', d1 + 1);
    if (d2 == std::string::npos) continue;
    std::string si = x.substr(1, d1 - 1), sj = x.substr(d1 + 1, d2 - d1 - 1);
    if (si.empty() || sj.empty() || si.find_first_not_of("0123456789") != std::string::npos ||
        sj.find_first_not_of("0123456789") != std::string::npos || si.size() > 6 || sj.size() > 6)
      continue;
    std::size_t i = std::stoul(si);
    int j = std::stoi(sj);
    if (i >= 1 && i <= env.size()) off[i - 1] = std::max(off[i - 1], j);
  }
  return off;
}

ChemGraph env_plus(const Environment& env, const Mult& n, const ChemGraph& a) {
  return disjoint_union(env_sum(env, n, copy_offset(env, a)), a);
}

// -- parameterised morphisms ------------------------------------------------

namespace {

Name rn(const VMap& f, const Name& x) {
  auto it = f.find(x);
  return it == f.end() ? x : it->second;
}

Term rename_term(const Term& t, const VMap& f) {
  Term out = t;
  for (auto& g : out.gens)
    for (Name* x : {&g.u, &g.v, &g.a, &g.b})
      if (!x->empty()) *x = rn(f, *x);
  return out;
}

Reaction rename_dom(const Reaction& r, const VMap& f) {
  Reaction s = r;
  s.dom = rename_all(r.dom, f);
  s.UA.clear();
  for (const auto& x : r.UA) s.UA.insert(rn(f, x));
  s.b.clear();
  for (const auto& [x, y] : r.b) s.b[rn(f, x)] = y;
  s.i.clear();
  for (const auto& [x, y] : r.i) s.i[rn(f, x)] = y;
  return s;
}

Reaction rename_cod(const Reaction& r, const VMap& f) {
  Reaction s = r;
  s.cod = rename_all(r.cod, f);
  s.UB.clear();
  for (const auto& x : r.UB) s.UB.insert(rn(f, x));
  for (auto& [x, y] : s.b) y = rn(f, y);
  for (auto& [x, y] : s.i) y = rn(f, y);
  return s;
}

// renames copies from..from+n of each entry to start after `to` instead
VMap shift_copies(const Environment& env, const Mult& from, const Mult& to, const Mult& n) {
  VMap f;
  for (std::size_t i = 0; i < env.size(); ++i)
    for (int j = 1; j <= n[i]; ++j)
      for (const auto& v : env.entries[i].names())
        f[env_copy_name(i, from[i] + j, v)] = env_copy_name(i, to[i] + j, v);
  return f;
}

Mult add(const Mult& a, const Mult& b) {
  Mult c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

}  // namespace

ParaMorphism para_identity(ParaKind kind, const Environment& env, const ChemGraph& a) {
  ParaMorphism x;
  x.kind = kind;
  x.n.assign(env.size(), 0);
  x.dom = x.cod = a;
  if (kind == ParaKind::Match)
    for (const auto& v : a.names()) x.m[v] = v;
  if (kind == ParaKind::React) x.r = identity_reaction(a);
  return x;
}

Violations validate_para(const ParaMorphism& x, const Environment& env, const ValenceTable& vt) {
  Violations out;
  if (x.n.size() != env.size()) {
    out.push_back({"para-mult", {}, "multiplicity vector does not match the environment"});
    return out;
  }
  ChemGraph envs = env_sum(env, x.n, copy_offset(env, x.dom));
  switch (x.kind) {
    case ParaKind::Match: {
      GraphMorphism m{x.dom, x.cod, x.m};
      if (!validate_prechemical(x.dom).empty() || !validate_prechemical(x.cod).empty() || !check_morphism(m).empty() ||
          !check_matching(m)) {
        out.push_back({"para-match", {}, "not a matching"});
        return out;
      }
      NameSet img_m = image(m), img_r;
      for (const auto& v : envs.names()) {
        auto it = x.inj.find(v);
        if (it == x.inj.end() || !x.cod.has(it->second)) {
          out.push_back({"para-injection", {v}, "environment vertex not mapped into the codomain"});
          continue;
        }
        if (!img_r.insert(it->second).second) out.push_back({"para-injection", {v}, "injection is not injective"});
        if (envs.sym(v) != x.cod.sym(it->second)) out.push_back({"para-injection", {v}, "atom label not preserved"});
      }
      if (x.inj.size() != envs.size()) out.push_back({"para-injection", {}, "injection has extra entries"});
      for (const auto& w : x.cod.names())
        if (!img_m.count(w) && !img_r.count(w)) out.push_back({"para-cover", {w}, "vertex is in neither image"});
      NameSet want;
      for (const auto& a : x.dom.alpha_vertices())
        if (x.cod.is_chem(x.m.at(a))) want.insert(x.m.at(a));
      for (const auto& w : img_m)
        if (img_r.count(w) != want.count(w))
          out.push_back({"para-overlap", {w}, "images meet outside the chemical images of alpha vertices"});
      break;
    }
    case ParaKind::React: {
      ChemGraph d = env_plus(env, x.n, x.dom);
      if (!(x.r.dom == d)) out.push_back({"para-react", {}, "reaction domain is not environment + A"});
      if (!(x.r.cod == x.cod)) out.push_back({"para-react", {}, "reaction codomain is not B"});
      if (out.empty())
        for (auto& v : validate_reaction(x.r, vt)) out.push_back(v);
      break;
    }
    case ParaKind::Disc: {
      auto e = try_eval(x.t, env_plus(env, x.n, x.dom));
      if (!e) out.push_back({"para-disc", {}, "term is not typed on environment + A"});
      else if (!(*e == x.cod)) out.push_back({"para-disc", {}, "term does not evaluate to B"});
      break;
    }
  }
  return out;
}

ParaMorphism para_compose(const ParaMorphism& x, const ParaMorphism& y, const Environment& env) {
  if (x.kind != y.kind) throw TypeError("para_compose: different layers", 0);
  if (!(x.cod == y.dom)) throw TypeError("para_compose: codomain and domain differ", 0);
  if (x.n.size() != env.size() || y.n.size() != env.size())
    throw DomainError("para_compose: multiplicities do not match the environment");
  // y numbers its copies after those in x.cod; inside the composite they
  // follow x's own
  Mult xo = copy_offset(env, x.dom), yo = copy_offset(env, y.dom);
  VMap sh = shift_copies(env, yo, add(xo, x.n), y.n);
  ParaMorphism z;
  z.kind = x.kind;
  z.n = add(x.n, y.n);
  z.dom = x.dom;
  z.cod = y.cod;
  switch (x.kind) {
    case ParaKind::Match: {
      for (const auto& [a, b] : x.m) z.m[a] = y.m.at(b);
      NameSet img;
      for (const auto& [v, w] : x.inj) z.inj[v] = y.m.at(w);
      for (const auto& [v, w] : y.inj) z.inj[rn(sh, v)] = w;
      for (const auto& [v, w] : z.inj)
        if (!img.insert(w).second) throw PreconditionError("para_compose: composite injection is not injective at " + w);
      break;
    }
    case ParaKind::React: {
      ChemGraph ey = env_sum(env, y.n, add(xo, x.n));
      for (const auto& v : ey.names())
        if (x.cod.has(v)) throw PreconditionError("para_compose: copy name " + v + " is already used by the middle object");
      Reaction lift = tensor(x.r, identity_reaction(ey));
      Reaction ys = rename_dom(y.r, sh);
      // the two sides list the same graph; align on the nose
      if (!(lift.cod == ys.dom)) throw TypeError("para_compose: shifted domains disagree", 0);
      z.r = compose(lift, ys);
      z.r.dom = env_plus(env, z.n, x.dom);
      break;
    }
    case ParaKind::Disc: {
      z.t = concat(x.t, rename_term(y.t, sh));
      auto e = try_eval(z.t, env_plus(env, z.n, x.dom));
      if (!e || !(*e == y.cod))
        throw PreconditionError("para_compose: composite term is not typed (fresh names meet environment copies)");
      break;
    }
  }
  return z;
}

ParaMorphism embed_match(const ParaMorphism& x, const Environment& env) {
  if (x.kind != ParaKind::Match) throw TypeError("embed_match: not a Match morphism", 0);
  ParaMorphism z;
  z.kind = ParaKind::React;
  z.n = x.n;
  z.dom = x.dom;
  z.cod = x.cod;
  Reaction& r = z.r;
  r.dom = env_plus(env, x.n, x.dom);
  r.cod = x.cod;
  r.UA = r.dom.names();
  r.UB = r.cod.names();
  for (const auto& v : x.dom.chem_vertices()) r.b[v] = x.m.at(v);
  for (const auto& [v, w] : x.inj) r.b[v] = w;
  return z;
}

// -- steps and sequences ----------------------------------------------------

ChemGraph target_plus(const ChemGraph& t, const ChemGraph& b) { return disjoint_union(t, b); }

Violations validate_step(const RetroStep& s, const ValenceTable& vt) {
  Violations out = validate_environment(s.M, vt);
  auto chem = [&](const ChemGraph& g, const char* what) {
    if (!is_chemical(g, vt)) out.push_back({"step-chemical", {what}, "not a chemical graph"});
  };
  chem(s.T, "T");
  chem(s.B, "B");
  chem(s.S, "S");
  chem(s.E, "E");
  auto d = try_eval(s.d, s.T);
  if (!d) out.push_back({"step-d", {}, "disconnection term is not typed on T"});
  else if (!(*d == s.S)) out.push_back({"step-d", {}, "disconnection term does not end at S"});
  if (s.m.kind != ParaKind::Match || !(s.m.dom == s.S) || !(s.m.cod == s.E))
    out.push_back({"step-m", {}, "m is not a Match morphism S -> E"});
  else
    for (auto& v : validate_para(s.m, s.M, vt)) out.push_back(v);
  ChemGraph tb;
  try {
    tb = target_plus(s.T, s.B);
  } catch (const DomainError&) {
    out.push_back({"step-names", {}, "T and B share vertex names"});
    return out;
  }
  if (s.r.kind != ParaKind::React || !(s.r.dom == s.E) || !(s.r.cod == tb))
    out.push_back({"step-r", {}, "r is not a React morphism E -> T + B"});
  else
    for (auto& v : validate_para(s.r, s.M, vt)) out.push_back(v);
  return out;
}

Violations validate_sequence(const RetroSequence& q, const ValenceTable& vt) {
  Violations out;
  const ChemGraph* prev = &q.T;
  for (std::size_t k = 0; k < q.links.size(); ++k) {
    const SequenceLink& l = q.links[k];
    std::string at = std::to_string(k + 1);
    for (auto& v : validate_environment(l.M, vt)) out.push_back(v);
    ChemGraph want;
    try {
      want = target_plus(*prev, l.B);
    } catch (const DomainError&) {
      out.push_back({"sequence-names", {at}, "byproduct clashes with the previous stage"});
      prev = &l.E;
      continue;
    }
    if (l.r.kind != ParaKind::React) out.push_back({"sequence-kind", {at}, "not a React morphism"});
    if (!(l.r.dom == l.E)) out.push_back({"sequence-dom", {at}, "domain is not E"});
    if (!(l.r.cod == want))
      out.push_back({"sequence-chain", {at}, "codomain is not the previous stage plus the byproduct"});
    else if (l.r.kind == ParaKind::React && l.r.dom == l.E)
      for (auto& v : validate_para(l.r, l.M, vt)) out.push_back(v);
    prev = &l.E;
  }
  return out;
}

// -- search -----------------------------------------------------------------

Oracle parse_oracle(const std::string& text) {
  Oracle f;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 3 || tok[1] != "->") throw ParseError("oracle line must read `<E-code> -> <product-code>`", lineno);
    f.emplace(tok[0], tok[2]);
  }
  return f;
}

SearchBounds parse_bounds(const std::string& spec) {
  SearchBounds b;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("bound `" + item + "` is not key=value", 0);
    std::string k = item.substr(0, eq), v = item.substr(eq + 1);
    double x;
    try {
      x = std::stod(v);
    } catch (const std::exception&) {
      throw ParseError("bound `" + item + "` has a non-numeric value", 0);
    }
    if (x < 0) throw ParseError("bound `" + item + "` is negative", 0);
    if (k == "k" || k == "env") b.env = static_cast<int>(x);
    else if (k == "len") b.term_len = static_cast<std::size_t>(x);
    else if (k == "candidates") b.candidates = static_cast<std::size_t>(x);
    else if (k == "matchings") b.matchings = static_cast<std::size_t>(x);
    else if (k == "seconds") b.seconds = x;
    else throw ParseError("unknown bound `" + k + "`", 0);
  }
  return b;
}

std::string step_fingerprint(const RetroStep& s) {
  auto mult = [](const Mult& n) {
    std::string o;
    for (int k : n) o += std::to_string(k) + ",";
    return o;
  };
  return "d=" + print_term(s.d) + "|E=" + graph_code(s.E) + "|B=" + graph_code(s.B) + "|nm=" + mult(s.m.n) +
         "|nr=" + mult(s.r.n) + "|via=" + s.via;
}

namespace {

using Clock = std::chrono::steady_clock;

void for_each_mult(std::size_t k, int cap, const std::function<void(const Mult&)>& f) {
  Mult n(k, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == k) {
      f(n);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      n[i] = c;
      rec(i + 1, left - c);
    }
    n[i] = 0;
  };
  rec(0, cap);
}

struct Candidate {
  ChemGraph E;
  ParaMorphism m;
};

// Synthetic equivalents reachable from S by a Match with environment n:
// every alpha of S stays put or lands on an environment atom, and the bonds
// inside each environment copy may be lowered to make room.
void equivalents(const ChemGraph& S, const Environment& env, const Mult& n, const ValenceTable& vt, std::size_t cap,
                 bool& cut, const std::function<void(Candidate&&)>& emit) {
  ChemGraph envs = env_sum(env, n, copy_offset(env, S));
  std::vector<Name> alphas;
  for (const auto& a : S.alpha_vertices()) alphas.push_back(a);
  std::vector<Name> targets;
  for (const auto& v : envs.chem_vertices()) targets.push_back(v);
  std::vector<std::pair<ChemGraph::Edge, Bond>> inner(envs.bonds().begin(), envs.bonds().end());
  std::vector<int> choice(alphas.size(), -1);  // -1: stays an alpha
  std::size_t made = 0;
  auto build = [&]() {
    // alpha fibres over environment vertices
    std::map<Name, std::vector<Name>> fib;
    for (std::size_t k = 0; k < alphas.size(); ++k)
      if (choice[k] >= 0) fib[targets[choice[k]]].push_back(alphas[k]);
    ChemGraph base;
    ParaMorphism m;
    m.kind = ParaKind::Match;
    m.n = n;
    m.dom = S;
    for (const auto& [v, at] : S.atoms()) {
      if (at.alpha()) {
        auto k = std::find(alphas.begin(), alphas.end(), v) - alphas.begin();
        if (choice[k] >= 0) {
          m.m[v] = targets[choice[k]];
          continue;
        }
      }
      base.add_vertex(v, at.sym, at.charge);
      m.m[v] = v;
    }
    for (const auto& [e, l] : S.bonds())
      if (base.has(e.first) && base.has(e.second)) base.set_bond(e.first, e.second, l);
    for (const auto& [v, at] : envs.atoms()) {
      int ch = at.charge;
      if (fib.count(v)) {
        ch = 0;
        for (const auto& a : fib[v]) ch += S.charge(a);
      }
      base.add_vertex(v, at.sym, ch);
      m.inj[v] = v;
    }
    for (const auto& [w, pre] : fib) {
      std::map<Name, int> covs;
      std::set<Name> ions;
      for (const auto& a : pre)
        for (const auto& [x, l] : S.adjacent(a)) {
          if (l == kIonic) ions.insert(m.m.at(x));
          else covs[m.m.at(x)] += cov(l);
        }
      for (const auto& [x, k] : covs) {
        if (k > 4 || base.bond(w, x) != 0) return;
        base.set_bond(w, x, static_cast<Bond>(k));
      }
      for (const auto& x : ions) {
        if (base.bond(w, x) != 0) return;
        base.set_bond(w, x, kIonic);
      }
    }
    // lower the bonds inside the environment copies
    std::function<void(std::size_t, ChemGraph&)> rec = [&](std::size_t k, ChemGraph& g) {
      if (cut) return;
      if (k == inner.size()) {
        if (!is_chemical(g, vt)) return;
        if (made++ >= cap) {
          cut = true;
          return;
        }
        ParaMorphism mm = m;
        mm.cod = g;
        Candidate c{g, mm};
        emit(std::move(c));
        return;
      }
      const auto& [e, l] = inner[k];
      std::vector<Bond> opts;
      if (l == kIonic) opts = {kIonic, 0};
      else
        for (int x = cov(l); x >= 0; --x) opts.push_back(static_cast<Bond>(x));
      for (Bond o : opts) {
        g.set_bond(e.first, e.second, o);
        rec(k + 1, g);
      }
      g.set_bond(e.first, e.second, l);
    };
    rec(0, base);
  };
  std::function<void(std::size_t)> assign = [&](std::size_t k) {
    if (cut) return;
    if (k == alphas.size()) {
      build();
      return;
    }
    for (int c = -1; c < static_cast<int>(targets.size()); ++c) {
      choice[k] = c;
      assign(k + 1);
    }
    choice[k] = -1;
  };
  assign(0);
}

// Finds T as a union of components of P. Returns the renaming of those
// components onto T and the leftover byproduct, renamed away from T.
std::optional<std::pair<VMap, ChemGraph>> split_target(const ChemGraph& P, const ChemGraph& T) {
  auto pc = components(P);
  auto tc = components(T);
  if (tc.size() > pc.size()) return std::nullopt;
  std::vector<bool> used(pc.size(), false);
  VMap iso;
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == tc.size()) return true;
    ChemGraph tk = induced(T, tc[k]);
    for (std::size_t j = 0; j < pc.size(); ++j) {
      if (used[j]) continue;
      ChemGraph pj = induced(P, pc[j]);
      std::optional<VMap> f;
      for_each_label_isomorphism(pj, tk, [&](const VMap& g) {
        f = g;
        return false;
      });
      if (!f) continue;
      used[j] = true;
      for (const auto& [a, b] : *f) iso[a] = b;
      if (rec(k + 1)) return true;
      for (const auto& [a, b] : *f) iso.erase(a);
      used[j] = false;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  NameSet rest;
  for (std::size_t j = 0; j < pc.size(); ++j)
    if (!used[j]) rest.insert(pc[j].begin(), pc[j].end());
  ChemGraph B = induced(P, rest);
  VMap ren;
  ChemGraph Bf = freshen(B, T, "_b", &ren);
  for (const auto& v : rest) iso[v] = ren.count(v) ? ren[v] : v;
  return std::make_pair(iso, Bf);
}

}  // namespace

SearchResult search_step(const ChemGraph& target, const std::vector<Term>& rules,
                         const std::vector<ReactionScheme>& schemes, const std::optional<Oracle>& oracle,
                         const Environment& env, const SearchBounds& bounds, const ValenceTable& vt) {
  if (rules.empty()) throw DomainError("search_step: no disconnection rules given");
  if (!validate_environment(env, vt).empty()) throw PreconditionError("search_step: invalid environment");
  SearchResult res;
  auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(bounds.seconds));
  std::map<std::string, RetroStep> found;
  auto keep = [&](RetroStep&& s) {
    if (!validate_step(s, vt).empty()) return;
    std::string fp = step_fingerprint(s);
    found.emplace(fp, std::move(s));
  };
  auto late = [&] {
    if (Clock::now() <= deadline) return false;
    res.partial = true;
    return true;
  };
  for (const Term& d : rules) {
    if (late()) break;
    if (d.size() > bounds.term_len) continue;
    auto S = try_eval(d, target);
    if (!S || !is_chemical(*S, vt)) continue;
    std::set<std::string> seen;
    for_each_mult(env.size(), bounds.env, [&](const Mult& nm) {
      bool cut = false;
      equivalents(*S, env, nm, vt, bounds.candidates, cut, [&](Candidate&& c) {
        if (late()) {
          cut = true;
          return;
        }
        if (!seen.insert(graph_code(c.E) + "#" + std::to_string(std::accumulate(nm.begin(), nm.end(), 0))).second) return;
        RetroStep base;
        base.T = target;
        base.M = env;
        base.S = *S;
        base.E = c.E;
        base.d = d;
        base.m = c.m;
        // template-based: instances of a scheme on environment + E
        for (std::size_t si = 0; si < schemes.size(); ++si) {
          for_each_mult(env.size(), bounds.env, [&](const Mult& nr) {
            ChemGraph G = env_plus(env, nr, c.E);
            std::size_t tried = 0;
            for_each_matching(schemes[si].A, G, [&](const GraphMorphism& mt) {
              if (++tried > bounds.matchings) {
                res.partial = true;
                return false;
              }
              ReactionInstance x;
              try {
                x = apply_scheme(schemes[si], mt, vt);
              } catch (const PreconditionError&) {
                return true;
              } catch (const DomainError&) {
                return true;
              }
              auto split = split_target(x.E, target);
              if (!split) return true;
              RetroStep s = base;
              s.B = split->second;
              s.r.kind = ParaKind::React;
              s.r.n = nr;
              s.r.dom = c.E;
              s.r.r = rename_cod(instance_to_tuple(x), split->first);
              s.r.cod = s.r.r.cod;
              s.via = "scheme " + std::to_string(si + 1);
              keep(std::move(s));
              return !late();
            });
          });
        }
        // template-free: the oracle lists T + B for this E
        if (oracle) {
          auto [lo, hi] = oracle->equal_range(graph_code(c.E));
          for (auto it = lo; it != hi; ++it) {
            ChemGraph P;
            try {
              P = decode_graph(it->second, "y");
            } catch (const ParseError&) {
              continue;
            }
            auto split = split_target(P, target);
            if (!split) continue;
            RetroStep s = base;
            s.B = split->second;
            ChemGraph tb = target_plus(target, s.B);
            Reaction r;
            r.dom = c.E;
            r.cod = tb;
            r.UA = c.E.names();
            r.UB = tb.names();
            // pair chemical vertices label by label in name order
            std::map<std::string, std::vector<Name>> from, to;
            for (const auto& v : c.E.chem_vertices()) from[c.E.sym(v)].push_back(v);
            for (const auto& v : tb.chem_vertices()) to[tb.sym(v)].push_back(v);
            if (from.size() != to.size()) continue;
            bool ok = true;
            for (const auto& [sym, vs] : from) {
              auto t = to.find(sym);
              if (t == to.end() || t->second.size() != vs.size()) {
                ok = false;
                break;
              }
              for (std::size_t k = 0; k < vs.size(); ++k) r.b[vs[k]] = t->second[k];
            }
            if (!ok) continue;
            s.r.kind = ParaKind::React;
            s.r.n.assign(env.size(), 0);
            s.r.dom = c.E;
            s.r.cod = tb;
            s.r.r = r;
            s.via = "oracle";
            keep(std::move(s));
          }
        }
      });
      if (cut) res.partial = true;
    });
  }
  for (auto& [fp, s] : found) res.steps.push_back(std::move(s));
  return res;
}

}  // namespace chemcat
