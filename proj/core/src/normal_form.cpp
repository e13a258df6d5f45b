// SPDX-License-Identifier: Apache-2.0
#include "chemcat/normal_form.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <tuple>
#include <unordered_set>

namespace chemcat {

namespace {

using Gens = std::vector<Gen>;

Gen subst(Gen g, const Name& from, const Name& to) {
  for (Name* n : {&g.u, &g.v, &g.a, &g.b})
    if (*n == from) *n = to;
  return g;
}

Gen swap_names(Gen g, const Name& x, const Name& y) {
  for (Name* n : {&g.u, &g.v, &g.a, &g.b}) {
    if (*n == x) *n = y;
    else if (*n == y) *n = x;
  }
  return g;
}

std::vector<Name> created(const Gen& g) {
  if (g.has_sub() && !g.bar) return g.D();
  return {};
}

std::vector<Name> removed(const Gen& g) {
  if (g.has_sub() && g.bar) return g.D();
  return {};
}

bool is_connection(const Gen& g) { return g.is_rule() && g.bar; }
bool is_disconnection(const Gen& g) { return g.is_rule() && !g.bar; }

// alpha labels that make two alpha vertices interchangeable
std::tuple<int, Name, Bond> alpha_sig(const ChemGraph& h, const Name& x) {
  const auto& adj = h.adjacent(x);
  if (adj.empty()) return {h.charge(x), "", 0};
  return {h.charge(x), adj.begin()->first, adj.begin()->second};
}

struct Namer {
  NameSet used;
  int k = 0;
  Name next() {
    Name n;
    do n = "_n" + std::to_string(++k);
    while (used.count(n));
    used.insert(n);
    return n;
  }
};

struct Work {
  Gens g;
  std::vector<ChemGraph> tr;  // tr[k] is the graph before g[k]
  RPair pair;
  Namer nm;
  PassStats* stats = nullptr;

  Work(const Term& t, const ChemGraph& dom) {
    g = t.gens;
    try {
      tr = eval_trace(t, dom);
    } catch (const TypeError& e) {
      throw PreconditionError(std::string("normalization needs a well-typed term: ") + e.what());
    }
    pair = term_pair(t);
    nm.used = dom.names();
    for (const auto& x : g)
      for (const auto& n : x.names()) nm.used.insert(n);
  }

  std::size_t n() const { return g.size(); }
  Term term() const { return Term{g}; }

  // Replace g[pos, pos+len) by repl if it is typed from tr[pos], lands on
  // tr[pos+len] and keeps the changed-set pair of the whole term.
  bool replace(std::size_t pos, std::size_t len, const Gens& repl) {
    std::vector<ChemGraph> nt;
    nt.reserve(repl.size());
    ChemGraph cur = tr[pos];
    for (const auto& x : repl) {
      if (!apply_gen(x, cur)) return false;
      nt.push_back(cur);
    }
    if (!(cur == tr[pos + len])) return false;
    Gens ng(g.begin(), g.begin() + pos);
    ng.insert(ng.end(), repl.begin(), repl.end());
    ng.insert(ng.end(), g.begin() + pos + len, g.end());
    if (term_pair(Term{ng}) != pair) return false;
    g = std::move(ng);
    // tr[pos] stays; the window's intermediate graphs change
    std::vector<ChemGraph> ntr(tr.begin(), tr.begin() + pos + 1);
    if (!repl.empty()) nt.pop_back();
    ntr.insert(ntr.end(), nt.begin(), nt.end());
    ntr.insert(ntr.end(), tr.begin() + pos + len, tr.end());
    tr = std::move(ntr);
    for (const auto& x : repl)
      for (const auto& nn : x.names()) nm.used.insert(nn);
    return true;
  }

  bool set(const Gens& ng) { return replace(0, g.size(), ng); }
};

// parallel rename of `m` starting from the names in `live`
Gens rename_seq(VMap m, NameSet live, Namer& nm) {
  Gens out;
  for (auto it = m.begin(); it != m.end();)
    it = it->first == it->second ? m.erase(it) : std::next(it);
  while (!m.empty()) {
    bool progress = false;
    for (auto it = m.begin(); it != m.end();) {
      if (!live.count(it->second)) {
        out.push_back(Gen::R(it->first, it->second));
        live.erase(it->first);
        live.insert(it->second);
        it = m.erase(it);
        progress = true;
      } else {
        ++it;
      }
    }
    if (!progress) {
      auto it = m.begin();
      Name tmp = nm.next();
      out.push_back(Gen::R(it->first, tmp));
      live.erase(it->first);
      live.insert(tmp);
      Name target = it->second;
      m.erase(it);
      m[tmp] = target;
    }
  }
  return out;
}

// Replacements for an adjacent inverse pair X;K of the same rule.
void inverse_candidates(Work& w, std::size_t i, std::vector<Gens>& out) {
  const Gen& X = w.g[i];
  Gen K = w.g[i + 1];
  if (X.kind != K.kind || X.bar == K.bar) return;
  if (X.kind == Kind::Cov && X.u == K.v && X.v == K.u) K = Gen::Cov(K.v, K.u, K.b, K.a, K.bar);
  if (X.u != K.u) return;
  if ((X.kind == Kind::Ion || X.kind == Kind::Cov) && X.v != K.v) return;
  Gens s;
  for (const auto& u : X.U())
    if (X.kind != Kind::EPos || u == X.u) s.push_back(Gen::S(u));
  VMap m;
  bool con_dis = X.bar;
  if (X.kind == Kind::EPos) {
    if (X.v == K.v) {
      s.push_back(Gen::S(X.v));
    } else {
      m[X.v] = K.v;
      m[K.v] = X.v;
    }
  } else if (X.has_sub()) {
    // removed names -> created names, slot by slot
    const Gen& rem = X.bar ? X : K;
    const Gen& cre = X.bar ? K : X;
    std::vector<std::pair<Name, Name>> slots{{rem.a, cre.a}, {rem.b, cre.b}};
    for (const auto& [from, to] : slots) {
      if (from == to) {
        if (con_dis) s.push_back(Gen::S(from));
      } else {
        m[from] = to;
      }
    }
  }
  Gens seq = s;
  Gens r = rename_seq(m, w.tr[i].names(), w.nm);
  seq.insert(seq.end(), r.begin(), r.end());
  out.push_back(seq);
}

// Candidate replacements for g[i];g[i+1] that move g[i+1] to the left.
std::vector<Gens> swap_candidates(Work& w, std::size_t i) {
  const Gen X = w.g[i], K = w.g[i + 1];
  std::vector<Gens> out;
  out.push_back({K, X});
  if (X.kind == Kind::S) out.push_back({K});
  if (K.kind == Kind::S) out.push_back({X});
  if (X.kind == Kind::R && X.u != X.v) {
    const Name &x = X.u, &y = X.v;
    if (K.mentions(y)) {
      Gen k2 = subst(K, y, x);
      out.push_back({k2, X});
      out.push_back({k2});
    }
    if (K.mentions(x)) {
      Name k = w.nm.next();
      out.push_back({subst(K, x, k), X, Gen::R(k, x)});
    }
  }
  if (K.kind == Kind::R && K.u != K.v && X.mentions(K.u)) out.push_back({K, subst(X, K.u, K.v)});
  if (X.is_rule() && K.is_rule()) {
    inverse_candidates(w, i, out);
    Gen k2 = K;
    Gens tail;
    for (const auto& c : created(K)) {
      if (!X.mentions(c)) continue;
      Name f = w.nm.next();
      k2 = subst(k2, c, f);
      tail.push_back(Gen::R(f, c));
    }
    if (!tail.empty()) {
      Gens cand{k2, X};
      cand.insert(cand.end(), tail.begin(), tail.end());
      out.push_back(cand);
    }
  }
  return out;
}

// Swap g[i] and g[i+1]; `accept` filters candidates by shape.
bool swap_at(Work& w, std::size_t i, const std::function<bool(const Gens&)>& accept = nullptr) {
  for (const auto& c : swap_candidates(w, i)) {
    if (accept && !accept(c)) continue;
    if (w.replace(i, 2, c)) return true;
  }
  return false;
}

void preprocess(Work& w) {
  for (std::size_t k = 0; k < w.n();) {
    const Gen& x = w.g[k];
    if (x.kind == Kind::Id) {
      if (!w.replace(k, 1, {})) throw InvariantError("cannot drop id");
      continue;
    }
    if (x.kind == Kind::R && x.u == x.v) {
      if (!w.replace(k, 1, {Gen::S(x.u)})) throw InvariantError("cannot rewrite R(u>u) to S(u)");
    }
    ++k;
  }
}

void run_pass(Work& w, int blk) {
  auto misplaced = [&](std::size_t& first, std::size_t& count, std::size_t& dist) {
    std::size_t firsthigh = w.n();
    count = 0;
    first = w.n();
    for (std::size_t k = 0; k < w.n(); ++k) {
      int b = block_of(w.g[k]);
      if (b > blk && firsthigh == w.n()) firsthigh = k;
      if (b == blk && firsthigh < k) {
        if (first == w.n()) first = k;
        ++count;
      }
    }
    dist = first == w.n() ? 0 : first - firsthigh;
  };
  std::size_t first, count, dist;
  misplaced(first, count, dist);
  while (count > 0) {
    if (!swap_at(w, first - 1))
      throw InvariantError(std::string("ICE pass ") + block_name(blk) + " stuck at " + print_gen(w.g[first - 1]) +
                           ";" + print_gen(w.g[first]));
    std::size_t f2, c2, d2;
    misplaced(f2, c2, d2);
    if (w.stats) {
      ++w.stats->rewrites[blk];
      ++w.stats->measure_checks;
    }
    if (!(c2 < count || (c2 == count && d2 < dist)))
      throw InvariantError(std::string("ICE pass ") + block_name(blk) + ": termination measure did not decrease");
    first = f2;
    count = c2;
    dist = d2;
  }
}

void ice(Work& w) {
  preprocess(w);
  for (int blk = bI; blk <= bIBar; ++blk) run_pass(w, blk);
  run_pass(w, bR);
}

// -- renaming form ----------------------------------------------------------

std::size_t rblock_start(const Work& w) {
  std::size_t k = w.n();
  while (k > 0 && (w.g[k - 1].kind == Kind::R || w.g[k - 1].kind == Kind::S)) --k;
  return k;
}

struct RenameData {
  VMap f;         // touched origin -> final name
  NameSet touched;
};

RenameData net_renaming(const ChemGraph& h, const Gens& rs) {
  RenameData d;
  std::map<Name, Name> origin;
  for (const auto& n : h.names()) origin[n] = n;
  for (const auto& x : rs) {
    if (x.kind != Kind::R) continue;
    Name o = origin.at(x.u);
    origin.erase(x.u);
    origin[x.v] = o;
    d.touched.insert(o);
  }
  for (const auto& [name, o] : origin)
    if (d.touched.count(o)) d.f[o] = name;
  return d;
}

// A;B;S for the R-part `rs` on h, re-pairing interchangeable alphas.
std::pair<RenamingForm, Gens> build_renaming(const ChemGraph& h, const Gens& rs, Namer& nm) {
  RenameData d = net_renaming(h, rs);
  std::map<std::tuple<int, Name, Bond>, std::vector<Name>> cls;
  for (const auto& o : d.touched) cls[alpha_sig(h, o)].push_back(o);
  VMap m;
  for (auto& [sig, srcs] : cls) {
    NameSet tgt;
    for (const auto& o : srcs) tgt.insert(d.f.at(o));
    std::vector<Name> rs2, rt;
    for (const auto& o : srcs) {
      if (tgt.count(o)) {
        m[o] = o;
        tgt.erase(o);
      } else {
        rs2.push_back(o);
      }
    }
    rt.assign(tgt.begin(), tgt.end());
    for (std::size_t k = 0; k < rs2.size(); ++k) m[rs2[k]] = rt[k];
  }
  RenamingForm rf;
  Gens ss;
  NameSet hn = h.names();
  for (const auto& [a, b] : m) {
    if (a == b) {
      ss.push_back(Gen::S(a));
      continue;
    }
    rf.a.insert(a);
    if (!hn.count(b)) {
      rf.A.gens.push_back(Gen::R(a, b));
      rf.b.insert(b);
    } else {
      Name c = nm.next();
      rf.A.gens.push_back(Gen::R(a, c));
      rf.B.gens.push_back(Gen::R(c, b));
      rf.b.insert(c);
      rf.c.insert(c);
      rf.d.insert(b);
    }
  }
  for (const auto& x : rs)
    if (x.kind == Kind::S) ss.push_back(x);
  return {rf, ss};
}

void renaming(Work& w) {
  std::size_t st = rblock_start(w);
  Gens tail(w.g.begin() + st, w.g.end());
  auto [rf, ss] = build_renaming(w.tr[st], tail, w.nm);
  Gens repl = rf.A.gens;
  repl.insert(repl.end(), rf.B.gens.begin(), rf.B.gens.end());
  repl.insert(repl.end(), ss.begin(), ss.end());
  if (repl == tail) return;
  if (!w.replace(st, tail.size(), repl)) throw InvariantError("renaming form rewrite rejected");
}

// -- S absorption -----------------------------------------------------------

void absorb(Work& w) {
  for (std::size_t k = w.n(); k-- > 0;) {
    if (w.g[k].kind != Kind::S) continue;
    const Name& u = w.g[k].u;
    bool redundant = false;
    for (std::size_t j = 0; j < w.n() && !redundant; ++j) {
      if (j == k) continue;
      const Gen& x = w.g[j];
      if (x.kind == Kind::S) redundant = x.u == u && j < k;
      else redundant = x.mentions(u);
    }
    if (redundant) w.replace(k, 1, {});
  }
}

// -- cancellations ----------------------------------------------------------

// Make g[p] and g[q] adjacent (p < q) without changing them.
bool bring_together(Work& w, std::size_t p, std::size_t q) {
  auto len2 = [](const Gens& c) { return c.size() == 2; };
  std::size_t guard = 0, limit = 8 * (w.n() + 4) * (w.n() + 4);
  while (q > p + 1) {
    if (++guard > limit) return false;
    if (swap_at(w, p, len2)) {
      ++p;
      continue;
    }
    if (swap_at(w, q - 1, len2)) {
      --q;
      continue;
    }
    bool moved = false;
    // push a blocker right past q
    for (std::size_t j = q - 1; j > p && !moved; --j) {
      std::size_t pos = j;
      while (pos < q && swap_at(w, pos, len2)) ++pos;
      if (pos == q) {
        --q;
        moved = true;
      } else if (pos != j) {
        return false;
      }
    }
    // or pull one left past p
    for (std::size_t j = p + 1; j < q && !moved; ++j) {
      std::size_t pos = j;
      while (pos > p && swap_at(w, pos - 1, len2)) --pos;
      if (pos == p) {
        ++p;
        moved = true;
      } else if (pos != j) {
        return false;
      }
    }
    if (!moved) return false;
  }
  return true;
}

bool cancel_pair(Work& w, std::size_t p, std::size_t q) {
  Work save = w;
  if (!bring_together(w, p, q)) {
    w = std::move(save);
    return false;
  }
  // locate the pair again: it is adjacent now, find by content
  for (std::size_t i = 0; i + 1 < w.n(); ++i) {
    std::vector<Gens> cs;
    inverse_candidates(w, i, cs);
    if (cs.empty()) continue;
    if (!(w.g[i] == save.g[p]) || !(w.g[i + 1] == save.g[q])) continue;
    for (const auto& c : cs)
      if (w.replace(i, 2, c)) {
        if (w.stats) ++w.stats->cancellations;
        return true;
      }
  }
  w = std::move(save);
  return false;
}

bool same_cov_bond(const Gen& x, const Gen& y) {
  return (x.u == y.u && x.v == y.v) || (x.u == y.v && x.v == y.u);
}

bool ion_exempt(const Gens& g, const Name& v) {
  for (const auto& x : g)
    if ((x.kind == Kind::ENeg || x.kind == Kind::EPos) && x.u == v) return true;
  return false;
}

bool cancel_one(Work& w) {
  for (std::size_t p = 0; p < w.n(); ++p) {
    const Gen P = w.g[p];
    if (!is_disconnection(P)) continue;
    for (std::size_t q = p + 1; q < w.n(); ++q) {
      const Gen& Q = w.g[q];
      if (!is_connection(Q) || Q.kind != P.kind) continue;
      bool hit = false;
      switch (P.kind) {
        case Kind::EPos:
        case Kind::ENeg: hit = P.u == Q.u; break;
        case Kind::Cov: hit = same_cov_bond(P, Q); break;
        case Kind::Ion: hit = P.u == Q.u && P.v == Q.v && !ion_exempt(w.g, P.v); break;
        default: break;
      }
      if (hit && cancel_pair(w, p, q)) return true;
    }
  }
  return false;
}

// -- dummy discipline and connection renaming --------------------------------

// Give every vertex created by a disconnection a fresh name; survivors are
// renamed back at the end of the R-block.
void dummies(Work& w) {
  Gens g = w.g;
  std::size_t st = rblock_start(w);
  std::size_t sblock = st;
  while (sblock < g.size() && g[sblock].kind == Kind::R) ++sblock;
  Gens back;
  for (std::size_t p = 0; p < st; ++p) {
    if (!is_disconnection(g[p])) continue;
    for (const auto& x : created(g[p])) {
      if (x.rfind("_n", 0) == 0) continue;
      Name z = w.nm.next();
      std::size_t end = sblock;
      bool survives = true;
      for (std::size_t q = p + 1; q < sblock; ++q) {
        const auto rm = removed(g[q]);
        if (std::find(rm.begin(), rm.end(), x) != rm.end() || (g[q].kind == Kind::R && g[q].u == x)) {
          end = q + 1;
          survives = false;
          break;
        }
      }
      for (std::size_t q = p; q < end; ++q) g[q] = subst(g[q], x, z);
      if (survives) back.push_back(Gen::R(z, x));
    }
  }
  if (back.empty() && g == w.g) return;
  g.insert(g.begin() + sblock, back.begin(), back.end());
  if (!w.set(g)) throw InvariantError("dummy renaming rejected");
}

// E(u,v) may detach any of several interchangeable pendant alphas on u.
// Prefer the least name of the domain graph, so equal terms agree on it.
bool echoice(Work& w) {
  const ChemGraph& dom = w.tr.front();
  for (std::size_t k = 0; k < w.n(); ++k) {
    const Gen x = w.g[k];
    if (x.kind != Kind::EPos || x.bar) continue;
    const ChemGraph& h = w.tr[k];
    for (const auto& [c, b] : h.adjacent(x.u)) {
      if (c == x.v || !h.is_alpha(c) || alpha_sig(h, c) != alpha_sig(h, x.v)) continue;
      if (!dom.has(c) || (dom.has(x.v) && !(c < x.v))) continue;
      Gens ng = w.g;
      ng[k].v = c;
      for (std::size_t q = k + 1; q < ng.size(); ++q) ng[q] = swap_names(ng[q], x.v, c);
      auto fin = try_eval(Term{ng}, dom);
      if (!fin) continue;
      if (!(*fin == w.tr.back())) {
        // the two names end up exchanged; rename them back
        VMap m;
        if (fin->has(x.v)) m[x.v] = c;
        if (fin->has(c)) m[c] = x.v;
        Gens back = rename_seq(m, fin->names(), w.nm);
        ng.insert(ng.end(), back.begin(), back.end());
      }
      if (w.set(ng)) return true;
    }
  }
  return false;
}

bool connrename(Work& w) {
  std::size_t st = rblock_start(w);
  Gens tail(w.g.begin() + st, w.g.end());
  RenameData d = net_renaming(w.tr[st], tail);
  for (std::size_t c = 0; c < st; ++c) {
    const Gen& x = w.g[c];
    if (!is_connection(x) || !x.has_sub()) continue;
    for (const auto& a : x.D()) {
      for (const auto& [z, fin] : d.f) {
        if (fin != a || z == a) continue;
        if (!w.tr[c].has(z)) continue;
        Gens ng = w.g;
        ng[c] = subst(x, a, z);
        // later uses of the vertex z now go to a, until z is renamed
        for (std::size_t q = c + 1; q < ng.size(); ++q) {
          if (!ng[q].mentions(z)) continue;
          bool last = ng[q].kind == Kind::R && ng[q].u == z;
          ng[q] = subst(ng[q], z, a);
          if (last) break;
        }
        if (!apply_generator(ng[c], w.tr[c])) continue;
        if (w.set(ng)) return true;
      }
    }
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------

bool is_ice_form(const Term& t) {
  int last = bI;
  for (const auto& g : t.gens) {
    int b = block_of(g);
    if (b == bId) {
      if (t.gens.size() != 1) return false;
      continue;
    }
    if (b < last) return false;
    last = b;
  }
  return true;
}

Term to_ice_form(const Term& t, const ChemGraph& g, PassStats* stats) {
  Work w(t, g);
  w.stats = stats;
  ice(w);
  return w.term();
}

std::pair<RenamingForm, Term> to_renaming_form(const Term& r, const ChemGraph& h) {
  for (const auto& x : r.gens)
    if (x.kind != Kind::R && x.kind != Kind::S && x.kind != Kind::Id)
      throw PreconditionError("to_renaming_form: only R- and S-terms allowed");
  Work w(r, h);
  preprocess(w);
  run_pass(w, bR);
  Gens rs = w.g;
  auto [rf, ss] = build_renaming(h, rs, w.nm);
  Gens all = rf.A.gens;
  all.insert(all.end(), rf.B.gens.begin(), rf.B.gens.end());
  all.insert(all.end(), ss.begin(), ss.end());
  if (!w.set(all)) throw InvariantError("renaming form is not equal to its input");
  absorb(w);
  Term s;
  for (const auto& x : w.g)
    if (x.kind == Kind::S) s.gens.push_back(x);
  return {rf, s};
}

Term to_normal_form(const Term& t, const ChemGraph& g, PassStats* stats) {
  Work w(t, g);
  w.stats = stats;
  for (int round = 0;; ++round) {
    if (round > 4 * static_cast<int>(t.gens.size()) + 8) throw InvariantError("normalization does not settle");
    ice(w);
    absorb(w);
    if (cancel_one(w)) continue;
    if (!echoice(w)) break;
    ice(w);
    renaming(w);
    absorb(w);
  }
  dummies(w);
  renaming(w);
  for (int k = 0; k < 4 * static_cast<int>(w.n()) + 4 && connrename(w); ++k) {
    ice(w);
    renaming(w);
  }
  absorb(w);
  Term out = w.term();
  auto bad = check_normal_form(out, g);
  if (!bad.empty()) throw InvariantError("to_normal_form: result violates " + bad.front() + " in " + print_term(out));
  return out;
}

std::vector<std::string> check_normal_form(const Term& t, const ChemGraph& g) {
  std::vector<std::string> bad;
  if (!is_ice_form(t)) {
    bad.push_back("ice");
    return bad;
  }
  auto tr = try_eval(t, g);
  if (!tr) {
    bad.push_back("ill-typed");
    return bad;
  }
  std::vector<ChemGraph> trace = eval_trace(t, g);
  const Gens& gs = t.gens;
  std::size_t st = 0;
  while (st < gs.size() && gs[st].kind != Kind::R && gs[st].kind != Kind::S) ++st;
  const ChemGraph& h = trace[st];
  NameSet hn = h.names();

  // split R-block into A (sources present in H) and B
  NameSet A, B, C, D;
  std::vector<std::pair<Name, Name>> ra, rb;
  std::size_t k = st;
  for (; k < gs.size() && gs[k].kind == Kind::R; ++k) {
    const Gen& x = gs[k];
    if (hn.count(x.u) && rb.empty()) {
      ra.emplace_back(x.u, x.v);
      A.insert(x.u);
      B.insert(x.v);
    } else {
      rb.emplace_back(x.u, x.v);
      C.insert(x.u);
      D.insert(x.v);
    }
  }
  for (; k < gs.size(); ++k)
    if (gs[k].kind == Kind::R) bad.push_back("ice");
  for (const auto& a : A)
    if (B.count(a)) bad.push_back("renaming (2) " + a);
  for (const auto& c : C)
    if (!B.count(c)) bad.push_back("renaming (3) " + c);
  for (const auto& d : D)
    if (!A.count(d)) bad.push_back("renaming (4) " + d);
  for (const auto& [c, d] : rb)
    for (const auto& [a, b] : ra)
      if (b == c && h.has(a) && h.has(d) && h.atom(a) == h.atom(d) && alpha_sig(h, a) == alpha_sig(h, d))
        bad.push_back("renaming (5) " + a + "," + d);

  NameSet Dadd, Drem, U, S;
  std::map<Name, int> scount;
  for (const auto& x : gs) {
    if (x.kind == Kind::S) {
      S.insert(x.u);
      ++scount[x.u];
    }
    if (!x.is_rule()) continue;
    for (const auto& u : x.U()) U.insert(u);
    for (const auto& d : x.D()) (x.bar ? Drem : Dadd).insert(d);
  }
  for (const auto& [u, c] : scount)
    if (c > 1) bad.push_back("(1) S(" + u + ") repeated");
  for (const auto& u : S)
    if (U.count(u) || A.count(u) || B.count(u)) bad.push_back("(2) S(" + u + ") redundant");
  for (const auto& a : Dadd)
    if (!Drem.count(a) && (!A.count(a) || D.count(a))) bad.push_back("(3) " + a);
  for (const auto& a : Dadd)
    if (B.count(a)) bad.push_back("(4) " + a);
  for (std::size_t c = 0; c < st; ++c) {
    const Gen& x = gs[c];
    if (!is_connection(x) || !x.has_sub()) continue;
    for (const auto& a : x.D())
      for (std::size_t q = st; q < gs.size(); ++q)
        if (gs[q].kind == Kind::R && gs[q].v == a && gs[q].u != a && trace[c].has(gs[q].u) &&
            apply_generator(subst(x, a, gs[q].u), trace[c]))
          bad.push_back("(5) " + print_gen(x) + " with " + print_gen(gs[q]));
  }
  for (const auto& x : gs) {
    if (!is_disconnection(x) || x.kind == Kind::Ion) continue;
    for (const auto& y : gs) {
      if (!is_connection(y) || y.kind != x.kind) continue;
      bool clash = false;
      if (x.kind == Kind::ENeg) clash = x.u == y.u;
      else if (x.kind == Kind::EPos) clash = x.u == y.u && x.v == y.v;
      else clash = same_cov_bond(x, y);
      if (clash) bad.push_back("(6) " + print_gen(x) + " vs " + print_gen(y));
    }
  }
  for (const auto& x : gs)
    if (x.kind == Kind::EPos && !x.bar)
      for (const auto& y : gs)
        if (y.kind == Kind::EPos && y.bar && y.u == x.u) bad.push_back("(7) " + print_gen(x) + " vs " + print_gen(y));
  for (const auto& x : gs)
    if (x.kind == Kind::Ion && !x.bar)
      for (const auto& y : gs)
        if (y.kind == Kind::Ion && y.bar && y.u == x.u && y.v == x.v && !ion_exempt(gs, x.v))
          bad.push_back("(8) " + print_gen(x));
  return bad;
}

// -- normal form equivalence ------------------------------------------------

namespace {

struct Canon {
  std::string key;
  Gens gens;
};

NameSet dummy_names(const Gens& gs, const ChemGraph& g) {
  NameSet out;
  NameSet dn = g.names();
  for (const auto& x : gs)
    if (is_disconnection(x))
      for (const auto& d : x.D()) out.insert(d);
  // intermediates of the renaming block: targets of an R that are later sources
  NameSet targets;
  for (const auto& x : gs)
    if (x.kind == Kind::R) {
      if (targets.count(x.u) && !dn.count(x.u)) out.insert(x.u);
      targets.insert(x.v);
    }
  return out;
}

Gen orient(Gen x) {
  if (x.kind == Kind::Cov && x.v < x.u) return Gen::Cov(x.v, x.u, x.b, x.a, x.bar);
  return x;
}

// Print the term after renaming, with move 2 (orientation), move 3 (slot
// re-pairing within a same-U group) and move 1 (sorting in blocks).
std::string render(const Gens& gs, const VMap& ren, const NameSet& hn, Gens* outg) {
  Gens r;
  r.reserve(gs.size());
  for (auto x : gs) {
    for (Name* n : {&x.u, &x.v, &x.a, &x.b}) {
      auto it = ren.find(*n);
      if (it != ren.end()) *n = it->second;
    }
    r.push_back(orient(x));
  }
  // move 3: within (kind, bar, U) groups sort each slot column
  std::map<std::tuple<int, bool, Name, Name>, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < r.size(); ++k)
    if (r[k].has_sub()) groups[{static_cast<int>(r[k].kind), r[k].bar, r[k].u, r[k].v}].push_back(k);
  for (auto& [key, idx] : groups) {
    if (idx.size() < 2) continue;
    std::vector<Name> as, bs;
    for (auto k : idx) {
      as.push_back(r[k].a);
      bs.push_back(r[k].b);
    }
    std::sort(as.begin(), as.end());
    std::sort(bs.begin(), bs.end());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      r[idx[j]].a = as[j];
      r[idx[j]].b = bs[j];
    }
  }
  // blocks; the R-block splits into A (sources in H) and B
  std::vector<std::pair<int, std::string>> keyed;
  NameSet target;
  for (const auto& x : r) {
    int b = block_of(x);
    int sub = 0;
    if (x.kind == Kind::R) {
      sub = hn.count(x.u) && !target.count(x.u) ? 0 : 1;
      target.insert(x.v);
    }
    keyed.emplace_back(b * 2 + sub, print_gen(x));
  }
  std::vector<std::size_t> order(r.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return keyed[x] < keyed[y]; });
  std::string key;
  Gens sorted;
  for (auto k : order) {
    key += keyed[k].second;
    key += ";";
    sorted.push_back(r[k]);
  }
  if (outg) *outg = std::move(sorted);
  return key;
}

Canon canonical(const Gens& gs, const ChemGraph& g, const NameSet& hn) {
  NameSet dm = dummy_names(gs, g);
  std::vector<Name> dv(dm.begin(), dm.end());
  // colour refinement over occurrences
  std::map<Name, std::string> col;
  auto shape = [&](const Gen& x, const Name& self, const std::map<Name, std::string>& c) {
    Gen y = orient(x);
    std::string s = std::to_string(static_cast<int>(y.kind)) + (y.bar ? "~" : "") + "(";
    for (const Name* n : {&y.u, &y.v, &y.a, &y.b}) {
      if (n->empty()) continue;
      if (*n == self) s += "#";
      else if (dm.count(*n)) s += "[" + c.at(*n) + "]";
      else s += *n;
      s += ",";
    }
    return s + ")";
  };
  for (const auto& d : dv) col[d] = "";
  for (int it = 0; it < 4; ++it) {
    std::map<Name, std::string> next;
    for (const auto& d : dv) {
      std::vector<std::string> occ;
      for (const auto& x : gs)
        if (x.mentions(d)) occ.push_back(shape(x, d, col));
      std::sort(occ.begin(), occ.end());
      std::string s;
      for (const auto& o : occ) s += o + "|";
      next[d] = s;
    }
    // compress to keep strings short
    std::set<std::string> vals;
    for (const auto& [d, s] : next) vals.insert(s);
    std::map<std::string, std::string> ids;
    int k = 0;
    for (const auto& v : vals) ids[v] = std::to_string(k++);
    bool same = true;
    std::map<Name, std::string> comp;
    for (const auto& [d, s] : next) comp[d] = ids[s];
    std::set<std::string> oldv;
    for (const auto& [d, s] : col) oldv.insert(s);
    same = oldv.size() == vals.size();
    col = comp;
    if (same && it > 0) break;
  }
  std::map<std::string, std::vector<Name>> classes;
  for (const auto& d : dv) classes[col[d]].push_back(d);
  std::vector<std::vector<Name>> cls;
  double combos = 1;
  for (auto& [c, v] : classes) {
    cls.push_back(v);
    for (std::size_t k = 2; k <= v.size(); ++k) combos *= static_cast<double>(k);
  }
  Canon best;
  bool have = false;
  auto try_naming = [&](const std::vector<std::vector<Name>>& perm) {
    VMap ren;
    int k = 0;
    for (const auto& c : perm)
      for (const auto& d : c) ren[d] = "_" + std::to_string(++k);
    Gens outg;
    std::string key = render(gs, ren, hn, &outg);
    if (!have || key < best.key) {
      best.key = key;
      best.gens = outg;
      have = true;
    }
  };
  if (combos > 5000) {
    try_naming(cls);
    return best;
  }
  std::function<void(std::size_t, std::vector<std::vector<Name>>&)> rec = [&](std::size_t i,
                                                                                   std::vector<std::vector<Name>>& cur) {
    if (i == cls.size()) {
      try_naming(cur);
      return;
    }
    std::vector<Name> p = cls[i];
    std::sort(p.begin(), p.end());
    do {
      cur.push_back(p);
      rec(i + 1, cur);
      cur.pop_back();
    } while (std::next_permutation(p.begin(), p.end()));
  };
  std::vector<std::vector<Name>> cur;
  rec(0, cur);
  return best;
}

std::string shape_key(const Gens& gs) {
  std::vector<std::string> parts;
  for (const auto& x0 : gs) {
    Gen x = orient(x0);
    std::string s = std::to_string(static_cast<int>(x.kind)) + (x.bar ? "~" : "");
    if (x.is_rule()) {
      // EPos's alpha may be a dummy, so only chemical names go in the key
      s += x.u;
      if (x.kind == Kind::Ion || x.kind == Kind::Cov) s += "," + x.v;
    } else if (x.kind == Kind::S) {
      s += x.u;
    }
    parts.push_back(s);
  }
  std::sort(parts.begin(), parts.end());
  std::string k;
  for (const auto& p : parts) k += p + ";";
  return k;
}

// all terms one move 5 or move 6 away from gs (both typed on g)
std::vector<Gens> neighbour_terms(const Gens& gs, const ChemGraph& g) {
  std::vector<Gens> out;
  auto tr = try_eval(Term{gs}, g);
  if (!tr) return out;
  std::vector<ChemGraph> trace = eval_trace(Term{gs}, g);
  std::size_t st = 0;
  while (st < gs.size() && gs[st].kind != Kind::R && gs[st].kind != Kind::S) ++st;
  const ChemGraph& h = trace[st];
  std::vector<std::size_t> ra;
  for (std::size_t k = st; k < gs.size(); ++k)
    if (gs[k].kind == Kind::R && h.has(gs[k].u)) ra.push_back(k);
  // move 5
  for (std::size_t x = 0; x < ra.size(); ++x)
    for (std::size_t y = x + 1; y < ra.size(); ++y) {
      const Gen &p = gs[ra[x]], &q = gs[ra[y]];
      if (!(h.atom(p.u) == h.atom(q.u)) || alpha_sig(h, p.u) != alpha_sig(h, q.u)) continue;
      Gens n = gs;
      n[ra[x]].u = q.u;
      n[ra[y]].u = p.u;
      out.push_back(std::move(n));
    }
  // move 6
  for (std::size_t c = 0; c < st; ++c) {
    const Gen& x = gs[c];
    if (!is_connection(x) || !x.has_sub()) continue;
    for (const auto& a : x.D())
      for (auto k : ra) {
        const Name& z = gs[k].u;
        if (!trace[c].has(z) || z == a) continue;
        if (!apply_generator(subst(x, a, z), trace[c])) continue;
        Gens n = gs;
        n[c] = subst(x, a, z);
        n[k].u = a;
        out.push_back(std::move(n));
      }
  }
  return out;
}

NameSet h_names(const Gens& gs, const ChemGraph& g) {
  std::size_t st = 0;
  while (st < gs.size() && gs[st].kind != Kind::R && gs[st].kind != Kind::S) ++st;
  auto h = try_eval(Term{Gens(gs.begin(), gs.begin() + st)}, g);
  return h ? h->names() : NameSet{};
}

}  // namespace

bool nf_equivalent(const Term& t, const Term& s, const ChemGraph& g) {
  if (shape_key(t.gens) != shape_key(s.gens)) return false;
  Canon ct = canonical(t.gens, g, h_names(t.gens, g));
  Canon cs = canonical(s.gens, g, h_names(s.gens, g));
  if (ct.key == cs.key) return true;
  // bounded search over the exchange moves, from t towards canon(s)
  std::unordered_set<std::string> seen{ct.key};
  std::deque<Gens> queue{t.gens};
  std::size_t cap = 20000;
  while (!queue.empty() && seen.size() < cap) {
    Gens cur = std::move(queue.front());
    queue.pop_front();
    for (auto& n : neighbour_terms(cur, g)) {
      Canon cn = canonical(n, g, h_names(n, g));
      if (cn.key == cs.key) return true;
      if (seen.insert(cn.key).second) queue.push_back(std::move(n));
    }
  }
  return false;
}

EquivVerdict decide_equiv_both(const Term& t, const Term& s, const ChemGraph& g) {
  EquivVerdict v;
  Reaction rt = translate(t, g), rs = translate(s, g);
  v.by_translation = rt == rs;
  v.by_normal_form = nf_equivalent(to_normal_form(t, g), to_normal_form(s, g), g);
  return v;
}

bool decide_equiv(const Term& t, const Term& s, const ChemGraph& g) {
  EquivVerdict v = decide_equiv_both(t, s, g);
  if (v.by_translation != v.by_normal_form)
    throw InvariantError("decide_equiv: translation and normal-form paths disagree");
  return v.by_translation;
}

}  // namespace chemcat
