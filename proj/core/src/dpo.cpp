// SPDX-License-Identifier: Apache-2.0
#include "chemcat/dpo.hpp"

#include <algorithm>
#include <sstream>

#include "chemcat/io.hpp"

namespace chemcat {

namespace {

std::map<Name, std::vector<Name>> fibres_of(const VMap& f) {
  std::map<Name, std::vector<Name>> out;
  for (const auto& [a, b] : f) out[b].push_back(a);
  return out;
}

// Combined label of all edges between two fibres: ionic if any edge is
// ionic, else the summed covalent multiplicity.
Bond fibre_bond(const ChemGraph& g, const std::vector<Name>& x, const std::vector<Name>& y) {
  int sum = 0;
  for (const auto& a : x)
    for (const auto& b : y) {
      Bond l = g.bond(a, b);
      if (l == kIonic) return kIonic;
      sum += cov(l);
    }
  return static_cast<Bond>(std::min(sum, 4));
}

int fibre_charge(const ChemGraph& g, const std::vector<Name>& x) {
  int n = 0;
  for (const auto& a : x) n += g.charge(a);
  return n;
}

VMap inverse_injective(const VMap& f, const char* what) {
  VMap inv;
  for (const auto& [a, b] : f)
    if (!inv.emplace(b, a).second) throw PreconditionError(std::string(what) + " is not injective");
  return inv;
}

void need_embedding(const GraphMorphism& e, const char* who) {
  if (!check_morphism(e).empty() || !check_embedding(e)) throw PreconditionError(std::string(who) + ": not an embedding");
}

void need_matching(const GraphMorphism& m, const char* who) {
  if (!check_morphism(m).empty() || !check_matching(m)) throw PreconditionError(std::string(who) + ": not a matching");
}

VMap compose_maps(const VMap& f, const VMap& g) {
  VMap h;
  for (const auto& [a, b] : f) h[a] = g.at(b);
  return h;
}

bool same_map(const VMap& f, const VMap& g) { return f == g; }

// Does `iso` (total on y) send y onto x exactly?
bool renames_onto(const ChemGraph& y, const VMap& iso, const ChemGraph& x) {
  NameSet img;
  for (const auto& n : y.names()) {
    auto it = iso.find(n);
    if (it == iso.end() || !img.insert(it->second).second) return false;
  }
  return rename_all(y, iso) == x;
}

}  // namespace

Pullback pullback_along_embedding(const GraphMorphism& f, const GraphMorphism& e) {
  if (!check_morphism(f).empty()) throw PreconditionError("pullback: f is not a morphism");
  need_embedding(e, "pullback");
  if (!(f.cod == e.cod)) throw PreconditionError("pullback: f and e have different codomains");
  const ChemGraph &A = f.dom, &C = e.dom;
  VMap einv = inverse_injective(e.map, "pullback: e");
  Pullback pb;
  ChemGraph& Z = pb.obj;
  VMap to_c;
  for (const auto& [a, at] : A.atoms()) {
    auto it = einv.find(f.map.at(a));
    if (it == einv.end()) continue;
    to_c[a] = it->second;
    int cz = 0;
    if (at.alpha()) {
      if (at.charge != 0 && C.charge(it->second) != 0) cz = at.charge;
    } else if (at.charge == C.charge(it->second)) {
      cz = at.charge;
    }
    Z.add_vertex(a, at.sym, cz);
  }
  for (const auto& [e2, l] : A.bonds()) {
    const Name &a = e2.first, &q = e2.second;
    if (!Z.has(a) || !Z.has(q)) continue;
    Bond lc = C.bond(to_c[a], to_c[q]);
    if (Z.is_chem(a) && Z.is_chem(q)) {
      if (l == lc) Z.set_bond(a, q, l);
    } else if (l == kIonic) {
      if (lc == kIonic) Z.set_bond(a, q, kIonic);
    } else if (cov(l) > 0 && cov(lc) > 0) {
      Z.set_bond(a, q, 1);
    }
  }
  pb.e_star = identity_morphism(Z);
  pb.e_star.cod = A;
  pb.f_star = {Z, C, to_c};
  return pb;
}

Pushout pushout_em(const GraphMorphism& m, const GraphMorphism& e) {
  need_matching(m, "pushout");
  need_embedding(e, "pushout");
  if (!(m.dom == e.dom)) throw PreconditionError("pushout: m and e have different domains");
  const ChemGraph &A = m.dom, &B = m.cod, &C = e.cod;
  auto mfib = fibres_of(m.map);
  // e-images of each m-fibre, as vertices of C
  std::map<Name, std::vector<Name>> efib;
  NameSet chem_img, alpha_img;
  for (const auto& [b, pre] : mfib)
    for (const auto& a : pre) {
      efib[b].push_back(e.map.at(a));
      (A.is_chem(a) ? chem_img : alpha_img).insert(b);
    }
  Pushout po;
  ChemGraph& Y = po.obj;
  for (const auto& [b, at] : B.atoms()) {
    int c = efib.count(b) ? fibre_charge(C, efib[b]) : at.charge;
    Y.add_vertex(b, at.sym, c);
  }
  NameSet eimg;
  for (const auto& [a, c] : e.map) eimg.insert(c);
  NameSet used = B.names();
  for (const auto& n : C.names()) used.insert(n);
  VMap extra;
  for (const auto& [c, at] : C.atoms()) {
    if (eimg.count(c)) continue;
    Name n = B.has(c) ? fresh_name(c + "_", used) : c;
    used.insert(n);
    extra[c] = n;
    Y.add_vertex(n, at.sym, at.charge);
  }
  // edges within B
  std::set<std::pair<Name, Name>> pairs;
  for (const auto& [e2, l] : B.bonds()) pairs.insert(e2);
  std::vector<Name> img(efib.size());
  std::transform(efib.begin(), efib.end(), img.begin(), [](const auto& kv) { return kv.first; });
  for (std::size_t x = 0; x < img.size(); ++x)
    for (std::size_t y = x + 1; y < img.size(); ++y) pairs.insert({img[x], img[y]});
  for (const auto& [b, p] : pairs) {
    Bond l;
    bool bc = chem_img.count(b), pc = chem_img.count(p);
    if (bc && pc) l = C.bond(efib[b].front(), efib[p].front());
    else if (bc && alpha_img.count(p)) l = fibre_bond(C, efib[b], efib[p]);
    else if (pc && alpha_img.count(b)) l = fibre_bond(C, efib[p], efib[b]);
    else l = B.bond(b, p);
    Y.set_bond(b, p, l);
  }
  // edges from B into the new part of C
  for (const auto& b : chem_img)
    for (const auto& [c, l] : C.adjacent(efib[b].front()))
      if (extra.count(c)) Y.set_bond(b, extra[c], l);
  po.e_star = identity_morphism(Y);
  po.e_star.dom = B;
  for (auto it = po.e_star.map.begin(); it != po.e_star.map.end();)
    it = B.has(it->first) ? std::next(it) : po.e_star.map.erase(it);
  po.m_star = {C, Y, {}};
  VMap einv = inverse_injective(e.map, "pushout: e");
  for (const auto& c : C.names()) po.m_star.map[c] = eimg.count(c) ? m.map.at(einv.at(c)) : extra.at(c);
  return po;
}

Complement pushout_complement(const GraphMorphism& e, const GraphMorphism& m) {
  need_embedding(e, "pushout complement");
  need_matching(m, "pushout complement");
  if (!(e.cod == m.dom)) throw PreconditionError("pushout complement: e and m do not compose");
  const ChemGraph &B = e.dom, &C = m.cod;
  NameSet eimg;
  for (const auto& [b, a] : e.map) eimg.insert(a);
  NameSet removed, mimg;
  for (const auto& [a, c] : m.map) {
    mimg.insert(c);
    if (!eimg.count(a)) removed.insert(c);
  }
  VMap me = compose_maps(e.map, m.map);  // B -> C
  auto fib = fibres_of(me);
  NameSet chem_img;
  for (const auto& [b, c] : me)
    if (B.is_chem(b)) chem_img.insert(c);
  Complement pc;
  ChemGraph& Z = pc.obj;
  for (const auto& [c, at] : C.atoms()) {
    if (removed.count(c)) continue;
    int ch = at.charge;
    if (mimg.count(c)) ch = fib.count(c) ? fibre_charge(B, fib[c]) : 0;
    Z.add_vertex(c, at.sym, ch);
  }
  for (const auto& [e2, l] : C.bonds()) {
    const Name &x = e2.first, &y = e2.second;
    if (!Z.has(x) || !Z.has(y)) continue;
    if (mimg.count(x) && mimg.count(y) && (chem_img.count(x) || chem_img.count(y))) continue;
    Z.set_bond(x, y, l);
  }
  // edges inside the matched part come from B
  std::vector<Name> inside;
  for (const auto& [c, pre] : fib)
    if (Z.has(c)) inside.push_back(c);
  for (std::size_t i = 0; i < inside.size(); ++i)
    for (std::size_t j = i + 1; j < inside.size(); ++j) {
      const Name &x = inside[i], &y = inside[j];
      if (!chem_img.count(x) && !chem_img.count(y)) continue;
      Z.set_bond(x, y, fibre_bond(B, fib[x], fib[y]));
    }
  pc.m_hat = {B, Z, me};
  pc.e_hat = identity_morphism(Z);
  pc.e_hat.cod = C;
  if (!validate_prechemical(Z).empty()) throw PreconditionError("pushout complement: result is not pre-chemical");
  if (!check_morphism(pc.e_hat).empty() || !check_embedding(pc.e_hat))
    throw PreconditionError("pushout complement: Z -> C is not an embedding");
  if (!check_morphism(pc.m_hat).empty() || !check_matching(pc.m_hat))
    throw PreconditionError("pushout complement: B -> Z is not a matching");
  return pc;
}

void for_each_matching(const ChemGraph& a, const ChemGraph& c, const std::function<bool(const GraphMorphism&)>& f) {
  std::vector<Name> order;
  for (const auto& v : a.chem_vertices()) order.push_back(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](const Name& x, const Name& y) { return a.adjacent(x).size() > a.adjacent(y).size(); });
  for (const auto& v : a.alpha_vertices()) order.push_back(v);
  GraphMorphism m{a, c, {}};
  NameSet chem_used;
  bool go = true;
  auto fits = [&](const Name& v, const Name& w) {
    if (a.is_chem(v)) {
      if (chem_used.count(w) || !c.has(w) || !c.is_chem(w) || !(a.atom(v) == c.atom(w))) return false;
      for (const auto& [x, y] : m.map)
        if (a.is_chem(x) && a.bond(v, x) != c.bond(w, y)) return false;
      return true;
    }
    if (chem_used.count(w)) return false;
    int ch = a.charge(v);
    if (ch != 0 && (c.charge(w) > 0) != (ch > 0)) return false;
    for (const auto& [x, l] : a.adjacent(v)) {
      auto it = m.map.find(x);
      if (it == m.map.end()) continue;
      Bond cl = c.bond(w, it->second);
      if (l == kIonic ? cl != kIonic : cov(cl) == 0) return false;
    }
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (!go) return;
    if (k == order.size()) {
      if (check_morphism(m).empty() && matching_violations(m).empty()) go = f(m);
      return;
    }
    const Name& v = order[k];
    for (const auto& w : c.names()) {
      if (!fits(v, w)) continue;
      m.map[v] = w;
      if (a.is_chem(v)) chem_used.insert(w);
      rec(k + 1);
      if (a.is_chem(v)) chem_used.erase(w);
      m.map.erase(v);
      if (!go) return;
    }
  };
  rec(0);
}

// -- schemes and instances --------------------------------------------------

Violations validate_scheme(const ReactionScheme& s, const ValenceTable& vt) {
  Violations out;
  if (!is_valence_complete(s.A, vt)) out.push_back({"scheme-A", {}, "left graph is not valence-complete"});
  if (!is_valence_complete(s.B, vt)) out.push_back({"scheme-B", {}, "right graph is not valence-complete"});
  if (net_charge(s.A, s.A.names()) != net_charge(s.B, s.B.names()))
    out.push_back({"scheme-net", {}, "net charges differ"});
  for (const auto* g : {&s.A, &s.K, &s.B})
    if (!validate_prechemical(*g).empty()) {
      out.push_back({"scheme-prechemical", {}, "a scheme graph is not pre-chemical"});
      return out;
    }
  auto leg = [&](const GraphMorphism& f, const char* name) {
    if (!check_morphism(f).empty() || !check_embedding(f)) out.push_back({"scheme-leg", {name}, "not an embedding"});
  };
  leg(s.left(), "left");
  leg(s.right(), "right");
  return out;
}

Violations validate_instance(const ReactionInstance& x, const ValenceTable& vt) {
  Violations out = validate_scheme(x.scheme, vt);
  if (!out.empty()) return out;
  const ReactionScheme& s = x.scheme;
  if (!is_chemical(x.C, vt)) out.push_back({"instance-C", {}, "C is not chemical"});
  if (!is_chemical(x.E, vt)) out.push_back({"instance-E", {}, "E is not chemical"});
  if (!validate_prechemical(x.D).empty()) {
    out.push_back({"instance-D", {}, "D is not pre-chemical"});
    return out;
  }
  auto cls = [&](const GraphMorphism& f, bool matching, const char* name) {
    bool ok = check_morphism(f).empty() && (matching ? check_matching(f) : check_embedding(f));
    if (!ok) out.push_back({"instance-arrow", {name}, matching ? "not a matching" : "not an embedding"});
  };
  cls({s.A, x.C, x.m}, true, "m");
  cls({s.K, x.D, x.mk}, true, "mk");
  cls({s.B, x.E, x.mb}, true, "mb");
  cls({x.D, x.C, x.f1}, false, "f1");
  cls({x.D, x.E, x.g1}, false, "g1");
  if (!out.empty()) return out;
  if (!same_map(compose_maps(x.mk, x.f1), compose_maps(s.f, x.m)))
    out.push_back({"instance-commute", {"left"}, "left square does not commute"});
  if (!same_map(compose_maps(x.mk, x.g1), compose_maps(s.g, x.mb)))
    out.push_back({"instance-commute", {"right"}, "right square does not commute"});
  if (!out.empty()) return out;
  auto square = [&](const VMap& leg, const ChemGraph& top, const VMap& d_to, const VMap& top_to, const ChemGraph& target,
                    const char* name) {
    Pushout po = pushout_em({s.K, x.D, x.mk}, {s.K, top, leg});
    VMap iso;
    for (const auto& [d, y] : po.e_star.map) iso[y] = d_to.at(d);
    for (const auto& [t, y] : po.m_star.map) {
      auto it = iso.find(y);
      Name want = top_to.at(t);
      if (it == iso.end()) iso[y] = want;
      else if (it->second != want) out.push_back({"instance-pushout", {name}, "mediating map is not a function"});
    }
    if (!renames_onto(po.obj, iso, target)) out.push_back({"instance-pushout", {name}, "square is not a pushout"});
  };
  square(s.f, s.A, x.f1, x.m, x.C, "left");
  square(s.g, s.B, x.g1, x.mb, x.E, "right");
  return out;
}

ReactionInstance apply_scheme(const ReactionScheme& s, const GraphMorphism& m, const ValenceTable& vt) {
  if (!(m.dom == s.A)) throw PreconditionError("apply_scheme: matching domain is not the scheme's left graph");
  if (!is_chemical(m.cod, vt)) throw PreconditionError("apply_scheme: target graph is not chemical");
  need_matching(m, "apply_scheme");
  Complement pc = pushout_complement(s.left(), m);
  Pushout po = pushout_em(pc.m_hat, s.right());
  if (!is_chemical(po.obj, vt)) throw DomainError("apply_scheme: the scheme produces a non-chemical graph here");
  ReactionInstance x;
  x.scheme = s;
  x.C = m.cod;
  x.D = pc.obj;
  x.E = po.obj;
  x.m = m.map;
  x.mk = pc.m_hat.map;
  x.f1 = pc.e_hat.map;
  x.g1 = po.e_star.map;
  x.mb = po.m_star.map;
  return x;
}

Reaction instance_to_tuple(const ReactionInstance& x) {
  Reaction r;
  r.dom = x.C;
  r.cod = x.E;
  for (const auto& [a, c] : x.m) r.UA.insert(c);
  for (const auto& [b, e] : x.mb) r.UB.insert(e);
  VMap finv = inverse_injective(x.f1, "instance_to_tuple: f1");
  for (const auto& c : x.C.names()) {
    auto it = finv.find(c);
    if (r.UA.count(c)) {
      if (!x.C.is_chem(c)) continue;
      if (it == finv.end()) throw InvariantError("instance_to_tuple: changed chemical vertex outside D");
      r.b[c] = x.g1.at(it->second);
    } else {
      if (it == finv.end()) throw InvariantError("instance_to_tuple: unchanged vertex outside D");
      r.i[c] = x.g1.at(it->second);
    }
  }
  return r;
}

namespace {

struct Side {
  GraphMorphism m;  // U* -> graph
  std::map<Name, std::vector<Name>> fib;
  NameSet un;       // U
};

Side side(const ChemGraph& g, const NameSet& u, const ValenceTable& vt) {
  Side s;
  s.m = matching_from_matchable(g, u, vt);
  s.fib = fibres_of(s.m.map);
  s.un = u;
  return s;
}

// the unique preimage in U* of an alpha vertex of the graph
Name alpha_pre(const Side& s, const Name& a) {
  const auto& f = s.fib.at(a);
  if (f.size() != 1) throw InvariantError("interface: alpha vertex " + a + " has " + std::to_string(f.size()) + " preimages");
  return f.front();
}

}  // namespace

ReactionInstance tuple_to_instance(const Reaction& r, const ValenceTable& vt) {
  if (!validate_reaction(r, vt).empty()) throw PreconditionError("tuple_to_instance: invalid reaction");
  const ChemGraph &C = r.dom, &E = r.cod;
  if (!is_matchable(C, r.UA, vt) || !is_matchable(E, r.UB, vt))
    throw PreconditionError("tuple_to_instance: changed sets are not matchable");
  Side L = side(C, r.UA, vt), R = side(E, r.UB, vt);
  const ChemGraph &Ls = L.m.dom, &Rs = R.m.dom;
  VMap bhat;
  // chemical vertices of U_C^* are those of C, named alike
  for (const auto& u : Ls.chem_vertices()) {
    Name bu = r.b.at(u);
    if (!Rs.has(bu) || !Rs.is_chem(bu)) throw PreconditionError("tuple_to_instance: b does not preserve interior vertices");
    bhat[u] = bu;
  }
  // alpha copies sitting over chemical vertices
  for (const auto& c : C.chem_vertices()) {
    if (!r.UA.count(c) || !L.fib.count(c)) continue;
    std::vector<Name> nc, cc, nb, cb;
    for (const auto& a : L.fib.at(c))
      if (Ls.is_alpha(a)) (Ls.charge(a) == 0 ? nc : cc).push_back(a);
    if (nc.empty() && cc.empty()) continue;
    Name bc = r.b.at(c);
    if (R.fib.count(bc))
      for (const auto& a : R.fib.at(bc))
        if (Rs.is_alpha(a)) (Rs.charge(a) == 0 ? nb : cb).push_back(a);
    if (nc.size() + cc.size() != nb.size() + cb.size())
      throw PreconditionError("tuple_to_instance: alpha fibres over " + c + " and " + bc + " differ in size");
    auto take = [](std::vector<Name>& v, std::size_t k) { v.erase(v.begin() + static_cast<long>(k)); };
    for (std::size_t i = 0; i < nc.size();) {
      Name ni = Ls.adjacent(nc[i]).empty() ? "" : Ls.adjacent(nc[i]).begin()->first;
      bool done = false;
      if (!ni.empty() && bhat.count(ni))
        for (std::size_t j = 0; j < nb.size(); ++j)
          if (cov(Rs.bond(nb[j], bhat[ni])) > 0) {
            bhat[nc[i]] = nb[j];
            take(nc, i);
            take(nb, j);
            done = true;
            break;
          }
      if (!done) ++i;
    }
    auto ion_img = [&](const ChemGraph& g, const Name& a, const VMap* f) {
      NameSet s;
      for (const auto& [y, l] : g.adjacent(a))
        if (l == kIonic) s.insert(f ? f->at(y) : y);
      return s;
    };
    for (std::size_t i = 0; i < cc.size();) {
      bool done = false;
      NameSet want = ion_img(Ls, cc[i], &bhat);
      for (std::size_t j = 0; j < cb.size(); ++j)
        if (Rs.charge(cb[j]) == Ls.charge(cc[i]) && ion_img(Rs, cb[j], nullptr) == want) {
          bhat[cc[i]] = cb[j];
          take(cc, i);
          take(cb, j);
          done = true;
          break;
        }
      if (!done) ++i;
    }
    std::vector<Name> rest_l = nc, rest_r = nb;
    rest_l.insert(rest_l.end(), cc.begin(), cc.end());
    rest_r.insert(rest_r.end(), cb.begin(), cb.end());
    for (std::size_t k = 0; k < rest_l.size(); ++k) bhat[rest_l[k]] = rest_r[k];
  }
  // alpha vertices of U_C kept in the interface, with their partner on the right
  auto pick = [&](const std::vector<Name>& lhs, const std::vector<Name>& rhs) {
    std::size_t k = std::min(lhs.size(), rhs.size());
    for (std::size_t j = 0; j < k; ++j) bhat[alpha_pre(L, lhs[j])] = alpha_pre(R, rhs[j]);
  };
  auto alphas = [](const ChemGraph& g, const NameSet& u, const Name& anchor, int sgn, bool ionic) {
    std::vector<Name> out;
    for (const auto& [y, l] : g.adjacent(anchor)) {
      if (!u.count(y) || !g.is_alpha(y)) continue;
      if (ionic ? l != kIonic : cov(l) == 0) continue;
      if (ionic && (g.charge(y) > 0) != (sgn > 0)) continue;
      out.push_back(y);
    }
    return out;
  };
  for (const auto& u : C.chem_vertices()) {
    if (!r.UA.count(u)) continue;
    Name bu = r.b.at(u);
    pick(alphas(C, r.UA, u, 0, false), alphas(E, r.UB, bu, 0, false));
    pick(alphas(C, r.UA, u, -1, true), alphas(E, r.UB, bu, -1, true));
    pick(alphas(C, r.UA, u, 1, true), alphas(E, r.UB, bu, 1, true));
  }
  auto isolated = [](const ChemGraph& g, const NameSet& u, int sgn) {
    std::vector<Name> out;
    for (const auto& y : u)
      if (g.is_alpha(y) && g.adjacent(y).empty() && g.charge(y) == sgn) out.push_back(y);
    return out;
  };
  pick(isolated(C, r.UA, -1), isolated(E, r.UB, -1));
  pick(isolated(C, r.UA, 1), isolated(E, r.UB, 1));

  ReactionScheme s;
  s.A = Ls;
  s.B = Rs;
  for (const auto& [k, kb] : bhat) {
    int ch = Ls.charge(k) == Rs.charge(kb) ? Ls.charge(k) : 0;
    s.K.add_vertex(k, Ls.sym(k), ch);
    s.f[k] = k;
    s.g[k] = kb;
  }
  for (auto x = bhat.begin(); x != bhat.end(); ++x)
    for (auto y = std::next(x); y != bhat.end(); ++y) {
      Bond l = Ls.bond(x->first, y->first);
      if (l != 0 && l == Rs.bond(x->second, y->second)) s.K.set_bond(x->first, y->first, l);
    }
  if (!validate_prechemical(s.K).empty()) throw PreconditionError("tuple_to_instance: interface is not pre-chemical");

  Complement pc = pushout_complement(s.left(), L.m);
  ReactionInstance x;
  x.scheme = s;
  x.C = C;
  x.E = E;
  x.D = pc.obj;
  x.m = L.m.map;
  x.mk = pc.m_hat.map;
  x.f1 = pc.e_hat.map;
  x.mb = R.m.map;
  for (const auto& d : x.D.names()) {
    if (!r.UA.count(d)) {
      x.g1[d] = r.i.at(d);
      continue;
    }
    for (const auto& [k, dk] : x.mk)
      if (dk == d) {
        x.g1[d] = x.mb.at(s.g.at(k));
        break;
      }
  }
  auto bad = validate_instance(x, vt);
  if (!bad.empty()) throw PreconditionError("tuple_to_instance: " + bad.front().str());
  return x;
}

Reaction extend_to_matchable(const Reaction& r, const ValenceTable& vt) {
  Reaction x = r;
  VMap iinv = invert(r.i);
  auto move = [&](const Name& c, const Name& e) {
    x.UA.insert(c);
    x.UB.insert(e);
    if (x.dom.is_chem(c)) x.b[c] = e;
    x.i.erase(c);
    iinv.erase(e);
  };
  auto grow = [](const ChemGraph& g, const NameSet& u) {
    NameSet want = u;
    for (const auto& v : u)
      for (const auto& [y, l] : g.adjacent(v)) want.insert(y);
    for (const auto& v : NameSet(want))
      for (const auto& y : ionic_neighbours(g, v)) want.insert(y);
    return want;
  };
  // A changed chemical vertex must end up interior: a boundary vertex meets
  // the interface only through alpha copies, which cannot carry a change in
  // its bonds to the interior. The vertices added were unchanged, so their
  // bonds into U agree on both sides.
  auto interior = [](const ChemGraph& g, const NameSet& changed, const NameSet& u) {
    for (const auto& v : changed)
      if (g.is_chem(v))
        for (const auto& [y, l] : g.adjacent(v))
          if (!u.count(y)) return false;
    return true;
  };
  while (!interior(x.dom, r.UA, x.UA) || !interior(x.cod, r.UB, x.UB) || !is_matchable(x.dom, x.UA, vt) ||
         !is_matchable(x.cod, x.UB, vt)) {
    bool moved = false;
    for (const auto& c : grow(x.dom, x.UA))
      if (!x.UA.count(c)) move(c, x.i.at(c)), moved = true;
    for (const auto& e : grow(x.cod, x.UB))
      if (!x.UB.count(e)) move(iinv.at(e), e), moved = true;
    if (!moved) throw PreconditionError("extend_to_matchable: changed sets cannot be made matchable");
  }
  return x;
}

ReactionScheme canonical_scheme(const ChemGraph& a, const ChemGraph& b, const VMap& bij, const ValenceTable& vt) {
  Reaction r{a, b, a.names(), b.names(), bij, {}};
  ReactionInstance x = tuple_to_instance(r, vt);
  // U* is a renamed copy of each side; name it back
  auto back = [](const VMap& m, const char* side) {
    NameSet img;
    for (const auto& [k, v] : m)
      if (!img.insert(v).second) throw PreconditionError(std::string("canonical_scheme: ") + side + " copy is not a bijection");
    return m;
  };
  VMap ma = back(x.m, "left"), mb = back(x.mb, "right");
  ReactionScheme s;
  s.A = a;
  s.B = b;
  VMap kn;
  for (const auto& [k, ak] : x.scheme.f) kn[k] = ma.at(ak);
  s.K = rename_all(x.scheme.K, kn);
  for (const auto& [k, ak] : x.scheme.f) s.f[kn[k]] = ma.at(ak);
  for (const auto& [k, bk] : x.scheme.g) s.g[kn[k]] = mb.at(bk);
  return s;
}

bool is_canonical(const ReactionScheme& s, const ValenceTable& vt) {
  VMap bij, finv = inverse_injective(s.f, "scheme left leg");
  for (const auto& c : s.A.chem_vertices()) {
    auto it = finv.find(c);
    if (it == finv.end()) return false;
    bij[c] = s.g.at(it->second);
  }
  ReactionScheme cs = canonical_scheme(s.A, s.B, bij, vt);
  VMap kn = s.f;  // name the interface after its image in A
  ReactionScheme t;
  t.A = s.A;
  t.B = s.B;
  t.K = rename_all(s.K, kn);
  for (const auto& [k, a] : s.f) t.f[a] = a;
  for (const auto& [k, b] : s.g) t.g[kn[k]] = b;
  return t == cs;
}

ReactionScheme parse_scheme(const std::string& text) {
  GraphFile f = parse_graph_file(text, true);
  ReactionScheme s;
  int seen = 0;
  for (auto& blk : f.blocks) {
    if (blk.name == "A") s.A = blk.graph;
    else if (blk.name == "K") s.K = blk.graph;
    else if (blk.name == "B") s.B = blk.graph;
    else throw ParseError("scheme graph blocks must be named A, K or B", 0);
    ++seen;
  }
  if (seen != 3) throw ParseError("scheme needs graph blocks A, K and B", 0);
  for (const auto& [lineno, line] : f.rest) {
    auto tok = split_ws(line);
    if (tok[0] != "left" && tok[0] != "right") throw ParseError("unknown keyword '" + tok[0] + "'", lineno);
    if (tok.size() != 3) throw ParseError(tok[0] + " <k> <vertex>", lineno);
    VMap& m = tok[0] == "left" ? s.f : s.g;
    if (!m.emplace(tok[1], tok[2]).second) throw ParseError("duplicate map entry for " + tok[1], lineno);
  }
  return s;
}

std::string print_scheme(const ReactionScheme& s) {
  std::ostringstream o;
  o << print_graph(s.A, "A") << print_graph(s.K, "K") << print_graph(s.B, "B");
  for (const auto& [k, a] : s.f) o << "left " << k << " " << a << "\n";
  for (const auto& [k, b] : s.g) o << "right " << k << " " << b << "\n";
  return o.str();
}

std::string print_instance(const ReactionInstance& x) {
  std::ostringstream o;
  o << print_scheme(x.scheme) << print_graph(x.C, "C") << print_graph(x.D, "D") << print_graph(x.E, "E");
  auto maps = [&](const char* kw, const VMap& m) {
    for (const auto& [a, b] : m) o << kw << " " << a << " " << b << "\n";
  };
  maps("m", x.m);
  maps("mk", x.mk);
  maps("mb", x.mb);
  maps("f1", x.f1);
  maps("g1", x.g1);
  return o.str();
}

}  // namespace chemcat
