// SPDX-License-Identifier: Apache-2.0
#include "chemcat/morphism.hpp"

#include "chemcat/io.hpp"

namespace chemcat {

namespace {

int sign(int x) { return (x > 0) - (x < 0); }

std::map<Name, std::vector<Name>> fibres(const GraphMorphism& f) {
  std::map<Name, std::vector<Name>> out;
  for (const auto& [a, b] : f.map) out[b].push_back(a);
  return out;
}

void need_prechemical(const GraphMorphism& f) {
  if (!validate_prechemical(f.dom).empty()) throw PreconditionError("morphism domain is not pre-chemical");
  if (!validate_prechemical(f.cod).empty()) throw PreconditionError("morphism codomain is not pre-chemical");
}

// fibre sum of the covalent weight between f^-1(w) and b
int fibre_cov(const ChemGraph& a, const std::vector<Name>& fib, const Name& b) {
  int k = 0;
  for (const auto& x : fib) k += cov(a.bond(x, b));
  return k;
}

}  // namespace

Violations check_morphism(const GraphMorphism& f) {
  need_prechemical(f);
  const ChemGraph &A = f.dom, &B = f.cod;
  Violations out;
  for (const auto& [v, at] : A.atoms()) {
    auto it = f.map.find(v);
    if (it == f.map.end()) out.push_back({"map", {v}, "vertex not mapped"});
    else if (!B.has(it->second)) out.push_back({"map", {v, it->second}, "image outside codomain"});
  }
  for (const auto& [v, w] : f.map)
    if (!A.has(v)) out.push_back({"map", {v}, "not a domain vertex"});
  if (!out.empty()) return out;

  std::map<Name, Name> chem_img;
  NameSet fchem, falpha;
  for (const auto& [v, w] : f.map) {
    if (A.is_chem(v)) {
      auto [it, fresh] = chem_img.emplace(w, v);
      if (!fresh) out.push_back({"chem-injective", {it->second, v}, "both map to " + w});
      fchem.insert(w);
    } else {
      falpha.insert(w);
    }
  }
  for (const auto& w : fchem)
    if (falpha.count(w)) out.push_back({"chem-alpha-disjoint", {w}, "image of chemical and alpha vertices"});
  for (const auto& [v, w] : f.map) {
    if (A.is_chem(v) && A.sym(v) != B.sym(w)) out.push_back({"atom", {v, w}, A.sym(v) + " vs " + B.sym(w)});
    int c = A.charge(v);
    if (c != 0 && sign(B.charge(w)) != sign(c)) out.push_back({"sign", {v, w}, "charge sign not preserved"});
  }
  auto fib = fibres(f);
  for (const auto& [w, pre] : fib) {
    int n = net_charge(A, NameSet(pre.begin(), pre.end()));
    if (n != 0 && n != B.charge(w))
      out.push_back({"fibre-charge", {w}, "fibre net " + std::to_string(n) + " vs " + std::to_string(B.charge(w))});
  }
  for (const auto& [e, b] : A.bonds()) {
    const Name &x = e.first, &y = e.second;
    Bond fb = B.bond(f.map.at(x), f.map.at(y));
    if (b == kIonic && fb != kIonic) out.push_back({"ionic", {x, y}, "ionic bond not preserved"});
    if (A.is_chem(x) && A.is_chem(y) && fb != b)
      out.push_back({"chem-bond", {x, y}, bond_str(b) + " vs " + bond_str(fb)});
  }
  for (const auto& w : falpha)
    for (const auto& b : A.chem_vertices()) {
      int k = fibre_cov(A, fib[w], b);
      if (k != 0 && k != cov(B.bond(w, f.map.at(b))))
        out.push_back({"alpha-bond", {w, b}, "fibre multiplicity " + std::to_string(k)});
    }
  return out;
}

Violations matching_violations(const GraphMorphism& f) {
  const ChemGraph &A = f.dom, &B = f.cod;
  Violations out;
  auto fib = fibres(f);
  for (const auto& [w, pre] : fib) {
    int n = net_charge(A, NameSet(pre.begin(), pre.end()));
    if (n != B.charge(w)) out.push_back({"strict-fibre-charge", {w}, "fibre net " + std::to_string(n)});
  }
  NameSet chem = A.chem_vertices();
  for (auto x = chem.begin(); x != chem.end(); ++x)
    for (auto y = std::next(x); y != chem.end(); ++y)
      if (A.bond(*x, *y) != B.bond(f.map.at(*x), f.map.at(*y))) out.push_back({"strict-chem-bond", {*x, *y}, ""});
  NameSet falpha;
  for (const auto& [v, w] : f.map)
    if (A.is_alpha(v)) falpha.insert(w);
  for (const auto& w : falpha)
    for (const auto& b : chem)
      if (fibre_cov(A, fib[w], b) != cov(B.bond(w, f.map.at(b)))) out.push_back({"strict-alpha-bond", {w, b}, ""});
  if (!is_ion_closed(B, image(f))) out.push_back({"ion-closed", {}, "image is not ion-closed"});
  return out;
}

bool check_embedding(const GraphMorphism& f) {
  if (!check_morphism(f).empty()) throw PreconditionError("check_embedding: not a morphism");
  NameSet img;
  for (const auto& [v, w] : f.map) {
    if (!img.insert(w).second) return false;
    if (f.dom.sym(v) != f.cod.sym(w)) return false;
  }
  for (const auto& c : f.cod.chem_vertices())
    if (!img.count(c)) return false;
  return true;
}

bool check_matching(const GraphMorphism& f) {
  if (!check_morphism(f).empty()) throw PreconditionError("check_matching: not a morphism");
  return matching_violations(f).empty();
}

GraphMorphism compose(const GraphMorphism& f, const GraphMorphism& g) {
  if (!(f.cod == g.dom)) throw TypeError("morphism composition: codomain and domain differ", 0);
  GraphMorphism h{f.dom, g.cod, {}};
  for (const auto& [v, w] : f.map) h.map[v] = g.map.at(w);
  return h;
}

GraphMorphism identity_morphism(const ChemGraph& a) {
  GraphMorphism f{a, a, {}};
  for (const auto& n : a.names()) f.map[n] = n;
  return f;
}

NameSet image(const GraphMorphism& f) {
  NameSet s;
  for (const auto& [v, w] : f.map) s.insert(w);
  return s;
}

bool is_ion_closed(const ChemGraph& a, const NameSet& u) {
  for (const auto& x : u)
    for (const auto& y : ionic_neighbours(a, x))
      if (!u.count(y)) return false;
  return true;
}

bool is_matchable(const ChemGraph& a, const NameSet& u, const ValenceTable& vt) {
  if (!is_valence_complete(a, vt)) throw PreconditionError("is_matchable: graph is not valence-complete");
  for (const auto& x : u)
    if (!a.has(x)) throw DomainError("is_matchable: unknown vertex " + x);
  if (!is_ion_closed(a, u)) return false;
  auto interior = [&](const Name& x) {
    if (!u.count(x) || !a.is_chem(x)) return false;
    for (const auto& [y, b] : a.adjacent(x))
      if (!u.count(y)) return false;
    return true;
  };
  for (const auto& x : u) {
    if (interior(x) || a.charge(x) != 0) continue;
    bool ok = false;
    for (const auto& [y, b] : a.adjacent(x)) ok = ok || interior(y);
    if (!ok) return false;
  }
  return true;
}

GraphMorphism valence_completion(const ChemGraph& a, const NameSet& u, const ValenceTable& vt) {
  if (!is_valence_complete(a, vt)) throw PreconditionError("valence_completion: graph is not valence-complete");
  GraphMorphism m;
  m.cod = a;
  ChemGraph& g = m.dom;
  for (const auto& x : u) {
    if (!a.has(x) || !a.is_chem(x)) throw PreconditionError("valence_completion: " + x + " is not a chemical vertex");
    g.add_vertex(x, a.sym(x), a.charge(x));
    m.map[x] = x;
  }
  for (const auto& x : u)
    for (const auto& [y, b] : a.adjacent(x))
      if (u.count(y)) g.set_bond(x, y, b);
  // a copy standing for exactly one alpha of a keeps that alpha's name
  auto self_named = [&](const Name& name, const Name& target, int count) {
    return count == 1 && a.is_alpha(target) && !g.has(target) ? target : name;
  };
  auto add = [&](const Name& name, int charge, const Name& anchor, Bond b, const Name& target) {
    if ((a.has(name) && name != target) || g.has(name))
      throw DomainError("valence_completion: name " + name + " already in use");
    g.add_vertex(name, kAlpha, charge);
    g.set_bond(anchor, name, b);
    m.map[name] = target;
  };
  for (const auto& x : u)
    for (const auto& [y, b] : a.adjacent(x)) {
      if (u.count(y)) continue;
      if (b == kIonic) {
        int c = a.charge(y);
        for (int j = 1; j <= std::abs(c); ++j)
          add(self_named(y + "__ib__" + x + "__" + std::to_string(j), y, std::abs(c)), sign(c), x, kIonic, y);
      } else {
        for (int j = 1; j <= cov(b); ++j)
          add(self_named(y + "__" + x + "__" + std::to_string(j), y, cov(b)), 0, x, 1, y);
      }
    }
  return m;
}

GraphMorphism charge_decomposition(const ChemGraph& a, const NameSet& b) {
  GraphMorphism m;
  m.cod = a;
  for (const auto& y : b) {
    if (!a.has(y) || a.charge(y) == 0) throw PreconditionError("charge_decomposition: " + y + " is not charged");
    int c = a.charge(y);
    for (int j = 1; j <= std::abs(c); ++j) {
      Name n = y + (c > 0 ? "__pos__" : "__neg__") + std::to_string(j);
      if (std::abs(c) == 1 && a.is_alpha(y)) n = y;
      else if (a.has(n)) throw DomainError("charge_decomposition: name " + n + " already in use");
      m.dom.add_vertex(n, kAlpha, sign(c));
      m.map[n] = y;
    }
  }
  return m;
}

GraphMorphism matching_from_matchable(const ChemGraph& a, const NameSet& s, const ValenceTable& vt) {
  if (!is_matchable(a, s, vt)) throw PreconditionError("matching_from_matchable: subset is not matchable");
  NameSet u;
  for (const auto& x : s) {
    if (!a.is_chem(x)) continue;
    bool in = true;
    for (const auto& [y, b] : a.adjacent(x)) in = in && s.count(y);
    if (in) u.insert(x);
  }
  NameSet near = u;
  for (const auto& x : u)
    for (const auto& y : ionic_neighbours(a, x)) near.insert(y);
  NameSet bset;
  for (const auto& x : s)
    if (!near.count(x) && a.charge(x) != 0) bset.insert(x);
  GraphMorphism vc = valence_completion(a, u, vt);
  GraphMorphism cd = charge_decomposition(a, bset);
  GraphMorphism m;
  m.cod = a;
  m.dom = disjoint_union(vc.dom, cd.dom);
  m.map = vc.map;
  m.map.insert(cd.map.begin(), cd.map.end());
  return m;
}

GraphMorphism parse_morphism(const std::string& text, const std::string& base) {
  GraphFile f = parse_graph_file(text, true);
  GraphMorphism m;
  bool have_dom = false, have_cod = false;
  for (auto& blk : f.blocks) {
    if (blk.name == "dom") {
      m.dom = blk.graph;
      have_dom = true;
    } else if (blk.name == "cod") {
      m.cod = blk.graph;
      have_cod = true;
    } else {
      throw ParseError("morphism graph blocks must be named dom or cod", 0);
    }
  }
  for (const auto& [lineno, line] : f.rest) {
    auto tok = split_ws(line);
    if (tok[0] == "morphism") {
      if (tok.size() != 3) throw ParseError("morphism <domfile> <codfile>", lineno);
      m.dom = parse_graph(read_file(sibling_path(base, tok[1]))).graph;
      m.cod = parse_graph(read_file(sibling_path(base, tok[2]))).graph;
      have_dom = have_cod = true;
    } else if (tok[0] == "map") {
      if (tok.size() != 3) throw ParseError("map <u> <v>", lineno);
      if (!m.map.emplace(tok[1], tok[2]).second) throw ParseError("duplicate map entry for " + tok[1], lineno);
    } else {
      throw ParseError("unknown keyword '" + tok[0] + "'", lineno);
    }
  }
  if (!have_dom || !have_cod) throw ParseError("morphism needs a domain and a codomain", 0);
  return m;
}

}  // namespace chemcat
