// SPDX-License-Identifier: Apache-2.0
#include "chemcat/reaction.hpp"

#include <sstream>

#include "chemcat/io.hpp"

namespace chemcat {

VMap invert(const VMap& f) {
  VMap g;
  for (const auto& [x, y] : f)
    if (!g.emplace(y, x).second) throw DomainError("map is not injective at " + y);
  return g;
}

namespace {

void push(Violations& out, std::string clause, std::vector<std::string> where, std::string detail = "") {
  out.push_back(Violation{std::move(clause), std::move(where), std::move(detail)});
}

NameSet chem_part(const ChemGraph& g, const NameSet& u) {
  NameSet out;
  for (const auto& v : u)
    if (g.has(v) && g.is_chem(v)) out.insert(v);
  return out;
}

NameSet outside(const ChemGraph& g, const NameSet& u) {
  NameSet out;
  for (const auto& [v, a] : g.atoms())
    if (!u.count(v)) out.insert(v);
  return out;
}

// f is a bijection from `from` onto `to`
void check_bijection(const VMap& f, const NameSet& from, const NameSet& to, const char* which, Violations& out) {
  NameSet keys, image;
  for (const auto& [x, y] : f) {
    keys.insert(x);
    if (!image.insert(y).second) push(out, std::string(which) + "-injective", {y});
  }
  if (keys != from) push(out, std::string(which) + "-domain", {}, "domain differs from required set");
  if (image != to) push(out, std::string(which) + "-image", {}, "image differs from required set");
}

}  // namespace

Violations validate_reaction(const Reaction& r, const ValenceTable& vt) {
  Violations out;
  for (const auto& v : validate_chemical(r.dom, vt)) push(out, "dom-chemical", v.where, v.str());
  for (const auto& v : validate_chemical(r.cod, vt)) push(out, "cod-chemical", v.where, v.str());
  for (const auto& u : r.UA)
    if (!r.dom.has(u)) push(out, "UA-subset", {u});
  for (const auto& u : r.UB)
    if (!r.cod.has(u)) push(out, "UB-subset", {u});
  if (!out.empty()) return out;

  if (net_charge(r.dom, r.UA) != net_charge(r.cod, r.UB)) push(out, "net-charge", {});
  NameSet ca = chem_part(r.dom, r.UA), cb = chem_part(r.cod, r.UB);
  NameSet oa = outside(r.dom, r.UA), ob = outside(r.cod, r.UB);
  check_bijection(r.b, ca, cb, "b", out);
  check_bijection(r.i, oa, ob, "i", out);
  if (!out.empty()) return out;

  for (const auto& [x, y] : r.b)
    if (r.dom.sym(x) != r.cod.sym(y)) push(out, "b-atom", {x, y});
  for (const auto& [x, y] : r.i)
    if (!(r.dom.atom(x) == r.cod.atom(y))) push(out, "i-label", {x, y});
  for (const auto& [x, y] : r.i)
    for (const auto& [x2, y2] : r.i)
      if (x < x2 && r.dom.bond(x, x2) != r.cod.bond(y, y2)) push(out, "i-bond", {x, x2});
  for (const auto& [u, bu] : r.b)
    for (const auto& [a, ia] : r.i)
      if (r.dom.bond(u, a) != r.cod.bond(bu, ia)) push(out, "boundary", {u, a});
  return out;
}

Reaction identity_reaction(const ChemGraph& a) {
  Reaction r;
  r.dom = a;
  r.cod = a;
  for (const auto& [v, at] : a.atoms()) r.i[v] = v;
  return r;
}

Reaction named_reaction(const ChemGraph& a, const ChemGraph& b, const NameSet& ua, const NameSet& ub) {
  Reaction r;
  r.dom = a;
  r.cod = b;
  r.UA = ua;
  r.UB = ub;
  for (const auto& [v, at] : a.atoms()) {
    if (ua.count(v)) {
      if (!at.alpha()) r.b[v] = v;
    } else {
      r.i[v] = v;
    }
  }
  return r;
}

Reaction compose(const Reaction& r, const Reaction& s) {
  if (!(r.cod == s.dom)) throw TypeError("reaction boundary mismatch: cod(r) != dom(s)", 0);
  Reaction out;
  out.dom = r.dom;
  out.cod = s.cod;
  out.UA = r.UA;
  VMap iinv = invert(r.i);
  for (const auto& w : s.UA)
    if (!r.UB.count(w)) out.UA.insert(iinv.at(w));
  out.UB = s.UB;
  for (const auto& x : r.UB)
    if (!s.UA.count(x)) out.UB.insert(s.i.at(x));

  auto step = [&](const Name& x) -> Name {
    return s.UA.count(x) ? s.b.at(x) : s.i.at(x);
  };
  for (const auto& u : out.UA) {
    if (r.dom.is_alpha(u)) continue;
    Name x = r.UA.count(u) ? r.b.at(u) : r.i.at(u);
    out.b[u] = step(x);
  }
  for (const auto& [a, ia] : r.i)
    if (!out.UA.count(a)) out.i[a] = s.i.at(ia);
  return out;
}

Reaction dagger(const Reaction& r) {
  Reaction out;
  out.dom = r.cod;
  out.cod = r.dom;
  out.UA = r.UB;
  out.UB = r.UA;
  out.b = invert(r.b);
  out.i = invert(r.i);
  return out;
}

bool equal(const Reaction& r, const Reaction& s) { return r == s; }

std::vector<std::string> differences(const Reaction& r, const Reaction& s) {
  std::vector<std::string> out;
  auto set_str = [](const NameSet& n) {
    std::string o = "{";
    for (const auto& x : n) o += (o.size() > 1 ? "," : "") + x;
    return o + "}";
  };
  auto map_str = [](const VMap& m) {
    std::string o = "{";
    for (const auto& [x, y] : m) o += (o.size() > 1 ? "," : "") + x + "->" + y;
    return o + "}";
  };
  if (!(r.dom == s.dom)) out.push_back("dom differs");
  if (!(r.cod == s.cod)) out.push_back("cod differs");
  if (r.UA != s.UA) out.push_back("changed-dom " + set_str(r.UA) + " vs " + set_str(s.UA));
  if (r.UB != s.UB) out.push_back("changed-cod " + set_str(r.UB) + " vs " + set_str(s.UB));
  if (r.b != s.b) out.push_back("b " + map_str(r.b) + " vs " + map_str(s.b));
  if (r.i != s.i) out.push_back("i " + map_str(r.i) + " vs " + map_str(s.i));
  return out;
}

Reaction parse_reaction(const std::string& text, const std::string& base) {
  GraphFile f = parse_graph_file(text, true);
  Reaction r;
  bool have_dom = false, have_cod = false;
  for (auto& blk : f.blocks) {
    if (blk.name == "dom") {
      r.dom = blk.graph;
      have_dom = true;
    } else if (blk.name == "cod") {
      r.cod = blk.graph;
      have_cod = true;
    } else {
      throw ParseError("reaction graph blocks must be named dom or cod", 0);
    }
  }
  for (const auto& [lineno, line] : f.rest) {
    auto tok = split_ws(line);
    const auto& kw = tok[0];
    if (kw == "dom" || kw == "cod") {
      if (tok.size() != 2) throw ParseError(kw + " <path>", lineno);
      ChemGraph g = parse_graph(read_file(sibling_path(base, tok[1]))).graph;
      (kw == "dom" ? r.dom : r.cod) = g;
      (kw == "dom" ? have_dom : have_cod) = true;
    } else if (kw == "changed-dom" || kw == "changed-cod") {
      NameSet& u = kw == "changed-dom" ? r.UA : r.UB;
      for (std::size_t k = 1; k < tok.size(); ++k) u.insert(tok[k]);
    } else if (kw == "b" || kw == "i") {
      if (tok.size() != 3) throw ParseError(kw + " <u> <v>", lineno);
      VMap& m = kw == "b" ? r.b : r.i;
      if (!m.emplace(tok[1], tok[2]).second) throw ParseError("duplicate map entry for " + tok[1], lineno);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", lineno);
    }
  }
  if (!have_dom || !have_cod) throw ParseError("reaction needs both dom and cod", 0);
  return r;
}

std::string print_reaction(const Reaction& r) {
  std::ostringstream o;
  o << "changed-dom";
  for (const auto& u : r.UA) o << " " << u;
  o << "\nchanged-cod";
  for (const auto& u : r.UB) o << " " << u;
  o << "\n";
  for (const auto& [x, y] : r.b) o << "b " << x << " " << y << "\n";
  for (const auto& [x, y] : r.i) o << "i " << x << " " << y << "\n";
  o << print_graph(r.dom, "dom") << print_graph(r.cod, "cod");
  return o.str();
}

Reaction tensor(const Reaction& r, const Reaction& s) {
  for (const auto& n : s.dom.names())
    if (r.dom.has(n)) throw DomainError("tensor: domains share vertex " + n);
  for (const auto& n : s.cod.names())
    if (r.cod.has(n)) throw DomainError("tensor: codomains share vertex " + n);
  Reaction t = r;
  t.dom = disjoint_union(r.dom, s.dom);
  t.cod = disjoint_union(r.cod, s.cod);
  t.UA.insert(s.UA.begin(), s.UA.end());
  t.UB.insert(s.UB.begin(), s.UB.end());
  t.b.insert(s.b.begin(), s.b.end());
  t.i.insert(s.i.begin(), s.i.end());
  return t;
}

}  // namespace chemcat
