// SPDX-License-Identifier: Apache-2.0
#include "chemcat/term.hpp"

#include <tuple>

namespace chemcat {

std::vector<Name> Gen::U() const {
  switch (kind) {
    case Kind::ENeg: return {u};
    case Kind::EPos:
    case Kind::Ion:
    case Kind::Cov: return {u, v};
    default: return {};
  }
}

std::vector<Name> Gen::D() const {
  if (has_sub()) return {a, b};
  return {};
}

std::vector<Name> Gen::names() const {
  switch (kind) {
    case Kind::Id: return {};
    case Kind::S: return {u};
    case Kind::R: return {u, v};
    case Kind::ENeg: return {u, a, b};
    case Kind::EPos:
    case Kind::Ion: return {u, v};
    case Kind::Cov: return {u, v, a, b};
  }
  return {};
}

bool Gen::mentions(const Name& x) const {
  for (const auto& n : names())
    if (n == x) return true;
  return false;
}

bool Gen::operator<(const Gen& o) const {
  return std::tie(kind, bar, u, v, a, b) < std::tie(o.kind, o.bar, o.u, o.v, o.a, o.b);
}

int block_of(const Gen& g) {
  switch (g.kind) {
    case Kind::Id: return bId;
    case Kind::S: return bS;
    case Kind::R: return bR;
    case Kind::Ion: return g.bar ? bIBar : bI;
    case Kind::Cov: return g.bar ? bCBar : bC;
    case Kind::ENeg: return g.bar ? bENegBar : bENeg;
    case Kind::EPos: return g.bar ? bEPosBar : bEPos;
  }
  return bId;
}

const char* block_name(int b) {
  static const char* n[] = {"I", "C", "E<0", "E>=0", "~E>=0", "~E<0", "~C", "~I", "R", "S", "id"};
  return n[b];
}

Gen dagger(const Gen& g) {
  Gen h = g;
  if (g.kind == Kind::R) std::swap(h.u, h.v);
  else if (g.is_rule()) h.bar = !g.bar;
  return h;
}

Term dagger_term(const Term& t) {
  Term out;
  out.gens.reserve(t.gens.size());
  for (auto it = t.gens.rbegin(); it != t.gens.rend(); ++it) out.gens.push_back(dagger(*it));
  return out;
}

Term concat(const Term& a, const Term& b) {
  Term out = a;
  out.gens.insert(out.gens.end(), b.gens.begin(), b.gens.end());
  return out;
}

// ---------------------------------------------------------------------------
// printing and parsing

std::string print_gen(const Gen& g) {
  std::string p = g.bar ? "~" : "";
  switch (g.kind) {
    case Kind::Id: return "id";
    case Kind::S: return "S(" + g.u + ")";
    case Kind::R: return "R(" + g.u + ">" + g.v + ")";
    case Kind::ENeg: return p + "E(" + g.u + "|" + g.a + "," + g.b + ")";
    case Kind::EPos: return p + "E(" + g.u + "," + g.v + ")";
    case Kind::Ion: return p + "I(" + g.u + "," + g.v + ")";
    case Kind::Cov: return p + "C(" + g.u + "," + g.v + "|" + g.a + "," + g.b + ")";
  }
  return "?";
}

std::string print_term(const Term& t) {
  if (t.gens.empty()) return "id";
  std::string out;
  for (std::size_t i = 0; i < t.gens.size(); ++i) {
    if (i) out += ";";
    out += print_gen(t.gens[i]);
  }
  return out;
}

namespace {

bool name_char(char c) {
  return !(c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '(' || c == ')' || c == '|' ||
           c == ',' || c == ';' || c == '>' || c == '~');
}

struct TermParser {
  const std::string& s;
  std::size_t i = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(i + 1));
  }
  void ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
  }
  bool eat(char c) {
    ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  Name name() {
    ws();
    std::size_t st = i;
    while (i < s.size() && name_char(s[i])) ++i;
    if (st == i) fail("expected vertex name");
    return s.substr(st, i - st);
  }
  std::string word() {
    ws();
    std::size_t st = i;
    while (i < s.size() && ((s[i] >= 'a' && s[i] <= 'z') || (s[i] >= 'A' && s[i] <= 'Z'))) ++i;
    return s.substr(st, i - st);
  }

  std::optional<Gen> gen() {
    ws();
    std::size_t start = i;
    bool bar = false;
    while (eat('~')) bar = !bar;
    std::string w = word();
    if (w == "id") {
      if (bar) { i = start; fail("id cannot be barred"); }
      return std::nullopt;
    }
    if (w.size() != 1) { i = start; fail("expected generator"); }
    char k = w[0];
    expect('(');
    Gen g;
    g.bar = bar;
    Name x = name();
    if (k == 'S') {
      if (bar) fail("S cannot be barred");
      g.kind = Kind::S;
      g.u = x;
    } else if (k == 'R') {
      if (bar) fail("R cannot be barred");
      expect('>');
      g.kind = Kind::R;
      g.u = x;
      g.v = name();
    } else if (k == 'E') {
      if (eat('|')) {
        g.kind = Kind::ENeg;
        g.u = x;
        g.a = name();
        expect(',');
        g.b = name();
      } else {
        expect(',');
        g.kind = Kind::EPos;
        g.u = x;
        g.v = name();
      }
    } else if (k == 'I') {
      expect(',');
      g.kind = Kind::Ion;
      g.u = x;
      g.v = name();
    } else if (k == 'C') {
      expect(',');
      g.kind = Kind::Cov;
      g.u = x;
      g.v = name();
      expect('|');
      g.a = name();
      expect(',');
      g.b = name();
    } else {
      i = start;
      fail("unknown generator '" + w + "'");
    }
    expect(')');
    if (g.kind != Kind::R) {
      auto ns = g.names();
      for (std::size_t p = 0; p < ns.size(); ++p)
        for (std::size_t q = p + 1; q < ns.size(); ++q)
          if (ns[p] == ns[q]) { i = start; fail("generator repeats vertex name '" + ns[p] + "'"); }
    }
    return g;
  }

  Term term() {
    Term t;
    ws();
    if (i == s.size()) fail("empty term");
    for (;;) {
      if (auto g = gen()) t.gens.push_back(*g);
      ws();
      if (i == s.size()) break;
      expect(';');
    }
    return t;
  }
};

}  // namespace

Gen parse_gen(const std::string& text) {
  TermParser p{text};
  auto g = p.gen();
  p.ws();
  if (p.i != text.size()) p.fail("trailing input");
  return g ? *g : Gen::id();
}

Term parse_term(const std::string& text) {
  TermParser p{text};
  return p.term();
}

// ---------------------------------------------------------------------------
// rules as partial functions

namespace {

// Pre-chemical clauses and the no-positive-alpha clause for a single
// vertex. Valence is preserved by every table row, so it is not rechecked.
bool vertex_ok(const ChemGraph& g, const Name& v) {
  const Atom& at = g.atom(v);
  const auto& adj = g.adjacent(v);
  if (at.alpha()) {
    if (at.charge < -1 || at.charge > 0) return false;
    if (adj.size() > 1) return false;
    for (const auto& [w, b] : adj)
      if ((b != 1 && b != kIonic) || g.is_alpha(w)) return false;
    return true;
  }
  int net = 0;
  int n = 0;
  bool chem_partner = false, pos = true, neg = true;
  for (const auto& [w, b] : adj) {
    if (b != kIonic) continue;
    ++n;
    const Atom& wa = g.atom(w);
    net += wa.charge;
    if (!wa.alpha()) chem_partner = true;
    if (!wa.alpha() || wa.charge <= 0) pos = false;
    if (!wa.alpha() || wa.charge >= 0) neg = false;
  }
  if (n == 0) return true;
  bool shape = (n == 1 && chem_partner) || pos || neg;
  return shape && at.charge != 0 && at.charge == -net;
}

bool region_ok(const ChemGraph& g, std::initializer_list<const Name*> touched) {
  for (const Name* t : touched) {
    if (!t || !g.has(*t)) continue;
    if (!vertex_ok(g, *t)) return false;
    for (const auto& [w, b] : g.adjacent(*t))
      if (b == kIonic && !vertex_ok(g, w)) return false;
  }
  return true;
}

bool fail(std::string* why, const char* msg) {
  if (why) *why = msg;
  return false;
}

bool isolated_alpha(const ChemGraph& g, const Name& x, int charge) {
  return g.has(x) && g.is_alpha(x) && g.charge(x) == charge && g.adjacent(x).empty();
}

bool pendant_alpha(const ChemGraph& g, const Name& x, const Name& anchor) {
  if (!g.has(x) || !g.is_alpha(x) || g.charge(x) != 0) return false;
  const auto& adj = g.adjacent(x);
  return adj.size() == 1 && adj.begin()->first == anchor && adj.begin()->second == 1;
}

bool chem(const ChemGraph& g, const Name& x) { return g.has(x) && g.is_chem(x); }

}  // namespace

bool apply_gen(const Gen& gen, ChemGraph& g, std::string* why) {
  const Name &u = gen.u, &v = gen.v, &a = gen.a, &b = gen.b;
  switch (gen.kind) {
    case Kind::Id: return true;
    case Kind::S:
      if (!g.has(u)) return fail(why, "S: vertex absent");
      return true;
    case Kind::R:
      if (!g.has(u)) return fail(why, "R: source absent");
      if (!g.is_alpha(u)) return fail(why, "R: source is not an alpha vertex");
      if (u == v) return true;
      if (g.has(v)) return fail(why, "R: target name in use");
      g = rename(g, u, v);
      return true;
    default: break;
  }
  if (gen.has_sub() && (a == b || a == u || b == u || (gen.kind == Kind::Cov && (a == v || b == v))))
    return fail(why, "generator names not distinct");
  if (gen.kind != Kind::ENeg && u == v) return fail(why, "generator names not distinct");

  ChemGraph h = g;
  if (!gen.bar) {
    switch (gen.kind) {
      case Kind::ENeg:
        if (!chem(g, u)) return fail(why, "E(u|a,b): u not chemical");
        if (g.charge(u) >= 0) return fail(why, "E(u|a,b): u not negative");
        if (g.has(a) || g.has(b)) return fail(why, "E(u|a,b): a or b not fresh");
        h.set_charge(u, g.charge(u) + 1);
        h.add_vertex(a, kAlpha, 0);
        h.add_vertex(b, kAlpha, -1);
        h.set_bond(u, a, 1);
        break;
      case Kind::EPos:
        if (!chem(g, u)) return fail(why, "E(u,v): u not chemical");
        if (g.charge(u) < 0) return fail(why, "E(u,v): u negative");
        if (!g.has(v) || !g.is_alpha(v)) return fail(why, "E(u,v): v not an alpha vertex");
        if (g.bond(u, v) != 1) return fail(why, "E(u,v): bond u-v is not single");
        h.set_charge(u, g.charge(u) + 1);
        h.set_charge(v, -1);
        h.set_bond(u, v, 0);
        break;
      case Kind::Ion:
        if (!g.has(u) || !g.has(v)) return fail(why, "I(u,v): vertex absent");
        if (g.bond(u, v) != kIonic) return fail(why, "I(u,v): bond is not ionic");
        if (g.charge(u) <= 0) return fail(why, "I(u,v): u not positive");
        if (g.charge(v) >= 0) return fail(why, "I(u,v): v not negative");
        h.set_bond(u, v, 0);
        break;
      case Kind::Cov: {
        if (!chem(g, u) || !chem(g, v)) return fail(why, "C(u,v|a,b): u or v not chemical");
        Bond m = g.bond(u, v);
        if (m == 0 || m == kIonic) return fail(why, "C(u,v|a,b): no covalent bond");
        if (g.has(a) || g.has(b)) return fail(why, "C(u,v|a,b): a or b not fresh");
        h.set_bond(u, v, static_cast<Bond>(m - 1));
        h.add_vertex(a, kAlpha, 0);
        h.add_vertex(b, kAlpha, 0);
        h.set_bond(u, a, 1);
        h.set_bond(v, b, 1);
        break;
      }
      default: break;
    }
  } else {
    switch (gen.kind) {
      case Kind::ENeg:
        if (!chem(g, u)) return fail(why, "~E(u|a,b): u not chemical");
        if (g.charge(u) > 0) return fail(why, "~E(u|a,b): u positive");
        if (!pendant_alpha(g, a, u)) return fail(why, "~E(u|a,b): a not a neutral alpha on u");
        if (!isolated_alpha(g, b, -1)) return fail(why, "~E(u|a,b): b not an isolated negative alpha");
        h.remove_vertex(a);
        h.remove_vertex(b);
        h.set_charge(u, g.charge(u) - 1);
        break;
      case Kind::EPos:
        if (!chem(g, u)) return fail(why, "~E(u,v): u not chemical");
        if (g.charge(u) < 1) return fail(why, "~E(u,v): u not positive");
        if (!isolated_alpha(g, v, -1)) return fail(why, "~E(u,v): v not an isolated negative alpha");
        h.set_charge(u, g.charge(u) - 1);
        h.set_charge(v, 0);
        h.set_bond(u, v, 1);
        break;
      case Kind::Ion:
        if (!g.has(u) || !g.has(v)) return fail(why, "~I(u,v): vertex absent");
        if (g.bond(u, v) != 0) return fail(why, "~I(u,v): u and v already bonded");
        if (g.charge(u) <= 0) return fail(why, "~I(u,v): u not positive");
        if (g.charge(v) >= 0) return fail(why, "~I(u,v): v not negative");
        h.set_bond(u, v, kIonic);
        break;
      case Kind::Cov: {
        if (!chem(g, u) || !chem(g, v)) return fail(why, "~C(u,v|a,b): u or v not chemical");
        Bond m = g.bond(u, v);
        if (m == kIonic || m >= 4) return fail(why, "~C(u,v|a,b): bond cannot be raised");
        if (!pendant_alpha(g, a, u)) return fail(why, "~C(u,v|a,b): a not a neutral alpha on u");
        if (!pendant_alpha(g, b, v)) return fail(why, "~C(u,v|a,b): b not a neutral alpha on v");
        h.remove_vertex(a);
        h.remove_vertex(b);
        h.set_bond(u, v, static_cast<Bond>(m + 1));
        break;
      }
      default: break;
    }
  }
  if (!region_ok(h, {&u, gen.kind == Kind::ENeg ? nullptr : &v}))
    return fail(why, "output is not a chemical graph");
  g = std::move(h);
  return true;
}

std::optional<ChemGraph> apply_generator(const Gen& gen, const ChemGraph& g, std::string* why) {
  ChemGraph h = g;
  if (!apply_gen(gen, h, why)) return std::nullopt;
  return h;
}

ChemGraph eval_term(const Term& t, const ChemGraph& g) {
  ChemGraph h = g;
  for (std::size_t i = 0; i < t.gens.size(); ++i) {
    std::string why;
    if (!apply_gen(t.gens[i], h, &why))
      throw TypeError("generator " + std::to_string(i) + " " + print_gen(t.gens[i]) + ": " + why, i);
  }
  return h;
}

std::optional<ChemGraph> try_eval(const Term& t, const ChemGraph& g) {
  ChemGraph h = g;
  for (const auto& gen : t.gens)
    if (!apply_gen(gen, h)) return std::nullopt;
  return h;
}

std::vector<ChemGraph> eval_trace(const Term& t, const ChemGraph& g) {
  std::vector<ChemGraph> out;
  out.reserve(t.gens.size() + 1);
  out.push_back(g);
  for (std::size_t i = 0; i < t.gens.size(); ++i) {
    ChemGraph h = out.back();
    std::string why;
    if (!apply_gen(t.gens[i], h, &why))
      throw TypeError("generator " + std::to_string(i) + " " + print_gen(t.gens[i]) + ": " + why, i);
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace chemcat
