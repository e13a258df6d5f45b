// SPDX-License-Identifier: Apache-2.0
#include "chemcat/graph.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace chemcat {

std::string bond_str(Bond b) {
  if (b == kIonic) return "ionic";
  return std::to_string(static_cast<int>(b));
}

ValenceTable::ValenceTable()
    : v_{{"H", 1}, {"C", 4}, {"N", 3}, {"O", 2}, {"P", 5},
         {"S", 2}, {"Cl", 1}, {"Na", 1}, {kAlpha, 1}} {}

ValenceTable ValenceTable::from_text(const std::string& text) {
  ValenceTable t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected symbol=valence", lineno);
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string sym = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (sym.empty() || val.empty()) throw ParseError("empty symbol or valence", lineno);
    char* end = nullptr;
    long v = std::strtol(val.c_str(), &end, 10);
    if (*end != '\0' || v < 0) throw ParseError("bad valence '" + val + "'", lineno);
    if (sym == kAlpha && v != 1) throw ConfigError("valence of alpha must be 1");
    t.v_[sym] = static_cast<int>(v);
  }
  return t;
}

ValenceTable ValenceTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read valence file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

ValenceTable ValenceTable::resolve(const std::string& path) {
  if (!path.empty()) return from_file(path);
  if (const char* env = std::getenv("CHEMCAT_VALENCES"); env && *env) return from_file(env);
  return ValenceTable();
}

int ValenceTable::of(const std::string& sym) const {
  auto it = v_.find(sym);
  if (it == v_.end()) throw ConfigError("no valence for atom symbol '" + sym + "'");
  return it->second;
}

void ValenceTable::set(const std::string& sym, int v) {
  if (sym == kAlpha && v != 1) throw ConfigError("valence of alpha must be 1");
  v_[sym] = v;
}

// ---------------------------------------------------------------------------

void ChemGraph::add_vertex(const Name& v, const std::string& sym, int charge) {
  if (v.empty()) throw DomainError("empty vertex name");
  if (has(v)) throw DomainError("duplicate vertex '" + v + "'");
  atoms_[v] = Atom{sym, charge};
  adj_[v];
}

void ChemGraph::remove_vertex(const Name& v) {
  auto it = adj_.find(v);
  if (it == adj_.end()) throw DomainError("no vertex '" + v + "'");
  for (const auto& [w, b] : it->second) {
    bonds_.erase(key(v, w));
    adj_[w].erase(v);
  }
  adj_.erase(it);
  atoms_.erase(v);
}

const Atom& ChemGraph::atom(const Name& v) const {
  auto it = atoms_.find(v);
  if (it == atoms_.end()) throw DomainError("no vertex '" + v + "'");
  return it->second;
}

void ChemGraph::set_charge(const Name& v, int c) {
  auto it = atoms_.find(v);
  if (it == atoms_.end()) throw DomainError("no vertex '" + v + "'");
  it->second.charge = c;
}

void ChemGraph::set_atom(const Name& v, Atom a) {
  auto it = atoms_.find(v);
  if (it == atoms_.end()) throw DomainError("no vertex '" + v + "'");
  it->second = std::move(a);
}

Bond ChemGraph::bond(const Name& u, const Name& v) const {
  auto it = bonds_.find(key(u, v));
  return it == bonds_.end() ? Bond{0} : it->second;
}

void ChemGraph::set_bond(const Name& u, const Name& v, Bond b) {
  if (u == v) {
    if (b == 0) return;
    throw DomainError("self-bond on '" + u + "'");
  }
  if (!has(u)) throw DomainError("no vertex '" + u + "'");
  if (!has(v)) throw DomainError("no vertex '" + v + "'");
  if (b > kIonic) throw DomainError("bad bond label");
  if (b == 0) {
    bonds_.erase(key(u, v));
    adj_[u].erase(v);
    adj_[v].erase(u);
  } else {
    bonds_[key(u, v)] = b;
    adj_[u][v] = b;
    adj_[v][u] = b;
  }
}

const std::map<Name, Bond>& ChemGraph::adjacent(const Name& v) const {
  auto it = adj_.find(v);
  if (it == adj_.end()) throw DomainError("no vertex '" + v + "'");
  return it->second;
}

NameSet ChemGraph::names() const {
  NameSet s;
  for (const auto& [v, a] : atoms_) s.insert(s.end(), v);
  return s;
}

NameSet ChemGraph::alpha_vertices() const {
  NameSet s;
  for (const auto& [v, a] : atoms_)
    if (a.alpha()) s.insert(s.end(), v);
  return s;
}

NameSet ChemGraph::chem_vertices() const {
  NameSet s;
  for (const auto& [v, a] : atoms_)
    if (!a.alpha()) s.insert(s.end(), v);
  return s;
}

NameSet ChemGraph::charged() const {
  NameSet s;
  for (const auto& [v, a] : atoms_)
    if (a.charge != 0) s.insert(s.end(), v);
  return s;
}

NameSet ChemGraph::positive() const {
  NameSet s;
  for (const auto& [v, a] : atoms_)
    if (a.charge > 0) s.insert(s.end(), v);
  return s;
}

NameSet ChemGraph::negative() const {
  NameSet s;
  for (const auto& [v, a] : atoms_)
    if (a.charge < 0) s.insert(s.end(), v);
  return s;
}

// ---------------------------------------------------------------------------

int net_charge(const ChemGraph& g, const NameSet& u) {
  int n = 0;
  for (const auto& v : u) {
    if (!g.has(v)) throw DomainError("net_charge: '" + v + "' is not a vertex");
    n += g.charge(v);
  }
  return n;
}

NameSet neighbours(const ChemGraph& g, const Name& v) {
  NameSet s;
  for (const auto& [w, b] : g.adjacent(v)) s.insert(s.end(), w);
  return s;
}

NameSet covalent_neighbours(const ChemGraph& g, const Name& v) {
  NameSet s;
  for (const auto& [w, b] : g.adjacent(v))
    if (cov(b)) s.insert(s.end(), w);
  return s;
}

NameSet ionic_neighbours(const ChemGraph& g, const Name& v) {
  NameSet s;
  for (const auto& [w, b] : g.adjacent(v))
    if (ion(b)) s.insert(s.end(), w);
  return s;
}

Violations validate_prechemical(const ChemGraph& g) {
  Violations out;
  for (const auto& [v, a] : g.atoms()) {
    const auto& adj = g.adjacent(v);
    if (a.alpha()) {
      if (a.charge < -1 || a.charge > 1)
        out.push_back({"alpha-charge", {v}, "charge " + std::to_string(a.charge)});
      for (const auto& [w, b] : adj)
        if (b != 1 && b != kIonic)
          out.push_back({"alpha-edge", {v, w}, "label " + bond_str(b)});
      if (adj.size() > 1) out.push_back({"alpha-degree", {v}, "more than one neighbour"});
      for (const auto& [w, b] : adj)
        if (g.is_alpha(w)) out.push_back({"alpha-neighbour", {v, w}, "neighbour is alpha"});
      continue;
    }
    NameSet in;
    for (const auto& [w, b] : adj)
      if (ion(b)) in.insert(w);
    if (in.empty()) continue;
    bool ok;
    if (in.size() == 1 && g.is_chem(*in.begin())) {
      ok = true;
    } else {
      bool all_pos = true, all_neg = true;
      for (const auto& w : in) {
        if (!g.is_alpha(w) || g.charge(w) <= 0) all_pos = false;
        if (!g.is_alpha(w) || g.charge(w) >= 0) all_neg = false;
      }
      ok = all_pos || all_neg;
    }
    if (!ok) out.push_back({"ion-partners", {v}, "ionic neighbours not one chemical vertex or same-sign alphas"});
    int net = net_charge(g, in);
    if (a.charge == 0 || a.charge != -net)
      out.push_back({"ion-charge", {v},
                     "charge " + std::to_string(a.charge) + " vs ionic net " + std::to_string(net)});
  }
  return out;
}

Violations valence_violations(const ChemGraph& g, const ValenceTable& vt) {
  Violations out;
  for (const auto& [v, a] : g.atoms()) {
    int want = vt.of(a.sym);
    int have = a.charge < 0 ? -a.charge : a.charge;
    for (const auto& [w, b] : g.adjacent(v)) have += cov(b);
    if (have != want)
      out.push_back({"valence", {v},
                     std::to_string(have) + " used, valence " + std::to_string(want)});
  }
  return out;
}

Violations validate_chemical(const ChemGraph& g, const ValenceTable& vt) {
  Violations out = validate_prechemical(g);
  Violations val = valence_violations(g, vt);
  out.insert(out.end(), val.begin(), val.end());
  for (const auto& [v, a] : g.atoms())
    if (a.alpha() && a.charge > 0) out.push_back({"alpha-positive", {v}, "positive alpha vertex"});
  return out;
}

bool is_chemical(const ChemGraph& g, const ValenceTable& vt) {
  return validate_chemical(g, vt).empty();
}

bool is_valence_complete(const ChemGraph& g, const ValenceTable& vt) {
  return valence_violations(g, vt).empty();
}

bool is_molecular(const ChemGraph& g, const ValenceTable& vt) {
  return g.alpha_vertices().empty() && is_chemical(g, vt);
}

ChemGraph rename(const ChemGraph& g, const Name& u, const Name& v) {
  if (!g.has(u)) throw DomainError("rename: no vertex '" + u + "'");
  if (u == v) return g;
  if (g.has(v)) throw DomainError("rename: '" + v + "' already present");
  return rename_all(g, {{u, v}});
}

ChemGraph rename_all(const ChemGraph& g, const std::map<Name, Name>& f) {
  auto img = [&](const Name& x) {
    auto it = f.find(x);
    return it == f.end() ? x : it->second;
  };
  ChemGraph h;
  for (const auto& [v, a] : g.atoms()) {
    Name w = img(v);
    if (h.has(w)) throw DomainError("rename: name clash on '" + w + "'");
    h.add_vertex(w, a.sym, a.charge);
  }
  for (const auto& [e, b] : g.bonds()) h.set_bond(img(e.first), img(e.second), b);
  return h;
}

ChemGraph disjoint_union(const ChemGraph& g, const ChemGraph& h) {
  ChemGraph out = g;
  for (const auto& [v, a] : h.atoms()) {
    if (out.has(v)) throw DomainError("disjoint_union: name clash on '" + v + "'");
    out.add_vertex(v, a.sym, a.charge);
  }
  for (const auto& [e, b] : h.bonds()) out.set_bond(e.first, e.second, b);
  return out;
}

ChemGraph freshen(const ChemGraph& h, const ChemGraph& g, const std::string& suffix,
                  std::map<Name, Name>* renaming) {
  NameSet used = g.names();
  for (const auto& v : h.names()) used.insert(v);
  std::map<Name, Name> f;
  for (const auto& v : h.names()) {
    if (!g.has(v)) continue;
    Name w = fresh_name(v + suffix, used);
    used.insert(w);
    f[v] = w;
  }
  if (renaming) *renaming = f;
  return rename_all(h, f);
}

ChemGraph induced(const ChemGraph& g, const NameSet& u) {
  ChemGraph h;
  for (const auto& v : u) h.add_vertex(v, g.sym(v), g.charge(v));
  for (const auto& [e, b] : g.bonds())
    if (u.count(e.first) && u.count(e.second)) h.set_bond(e.first, e.second, b);
  return h;
}

std::vector<NameSet> components(const ChemGraph& g) {
  std::vector<NameSet> out;
  NameSet seen;
  for (const auto& [v, a] : g.atoms()) {
    if (seen.count(v)) continue;
    NameSet comp;
    std::vector<Name> stack{v};
    seen.insert(v);
    while (!stack.empty()) {
      Name x = stack.back();
      stack.pop_back();
      comp.insert(x);
      for (const auto& [w, b] : g.adjacent(x))
        if (seen.insert(w).second) stack.push_back(w);
    }
    out.push_back(std::move(comp));
  }
  return out;
}

bool connected(const ChemGraph& g) { return components(g).size() <= 1; }

Name fresh_name(const std::string& prefix, const NameSet& used) {
  for (std::size_t k = 1;; ++k) {
    Name n = prefix + std::to_string(k);
    if (!used.count(n)) return n;
  }
}

}  // namespace chemcat
