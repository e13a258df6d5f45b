// SPDX-License-Identifier: Apache-2.0
#include "chemcat/canon.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace chemcat {

namespace {

struct Small {
  std::vector<std::string> lab;                    // atom token
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbour, bond)
};

std::string atom_token(const Atom& a) {
  return a.charge == 0 ? a.sym : a.sym + "^" + std::to_string(a.charge);
}

// stable re-ranking by (colour, sorted neighbour signature) until fixed
std::vector<int> refine(const Small& g, std::vector<int> col) {
  int n = static_cast<int>(col.size());
  for (;;) {
    std::vector<std::pair<std::pair<int, std::vector<std::pair<int, int>>>, int>> sig(n);
    for (int v = 0; v < n; ++v) {
      std::vector<std::pair<int, int>> s;
      for (auto [w, b] : g.adj[v]) s.push_back({b, col[w]});
      std::sort(s.begin(), s.end());
      sig[v] = {{col[v], s}, v};
    }
    std::vector<int> idx(n);
    for (int v = 0; v < n; ++v) idx[v] = v;
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return sig[x].first < sig[y].first; });
    std::vector<int> nc(n);
    int rank = 0;
    for (int k = 0; k < n; ++k) {
      if (k > 0 && sig[idx[k]].first != sig[idx[k - 1]].first) rank = k;
      nc[idx[k]] = rank;
    }
    if (nc == col) return col;
    col = nc;
  }
}

std::string encode(const Small& g, const std::vector<int>& col) {
  int n = static_cast<int>(col.size());
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[col[v]] = v;
  std::string out;
  for (int k = 0; k < n; ++k) out += (k ? "," : "") + g.lab[order[k]];
  out += "/";
  std::vector<std::tuple<int, int, int>> es;
  for (int v = 0; v < n; ++v)
    for (auto [w, b] : g.adj[v])
      if (col[v] < col[w]) es.push_back({col[v], col[w], b});
  std::sort(es.begin(), es.end());
  bool first = true;
  for (auto [i, j, b] : es) {
    out += (first ? "" : ",") + std::to_string(i) + "-" + std::to_string(j) + ":" +
           (b == kIonic ? std::string("i") : std::to_string(b));
    first = false;
  }
  return out;
}

bool twins(const Small& g, int u, int w) {
  if (g.lab[u] != g.lab[w]) return false;
  auto strip = [&](int x, int other) {
    std::vector<std::pair<int, int>> s;
    for (auto p : g.adj[x])
      if (p.first != other) s.push_back(p);
    std::sort(s.begin(), s.end());
    return s;
  };
  return strip(u, w) == strip(w, u);
}

std::string component_code(const Small& g) {
  int n = static_cast<int>(g.lab.size());
  std::vector<int> col(n);
  {
    std::vector<std::string> labs = g.lab;
    std::sort(labs.begin(), labs.end());
    for (int v = 0; v < n; ++v)
      col[v] = static_cast<int>(std::lower_bound(labs.begin(), labs.end(), g.lab[v]) - labs.begin());
  }
  std::string best;
  bool have = false;
  std::function<void(std::vector<int>)> search = [&](std::vector<int> c) {
    c = refine(g, c);
    // first smallest non-singleton cell
    std::map<int, std::vector<int>> cells;
    for (int v = 0; v < n; ++v) cells[c[v]].push_back(v);
    const std::vector<int>* cell = nullptr;
    for (const auto& [k, vs] : cells)
      if (vs.size() > 1 && (!cell || vs.size() < cell->size())) cell = &vs;
    if (!cell) {
      std::string code = encode(g, c);
      if (!have || code < best) best = code, have = true;
      return;
    }
    std::vector<int> reps;
    for (int v : *cell) {
      bool dup = false;
      for (int r : reps) dup = dup || twins(g, r, v);
      if (!dup) reps.push_back(v);
    }
    for (int v : reps) {
      std::vector<int> d(n);
      for (int x = 0; x < n; ++x) d[x] = 2 * c[x] + (c[x] == c[v] && x != v ? 1 : 0);
      search(d);
    }
  };
  search(col);
  return best;
}

}  // namespace

std::string graph_code(const ChemGraph& g) {
  std::vector<std::string> codes;
  for (const auto& comp : components(g)) {
    Small s;
    std::map<Name, int> id;
    for (const auto& v : comp) {
      id[v] = static_cast<int>(s.lab.size());
      s.lab.push_back(atom_token(g.atom(v)));
    }
    s.adj.resize(s.lab.size());
    for (const auto& v : comp)
      for (const auto& [w, b] : g.adjacent(v)) s.adj[id[v]].push_back({id.at(w), b});
    codes.push_back(component_code(s));
  }
  std::sort(codes.begin(), codes.end());
  std::string out;
  for (std::size_t k = 0; k < codes.size(); ++k) out += (k ? "." : "") + codes[k];
  return out;
}

ChemGraph decode_graph(const std::string& code, const std::string& prefix) {
  ChemGraph g;
  int next = 1;
  std::stringstream comps(code);
  std::string comp;
  auto bad = [&](const std::string& why) { return ParseError("graph code: " + why, 0); };
  while (std::getline(comps, comp, '.')) {
    auto slash = comp.find('/');
    if (slash == std::string::npos) throw bad("missing '/'");
    std::vector<Name> names;
    std::stringstream atoms(comp.substr(0, slash));
    std::string tok;
    while (std::getline(atoms, tok, ',')) {
      if (tok.empty()) throw bad("empty atom");
      auto hat = tok.find('^');
      int charge = 0;
      if (hat != std::string::npos) {
        try {
          charge = std::stoi(tok.substr(hat + 1));
        } catch (const std::exception&) {
          throw bad("bad charge in '" + tok + "'");
        }
      }
      Name n = prefix + std::to_string(next++);
      g.add_vertex(n, tok.substr(0, hat), charge);
      names.push_back(n);
    }
    std::stringstream bonds(comp.substr(slash + 1));
    while (std::getline(bonds, tok, ',')) {
      auto dash = tok.find('-'), colon = tok.find(':');
      if (dash == std::string::npos || colon == std::string::npos) throw bad("bad bond '" + tok + "'");
      int i, j;
      try {
        i = std::stoi(tok.substr(0, dash));
        j = std::stoi(tok.substr(dash + 1, colon - dash - 1));
      } catch (const std::exception&) {
        throw bad("bad bond '" + tok + "'");
      }
      std::string l = tok.substr(colon + 1);
      if (i < 0 || j < 0 || i >= static_cast<int>(names.size()) || j >= static_cast<int>(names.size()) || i == j)
        throw bad("bond index out of range in '" + tok + "'");
      Bond b = l == "i" ? kIonic : static_cast<Bond>(l.size() == 1 && l[0] >= '1' && l[0] <= '4' ? l[0] - '0' : 0);
      if (b == 0) throw bad("bad bond label in '" + tok + "'");
      g.set_bond(names[i], names[j], b);
    }
  }
  return g;
}

}  // namespace chemcat
