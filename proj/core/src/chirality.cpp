// SPDX-License-Identifier: Apache-2.0
#include "chemcat/chirality.hpp"

#include <algorithm>

namespace chemcat {

namespace {

// the 12 even permutations of four positions
constexpr std::array<std::array<int, 4>, 12> kEven = {{
    {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 3, 2, 0},
    {2, 0, 1, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 2, 1, 0},
}};

std::set<Triple> map_tri(const std::set<Triple>& s, const VMap& f) {
  std::set<Triple> out;
  for (const auto& t : s) out.insert(tri_key({f.at(t[0]), f.at(t[1]), f.at(t[2])}));
  return out;
}

std::set<Quad> map_tet(const std::set<Quad>& s, const VMap& f, bool reflect) {
  std::set<Quad> out;
  for (const auto& q : s) {
    Quad r{f.at(q[0]), f.at(q[1]), f.at(q[2]), f.at(q[3])};
    if (reflect) r = {r[3], r[0], r[1], r[2]};
    out.insert(tet_key(r));
  }
  return out;
}

}  // namespace

Triple tri_key(const Triple& t) {
  Triple s = t;
  std::sort(s.begin(), s.end());
  return s;
}

Quad tet_key(const Quad& q) {
  Quad best = q;
  for (const auto& p : kEven) {
    Quad c{q[p[0]], q[p[1]], q[p[2]], q[p[3]]};
    best = std::min(best, c);
  }
  return best;
}

OrientedGraph oriented(const GraphDoc& d) {
  OrientedGraph og;
  og.base = d.graph;
  for (const auto& t : d.tri) og.tri.insert(tri_key(t));
  for (const auto& q : d.tet) og.tet.insert(tet_key(q));
  return og;
}

Violations validate_orientation(const OrientedGraph& og) {
  Violations out;
  auto known = [&](const Name& v) { return og.base.has(v); };
  for (const auto& t : og.tri) {
    if (tri_key(t) != t) out.push_back({"tri-canonical", {t[0], t[1], t[2]}, "not stored sorted"});
    for (const auto& v : t)
      if (!known(v)) out.push_back({"tri-vertex", {v}, "unknown vertex"});
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) out.push_back({"tri-repeat", {t[0], t[1], t[2]}, "repeated vertex"});
  }
  for (const auto& q : og.tet) {
    std::vector<Name> w(q.begin(), q.end());
    if (tet_key(q) != q) out.push_back({"tet-canonical", w, "not the least even permutation"});
    for (const auto& v : q)
      if (!known(v)) out.push_back({"tet-vertex", {v}, "unknown vertex"});
    std::vector<Name> s = w;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      out.push_back({"tet-repeat", w, "repeated vertex"});
      continue;
    }
    // closure under A4 puts every 3-subset in first position somewhere
    for (int skip = 0; skip < 4; ++skip) {
      Triple t;
      int k = 0;
      for (int j = 0; j < 4; ++j)
        if (j != skip) t[k++] = q[j];
      if (!og.tri.count(tri_key(t))) out.push_back({"tet-tri", {t[0], t[1], t[2]}, "face of a tetrahedron not in tri"});
    }
  }
  return out;
}

void for_each_label_isomorphism(const ChemGraph& m, const ChemGraph& n, const std::function<bool(const VMap&)>& f) {
  if (m.size() != n.size() || m.bonds().size() != n.bonds().size()) return;
  // most constrained first: rare atom labels, then high degree
  std::map<std::pair<std::string, int>, int> freq;
  auto key = [](const Atom& a) { return std::make_pair(a.sym, a.charge); };
  for (const auto& [v, a] : m.atoms()) ++freq[key(a)];
  std::vector<Name> order;
  for (const auto& v : m.names()) order.push_back(v);
  std::stable_sort(order.begin(), order.end(), [&](const Name& x, const Name& y) {
    int fx = freq[key(m.atom(x))], fy = freq[key(m.atom(y))];
    if (fx != fy) return fx < fy;
    return m.adjacent(x).size() > m.adjacent(y).size();
  });
  VMap map;
  std::set<Name> used;
  bool go = true;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (!go) return;
    if (k == order.size()) {
      go = f(map);
      return;
    }
    const Name& v = order[k];
    for (const auto& [w, a] : n.atoms()) {
      if (used.count(w) || !(a == m.atom(v)) || n.adjacent(w).size() != m.adjacent(v).size()) continue;
      bool ok = true;
      for (const auto& [x, y] : map)
        if (m.bond(v, x) != n.bond(w, y)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      map[v] = w;
      used.insert(w);
      rec(k + 1);
      map.erase(v);
      used.erase(w);
      if (!go) return;
    }
  };
  rec(0);
}

std::vector<VMap> label_isomorphisms(const ChemGraph& m, const ChemGraph& n) {
  std::vector<VMap> out;
  for_each_label_isomorphism(m, n, [&](const VMap& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

bool preserves_orientation(const VMap& f, const OrientedGraph& m, const OrientedGraph& n) {
  return map_tri(m.tri, f) == n.tri && map_tet(m.tet, f, false) == n.tet;
}

bool reflects_orientation(const VMap& f, const OrientedGraph& m, const OrientedGraph& n) {
  return map_tri(m.tri, f) == n.tri && map_tet(m.tet, f, true) == n.tet;
}

namespace {

bool exists(const OrientedGraph& m, const OrientedGraph& n, bool reflect) {
  bool found = false;
  for_each_label_isomorphism(m.base, n.base, [&](const VMap& f) {
    found = reflect ? reflects_orientation(f, m, n) : preserves_orientation(f, m, n);
    return !found;
  });
  return found;
}

}  // namespace

bool orientation_preserving_exists(const OrientedGraph& m, const OrientedGraph& n) { return exists(m, n, false); }
bool orientation_reflecting_exists(const OrientedGraph& m, const OrientedGraph& n) { return exists(m, n, true); }

ChiralVerdict chirality(const OrientedGraph& m, const OrientedGraph& n) {
  return {orientation_preserving_exists(m, n), orientation_reflecting_exists(m, n)};
}

bool are_chiral(const OrientedGraph& m, const OrientedGraph& n) { return chirality(m, n).chiral(); }

}  // namespace chemcat
