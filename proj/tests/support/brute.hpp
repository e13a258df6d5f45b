// SPDX-License-Identifier: Apache-2.0
// Brute-force oracles for the square constructions: enumerate every
// morphism between two small graphs and count mediating maps. Only
// necessary conditions of the morphism definition are used for pruning;
// every complete candidate goes through check_morphism.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chemcat/chirality.hpp"
#include "chemcat/dpo.hpp"
#include "chemcat/morphism.hpp"

namespace chemcat::testing {

using Allowed = std::function<std::vector<Name>(const Name&)>;

// Calls f on every morphism q -> x whose value at each vertex lies in
// allowed(v) (all of x when allowed is empty). Returns the number found.
inline long for_each_morphism(const ChemGraph& q, const ChemGraph& x, const Allowed& allowed,
                              const std::function<void(const VMap&)>& f) {
  NameSet qs = q.names();
  std::vector<Name> order;
  for (const auto& v : qs)
    if (q.is_chem(v)) order.push_back(v);
  for (const auto& v : qs)
    if (q.is_alpha(v)) order.push_back(v);
  std::vector<std::vector<Name>> opts;
  NameSet xs = x.names();
  for (const auto& v : order) {
    std::vector<Name> o = allowed ? allowed(v) : std::vector<Name>(xs.begin(), xs.end());
    std::vector<Name> keep;
    for (const auto& w : o) {
      if (!x.has(w)) continue;
      if (q.is_chem(v) && (x.is_alpha(w) || x.sym(w) != q.sym(v))) continue;
      keep.push_back(w);
    }
    opts.push_back(keep);
  }
  GraphMorphism h{q, x, {}};
  NameSet chem_used;
  long n = 0;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == order.size()) {
      if (check_morphism(h).empty()) {
        ++n;
        f(h.map);
      }
      return;
    }
    const Name& v = order[k];
    for (const auto& w : opts[k]) {
      bool chem = q.is_chem(v);
      if (chem && chem_used.count(w)) continue;
      h.map[v] = w;
      if (chem) chem_used.insert(w);
      go(k + 1);
      if (chem) chem_used.erase(w);
    }
    h.map.erase(v);
  };
  go(0);
  return n;
}

inline VMap then(const VMap& f, const VMap& g) {
  VMap h;
  for (const auto& [a, b] : f) h[a] = g.at(b);
  return h;
}

// Result of one universal-property check against a test object.
struct UniversalCount {
  long cones = 0;
  long bad = 0;  // cones with zero or several mediating maps, other than below
  // Cocones with no mediating morphism where the unique mediating function
  // of the underlying sets breaks the fibre-charge clause: two charged
  // alphas, one from each leg, land on one vertex. No pushout can exist
  // for such a span, whatever the construction.
  long charge_merges = 0;
};

// Pullback (Z, e*, f*) of f : A -> B along e : C -> B. For every cone
// (q1 : Q -> A, q2 : Q -> C) with q1;f = q2;e, count u : Q -> Z with
// u;e* = q1 and u;f* = q2.
inline UniversalCount pullback_universal(const Pullback& pb, const GraphMorphism& f, const GraphMorphism& e,
                                         const ChemGraph& q) {
  UniversalCount out;
  const ChemGraph &A = f.dom, &C = e.dom, &Z = pb.obj;
  for_each_morphism(q, A, {}, [&](const VMap& q1) {
    // q2 is forced pointwise by the equation, e being injective
    Allowed a2 = [&](const Name& v) {
      std::vector<Name> o;
      for (const auto& [c, b] : e.map)
        if (b == f.map.at(q1.at(v))) o.push_back(c);
      return o;
    };
    for_each_morphism(q, C, a2, [&](const VMap& q2) {
      ++out.cones;
      Allowed au = [&](const Name& v) {
        std::vector<Name> o;
        for (const auto& z : Z.names())
          if (pb.e_star.map.at(z) == q1.at(v) && pb.f_star.map.at(z) == q2.at(v)) o.push_back(z);
        return o;
      };
      long k = for_each_morphism(q, Z, au, [&](const VMap& u) {
        if (then(u, pb.e_star.map) != q1 || then(u, pb.f_star.map) != q2) ++out.bad;
      });
      if (k != 1) ++out.bad;
    });
  });
  return out;
}

// Pushout (Y, e*, m*) of m : A -> B and e : A -> C. For every cocone
// (q1 : B -> Q, q2 : C -> Q) with m;q1 = e;q2, count u : Y -> Q with
// e*;u = q1 and m*;u = q2.
inline UniversalCount pushout_universal(const Pushout& po, const GraphMorphism& m, const GraphMorphism& e,
                                        const ChemGraph& q) {
  UniversalCount out;
  const ChemGraph &B = m.cod, &C = e.cod, &Y = po.obj;
  NameSet qn = q.names();
  std::vector<Name> all(qn.begin(), qn.end());
  for_each_morphism(C, q, {}, [&](const VMap& q2) {
    Allowed a1 = [&](const Name& b) {
      std::optional<Name> forced;
      for (const auto& [a, bb] : m.map) {
        if (bb != b) continue;
        Name w = q2.at(e.map.at(a));
        if (forced && *forced != w) return std::vector<Name>{};
        forced = w;
      }
      return forced ? std::vector<Name>{*forced} : all;
    };
    for_each_morphism(B, q, a1, [&](const VMap& q1) {
      if (then(m.map, q1) != then(e.map, q2)) return;
      ++out.cones;
      Allowed au = [&](const Name& y) {
        std::optional<Name> forced;
        bool clash = false;
        for (const auto& [b, yy] : po.e_star.map)
          if (yy == y) {
            if (forced && *forced != q1.at(b)) clash = true;
            forced = q1.at(b);
          }
        for (const auto& [c, yy] : po.m_star.map)
          if (yy == y) {
            if (forced && *forced != q2.at(c)) clash = true;
            forced = q2.at(c);
          }
        if (clash) return std::vector<Name>{};
        return forced ? std::vector<Name>{*forced} : all;
      };
      long k = for_each_morphism(Y, q, au, [&](const VMap& u) {
        if (then(po.e_star.map, u) != q1 || then(po.m_star.map, u) != q2) ++out.bad;
      });
      if (k == 0) {
        VMap u;
        bool is_function = true;
        for (const auto& [b, y] : po.e_star.map) is_function = is_function && u.emplace(y, q1.at(b)).first->second == q1.at(b);
        for (const auto& [c, y] : po.m_star.map) is_function = is_function && u.emplace(y, q2.at(c)).first->second == q2.at(c);
        bool charge = false;
        if (is_function && u.size() == Y.size())
          for (const auto& v : check_morphism({Y, q, u})) charge = charge || v.clause == "fibre-charge";
        ++(charge ? out.charge_merges : out.bad);
      } else if (k != 1) {
        ++out.bad;
      }
    });
  });
  return out;
}

// Is there an isomorphism x -> y (labels, charges, bonds) with
// f;iso = g for every (f, g) in `into` and iso;p = q for every (p, q) in
// `outof`?
inline bool iso_commuting(const ChemGraph& x, const ChemGraph& y, const std::vector<std::pair<VMap, VMap>>& into,
                          const std::vector<std::pair<VMap, VMap>>& outof = {}) {
  bool found = false;
  for_each_label_isomorphism(x, y, [&](const VMap& iso) {
    bool ok = true;
    for (const auto& [f, g] : into) ok = ok && then(f, iso) == g;
    for (const auto& [p, q] : outof) ok = ok && then(iso, p) == q;
    found = ok;
    return !ok;
  });
  return found;
}

}  // namespace chemcat::testing
