// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <set>
#include <vector>

#include "chemcat/graph.hpp"
#include "chemcat/io.hpp"
#include "chemcat/reaction.hpp"

namespace chemcat {

using Triple = std::array<Name, 3>;
using Quad = std::array<Name, 4>;

// Triples are stored sorted (one per S3 orbit), quadruples as the least
// even permutation (one per A4 orbit).
Triple tri_key(const Triple& t);
Quad tet_key(const Quad& q);

struct OrientedGraph {
  ChemGraph base;
  std::set<Triple> tri;
  std::set<Quad> tet;
  bool operator==(const OrientedGraph&) const = default;
};

OrientedGraph oriented(const GraphDoc& d);
Violations validate_orientation(const OrientedGraph& og);

// Calls `f` on every bijection preserving atom labels, charges and bond
// labels, until `f` returns false.
void for_each_label_isomorphism(const ChemGraph& m, const ChemGraph& n, const std::function<bool(const VMap&)>& f);
std::vector<VMap> label_isomorphisms(const ChemGraph& m, const ChemGraph& n);

bool preserves_orientation(const VMap& f, const OrientedGraph& m, const OrientedGraph& n);
bool reflects_orientation(const VMap& f, const OrientedGraph& m, const OrientedGraph& n);
bool orientation_preserving_exists(const OrientedGraph& m, const OrientedGraph& n);
bool orientation_reflecting_exists(const OrientedGraph& m, const OrientedGraph& n);

struct ChiralVerdict {
  bool preserving = false;
  bool reflecting = false;
  bool chiral() const { return reflecting && !preserving; }
};
ChiralVerdict chirality(const OrientedGraph& m, const OrientedGraph& n);
bool are_chiral(const OrientedGraph& m, const OrientedGraph& n);

}  // namespace chemcat
