// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "chemcat/graph.hpp"

namespace chemcat {

// Name-independent code of a graph: one code per connected component,
// sorted and joined by '.'. A component reads `atoms/bonds`, atoms are
// `sym` or `sym^charge` separated by ',', bonds `i-j:l` separated by ','
// with l in 1..4 or `i` for ionic. Equal codes iff isomorphic graphs.
std::string graph_code(const ChemGraph& g);
// Inverse up to naming; vertices are named prefix1, prefix2, ...
ChemGraph decode_graph(const std::string& code, const std::string& prefix = "x");

}  // namespace chemcat
