// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "chemcat/graph.hpp"

namespace chemcat {

// One `graph` block of a .cg file. tri/tet lines are kept raw here and
// interpreted by the chirality module.
struct GraphDoc {
  std::string name;
  ChemGraph graph;
  std::vector<std::array<Name, 3>> tri;
  std::vector<std::array<Name, 4>> tet;
};

// Parses one or more `graph` blocks. A file without any header is one
// anonymous block. Lines outside the graph grammar are returned in `rest`
// with their 1-based line numbers, so callers can layer extra syntax.
struct GraphFile {
  std::vector<GraphDoc> blocks;
  std::vector<std::pair<int, std::string>> rest;
};

GraphFile parse_graph_file(const std::string& text, bool allow_extra = false);
GraphDoc parse_graph(const std::string& text);
std::string print_graph(const ChemGraph& g, const std::string& name = "");
std::string print_graph(const GraphDoc& d);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
// resolve `rel` against the directory of `base`
std::string sibling_path(const std::string& base, const std::string& rel);

std::vector<std::string> split_ws(const std::string& line);

}  // namespace chemcat
