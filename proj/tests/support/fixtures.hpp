// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "chemcat/io.hpp"
#include "chemcat/term.hpp"

namespace chemcat::testing {

inline std::string fixture(const std::string& rel) { return std::string(CHEMCAT_FIXTURES) + "/" + rel; }
inline ChemGraph fixture_graph(const std::string& rel) { return parse_graph(read_file(fixture(rel))).graph; }
inline Term fixture_term(const std::string& rel) { return parse_term(read_file(fixture(rel))); }

}  // namespace chemcat::testing
