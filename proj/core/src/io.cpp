// SPDX-License-Identifier: Apache-2.0
#include "chemcat/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace chemcat {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

namespace {

Bond parse_bond(const std::string& s, int lineno) {
  if (s == "ionic") return kIonic;
  if (s.size() == 1 && s[0] >= '1' && s[0] <= '4') return static_cast<Bond>(s[0] - '0');
  throw ParseError("bad bond label '" + s + "' (want 1|2|3|4|ionic)", lineno);
}

int parse_int(const std::string& s, int lineno) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + s + "'", lineno);
  }
}

}  // namespace

GraphFile parse_graph_file(const std::string& text, bool allow_extra) {
  GraphFile file;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  GraphDoc* cur = nullptr;
  auto ensure = [&]() -> GraphDoc& {
    if (!cur) {
      file.blocks.emplace_back();
      cur = &file.blocks.back();
    }
    return *cur;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    auto tok = split_ws(body);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "graph") {
      if (tok.size() > 2) throw ParseError("graph takes at most one name", lineno);
      file.blocks.emplace_back();
      cur = &file.blocks.back();
      if (tok.size() == 2) cur->name = tok[1];
    } else if (kw == "atom") {
      if (tok.size() < 3 || tok.size() > 4) throw ParseError("atom <vertex> <element|alpha> [charge]", lineno);
      GraphDoc& d = ensure();
      if (d.graph.has(tok[1])) throw ParseError("duplicate atom '" + tok[1] + "'", lineno);
      int c = tok.size() == 4 ? parse_int(tok[3], lineno) : 0;
      d.graph.add_vertex(tok[1], tok[2], c);
    } else if (kw == "bond") {
      if (tok.size() != 4) throw ParseError("bond <u> <v> <label>", lineno);
      GraphDoc& d = ensure();
      const auto &u = tok[1], &v = tok[2];
      if (u == v) throw ParseError("self-bond on '" + u + "'", lineno);
      if (!d.graph.has(u)) throw ParseError("bond names unknown vertex '" + u + "'", lineno);
      if (!d.graph.has(v)) throw ParseError("bond names unknown vertex '" + v + "'", lineno);
      Bond b = parse_bond(tok[3], lineno);
      Bond old = d.graph.bond(u, v);
      if (old != 0 && old != b)
        throw ParseError("conflicting labels for bond " + u + "-" + v, lineno);
      d.graph.set_bond(u, v, b);
    } else if (kw == "tri") {
      if (tok.size() != 4) throw ParseError("tri <a> <b> <c>", lineno);
      ensure().tri.push_back({tok[1], tok[2], tok[3]});
    } else if (kw == "tet") {
      if (tok.size() != 5) throw ParseError("tet <a> <b> <c> <d>", lineno);
      ensure().tet.push_back({tok[1], tok[2], tok[3], tok[4]});
    } else if (allow_extra) {
      file.rest.emplace_back(lineno, body);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", lineno);
    }
  }
  return file;
}

GraphDoc parse_graph(const std::string& text) {
  GraphFile f = parse_graph_file(text);
  if (f.blocks.empty()) return GraphDoc{};
  if (f.blocks.size() > 1) throw ParseError("expected a single graph block", 1);
  return std::move(f.blocks.front());
}

std::string print_graph(const ChemGraph& g, const std::string& name) {
  std::string out = name.empty() ? "graph\n" : "graph " + name + "\n";
  for (const auto& [v, a] : g.atoms()) {
    out += "atom " + v + " " + a.sym;
    if (a.charge != 0) out += " " + std::to_string(a.charge);
    out += "\n";
  }
  for (const auto& [e, b] : g.bonds()) out += "bond " + e.first + " " + e.second + " " + bond_str(b) + "\n";
  return out;
}

std::string print_graph(const GraphDoc& d) {
  std::string out = print_graph(d.graph, d.name);
  for (const auto& t : d.tri) out += "tri " + t[0] + " " + t[1] + " " + t[2] + "\n";
  for (const auto& t : d.tet) out += "tet " + t[0] + " " + t[1] + " " + t[2] + " " + t[3] + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string sibling_path(const std::string& base, const std::string& rel) {
  std::filesystem::path r(rel);
  if (r.is_absolute()) return rel;
  return (std::filesystem::path(base).parent_path() / r).string();
}

}  // namespace chemcat
