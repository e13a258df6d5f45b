// SPDX-License-Identifier: Apache-2.0
// chemcat command-line front end. See README.md for the json-lines schema.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "chemcat/bridge.hpp"
#include "chemcat/canon.hpp"
#include "chemcat/chirality.hpp"
#include "chemcat/dpo.hpp"
#include "chemcat/io.hpp"
#include "chemcat/morphism.hpp"
#include "chemcat/normal_form.hpp"
#include "chemcat/reaction.hpp"
#include "chemcat/retro.hpp"
#include "chemcat/term.hpp"

using namespace chemcat;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInput = 2, kInvariant = 3 };

struct Ctx {
  bool jl = false;
  std::string valences;
  ValenceTable vt;
};

void emit(const Ctx& c, const json& j, const std::string& text) {
  if (c.jl) std::cout << j.dump() << "\n";
  else if (!text.empty()) std::cout << text << (text.back() == '\n' ? "" : "\n");
}

json violations_json(const Violations& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back({{"clause", v.clause}, {"where", v.where}, {"detail", v.detail}});
  return a;
}

std::string violations_text(const Violations& vs) {
  std::string s;
  for (const auto& v : vs) s += v.str() + "\n";
  return s;
}

// `#` comment lines are dropped, the rest is one term
std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    out += line + "\n";
  }
  return out;
}

Term load_term(const std::string& path) { return parse_term(strip_comments(read_file(path))); }

std::vector<Term> load_rules(const std::string& path) {
  std::istringstream in(strip_comments(read_file(path)));
  std::vector<Term> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (split_ws(line).empty()) continue;
    try {
      out.push_back(parse_term(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), n);
    }
  }
  return out;
}

ChemGraph load_graph(const std::string& path) { return parse_graph(read_file(path)).graph; }

std::string ext(const std::string& path) { return fs::path(path).extension().string(); }

json graph_json(const ChemGraph& g) { return {{"text", print_graph(g)}, {"code", graph_code(g)}}; }

// ---------------------------------------------------------------------------

int cmd_validate(const Ctx& c, const std::string& file, const std::string& graph, bool pre) {
  Violations vs;
  std::string kind;
  std::string e = ext(file);
  if (e == ".reaction") {
    kind = "reaction";
    vs = validate_reaction(parse_reaction(read_file(file), file), c.vt);
  } else if (e == ".scheme") {
    kind = "scheme";
    vs = validate_scheme(parse_scheme(read_file(file)), c.vt);
  } else if (e == ".term" || e == ".terms") {
    kind = "term";
    if (graph.empty()) throw ConfigError("validate: a term needs --graph");
    Term t = load_term(file);
    ChemGraph g = load_graph(graph);
    for (std::size_t k = 0; k < t.size(); ++k) {
      std::string why;
      if (!apply_gen(t.gens[k], g, &why)) {
        vs.push_back(Violation{"typing", {std::to_string(k), print_gen(t.gens[k])}, why});
        break;
      }
    }
  } else if (e == ".env") {
    kind = "environment";
    vs = validate_environment(parse_environment(read_file(file)), c.vt);
  } else {
    kind = "graph";
    GraphDoc d = parse_graph(read_file(file));
    vs = pre ? validate_prechemical(d.graph) : validate_chemical(d.graph, c.vt);
    if (!d.tri.empty() || !d.tet.empty()) {
      auto more = validate_orientation(oriented(d));
      vs.insert(vs.end(), more.begin(), more.end());
    }
  }
  json j{{"command", "validate"}, {"file", file}, {"kind", kind}, {"ok", vs.empty()},
         {"violations", violations_json(vs)}};
  emit(c, j, vs.empty() ? "ok" : violations_text(vs));
  return vs.empty() ? kOk : kNegative;
}

int cmd_apply_term(const Ctx& c, const std::string& tfile, const std::string& gfile) {
  Term t = load_term(tfile);
  ChemGraph g = load_graph(gfile);
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::string why;
    if (!apply_gen(t.gens[k], g, &why)) {
      json j{{"command", "apply-term"}, {"ok", false}, {"index", k}, {"generator", print_gen(t.gens[k])}, {"reason", why}};
      emit(c, j, "ill-typed at generator " + std::to_string(k) + " " + print_gen(t.gens[k]) + ": " + why);
      return kNegative;
    }
  }
  json j{{"command", "apply-term"}, {"ok", true}, {"graph", graph_json(g)}};
  emit(c, j, print_graph(g));
  return kOk;
}

int cmd_normalize(const Ctx& c, const std::string& tfile, const std::string& gfile) {
  Term t = load_term(tfile);
  ChemGraph g = load_graph(gfile);
  Term nf = to_normal_form(t, g);
  json j{{"command", "normalize"}, {"term", print_term(nf)}};
  emit(c, j, print_term(nf));
  return kOk;
}

int cmd_equal(const Ctx& c, const std::string& f1, const std::string& f2, const std::string& gfile, bool explain) {
  Term t = load_term(f1), s = load_term(f2);
  ChemGraph g = load_graph(gfile);
  bool eq = decide_equiv(t, s, g);
  json j{{"command", "equal"}, {"equal", eq}};
  std::string text = eq ? "equal" : "not equal";
  if (explain && !eq) {
    auto diff = differences(translate(t, g), translate(s, g));
    j["differences"] = diff;
    for (const auto& d : diff) text += "\n" + d;
  }
  emit(c, j, text);
  return eq ? kOk : kNegative;
}

int cmd_translate(const Ctx& c, const std::string& tfile, const std::string& gfile, const std::string& out) {
  Reaction r = translate(load_term(tfile), load_graph(gfile));
  std::string text = print_reaction(r);
  if (!out.empty()) write_file(out, text);
  json j{{"command", "translate"}, {"reaction", text}};
  if (!out.empty()) j["output"] = out;
  emit(c, j, out.empty() ? text : "");
  return kOk;
}

int cmd_decompose(const Ctx& c, const std::string& rfile, const std::string& prefix) {
  Reaction r = parse_reaction(read_file(rfile), rfile);
  Decomposition d = decompose(r, c.vt);
  std::string term = print_term(d.t), iso = print_reaction(d.iota);
  if (!prefix.empty()) {
    write_file(prefix + ".term", term + "\n");
    write_file(prefix + ".iso.reaction", iso);
  }
  json j{{"command", "decompose"}, {"term", term}, {"iso", iso}};
  emit(c, j, prefix.empty() ? term + "\n# iso\n" + iso : "");
  return kOk;
}

int cmd_apply_scheme(const Ctx& c, const std::string& sfile, const std::string& gfile, const std::string& mfile) {
  ReactionScheme s = parse_scheme(read_file(sfile));
  ChemGraph g = load_graph(gfile);
  std::optional<ReactionInstance> x;
  if (!mfile.empty()) {
    GraphMorphism m{s.A, g, {}};
    std::istringstream in(strip_comments(read_file(mfile)));
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
      auto tok = split_ws(line);
      if (tok.empty()) continue;
      if (tok.size() != 3 || tok[0] != "map") throw ParseError("expected map <a> <c>", n);
      if (!m.map.emplace(tok[1], tok[2]).second) throw ParseError("duplicate map entry for " + tok[1], n);
    }
    x = apply_scheme(s, m, c.vt);
  } else {
    // first matching, in search order, that the scheme can be applied along
    for_each_matching(s.A, g, [&](const GraphMorphism& m) {
      try {
        x = apply_scheme(s, m, c.vt);
        return false;
      } catch (const PreconditionError&) {
      } catch (const DomainError&) {
      }
      return true;
    });
  }
  if (!x) {
    json j{{"command", "apply-scheme"}, {"ok", false}};
    emit(c, j, "no applicable matching");
    return kNegative;
  }
  std::string text = print_instance(*x);
  json j{{"command", "apply-scheme"}, {"ok", true}, {"product", graph_json(x->E)}, {"instance", text}};
  emit(c, j, text);
  return kOk;
}

int cmd_chiral(const Ctx& c, const std::string& f1, const std::string& f2) {
  OrientedGraph m = oriented(parse_graph(read_file(f1)));
  OrientedGraph n = oriented(parse_graph(read_file(f2)));
  for (const auto* og : {&m, &n}) {
    auto vs = validate_orientation(*og);
    if (!vs.empty()) throw PreconditionError("invalid orientation: " + vs.front().str());
  }
  ChiralVerdict v = chirality(m, n);
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  json j{{"command", "chiral"}, {"preserving", v.preserving}, {"reflecting", v.reflecting}, {"chiral", v.chiral()}};
  std::string text = std::string("PRESERVING ") + yn(v.preserving) + "\nREFLECTING " + yn(v.reflecting) +
                     "\nCHIRAL " + yn(v.chiral());
  emit(c, j, text);
  return v.chiral() ? kOk : kNegative;
}

std::string maps_text(const std::string& tag, const VMap& m) {
  std::string s;
  for (const auto& [a, b] : m) s += tag + " " + a + " " + b + "\n";
  return s;
}

void write_step(const fs::path& dir, const RetroStep& s) {
  fs::create_directories(dir);
  write_file((dir / "target.cg").string(), print_graph(s.T, "T"));
  write_file((dir / "byproduct.cg").string(), print_graph(s.B, "B"));
  write_file((dir / "synthons.cg").string(), print_graph(s.S, "S"));
  write_file((dir / "equivalents.cg").string(), print_graph(s.E, "E"));
  write_file((dir / "env.cg").string(), print_environment(s.M));
  write_file((dir / "disconnection.term").string(), print_term(s.d) + "\n");
  std::string mult;
  for (int k : s.m.n) mult += " " + std::to_string(k);
  write_file((dir / "match.map").string(), "# multiplicities" + mult + "\n" + maps_text("map", s.m.m) +
                                               maps_text("inj", s.m.inj));
  write_file((dir / "reaction.reaction").string(), print_reaction(s.r.r));
  write_file((dir / "via").string(), s.via + "\n");
}

int cmd_retro_step(const Ctx& c, const std::string& target, const std::string& rules, const std::string& schemes,
                   const std::string& envf, const std::string& bounds, const std::string& oraclef,
                   const std::string& out) {
  ChemGraph T = load_graph(target);
  std::vector<Term> ds = load_rules(rules);
  std::vector<ReactionScheme> ss;
  std::vector<std::string> snames;
  if (!schemes.empty()) {
    if (!fs::is_directory(schemes)) throw ConfigError("--schemes: not a directory: " + schemes);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(schemes))
      if (e.path().extension() == ".scheme") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      ss.push_back(parse_scheme(read_file(p.string())));
      snames.push_back(p.filename().string());
    }
  }
  Environment env;
  if (!envf.empty()) env = parse_environment(read_file(envf));
  std::optional<Oracle> oracle;
  if (!oraclef.empty()) oracle = parse_oracle(read_file(oraclef));
  SearchBounds b = bounds.empty() ? SearchBounds() : parse_bounds(bounds);
  SearchResult res = search_step(T, ds, ss, oracle, env, b, c.vt);
  if (!out.empty()) {
    fs::create_directories(out);
    for (std::size_t k = 0; k < res.steps.size(); ++k) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "step_%03zu", k + 1);
      write_step(fs::path(out) / buf, res.steps[k]);
    }
  }
  if (c.jl) {
    for (std::size_t k = 0; k < res.steps.size(); ++k) {
      const RetroStep& s = res.steps[k];
      std::cout << json{{"command", "retro-step"}, {"step", k + 1}, {"via", s.via}, {"term", print_term(s.d)},
                        {"equivalents", graph_code(s.E)}, {"byproduct", graph_code(s.B)},
                        {"multiplicities", s.m.n}, {"fingerprint", step_fingerprint(s)}}
                       .dump()
                << "\n";
    }
    std::cout << json{{"command", "retro-step"}, {"steps", res.steps.size()}, {"partial", res.partial}}.dump() << "\n";
  } else {
    for (std::size_t k = 0; k < res.steps.size(); ++k) {
      const RetroStep& s = res.steps[k];
      std::cout << "step " << k + 1 << " via " << s.via << ": " << print_term(s.d) << "  E=" << graph_code(s.E)
                << "  B=" << graph_code(s.B) << "\n";
    }
    std::cout << res.steps.size() << " step(s)" << (res.partial ? ", search cut short by bounds" : "") << "\n";
  }
  return res.steps.empty() ? kNegative : kOk;
}

int cmd_fingerprint(const Ctx& c, const std::string& gfile) {
  std::string code = graph_code(load_graph(gfile));
  emit(c, json{{"command", "fingerprint"}, {"code", code}}, code);
  return kOk;
}

int fail(const Ctx& c, int code, const std::string& kind, const std::string& msg) {
  if (c.jl) std::cout << json{{"error", kind}, {"message", msg}, {"exit", code}}.dump() << "\n";
  std::cerr << "chemcat: " << msg << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chemcat: chemical graphs, disconnection terms and reactions"};
  app.require_subcommand(1);
  Ctx c;
  std::string format = "text";
  app.add_option("--format", format, "text or json-lines")->check(CLI::IsMember({"text", "json-lines"}));
  app.add_option("--valences", c.valences, "valence table (symbol=valence lines)");

  std::string a1, a2, graph, out, match, schemes, env, bounds, oracle;
  bool explain = false, pre = false;

  auto* validate = app.add_subcommand("validate", "check a graph, term, reaction, scheme or environment file");
  validate->add_option("file", a1)->required();
  validate->add_option("--graph", graph, "typing graph for a term");
  validate->add_flag("--pre", pre, "graphs: check only the pre-chemical clauses");

  auto* apply = app.add_subcommand("apply-term", "evaluate a term on a graph");
  apply->add_option("term", a1)->required();
  apply->add_option("graph", a2)->required();

  auto* normalize = app.add_subcommand("normalize", "print the normal form of a term");
  normalize->add_option("term", a1)->required();
  normalize->add_option("--graph", graph)->required();

  auto* equal = app.add_subcommand("equal", "decide equality of two terms on a graph");
  equal->add_option("term1", a1)->required();
  equal->add_option("term2", a2)->required();
  equal->add_option("--graph", graph)->required();
  equal->add_flag("--explain", explain, "print the differing reaction components");

  auto* translate_c = app.add_subcommand("translate", "reaction of a term");
  translate_c->add_option("term", a1)->required();
  translate_c->add_option("graph", a2)->required();
  translate_c->add_option("-o,--output", out, "write the reaction file here");

  auto* decompose_c = app.add_subcommand("decompose", "term and isomorphism factoring a reaction");
  decompose_c->add_option("reaction", a1)->required();
  decompose_c->add_option("-o,--output", out, "write <prefix>.term and <prefix>.iso.reaction");

  auto* scheme = app.add_subcommand("apply-scheme", "apply a reaction scheme along a matching");
  scheme->add_option("scheme", a1)->required();
  scheme->add_option("graph", a2)->required();
  scheme->add_option("--match", match, "file of `map <a> <c>` lines; default: first applicable matching");

  auto* chiral = app.add_subcommand("chiral", "orientation verdicts for two oriented graphs");
  chiral->add_option("g1", a1)->required();
  chiral->add_option("g2", a2)->required();

  auto* retro = app.add_subcommand("retro-step", "one retrosynthetic step");
  retro->add_option("--target", a1)->required();
  retro->add_option("--rules", a2)->required();
  retro->add_option("--schemes", schemes, "directory of .scheme files");
  retro->add_option("--env", env, "environment graph blocks");
  retro->add_option("--bounds", bounds, "k=,len=,candidates=,matchings=,seconds=");
  retro->add_option("--oracle", oracle, "template-free oracle file");
  retro->add_option("-o,--output", out, "directory for step bundles");

  auto* fp = app.add_subcommand("fingerprint", "canonical code of a graph");
  fp->add_option("graph", a1)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }
  c.jl = format == "json-lines";

  try {
    c.vt = ValenceTable::resolve(c.valences);
    if (*validate) return cmd_validate(c, a1, graph, pre);
    if (*apply) return cmd_apply_term(c, a1, a2);
    if (*normalize) return cmd_normalize(c, a1, graph);
    if (*equal) return cmd_equal(c, a1, a2, graph, explain);
    if (*translate_c) return cmd_translate(c, a1, a2, out);
    if (*decompose_c) return cmd_decompose(c, a1, out);
    if (*scheme) return cmd_apply_scheme(c, a1, a2, match);
    if (*chiral) return cmd_chiral(c, a1, a2);
    if (*retro) return cmd_retro_step(c, a1, a2, schemes, env, bounds, oracle, out);
    if (*fp) return cmd_fingerprint(c, a1);
  } catch (const ParseError& e) {
    return fail(c, kInput, "parse", e.what());
  } catch (const ConfigError& e) {
    return fail(c, kInput, "config", e.what());
  } catch (const TypeError& e) {
    return fail(c, kInput, "type", e.what());
  } catch (const PreconditionError& e) {
    return fail(c, kInput, "precondition", e.what());
  } catch (const DomainError& e) {
    return fail(c, kInput, "domain", e.what());
  } catch (const InvariantError& e) {
    return fail(c, kInvariant, "invariant", e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(c, kInput, "io", e.what());
  }
  return kInput;
}
