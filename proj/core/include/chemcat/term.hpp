// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chemcat/graph.hpp"

namespace chemcat {

enum class Kind : std::uint8_t { Id, S, R, ENeg, EPos, Ion, Cov };

// One generator. Field use by kind:
//   S(u)                  u
//   R(u>v)                u, v
//   E(u|a,b)  ENeg        u, a, b
//   E(u,v)    EPos        u, v
//   I(u,v)    Ion         u, v
//   C(u,v|a,b) Cov        u, v, a, b
// `bar` marks the connection (inverse) of a disconnection.
struct Gen {
  Kind kind = Kind::Id;
  bool bar = false;
  Name u, v, a, b;

  static Gen id() { return {}; }
  static Gen S(Name u) { return {Kind::S, false, std::move(u), {}, {}, {}}; }
  static Gen R(Name u, Name v) { return {Kind::R, false, std::move(u), std::move(v), {}, {}}; }
  static Gen ENeg(Name u, Name a, Name b, bool bar = false) {
    return {Kind::ENeg, bar, std::move(u), {}, std::move(a), std::move(b)};
  }
  static Gen EPos(Name u, Name v, bool bar = false) { return {Kind::EPos, bar, std::move(u), std::move(v), {}, {}}; }
  static Gen Ion(Name u, Name v, bool bar = false) { return {Kind::Ion, bar, std::move(u), std::move(v), {}, {}}; }
  static Gen Cov(Name u, Name v, Name a, Name b, bool bar = false) {
    return {Kind::Cov, bar, std::move(u), std::move(v), std::move(a), std::move(b)};
  }

  bool is_rule() const { return kind == Kind::ENeg || kind == Kind::EPos || kind == Kind::Ion || kind == Kind::Cov; }
  bool has_sub() const { return kind == Kind::ENeg || kind == Kind::Cov; }
  // superscript names U
  std::vector<Name> U() const;
  // subscript names D
  std::vector<Name> D() const;
  std::vector<Name> names() const;
  bool mentions(const Name& x) const;

  bool operator==(const Gen&) const = default;
  bool operator<(const Gen& o) const;
};

// Block index in the ICE ordering I C E<0 E>=0 ~E>=0 ~E<0 ~C ~I R S; Id is 10.
enum Block : int { bI = 0, bC, bENeg, bEPos, bEPosBar, bENegBar, bCBar, bIBar, bR, bS, bId };
int block_of(const Gen& g);
const char* block_name(int b);

struct Term {
  std::vector<Gen> gens;
  bool operator==(const Term&) const = default;
  std::size_t size() const { return gens.size(); }
};

Gen dagger(const Gen& g);
Term dagger_term(const Term& t);
Term concat(const Term& a, const Term& b);

std::string print_gen(const Gen& g);
std::string print_term(const Term& t);
Gen parse_gen(const std::string& text);
Term parse_term(const std::string& text);  // throws ParseError with column

// Applies one generator in place; returns false and leaves g unchanged when
// g is outside the generator's domain. `why` receives the failed clause.
bool apply_gen(const Gen& gen, ChemGraph& g, std::string* why = nullptr);
std::optional<ChemGraph> apply_generator(const Gen& gen, const ChemGraph& g, std::string* why = nullptr);

// Left fold. Throws TypeError naming the first failing index.
ChemGraph eval_term(const Term& t, const ChemGraph& g);
std::optional<ChemGraph> try_eval(const Term& t, const ChemGraph& g);
// graphs before each generator plus the final one (size() + 1 entries)
std::vector<ChemGraph> eval_trace(const Term& t, const ChemGraph& g);

}  // namespace chemcat
