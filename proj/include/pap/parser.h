// parser.h -- text formats: programs (.dl), hypotheses (.hyp), observations (.obs).
#ifndef PAP_PARSER_H
#define PAP_PARSER_H

#include <string_view>
#include <vector>

#include "pap/core.h"

namespace pap {

// One hypothesis declaration "atom [w]." with its penalty (default 1).
struct HypothesisDecl {
  Atom atom;           // ground
  long long penalty;   // >= 0

  auto operator<=>(const HypothesisDecl&) const = default;
};

// Grammar (whitespace-insensitive, "%" starts a line comment):
//   rule    := atom (":-" body)? "."
//   strong  := ":-" body "."
//   weak    := ":~" body "." ("[" INT ":]")?
//   body    := literal ("," literal)*
//   literal := ("not" atom) | atom | builtin
//   builtin := term "!=" term | term "<" term | term ">" term
//            | term "=" term "+" term
//   atom    := IDENT ("(" term ("," term)* ")")?
//   term    := IDENT | VARIABLE | INT
// Variables start with an uppercase letter, identifiers with a lowercase
// letter or underscore; "not" is reserved. Arity must be consistent per
// predicate across the text. Errors carry a 1-based line and column.
Program parse_program(std::string_view text);

// One declaration per statement: "atom [w]." or "atom." (penalty 1).
// Atoms must be ground and pairwise distinct; penalties must be >= 0.
std::vector<HypothesisDecl> parse_hypotheses(std::string_view text);

// One declaration per statement: "atom." or "not atom." over ground atoms.
// Duplicates are collapsed, keeping first-occurrence order.
std::vector<Literal> parse_observations(std::string_view text);

}  // namespace pap

#endif
