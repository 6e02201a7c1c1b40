#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rr/ir.hpp"

namespace rr::dsl {

struct SourceText {
  std::string text;
  std::string origin = "<memory>";
};

struct ParseError {
  SourcePos position;
  std::string expected;
  std::string found;
  std::string origin;
};

std::string format(const ParseError& error);

// Either the full unit set or the errors; never a partial result.
struct ParseResult {
  UnitSet units;
  std::vector<ParseError> errors;

  bool ok() const { return errors.empty(); }
};

// Grammar:
//   file    := (annotation* unit | attr)*            top-level attrs form unit `Globals`
//   annot   := "@level" "(" LEVEL ")" | "@domain" "(" IDENT ")"
//   unit    := ("instance" | "class") IDENT "{" section* "}"
//   section := ("private" | "protected" | "public") ":" member*
//   member  := "friend" IDENT ";" | attr | funcdef | stmt
//   attr    := ["const"] TYPE IDENT ("," IDENT)* ["=" literal] ";"
//   funcdef := (TYPE | "void") IDENT "(" [TYPE IDENT ("," TYPE IDENT)*] ")" block
// Statements: `recv.Verb(args);`, `Op(args);`, `Label(args) block`,
// `while (c) block`, `if (c) block [else block]`, `return [e];`,
// `TYPE name;`, `lvalue = e;`, `lvalue++;`. Comments are `/* ... */`.
// Parsing only builds the IR; level discipline is checked by `validate`.
ParseResult parse(const SourceText& src);

// Deterministic layout: sections ordered private, protected, public;
// friends, then attributes, then operations, each in declaration order.
SourceText print_canonical(const UnitSet& units);
std::string print_expr(const Expr& e);
std::string print_statements(const std::vector<Statement>& body, int indent);

}  // namespace rr::dsl
