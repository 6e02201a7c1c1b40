#include "rr/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rr::dsl {

namespace {

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

struct Failure {
  ParseError error;
};

constexpr int kMaxDepth = 200;

class Lexer {
 public:
  Lexer(const std::string& text, std::string origin) : src_(text), origin_(std::move(origin)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      SourcePos pos{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, "", pos});
        return out;
      }
      char c = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
          id.push_back(advance());
        }
        out.push_back({Tok::Ident, id, pos});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) num.push_back(advance());
        if (num.size() > 18) fail(pos, "integer of at most 18 digits", num);
        out.push_back({Tok::Int, num, pos});
      } else if (c == '"') {
        advance();
        std::string s;
        while (i_ < src_.size() && src_[i_] != '"' && src_[i_] != '\n') s.push_back(advance());
        if (i_ >= src_.size() || src_[i_] != '"') fail(pos, "closing '\"'", "end of line");
        advance();
        out.push_back({Tok::String, s, pos});
      } else {
        static const char* two[] = {"==", "!=", "<=", ">=", "++", "&&", "||"};
        std::string p(1, c);
        if (i_ + 1 < src_.size()) {
          std::string pair = src_.substr(i_, 2);
          for (const char* t : two) {
            if (pair == t) p = pair;
          }
        }
        static const std::string singles = "{}();,:.=<>!+-@[]";
        if (p.size() == 1 && singles.find(c) == std::string::npos) {
          fail(pos, "a token", std::string(1, c));
        }
        for (std::size_t k = 0; k < p.size(); ++k) advance();
        out.push_back({Tok::Punct, p, pos});
      }
    }
  }

 private:
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    for (;;) {
      while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance();
      if (i_ + 1 < src_.size() && src_[i_] == '/' && src_[i_ + 1] == '*') {
        SourcePos start{line_, col_};
        advance();
        advance();
        while (i_ + 1 < src_.size() && !(src_[i_] == '*' && src_[i_ + 1] == '/')) advance();
        if (i_ + 1 >= src_.size()) {
          while (i_ < src_.size()) advance();
          fail({line_, col_}, "'*/' closing comment opened at " + std::to_string(start.line) + ":" +
                                  std::to_string(start.column),
               "end of input");
        }
        advance();
        advance();
        continue;
      }
      return;
    }
  }

  [[noreturn]] void fail(SourcePos pos, std::string expected, std::string found) {
    throw Failure{{pos, std::move(expected), std::move(found), origin_}};
  }

  const std::string& src_;
  std::string origin_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string origin) : toks_(std::move(tokens)), origin_(std::move(origin)) {}

  UnitSet run() {
    UnitSet units;
    Level level = Level::I;
    bool has_level = false;
    std::string domain;
    while (!at_end()) {
      if (is("@")) {
        SourcePos pos = peek().pos;
        next();
        std::string key = expect_ident("annotation name");
        expect("(");
        std::string value = expect_ident("annotation value");
        expect(")");
        if (key == "level") {
          auto parsed = parse_level(value);
          if (!parsed) fail_at(pos, "a level among I, E1, E2, E3", value);
          level = *parsed;
          has_level = true;
        } else if (key == "domain") {
          domain = value;
        } else {
          fail_at(pos, "@level or @domain", "@" + key);
        }
      } else if (is("instance") || is("class")) {
        if (!has_level) fail("@level annotation before unit");
        units.push_back(parse_unit(level, domain.empty() ? "general" : domain));
        has_level = false;
        domain.clear();
      } else {
        if (has_level || !domain.empty()) fail("'instance' or 'class' after annotations");
        ConceptUnit* globals = nullptr;
        for (auto& u : units) {
          if (u.is_globals()) globals = &u;
        }
        if (!globals) {
          ConceptUnit g;
          g.name = std::string(kGlobalsUnit);
          g.kind = UnitKind::Class;
          g.level = Level::E2;
          g.domain = "global";
          g.pos = peek().pos;
          units.push_back(std::move(g));
          globals = &units.back();
        }
        parse_attribute(*globals, Visibility::Public);
      }
    }
    return units;
  }

 private:
  // --- token helpers ---
  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(std::string_view text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == text;
  }
  bool is_ident(std::size_t k = 0) const { return peek(k).kind == Tok::Ident && !is_keyword(peek(k).text); }
  static bool is_keyword(std::string_view s) {
    return s == "instance" || s == "class" || s == "private" || s == "protected" || s == "public" ||
           s == "friend" || s == "const" || s == "void" || s == "while" || s == "if" || s == "else" ||
           s == "return" || s == "NULL" || s == "true" || s == "false";
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::String: return "\"" + t.text + "\"";
      default: return t.text;
    }
  }

  [[noreturn]] void fail_at(SourcePos pos, std::string expected, std::string found) {
    throw Failure{{pos, std::move(expected), std::move(found), origin_}};
  }
  [[noreturn]] void fail(std::string expected) { fail_at(peek().pos, std::move(expected), describe(peek())); }

  void expect(std::string_view text) {
    if (!is(text)) fail("'" + std::string(text) + "'");
    next();
  }
  std::string expect_ident(const std::string& what) {
    if (!is_ident()) fail(what);
    return next().text;
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) p.fail("nesting depth at most " + std::to_string(kMaxDepth));
    }
    ~DepthGuard() { --p.depth_; }
  };

  // --- units ---
  ConceptUnit parse_unit(Level level, std::string domain) {
    ConceptUnit unit;
    unit.pos = peek().pos;
    unit.kind = next().text == "instance" ? UnitKind::Instance : UnitKind::Class;
    unit.level = level;
    unit.domain = std::move(domain);
    unit.name = expect_ident("unit name");
    expect("{");
    std::optional<Visibility> section;
    while (!is("}")) {
      if (at_end()) fail("'}'");
      if (auto v = parse_visibility(peek().text); v && peek().kind == Tok::Ident) {
        next();
        expect(":");
        section = v;
        continue;
      }
      if (!section) fail("section label 'private:', 'protected:' or 'public:'");
      parse_member(unit, *section);
    }
    next();
    return unit;
  }

  void parse_member(ConceptUnit& unit, Visibility section) {
    if (is("friend")) {
      next();
      unit.friends.push_back({expect_ident("friend name"), section});
      expect(";");
      return;
    }
    if (is("const")) {
      parse_attribute(unit, section);
      return;
    }
    if (is("void") || (is_ident() && is_ident(1) && is("(", 2))) {
      parse_function(unit, section);
      return;
    }
    if (is_ident() && is_ident(1) && (is(",", 2) || is(";", 2) || is("=", 2))) {
      parse_attribute(unit, section);
      return;
    }
    Operation* entrance = nullptr;
    for (auto& op : unit.operations) {
      if (op.implicit) entrance = &op;
    }
    if (!entrance) {
      Operation op;
      op.name = std::string(kEntranceOp);
      op.implicit = true;
      op.visibility = section;
      op.pos = peek().pos;
      unit.operations.push_back(std::move(op));
      entrance = &unit.operations.back();
    } else if (entrance->visibility != section) {
      fail("loose statements in a single section");
    }
    entrance->body.push_back(parse_statement());
  }

  Literal parse_literal() {
    Literal lit;
    if (is("-") && peek(1).kind == Tok::Int) {
      next();
      lit.kind = LiteralKind::Int;
      lit.number = -std::stoll(next().text);
    } else if (peek().kind == Tok::Int) {
      lit.kind = LiteralKind::Int;
      lit.number = std::stoll(next().text);
    } else if (peek().kind == Tok::String) {
      lit.kind = LiteralKind::String;
      lit.text = next().text;
    } else if (is_ident()) {
      lit.kind = LiteralKind::Symbol;
      lit.text = next().text;
    } else {
      fail("literal");
    }
    return lit;
  }

  void parse_attribute(ConceptUnit& unit, Visibility section) {
    bool is_const = false;
    if (is("const")) {
      next();
      is_const = true;
    }
    SourcePos pos = peek().pos;
    TypeRef type{expect_ident("type name")};
    std::vector<std::pair<std::string, SourcePos>> names;
    do {
      if (!names.empty()) next();
      SourcePos npos = peek().pos;
      names.emplace_back(expect_ident("attribute name"), npos);
    } while (is(","));
    std::optional<Literal> literal;
    if (is_const && is("=")) {
      next();
      literal = parse_literal();
    }
    expect(";");
    for (auto& [name, npos] : names) {
      Attribute a;
      a.name = name;
      a.type = type;
      a.is_const = is_const;
      a.visibility = section;
      a.pos = npos;
      if (is_const) a.literal = literal ? *literal : Literal{LiteralKind::Symbol, name, 0};
      (void)pos;
      unit.attributes.push_back(std::move(a));
    }
  }

  void parse_function(ConceptUnit& unit, Visibility section) {
    Operation op;
    op.pos = peek().pos;
    op.visibility = section;
    if (is("void")) {
      next();
    } else {
      op.returns = TypeRef{expect_ident("return type")};
    }
    op.name = expect_ident("operation name");
    expect("(");
    if (!is(")")) {
      do {
        if (!op.params.empty()) next();
        Param p;
        p.type = TypeRef{expect_ident("parameter type")};
        p.name = expect_ident("parameter name");
        op.params.push_back(std::move(p));
      } while (is(","));
    }
    expect(")");
    op.body = parse_block();
    unit.operations.push_back(std::move(op));
  }

  // --- statements ---
  std::vector<Statement> parse_block() {
    DepthGuard guard(*this);
    expect("{");
    std::vector<Statement> body;
    while (!is("}")) {
      if (at_end()) fail("'}'");
      body.push_back(parse_statement());
    }
    next();
    return body;
  }

  Statement parse_statement() {
    DepthGuard guard(*this);
    SourcePos pos = peek().pos;
    Statement s;
    if (is("while")) {
      next();
      expect("(");
      Expr cond = parse_expr();
      expect(")");
      s = Statement::while_loop(std::move(cond), parse_block());
    } else if (is("if")) {
      next();
      expect("(");
      Expr cond = parse_expr();
      expect(")");
      auto then_body = parse_block();
      std::vector<Statement> else_body;
      if (is("else")) {
        next();
        if (is("if")) {
          else_body.push_back(parse_statement());
        } else {
          else_body = parse_block();
        }
      }
      s = Statement::if_else(std::move(cond), std::move(then_body), std::move(else_body));
    } else if (is("return")) {
      next();
      std::optional<Expr> value;
      if (!is(";")) value = parse_expr();
      expect(";");
      s = Statement::ret(std::move(value));
    } else if (is_ident() && is_ident(1) && is(";", 2)) {
      TypeRef type{next().text};
      s = Statement::local(next().text, std::move(type));
      next();
    } else if (is_ident() && is("(", 1) && is_block_call()) {
      std::string label = next().text;
      auto args = parse_args();
      s = Statement::block(std::move(label), std::move(args), parse_block());
    } else if (is_ident() && is_setup_predicate(peek().text) && is("(", 1)) {
      std::string name = next().text;
      auto args = parse_args();
      expect(";");
      s = Statement::setup(std::move(name), std::move(args));
    } else {
      Expr lhs = parse_postfix();
      if (is("=")) {
        next();
        if (lhs.kind != ExprKind::Name && lhs.kind != ExprKind::Member) fail_at(pos, "assignable expression", "call");
        Expr rhs = parse_expr();
        expect(";");
        s = Statement::assign(std::move(lhs), std::move(rhs));
      } else if (is("++")) {
        next();
        if (lhs.kind != ExprKind::Name && lhs.kind != ExprKind::Member) fail_at(pos, "assignable expression", "call");
        expect(";");
        s = Statement::increment(std::move(lhs));
      } else {
        if (lhs.kind != ExprKind::Call) fail("'=', '++' or a call statement");
        expect(";");
        s = expression_statement(std::move(lhs));
      }
    }
    s.pos = pos;
    return s;
  }

  // IDENT "(" ... ")" "{" : scan forward to the matching ')'.
  bool is_block_call() const {
    int depth = 0;
    for (std::size_t k = 1;; ++k) {
      const Token& t = peek(k);
      if (t.kind == Tok::End) return false;
      if (t.kind == Tok::Punct && t.text == "(") ++depth;
      if (t.kind == Tok::Punct && t.text == ")" && --depth == 0) return is("{", k + 1);
    }
  }

  std::vector<Expr> parse_args() {
    expect("(");
    std::vector<Expr> args;
    if (!is(")")) {
      do {
        if (!args.empty()) next();
        args.push_back(parse_expr());
      } while (is(","));
    }
    expect(")");
    return args;
  }

  // --- expressions ---
  Expr parse_expr() {
    DepthGuard guard(*this);
    return parse_binary(0);
  }

  static int precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    return 0;
  }

  Expr parse_binary(int min_prec) {
    Expr lhs = parse_unary();
    for (;;) {
      const Token& t = peek();
      int prec = t.kind == Tok::Punct ? precedence(t.text) : 0;
      if (prec == 0 || prec <= min_prec) return lhs;
      std::string op = next().text;
      DepthGuard guard(*this);
      Expr rhs = parse_binary(prec);
      lhs = Expr::binary(std::move(op), std::move(lhs), std::move(rhs));
    }
  }

  Expr parse_unary() {
    DepthGuard guard(*this);
    if (is("!")) {
      next();
      return Expr::unary("!", parse_unary());
    }
    if (is("-")) {
      next();
      if (peek().kind == Tok::Int) return Expr::integer(-std::stoll(next().text));
      return Expr::unary("-", parse_unary());
    }
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_primary();
    while (is(".")) {
      next();
      std::string member = expect_ident("member name");
      if (is("(")) {
        e = Expr::call(std::move(e), std::move(member), parse_args());
      } else {
        e = Expr::member(std::move(e), std::move(member));
      }
    }
    return e;
  }

  Expr parse_primary() {
    SourcePos pos = peek().pos;
    const Token& t = peek();
    if (t.kind == Tok::Int) return Expr::integer(std::stoll(next().text));
    if (t.kind == Tok::String) return Expr::string(next().text);
    if (is("NULL")) {
      next();
      return Expr::null();
    }
    if (is("true") || is("false")) return Expr::boolean(next().text == "true");
    if (is("(")) {
      next();
      Expr e = parse_expr();
      expect(")");
      return e;
    }
    if (is_ident()) {
      std::string id = next().text;
      if (is("(")) {
        Expr call = Expr::call(std::nullopt, std::move(id), parse_args());
        call.pos = pos;
        return call;
      }
      return Expr::name(std::move(id), pos);
    }
    fail("expression");
  }

  std::vector<Token> toks_;
  std::string origin_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

// --- printing ---

int expr_precedence(const Expr& e) {
  if (e.kind == ExprKind::Binary) {
    const auto& op = e.text;
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    return 5;
  }
  if (e.kind == ExprKind::Unary) return 6;
  if (e.kind == ExprKind::Int && e.number < 0) return 6;
  return 7;
}

std::string wrap(const Expr& e, bool parens) { return parens ? "(" + print_expr(e) + ")" : print_expr(e); }

std::string indent_str(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

std::string print_literal(const Literal& lit) {
  switch (lit.kind) {
    case LiteralKind::Int: return std::to_string(lit.number);
    case LiteralKind::String: return "\"" + lit.text + "\"";
    case LiteralKind::Symbol: return lit.text;
  }
  return {};
}

bool self_bound(const Attribute& a) {
  return !a.is_const || (a.literal.kind == LiteralKind::Symbol && a.literal.text == a.name);
}

void print_attributes(std::ostringstream& os, const std::vector<const Attribute*>& attrs, int indent) {
  for (std::size_t i = 0; i < attrs.size();) {
    const Attribute& a = *attrs[i];
    os << indent_str(indent) << (a.is_const ? "const " : "") << a.type.name << " " << a.name;
    std::size_t j = i + 1;
    if (self_bound(a)) {
      while (j < attrs.size() && self_bound(*attrs[j]) && attrs[j]->is_const == a.is_const &&
             attrs[j]->type == a.type) {
        os << ", " << attrs[j]->name;
        ++j;
      }
    } else {
      os << " = " << print_literal(a.literal);
    }
    os << ";\n";
    i = j;
  }
}

void print_operation(std::ostringstream& os, const Operation& op, int indent) {
  os << indent_str(indent) << (op.returns ? op.returns->name : "void") << " " << op.name << "(";
  for (std::size_t i = 0; i < op.params.size(); ++i) {
    if (i) os << ", ";
    os << op.params[i].type.name << " " << op.params[i].name;
  }
  os << ") {\n" << print_statements(op.body, indent + 1) << indent_str(indent) << "}\n";
}

void print_unit(std::ostringstream& os, const ConceptUnit& u) {
  os << "@level(" << to_string(u.level) << ")\n";
  os << "@domain(" << u.domain << ")\n";
  os << to_string(u.kind) << " " << u.name << " {\n";
  for (Visibility v : {Visibility::Private, Visibility::Protected, Visibility::Public}) {
    std::vector<const FriendDecl*> friends;
    std::vector<const Attribute*> attrs;
    std::vector<const Operation*> ops;
    for (const auto& f : u.friends) {
      if (f.section == v) friends.push_back(&f);
    }
    for (const auto& a : u.attributes) {
      if (a.visibility == v) attrs.push_back(&a);
    }
    for (const auto& o : u.operations) {
      if (o.visibility == v) ops.push_back(&o);
    }
    if (friends.empty() && attrs.empty() && ops.empty()) continue;
    os << to_string(v) << ":\n";
    for (const auto* f : friends) os << indent_str(1) << "friend " << f->name << ";\n";
    print_attributes(os, attrs, 1);
    bool first = friends.empty() && attrs.empty();
    for (const auto* o : ops) {
      if (o->implicit) {
        os << print_statements(o->body, 1);
        first = false;
      }
    }
    for (const auto* o : ops) {
      if (o->implicit) continue;
      if (!first) os << "\n";
      first = false;
      print_operation(os, *o, 1);
    }
  }
  os << "}\n";
}

}  // namespace

std::string format(const ParseError& e) {
  std::ostringstream os;
  os << e.origin << ":" << e.position.line << ":" << e.position.column << ": expected " << e.expected << ", found "
     << e.found;
  return os.str();
}

ParseResult parse(const SourceText& src) {
  ParseResult result;
  try {
    auto tokens = Lexer(src.text, src.origin).run();
    result.units = Parser(std::move(tokens), src.origin).run();
    std::stable_partition(result.units.begin(), result.units.end(), [](const ConceptUnit& u) { return u.is_globals(); });
  } catch (const Failure& f) {
    result.units.clear();
    result.errors.push_back(f.error);
  } catch (const std::exception& e) {
    result.units.clear();
    result.errors.push_back({{}, "well-formed input", e.what(), src.origin});
  }
  return result;
}

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Name: return e.text;
    case ExprKind::Int: return std::to_string(e.number);
    case ExprKind::String: return "\"" + e.text + "\"";
    case ExprKind::Bool: return e.number ? "true" : "false";
    case ExprKind::Null: return "NULL";
    case ExprKind::Member: return wrap(e.children[0], expr_precedence(e.children[0]) < 7) + "." + e.text;
    case ExprKind::Call: {
      std::string out;
      if (e.has_receiver) out = wrap(e.children[0], expr_precedence(e.children[0]) < 7) + ".";
      out += e.text + "(";
      auto args = e.call_args();
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += print_expr(args[i]);
      }
      return out + ")";
    }
    case ExprKind::Unary: {
      const Expr& operand = e.children[0];
      bool parens = expr_precedence(operand) < 6 || (e.text == "-" && operand.kind == ExprKind::Int);
      return e.text + wrap(operand, parens);
    }
    case ExprKind::Binary: {
      int p = expr_precedence(e);
      return wrap(e.children[0], expr_precedence(e.children[0]) < p) + " " + e.text + " " +
             wrap(e.children[1], expr_precedence(e.children[1]) <= p);
    }
  }
  return {};
}

std::string print_statements(const std::vector<Statement>& body, int indent) {
  std::ostringstream os;
  const std::string pad = indent_str(indent);
  for (const auto& s : body) {
    switch (s.kind) {
      case StmtKind::Setup:
      case StmtKind::Block: {
        os << pad << s.name << "(";
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          if (i) os << ", ";
          os << print_expr(s.args[i]);
        }
        if (s.kind == StmtKind::Setup) {
          os << ");\n";
        } else {
          os << ") {\n" << print_statements(s.body, indent + 1) << pad << "}\n";
        }
        break;
      }
      case StmtKind::Action:
      case StmtKind::Call:
        os << pad << print_expr(s.expr) << ";\n";
        break;
      case StmtKind::Assign:
        os << pad << print_expr(s.target) << " = " << print_expr(s.expr) << ";\n";
        break;
      case StmtKind::Increment:
        os << pad << print_expr(s.target) << "++;\n";
        break;
      case StmtKind::While:
        os << pad << "while (" << print_expr(s.expr) << ") {\n" << print_statements(s.body, indent + 1) << pad << "}\n";
        break;
      case StmtKind::If:
        os << pad << "if (" << print_expr(s.expr) << ") {\n" << print_statements(s.body, indent + 1) << pad << "}";
        if (!s.else_body.empty()) {
          os << " else {\n" << print_statements(s.else_body, indent + 1) << pad << "}";
        }
        os << "\n";
        break;
      case StmtKind::Return:
        os << pad << "return" << (s.has_expr ? " " + print_expr(s.expr) : "") << ";\n";
        break;
      case StmtKind::LocalDecl:
        os << pad << s.type.name << " " << s.name << ";\n";
        break;
    }
  }
  return os.str();
}

SourceText print_canonical(const UnitSet& units) {
  std::ostringstream os;
  bool first = true;
  for (const auto& u : units) {
    if (!u.is_globals()) continue;
    std::vector<const Attribute*> attrs;
    for (const auto& a : u.attributes) attrs.push_back(&a);
    print_attributes(os, attrs, 0);
    first = false;
  }
  for (const auto& u : units) {
    if (u.is_globals()) continue;
    if (!first) os << "\n";
    first = false;
    print_unit(os, u);
  }
  return {os.str(), "<canonical>"};
}

}  // namespace rr::dsl
