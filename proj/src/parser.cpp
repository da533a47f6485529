// SPDX-License-Identifier: Apache-2.0
//
// Hand-written lexer and recursive-descent parser. Precedence, tightest to
// loosest: indexing, unary (!, sampled-value functions), == and !=, &&, ||,
// ##N concatenation, the property operators |-> |=> iff, and finally the
// prefix s_eventually. Implications and iff associate to the right; the
// binary boolean connectives and ##N associate to the left.

#include "nl2sva/parser.hpp"

#include <cctype>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace nl2sva {

namespace {

enum class Tok {
  End,
  Ident,
  Number,      // plain decimal
  SizedNumber, // 1'b0 style
  DollarFn,    // one of the six sampled-value functions
  LParen,
  RParen,
  LBracket,
  RBracket,
  Colon,
  Semi,
  Comma,
  At,
  Bang,
  AndAnd,
  OrOr,
  EqEq,
  NotEq,
  DelayOp, // ##
  OverlapArrow,
  NonOverlapArrow,
  KwAssert,
  KwProperty,
  KwPosedge,
  KwNegedge,
  KwDisable,
  KwIff,
  KwSEventually,
};

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string text;     // identifier spelling / raw literal
  std::uint64_t value = 0;
  int width = 0;        // sized literal width
  OpKind fn = OpKind::Rose; // for DollarFn
};

const std::unordered_set<std::string>& unsupported_keywords() {
  static const std::unordered_set<std::string> kws = {
      "throughout", "within",  "intersect",  "first_match", "eventually",
      "always",     "until",   "until_with", "s_until",     "s_until_with",
      "nexttime",   "s_nexttime", "strong",  "weak",        "not",
      "and",        "or",      "if",         "else",        "case",
  };
  return kws;
}

[[noreturn]] void fail(std::size_t offset, std::string message,
                       std::vector<std::string> expected = {}) {
  throw SyntaxError(offset, std::move(message), std::move(expected));
}

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  Token next() {
    if (pos_ >= text_.size()) return {Tok::End, text_.size(), "", 0, 0, {}};
    std::size_t start = pos_;
    char c = text_[pos_];

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return identifier(start);
    if (std::isdigit(static_cast<unsigned char>(c))) return number(start);

    switch (c) {
    case '$':
      return dollar_fn(start);
    case '(':
      ++pos_;
      return {Tok::LParen, start, "(", 0, 0, {}};
    case ')':
      ++pos_;
      return {Tok::RParen, start, ")", 0, 0, {}};
    case '[':
      ++pos_;
      return {Tok::LBracket, start, "[", 0, 0, {}};
    case ']':
      ++pos_;
      return {Tok::RBracket, start, "]", 0, 0, {}};
    case ':':
      ++pos_;
      return {Tok::Colon, start, ":", 0, 0, {}};
    case ';':
      ++pos_;
      return {Tok::Semi, start, ";", 0, 0, {}};
    case ',':
      ++pos_;
      return {Tok::Comma, start, ",", 0, 0, {}};
    case '@':
      ++pos_;
      return {Tok::At, start, "@", 0, 0, {}};
    case '~':
    case '!':
      if (c == '!' && peek(1) == '=') {
        pos_ += 2;
        return {Tok::NotEq, start, "!=", 0, 0, {}};
      }
      ++pos_;
      return {Tok::Bang, start, "!", 0, 0, {}};
    case '=':
      if (peek(1) == '=') {
        pos_ += 2;
        return {Tok::EqEq, start, "==", 0, 0, {}};
      }
      fail(start, "assignment '=' is not valid here", {"=="});
    case '&':
      if (peek(1) == '&') {
        pos_ += 2;
        return {Tok::AndAnd, start, "&&", 0, 0, {}};
      }
      fail(start, "bitwise '&' is not supported", {"&&"});
    case '#':
      if (peek(1) == '#') {
        pos_ += 2;
        return {Tok::DelayOp, start, "##", 0, 0, {}};
      }
      fail(start, "single '#' is not a valid delay", {"##"});
    case '|':
      if (peek(1) == '|') {
        pos_ += 2;
        return {Tok::OrOr, start, "||", 0, 0, {}};
      }
      if (peek(1) == '-' && peek(2) == '>') {
        pos_ += 3;
        return {Tok::OverlapArrow, start, "|->", 0, 0, {}};
      }
      if (peek(1) == '=' && peek(2) == '>') {
        pos_ += 3;
        return {Tok::NonOverlapArrow, start, "|=>", 0, 0, {}};
      }
      fail(start, "bitwise '|' is not supported", {"||", "|->", "|=>"});
    case '*':
      fail(start, "sequence repetition and arithmetic are not supported");
    case '+':
    case '-':
    case '<':
    case '>':
      fail(start, std::string("operator '") + c + "' is not supported");
    default:
      fail(start, std::string("unexpected character '") + c + "'");
    }
  }

  Token identifier(std::size_t start) {
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string word = text_.substr(start, pos_ - start);
    static const std::unordered_map<std::string, Tok> keywords = {
        {"assert", Tok::KwAssert},       {"property", Tok::KwProperty},
        {"posedge", Tok::KwPosedge},     {"negedge", Tok::KwNegedge},
        {"disable", Tok::KwDisable},     {"iff", Tok::KwIff},
        {"s_eventually", Tok::KwSEventually},
    };
    auto it = keywords.find(word);
    if (it != keywords.end()) return {it->second, start, word, 0, 0, {}};
    if (unsupported_keywords().count(word))
      fail(start, "unsupported SystemVerilog construct '" + word + "'");
    return {Tok::Ident, start, word, 0, 0, {}};
  }

  Token number(std::size_t start) {
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::uint64_t dec = 0;
    try {
      dec = std::stoull(text_.substr(start, pos_ - start));
    } catch (const std::out_of_range&) {
      fail(start, "integer literal too large");
    }
    if (pos_ < text_.size() && text_[pos_] == '\'') return sized(start, dec);
    Token t{Tok::Number, start, text_.substr(start, pos_ - start), dec, 32, {}};
    return t;
  }

  Token sized(std::size_t start, std::uint64_t width64) {
    ++pos_; // '
    if (width64 == 0 || width64 > 64)
      fail(start, "literal width must be between 1 and 64");
    int width = static_cast<int>(width64);
    if (pos_ >= text_.size())
      fail(pos_, "truncated sized literal", {"b", "d", "h", "o"});
    char base = static_cast<char>(
        std::tolower(static_cast<unsigned char>(text_[pos_])));
    int radix = base == 'b'   ? 2
                : base == 'o' ? 8
                : base == 'd' ? 10
                : base == 'h' ? 16
                              : 0;
    if (radix == 0)
      fail(pos_, std::string("unknown literal base '") + text_[pos_] + "'",
           {"b", "d", "h", "o"});
    ++pos_;
    std::size_t digits_start = pos_;
    std::uint64_t value = 0;
    bool any = false;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '_') {
        ++pos_;
        continue;
      }
      int dv;
      if (std::isdigit(static_cast<unsigned char>(d)))
        dv = d - '0';
      else if (std::isxdigit(static_cast<unsigned char>(d)))
        dv = 10 + (std::tolower(static_cast<unsigned char>(d)) - 'a');
      else
        break;
      if (dv >= radix) break;
      value = value * radix + static_cast<std::uint64_t>(dv);
      any = true;
      ++pos_;
    }
    if (!any) fail(digits_start, "sized literal needs at least one digit");
    if (width < 64 && value >= (std::uint64_t{1} << width))
      throw Error(ErrorCode::WidthMismatch,
                  "literal value " + std::to_string(value) +
                      " does not fit in " + std::to_string(width) + " bits");
    Token t;
    t.kind = Tok::SizedNumber;
    t.offset = start;
    t.text = text_.substr(start, pos_ - start);
    t.value = value;
    t.width = width;
    return t;
  }

  Token dollar_fn(std::size_t start) {
    ++pos_;
    std::size_t name_start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string name = "$" + text_.substr(name_start, pos_ - name_start);
    static const std::unordered_map<std::string, OpKind> fns = {
        {"$rose", OpKind::Rose},     {"$fell", OpKind::Fell},
        {"$past", OpKind::Past},     {"$stable", OpKind::Stable},
        {"$onehot", OpKind::Onehot}, {"$onehot0", OpKind::Onehot0},
    };
    auto it = fns.find(name);
    if (it == fns.end())
      fail(start, "unknown system function '" + name + "'",
           {"$rose", "$fell", "$past", "$stable", "$onehot", "$onehot0"});
    Token t;
    t.kind = Tok::DollarFn;
    t.offset = start;
    t.text = name;
    t.fn = it->second;
    return t;
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

using MutExpr = std::shared_ptr<Expr>;

/// Evaluability class of a subexpression. Value expressions sample to a
/// single number at one cycle; sequences span cycles; properties carry
/// success/failure semantics.
enum class ExprClass { Value, Sequence, Property };

class Parser {
public:
  explicit Parser(const std::string& text) : tokens_(Lexer(text).run()) {}

  SvaAst assertion() {
    if (at(Tok::Ident) && look(1).kind == Tok::Colon) {
      advance();
      advance();
    }
    expect(Tok::KwAssert, "assert");
    expect(Tok::KwProperty, "property");
    expect(Tok::LParen, "(");
    SvaAst ast;
    ast.clocking = clocking();
    if (at(Tok::KwDisable)) {
      advance();
      expect(Tok::KwIff, "iff");
      expect(Tok::LParen, "(");
      MutExpr cond = property_expr();
      expect(Tok::RParen, ")");
      validate_disable(*cond);
      ast.disable_condition = cond;
    }
    MutExpr body = property_expr();
    expect(Tok::RParen, ")");
    if (at(Tok::Semi)) advance();
    if (!at(Tok::End))
      fail(cur().offset, "trailing input after assertion", {"end of input"});
    finalize(*body);
    ast.body = body;
    return ast;
  }

  ExprPtr expression() {
    MutExpr body = property_expr();
    if (!at(Tok::End))
      fail(cur().offset, "trailing input after expression", {"end of input"});
    finalize(*body);
    return body;
  }

private:
  ClockingEvent clocking() {
    expect(Tok::At, "@");
    expect(Tok::LParen, "(");
    ClockingEvent ev;
    if (at(Tok::KwPosedge)) {
      ev.edge = ClockingEvent::Edge::Posedge;
      advance();
    } else if (at(Tok::KwNegedge)) {
      ev.edge = ClockingEvent::Edge::Negedge;
      advance();
    } else {
      fail(cur().offset, "expected clock edge", {"posedge", "negedge"});
    }
    Token clk = expect(Tok::Ident, "identifier");
    ev.clock_signal = clk.text;
    expect(Tok::RParen, ")");
    return ev;
  }

  // s_eventually level, loosest.
  MutExpr property_expr() {
    if (at(Tok::KwSEventually)) {
      Token op = advance();
      MutExpr node = make(OpKind::SEventually, op.offset);
      node->children.push_back(property_expr());
      return node;
    }
    MutExpr lhs = seq_expr();
    if (at(Tok::OverlapArrow) || at(Tok::NonOverlapArrow) || at(Tok::KwIff)) {
      Token op = advance();
      OpKind kind = op.kind == Tok::OverlapArrow     ? OpKind::OverlapImpl
                    : op.kind == Tok::NonOverlapArrow ? OpKind::NonOverlapImpl
                                                      : OpKind::Iff;
      MutExpr node = make(kind, op.offset);
      node->children.push_back(lhs);
      node->children.push_back(property_expr());
      return node;
    }
    return lhs;
  }

  // ##N level: optional prefix delay, then left-associative concatenation.
  MutExpr seq_expr() {
    MutExpr node;
    if (at(Tok::DelayOp)) {
      Token op = advance();
      int n = delay_count();
      node = make(OpKind::Delay, op.offset);
      node->param = n;
      node->children.push_back(or_expr());
    } else {
      node = or_expr();
    }
    while (at(Tok::DelayOp)) {
      Token op = advance();
      int n = delay_count();
      MutExpr concat = make(OpKind::Delay, op.offset);
      concat->param = n;
      concat->children.push_back(node);
      concat->children.push_back(or_expr());
      node = concat;
    }
    return node;
  }

  int delay_count() {
    Token n = expect(Tok::Number, "integer");
    if (n.value < 1)
      fail(n.offset, "delay count must be at least 1");
    if (n.value > 64)
      fail(n.offset, "delay count larger than 64 is not supported");
    return static_cast<int>(n.value);
  }

  MutExpr or_expr() {
    MutExpr node = and_expr();
    while (at(Tok::OrOr)) {
      Token op = advance();
      MutExpr bin = make(OpKind::Or, op.offset);
      bin->children.push_back(node);
      bin->children.push_back(and_expr());
      node = bin;
    }
    return node;
  }

  MutExpr and_expr() {
    MutExpr node = eq_expr();
    while (at(Tok::AndAnd)) {
      Token op = advance();
      MutExpr bin = make(OpKind::And, op.offset);
      bin->children.push_back(node);
      bin->children.push_back(eq_expr());
      node = bin;
    }
    return node;
  }

  MutExpr eq_expr() {
    MutExpr node = unary_expr();
    while (at(Tok::EqEq) || at(Tok::NotEq)) {
      Token op = advance();
      MutExpr bin =
          make(op.kind == Tok::EqEq ? OpKind::Eq : OpKind::Neq, op.offset);
      bin->children.push_back(node);
      bin->children.push_back(unary_expr());
      node = bin;
    }
    return node;
  }

  MutExpr unary_expr() {
    if (at(Tok::Bang)) {
      Token op = advance();
      MutExpr node = make(OpKind::Not, op.offset);
      node->children.push_back(unary_expr());
      return node;
    }
    if (at(Tok::DollarFn)) return sampled_fn();
    return postfix_expr();
  }

  MutExpr sampled_fn() {
    Token fn = advance();
    expect(Tok::LParen, "(");
    MutExpr node = make(fn.fn, fn.offset);
    // The argument is parsed at sequence level so that a sequence operand
    // surfaces as a layer violation rather than a confusing token error.
    node->children.push_back(seq_expr());
    if (fn.fn == OpKind::Past) {
      node->param = 1;
      if (at(Tok::Comma)) {
        advance();
        Token n = expect(Tok::Number, "integer");
        if (n.value < 1) fail(n.offset, "past depth must be at least 1");
        if (n.value > 64) fail(n.offset, "past depth larger than 64 is not supported");
        node->param = static_cast<int>(n.value);
      }
    }
    expect(Tok::RParen, ")");
    return node;
  }

  MutExpr postfix_expr() {
    MutExpr node = primary();
    if (at(Tok::LBracket)) {
      Token open = advance();
      if (node->kind != OpKind::SignalRef)
        fail(open.offset, "bit select applies only to signal names");
      if (at(Tok::Ident))
        fail(cur().offset, "bit select index must be a constant integer",
             {"integer"});
      Token first = expect(Tok::Number, "integer");
      MutExpr sel = make(OpKind::Select, open.offset);
      sel->children.push_back(node);
      if (at(Tok::Colon)) {
        advance();
        Token second = expect(Tok::Number, "integer");
        sel->msb = static_cast<int>(first.value);
        sel->lsb = static_cast<int>(second.value);
        sel->has_range = true;
        if (sel->msb < sel->lsb)
          fail(first.offset, "range must be written [msb:lsb] with msb >= lsb");
      } else {
        sel->lsb = static_cast<int>(first.value);
        sel->has_range = false;
      }
      expect(Tok::RBracket, "]");
      return sel;
    }
    return node;
  }

  MutExpr primary() {
    if (at(Tok::Ident)) {
      Token t = advance();
      MutExpr node = make(OpKind::SignalRef, t.offset);
      node->name = t.text;
      return node;
    }
    if (at(Tok::Number) || at(Tok::SizedNumber)) {
      Token t = advance();
      MutExpr node = make(OpKind::IntLiteral, t.offset);
      node->value = t.value;
      node->width = t.width;
      node->sized = t.kind == Tok::SizedNumber;
      return node;
    }
    if (at(Tok::LParen)) {
      advance();
      MutExpr inner = property_expr();
      expect(Tok::RParen, ")");
      return inner;
    }
    fail(cur().offset, "expected an expression",
         {"identifier", "integer", "(", "!", "##", "s_eventually",
          "sampled-value function"});
  }

  // --- validation -----------------------------------------------------

  struct NodeFacts {
    ExprClass cls = ExprClass::Value;
    Layer nat = Layer::Boolean; // natural layer before promotion
    bool has_sampled_fn = false;
  };

  NodeFacts analyze(Expr& e) {
    std::vector<NodeFacts> kids;
    kids.reserve(e.children.size());
    for (const ExprPtr& c : e.children)
      kids.push_back(analyze(const_cast<Expr&>(*c)));

    NodeFacts f;
    for (const NodeFacts& k : kids) {
      f.nat = std::max(f.nat, k.nat);
      f.has_sampled_fn = f.has_sampled_fn || k.has_sampled_fn;
    }
    f.nat = std::max(f.nat, intrinsic_layer(e.kind));

    auto require_value = [&](std::size_t i, const char* what) {
      if (kids[i].cls != ExprClass::Value)
        throw LayerError(e.children[i]->offset,
                         std::string(what) + " must be a value expression, not a " +
                             (kids[i].cls == ExprClass::Sequence ? "sequence"
                                                                 : "property") +
                             " expression");
    };
    auto forbid_property = [&](std::size_t i, const char* what) {
      if (kids[i].cls == ExprClass::Property)
        throw LayerError(e.children[i]->offset,
                         std::string(what) +
                             " must not be a property expression");
    };

    switch (e.kind) {
    case OpKind::SignalRef:
    case OpKind::IntLiteral:
      f.cls = ExprClass::Value;
      break;
    case OpKind::Select:
      require_value(0, "indexed expression");
      f.cls = ExprClass::Value;
      break;
    case OpKind::Not:
      require_value(0, "operand of '!'");
      f.cls = ExprClass::Value;
      break;
    case OpKind::And:
    case OpKind::Or:
    case OpKind::Eq:
    case OpKind::Neq: {
      const char* what = e.kind == OpKind::And  ? "operand of '&&'"
                         : e.kind == OpKind::Or ? "operand of '||'"
                         : e.kind == OpKind::Eq ? "operand of '=='"
                                                : "operand of '!='";
      require_value(0, what);
      require_value(1, what);
      f.cls = ExprClass::Value;
      break;
    }
    case OpKind::Rose:
    case OpKind::Fell:
    case OpKind::Past:
    case OpKind::Stable:
    case OpKind::Onehot:
    case OpKind::Onehot0: {
      std::string what =
          std::string("argument of ") + operator_surface_token(e.kind);
      require_value(0, what.c_str());
      f.cls = ExprClass::Value;
      f.has_sampled_fn = true;
      break;
    }
    case OpKind::Delay:
      for (std::size_t i = 0; i < kids.size(); ++i)
        forbid_property(i, "operand of '##'");
      f.cls = ExprClass::Sequence;
      break;
    case OpKind::OverlapImpl:
    case OpKind::NonOverlapImpl:
      forbid_property(0, "antecedent of an implication");
      f.cls = ExprClass::Property;
      break;
    case OpKind::SEventually:
    case OpKind::Iff:
      f.cls = ExprClass::Property;
      break;
    }
    return f;
  }

  static Layer layer_sub1(Layer l) {
    return l == Layer::Boolean ? Layer::Boolean
                               : static_cast<Layer>(static_cast<int>(l) - 1);
  }

  /// Assigns layer tags: the root is property-layer; every child is tagged
  /// one below its parent unless its own natural layer is higher (a boolean
  /// antecedent of |=> is promoted to the sequence layer, a lone leaf body
  /// all the way to the property layer).
  void tag(Expr& e, Layer slot) {
    Layer nat = nat_of(e);
    e.layer = std::max(nat, slot);
    for (const ExprPtr& c : e.children)
      tag(const_cast<Expr&>(*c), layer_sub1(e.layer));
  }

  static Layer nat_of(const Expr& e) {
    Layer l = intrinsic_layer(e.kind);
    for (const ExprPtr& c : e.children) l = std::max(l, nat_of(*c));
    return l;
  }

  void finalize(Expr& body) {
    analyze(body);
    tag(body, Layer::Property);
  }

  void validate_disable(Expr& cond) {
    NodeFacts f = analyze(cond);
    if (f.cls != ExprClass::Value)
      throw LayerError(cond.offset,
                       "disable condition must be a boolean expression");
    if (f.has_sampled_fn)
      throw LayerError(cond.offset,
                       "disable condition must not use sampled-value functions");
    tag(cond, Layer::Boolean);
  }

  // --- token plumbing ---------------------------------------------------

  MutExpr make(OpKind kind, std::size_t offset) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->offset = offset;
    return e;
  }

  const Token& cur() const { return tokens_[pos_]; }
  const Token& look(std::size_t ahead) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at(Tok k) const { return cur().kind == k; }
  Token advance() { return tokens_[pos_++]; }

  Token expect(Tok k, const char* spelling) {
    if (!at(k))
      fail(cur().offset,
           std::string("expected '") + spelling + "' but found " +
               describe(cur()),
           {spelling});
    return advance();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

} // namespace

SvaAst parse_assertion(const std::string& text) {
  return Parser(text).assertion();
}

ExprPtr parse_expression(const std::string& text) {
  return Parser(text).expression();
}

} // namespace nl2sva
