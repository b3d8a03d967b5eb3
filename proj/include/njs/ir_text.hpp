#pragma once

// Textual surface syntax: s-expressions, one decl per program.
//
//   program := (decl ((x 0) (y "s")) stmt)
//   stmt    := (seq s...) | (if e s s) | (while e s) | (:= x e)
//            | (.:= e e e) | (call x e e e) | (toobj x e) | (delete x e e)
//            | (newfun x (fun (self args) d-or-s) n) | (newcall x e e)
//            | (throw e) | (try s x s s) | (label L s) | (break L e)
//            | (forin x e s)
//   exp     := 3.5 | nan | inf | -inf | true | false | undef | null | "str"
//            | x | (fun (self args) d-or-s) | (OP e e) | (OP e)
//
// parse assigns NodeIds in depth-first pre-order starting at 1; pretty
// emits a canonical indented form that parses back to a structurally
// equal tree.

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "njs/ir.hpp"

namespace njs::ir {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(std::string msg, int line_, int col_)
      : std::runtime_error(std::move(msg)), line(line_), col(col_) {}
};

namespace detail {

inline bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$';
}
inline bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9');
}

struct Lexer {
  std::string_view src;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  void bump() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ';') {  // comment to end of line
        while (pos < src.size() && src[pos] != '\n') bump();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input");
    return src[pos];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    bump();
  }

  // Next bare token (identifier, operator symbol, or number spelling).
  std::string token() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input");
    size_t start = pos;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '(' || c == ')' || c == '"' || c == ';' || c == ' ' ||
          c == '\t' || c == '\r' || c == '\n')
        break;
      bump();
    }
    if (pos == start) fail("expected token");
    return std::string(src.substr(start, pos - start));
  }

  std::string string_lit() {
    expect('"');
    std::string out;
    while (true) {
      if (pos >= src.size()) fail("unterminated string literal");
      char c = src[pos];
      if (c == '"') {
        bump();
        return out;
      }
      if (c == '\\') {
        bump();
        if (pos >= src.size()) fail("unterminated escape");
        char e = src[pos];
        bump();
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          case '\\': out.push_back('\\'); break;
          case '"': out.push_back('"'); break;
          case 'x': {
            if (pos + 1 >= src.size()) fail("truncated \\x escape");
            auto hex = [&](char h) -> int {
              if (h >= '0' && h <= '9') return h - '0';
              if (h >= 'a' && h <= 'f') return h - 'a' + 10;
              if (h >= 'A' && h <= 'F') return h - 'A' + 10;
              fail("bad hex digit in \\x escape");
            };
            int hi = hex(src[pos]);
            bump();
            int lo = hex(src[pos]);
            bump();
            out.push_back(static_cast<char>(hi * 16 + lo));
            break;
          }
          default: fail("unknown escape");
        }
      } else {
        out.push_back(c);
        bump();
      }
    }
  }
};

inline bool parse_number_token(const std::string& t, double* out) {
  if (t == "nan") {
    *out = __builtin_nan("");
    return true;
  }
  if (t == "inf") {
    *out = __builtin_inf();
    return true;
  }
  if (t == "-inf") {
    *out = -__builtin_inf();
    return true;
  }
  if (t.empty()) return false;
  size_t i = (t[0] == '-') ? 1 : 0;
  if (i >= t.size() || !(t[i] >= '0' && t[i] <= '9')) return false;
  double v;
  auto [ptr, ec] = std::from_chars(t.data() + (t[0] == '-'), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return false;
  *out = (t[0] == '-') ? -v : v;
  return true;
}

inline bool bin_op_token(const std::string& t, BinOp* op) {
  struct Row { const char* tok; BinOp op; };
  static constexpr Row rows[] = {
      {"+", BinOp::Add},        {"-", BinOp::Sub},
      {"*", BinOp::Mul},        {"/", BinOp::Div},
      {"%", BinOp::Mod},        {"<<", BinOp::Shl},
      {">>", BinOp::Shr},       {">>>", BinOp::UShr},
      {"<", BinOp::Lt},         {"<=", BinOp::Le},
      {"&", BinOp::BitAnd},     {"|", BinOp::BitOr},
      {"^", BinOp::BitXor},     {"and", BinOp::And},
      {"or", BinOp::Or},        {"++", BinOp::StrConcat},
      {"s<", BinOp::StrLt},     {"s<=", BinOp::StrLe},
      {"==", BinOp::LooseEq},   {"===", BinOp::StrictEq},
      {".", BinOp::Prop},       {"instanceof", BinOp::InstanceOf},
      {"in", BinOp::In},
  };
  for (const auto& r : rows)
    if (t == r.tok) {
      *op = r.op;
      return true;
    }
  return false;
}

inline bool un_op_token(const std::string& t, UnOp* op) {
  struct Row { const char* tok; UnOp op; };
  static constexpr Row rows[] = {
      {"neg", UnOp::Neg},       {"bitnot", UnOp::BitNot},
      {"not", UnOp::Not},       {"typeof", UnOp::TypeOf},
      {"isprim", UnOp::IsPrim}, {"tobool", UnOp::ToBool},
      {"tostr", UnOp::ToStr},   {"tonum", UnOp::ToNum},
  };
  for (const auto& r : rows)
    if (t == r.tok) {
      *op = r.op;
      return true;
    }
  return false;
}

inline const char* bin_op_name(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::UShr: return ">>>";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::BitXor: return "^";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
    case BinOp::StrConcat: return "++";
    case BinOp::StrLt: return "s<";
    case BinOp::StrLe: return "s<=";
    case BinOp::LooseEq: return "==";
    case BinOp::StrictEq: return "===";
    case BinOp::Prop: return ".";
    case BinOp::InstanceOf: return "instanceof";
    case BinOp::In: return "in";
  }
  return "?";
}

inline const char* un_op_name(UnOp op) {
  switch (op) {
    case UnOp::Neg: return "neg";
    case UnOp::BitNot: return "bitnot";
    case UnOp::Not: return "not";
    case UnOp::TypeOf: return "typeof";
    case UnOp::IsPrim: return "isprim";
    case UnOp::ToBool: return "tobool";
    case UnOp::ToStr: return "tostr";
    case UnOp::ToNum: return "tonum";
  }
  return "?";
}

struct Parser {
  Lexer lex;
  NodeId next_id = 1;

  NodeId fresh() { return next_id++; }

  std::string ident() {
    std::string t = lex.token();
    if (t.empty() || !ident_start(t[0])) lex.fail("expected identifier");
    for (char c : t)
      if (!ident_char(c)) lex.fail("expected identifier");
    return t;
  }

  ExpPtr exp() {
    char c = lex.peek();
    if (c == '"') {
      NodeId id = fresh();
      return std::make_shared<Exp>(Exp{id, StrLit{lex.string_lit()}});
    }
    if (c != '(') {
      NodeId id = fresh();
      std::string t = lex.token();
      double num;
      if (parse_number_token(t, &num))
        return std::make_shared<Exp>(Exp{id, NumLit{num}});
      if (t == "true") return std::make_shared<Exp>(Exp{id, BoolLit{true}});
      if (t == "false") return std::make_shared<Exp>(Exp{id, BoolLit{false}});
      if (t == "undef") return std::make_shared<Exp>(Exp{id, UndefLit{}});
      if (t == "null") return std::make_shared<Exp>(Exp{id, NullLit{}});
      if (ident_start(t[0])) {
        for (char ch : t)
          if (!ident_char(ch)) lex.fail("bad identifier '" + t + "'");
        return std::make_shared<Exp>(Exp{id, VarRef{t}});
      }
      lex.fail("bad expression token '" + t + "'");
    }
    lex.expect('(');
    NodeId id = fresh();
    std::string head = lex.token();
    if (head == "fun") {
      MethPtr m = meth_rest(fresh());
      return std::make_shared<Exp>(Exp{id, MethLit{m}});
    }
    BinOp bop;
    UnOp uop;
    if (bin_op_token(head, &bop)) {
      ExpPtr l = exp();
      ExpPtr r = exp();
      lex.expect(')');
      return std::make_shared<Exp>(Exp{id, BinExp{bop, l, r}});
    }
    if (un_op_token(head, &uop)) {
      ExpPtr e = exp();
      lex.expect(')');
      return std::make_shared<Exp>(Exp{id, UnExp{uop, e}});
    }
    lex.fail("unknown expression head '" + head + "'");
  }

  MethPtr meth_rest(NodeId id) {
    lex.expect('(');
    std::string p1 = ident();
    std::string p2 = ident();
    if (p1 != "self" || p2 != "args")
      lex.fail("method parameter list must be (self args)");
    lex.expect(')');
    std::variant<DeclPtr, StmtPtr> body;
    // Peek at the body form: (decl ...) parses as a Decl, anything else as
    // a statement.
    if (lex.peek() == '(') {
      size_t save_pos = lex.pos;
      int save_line = lex.line, save_col = lex.col;
      lex.expect('(');
      std::string head = lex.token();
      lex.pos = save_pos;
      lex.line = save_line;
      lex.col = save_col;
      if (head == "decl")
        body = decl();
      else
        body = stmt();
    } else {
      lex.fail("method body must be a decl or statement form");
    }
    lex.expect(')');
    auto m = std::make_shared<Meth>();
    const_cast<Meth&>(*m).id = id;
    const_cast<Meth&>(*m).body = std::move(body);
    return m;
  }

  StmtPtr stmt() {
    lex.expect('(');
    NodeId id = fresh();
    std::string head = lex.token();
    auto make = [&](auto&& node) {
      return std::make_shared<Stmt>(
          Stmt{id, std::forward<decltype(node)>(node)});
    };
    if (head == "seq") {
      SeqStmt s;
      while (lex.peek() != ')') s.stmts.push_back(stmt());
      lex.expect(')');
      return make(std::move(s));
    }
    if (head == "if") {
      ExpPtr c = exp();
      StmtPtr t = stmt();
      StmtPtr e;
      if (lex.peek() != ')') {
        e = stmt();
      } else {
        e = std::make_shared<Stmt>(Stmt{fresh(), SeqStmt{}});
      }
      lex.expect(')');
      return make(IfStmt{c, t, e});
    }
    if (head == "while") {
      ExpPtr c = exp();
      StmtPtr b = stmt();
      lex.expect(')');
      return make(WhileStmt{c, b});
    }
    if (head == ":=") {
      std::string x = ident();
      ExpPtr e = exp();
      lex.expect(')');
      return make(AssignVar{x, e});
    }
    if (head == ".:=") {
      ExpPtr o = exp();
      ExpPtr k = exp();
      ExpPtr v = exp();
      lex.expect(')');
      return make(AssignProp{o, k, v});
    }
    if (head == "call") {
      std::string x = ident();
      ExpPtr f = exp();
      ExpPtr s = exp();
      ExpPtr a = exp();
      lex.expect(')');
      return make(CallStmt{x, f, s, a});
    }
    if (head == "toobj") {
      std::string x = ident();
      ExpPtr e = exp();
      lex.expect(')');
      return make(ToObjStmt{x, e});
    }
    if (head == "delete") {
      std::string x = ident();
      ExpPtr o = exp();
      ExpPtr k = exp();
      lex.expect(')');
      return make(DeleteStmt{x, o, k});
    }
    if (head == "newfun") {
      std::string x = ident();
      ExpPtr m = exp();
      if (!std::holds_alternative<MethLit>(m->node))
        lex.fail("newfun requires a (fun ...) literal");
      std::string t = lex.token();
      double n;
      if (!parse_number_token(t, &n)) lex.fail("newfun arity must be a number");
      lex.expect(')');
      return make(NewFunStmt{x, m, n});
    }
    if (head == "newcall") {
      std::string x = ident();
      ExpPtr c = exp();
      ExpPtr a = exp();
      lex.expect(')');
      return make(NewCallStmt{x, c, a});
    }
    if (head == "throw") {
      ExpPtr e = exp();
      lex.expect(')');
      return make(ThrowStmt{e});
    }
    if (head == "try") {
      StmtPtr t = stmt();
      std::string x = ident();
      StmtPtr c = stmt();
      StmtPtr f = stmt();
      lex.expect(')');
      return make(TryStmt{t, x, c, f});
    }
    if (head == "label") {
      std::string l = ident();
      StmtPtr b = stmt();
      lex.expect(')');
      return make(LabelStmt{l, b});
    }
    if (head == "break") {
      std::string l = ident();
      ExpPtr e = exp();
      lex.expect(')');
      return make(BreakStmt{l, e});
    }
    if (head == "forin") {
      std::string x = ident();
      ExpPtr o = exp();
      StmtPtr b = stmt();
      lex.expect(')');
      return make(ForInStmt{x, o, b});
    }
    lex.fail("unknown statement head '" + head + "'");
  }

  DeclPtr decl() {
    lex.expect('(');
    NodeId id = fresh();
    std::string head = lex.token();
    if (head != "decl") lex.fail("expected (decl ...)");
    lex.expect('(');
    std::vector<std::pair<std::string, ExpPtr>> bindings;
    while (lex.peek() != ')') {
      lex.expect('(');
      std::string name = ident();
      ExpPtr init = exp();
      lex.expect(')');
      bindings.emplace_back(std::move(name), std::move(init));
    }
    lex.expect(')');
    StmtPtr body = stmt();
    lex.expect(')');
    auto d = std::make_shared<Decl>();
    const_cast<Decl&>(*d).id = id;
    const_cast<Decl&>(*d).bindings = std::move(bindings);
    const_cast<Decl&>(*d).body = body;
    return d;
  }
};

inline std::string number_token(double v) {
  if (v != v) return "nan";
  if (v == __builtin_inf()) return "inf";
  if (v == -__builtin_inf()) return "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

inline void escape_string(const std::string& s, std::string& out) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x%02x",
                        static_cast<unsigned char>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

struct Printer {
  std::string out;

  void indent(int n) { out.append(static_cast<size_t>(n) * 2, ' '); }

  void exp(const ExpPtr& e) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, NumLit>) {
            out += number_token(x.value);
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            out += x.value ? "true" : "false";
          } else if constexpr (std::is_same_v<T, StrLit>) {
            escape_string(x.value, out);
          } else if constexpr (std::is_same_v<T, UndefLit>) {
            out += "undef";
          } else if constexpr (std::is_same_v<T, NullLit>) {
            out += "null";
          } else if constexpr (std::is_same_v<T, VarRef>) {
            out += x.name;
          } else if constexpr (std::is_same_v<T, MethLit>) {
            meth(x.meth, 0);
          } else if constexpr (std::is_same_v<T, BinExp>) {
            out += '(';
            out += bin_op_name(x.op);
            out += ' ';
            exp(x.lhs);
            out += ' ';
            exp(x.rhs);
            out += ')';
          } else {
            out += '(';
            out += un_op_name(x.op);
            out += ' ';
            exp(x.operand);
            out += ')';
          }
        },
        e->node);
  }

  void meth(const MethPtr& m, int depth) {
    out += "(fun (self args)\n";
    if (auto* d = std::get_if<DeclPtr>(&m->body)) {
      decl(*d, depth + 1);
    } else {
      indent(depth + 1);
      stmt(std::get<StmtPtr>(m->body), depth + 1);
    }
    out += ')';
  }

  void stmt(const StmtPtr& s, int depth) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, SeqStmt>) {
            if (x.stmts.empty()) {
              out += "(seq)";
              return;
            }
            out += "(seq\n";
            for (size_t i = 0; i < x.stmts.size(); ++i) {
              indent(depth + 1);
              stmt(x.stmts[i], depth + 1);
              if (i + 1 < x.stmts.size()) out += '\n';
            }
            out += ')';
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            out += "(if ";
            exp(x.cond);
            out += '\n';
            indent(depth + 1);
            stmt(x.then_branch, depth + 1);
            out += '\n';
            indent(depth + 1);
            stmt(x.else_branch, depth + 1);
            out += ')';
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            out += "(while ";
            exp(x.cond);
            out += '\n';
            indent(depth + 1);
            stmt(x.body, depth + 1);
            out += ')';
          } else if constexpr (std::is_same_v<T, AssignVar>) {
            out += "(:= " + x.var + " ";
            exp(x.value);
            out += ')';
          } else if constexpr (std::is_same_v<T, AssignProp>) {
            out += "(.:= ";
            exp(x.obj);
            out += ' ';
            exp(x.key);
            out += ' ';
            exp(x.value);
            out += ')';
          } else if constexpr (std::is_same_v<T, CallStmt>) {
            out += "(call " + x.target + " ";
            exp(x.fun);
            out += ' ';
            exp(x.self);
            out += ' ';
            exp(x.args);
            out += ')';
          } else if constexpr (std::is_same_v<T, ToObjStmt>) {
            out += "(toobj " + x.target + " ";
            exp(x.value);
            out += ')';
          } else if constexpr (std::is_same_v<T, DeleteStmt>) {
            out += "(delete " + x.target + " ";
            exp(x.obj);
            out += ' ';
            exp(x.key);
            out += ')';
          } else if constexpr (std::is_same_v<T, NewFunStmt>) {
            out += "(newfun " + x.target + " ";
            const auto& ml = std::get<MethLit>(x.meth->node);
            meth(ml.meth, depth + 1);
            out += ' ';
            out += number_token(x.arity);
            out += ')';
          } else if constexpr (std::is_same_v<T, NewCallStmt>) {
            out += "(newcall " + x.target + " ";
            exp(x.ctor);
            out += ' ';
            exp(x.args);
            out += ')';
          } else if constexpr (std::is_same_v<T, ThrowStmt>) {
            out += "(throw ";
            exp(x.value);
            out += ')';
          } else if constexpr (std::is_same_v<T, TryStmt>) {
            out += "(try\n";
            indent(depth + 1);
            stmt(x.try_body, depth + 1);
            out += '\n';
            indent(depth + 1);
            out += x.catch_var + '\n';
            indent(depth + 1);
            stmt(x.catch_body, depth + 1);
            out += '\n';
            indent(depth + 1);
            stmt(x.finally_body, depth + 1);
            out += ')';
          } else if constexpr (std::is_same_v<T, LabelStmt>) {
            out += "(label " + x.label + '\n';
            indent(depth + 1);
            stmt(x.body, depth + 1);
            out += ')';
          } else if constexpr (std::is_same_v<T, BreakStmt>) {
            out += "(break " + x.label + " ";
            exp(x.value);
            out += ')';
          } else {
            out += "(forin " + x.var + " ";
            exp(x.obj);
            out += '\n';
            indent(depth + 1);
            stmt(x.body, depth + 1);
            out += ')';
          }
        },
        s->node);
  }

  void decl(const DeclPtr& d, int depth) {
    indent(depth);
    out += "(decl (";
    if (!d->bindings.empty()) out += '\n';
    for (size_t i = 0; i < d->bindings.size(); ++i) {
      indent(depth + 2);
      out += '(' + d->bindings[i].first + ' ';
      exp(d->bindings[i].second);
      out += ')';
      if (i + 1 < d->bindings.size()) out += '\n';
    }
    out += ")\n";
    indent(depth + 1);
    stmt(d->body, depth + 1);
    out += ')';
  }
};

}  // namespace detail

inline Program parse_program(std::string_view src) {
  detail::Parser p;
  p.lex.src = src;
  DeclPtr d = p.decl();
  if (!p.lex.eof()) p.lex.fail("trailing input after program");
  return Program{d, p.next_id - 1};
}

inline std::string pretty(const Program& p) {
  detail::Printer pr;
  pr.decl(p.decl, 0);
  pr.out += '\n';
  return pr.out;
}

inline std::string pretty(const ExpPtr& e) {
  detail::Printer pr;
  pr.exp(e);
  return pr.out;
}

}  // namespace njs::ir
