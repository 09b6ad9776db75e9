// Copyright 2026 The rcic Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Surface syntax (.rcic files).
//
//   term  ::= forall binders , term | fun binders => term
//           | fix f binders {struct x} : term := term
//           | fix f {struct N} : term := term
//           | app [-> term]
//   app   ::= atom+
//   atom  ::= ident | Prop | SetN | TypeN | ( term ) | match
//   match ::= match term [as x] in I atom* (y : Y)* return term with
//               [|] c pat* => term | ... end
//           | match term in I atom* motive term with ... end
//   pat   ::= x | _ | (x+ : term)
//
//   decl  ::= inductive I binders? : term := [|] c : term | ... .
//           | def d binders? : term := term .
//           | check term .
//           | param-check d .
//
// Binders that shadow an enclosing binder or a global are renamed, so core
// terms produced here never shadow. Identifiers containing a prime or ending
// in `_R` are reserved for translation output.

#ifndef RCIC_PARSE_HPP
#define RCIC_PARSE_HPP

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rcic/env.hpp"
#include "rcic/syntax.hpp"

namespace rcic {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLocation loc, const std::string& message, std::vector<std::string> expected = {})
      : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " +
                           message),
        location_(loc),
        message_(message),
        expected_(std::move(expected)) {}

  const SourceLocation& location() const { return location_; }
  /// The message without the location prefix.
  const std::string& message() const { return message_; }
  /// Tokens that would have been accepted at `location()`.
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceLocation location_;
  std::string message_;
  std::vector<std::string> expected_;
};

struct Declaration {
  enum class Kind { Inductive, Definition, Check, ParamCheck };

  Kind kind = Kind::Check;
  SourceLocation location;
  InductiveDecl inductive;  // Kind::Inductive
  Definition definition;    // Kind::Definition
  Term term;                // Kind::Check
  Name name;                // Kind::ParamCheck, and the declared name otherwise
};

struct SourceFile {
  std::vector<Declaration> declarations;
};

/// Global names visible to the parser, with the inductive shapes needed to
/// elaborate unannotated pattern variables.
class Signature {
 public:
  enum class Kind { Inductive, Constructor, Definition };

  Signature() = default;

  static Signature from(const GlobalEnv& env) {
    Signature sig;
    for (const auto& name : env.order()) {
      if (const auto* info = env.inductive(name))
        sig.add(info->decl);
      else
        sig.add_definition(name);
    }
    return sig;
  }

  void add(const InductiveDecl& d) {
    kinds_[d.name] = Kind::Inductive;
    inductives_[d.name] = d;
    for (std::size_t i = 0; i < d.constructors.size(); ++i) {
      kinds_[d.constructors[i].name] = Kind::Constructor;
      owners_[d.constructors[i].name] = {d.name, i};
    }
  }
  void add_definition(const Name& name) { kinds_[name] = Kind::Definition; }

  std::optional<Kind> kind(const Name& name) const {
    auto it = kinds_.find(name);
    if (it == kinds_.end()) return std::nullopt;
    return it->second;
  }
  const InductiveDecl* inductive(const Name& name) const {
    auto it = inductives_.find(name);
    return it == inductives_.end() ? nullptr : &it->second;
  }
  /// (inductive, constructor index)
  std::optional<std::pair<Name, std::size_t>> owner(const Name& ctor) const {
    auto it = owners_.find(ctor);
    if (it == owners_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<Name, Kind> kinds_;
  std::map<Name, InductiveDecl> inductives_;
  std::map<Name, std::pair<Name, std::size_t>> owners_;
};

struct ParseOptions {
  /// Accept primed and `_R` identifiers (for reading translation output).
  bool allow_reserved = false;
};

inline bool is_reserved_identifier(std::string_view id) {
  if (id.find('\'') != std::string_view::npos) return true;
  return id.size() >= 2 && id.substr(id.size() - 2) == "_R";
}

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Symbol, Keyword, End };
  Kind kind = Kind::End;
  std::string text;
  SourceLocation loc;
};

inline const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"forall", "fun",  "fix",    "match",     "as",
                                       "in",     "return", "motive", "with",   "end",
                                       "struct", "inductive", "def", "check", "param-check"};
  return k;
}

class Lexer {
 public:
  Lexer(std::string_view text, ParseOptions options) : text_(text), options_(options) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.loc = loc_;
      if (pos_ >= text_.size()) {
        t.kind = Token::Kind::End;
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '\''))
          id += advance();
        if (id == "param" && text_.substr(pos_, 6) == "-check") {
          for (int i = 0; i < 6; ++i) advance();
          id = "param-check";
        }
        if (keywords().count(id)) {
          t.kind = Token::Kind::Keyword;
        } else {
          if (!options_.allow_reserved && id != "_" && is_reserved_identifier(id))
            throw ParseError(t.loc, "identifier `" + id + "` uses a reserved suffix (' or _R)");
          t.kind = Token::Kind::Ident;
        }
        t.text = std::move(id);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          t.text += advance();
        t.kind = Token::Kind::Number;
      } else {
        static const char* symbols[] = {":=", "=>", "->", "(", ")", ":", ",", "|", ".", "{", "}"};
        bool matched = false;
        for (const char* s : symbols) {
          std::string_view sv(s);
          if (text_.substr(pos_, sv.size()) == sv) {
            for (std::size_t i = 0; i < sv.size(); ++i) advance();
            t.text = std::string(sv);
            t.kind = Token::Kind::Symbol;
            matched = true;
            break;
          }
        }
        if (!matched) throw ParseError(t.loc, std::string("unexpected character `") + c + "`");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++loc_.line;
      loc_.column = 1;
    } else {
      ++loc_.column;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      } else if (text_.substr(pos_, 2) == "(*") {
        const SourceLocation start = loc_;
        int depth = 0;
        do {
          if (pos_ >= text_.size()) throw ParseError(start, "unterminated comment");
          if (text_.substr(pos_, 2) == "(*") {
            advance();
            advance();
            ++depth;
          } else if (text_.substr(pos_, 2) == "*)") {
            advance();
            advance();
            --depth;
          } else {
            advance();
          }
        } while (depth > 0);
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  ParseOptions options_;
  std::size_t pos_ = 0;
  SourceLocation loc_{1, 1};
};

class Parser {
 public:
  Parser(std::string_view text, Signature& sig, ParseOptions options)
      : tokens_(Lexer(text, options).run()), sig_(sig) {
    for (const auto& t : tokens_)
      if (t.kind == Token::Kind::Ident) identifiers_.insert(t.text);
  }

  SourceFile file() {
    SourceFile f;
    while (!at_end()) f.declarations.push_back(declaration());
    return f;
  }

  Term single_term() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  using Binders = std::vector<std::pair<Name, Term>>;

  //--- token helpers

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is_symbol(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Symbol && peek(ahead).text == s;
  }
  bool is_keyword(const char* s) const {
    return peek().kind == Token::Kind::Keyword && peek().text == s;
  }
  bool is_ident(std::size_t ahead = 0) const { return peek(ahead).kind == Token::Kind::Ident; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += "`" + expected[i] + "`";
    }
    const Token& t = peek();
    msg += t.kind == Token::Kind::End ? ", found end of input" : ", found `" + t.text + "`";
    throw ParseError(t.loc, msg, std::move(expected));
  }

  void expect_symbol(const char* s) {
    if (!is_symbol(s)) fail({s});
    ++pos_;
  }
  void expect_keyword(const char* s) {
    if (!is_keyword(s)) fail({s});
    ++pos_;
  }
  void expect_end() {
    if (!at_end()) fail({"end of input"});
  }
  Token expect_ident() {
    if (!is_ident()) fail({"identifier"});
    return tokens_[pos_++];
  }

  //--- scopes

  /// Core name for a new binder: the surface name unless it would shadow
  /// something visible.
  Name core_name(const Name& surface, const std::set<Name>& extra = {}) const {
    if (surface == "_") return surface;
    if (sort_literal(Token{Token::Kind::Ident, surface, peek().loc}))
      throw ParseError(peek().loc, "`" + surface + "` is a sort and cannot be bound");
    auto taken = [&](const Name& n) {
      if (extra.count(n) || sig_.kind(n)) return true;
      for (const auto& [s, c] : scope_)
        if (c == n) return true;
      return false;
    };
    if (!taken(surface)) return surface;
    return fresh_name(surface, [&](const Name& n) { return taken(n) || identifiers_.count(n); });
  }

  void push(const Name& surface, const Name& core) { scope_.emplace_back(surface, core); }
  void pop(std::size_t n = 1) { scope_.resize(scope_.size() - n); }

  Term resolve(const Token& tok) const {
    const Name& id = tok.text;
    if (id == "_") throw ParseError(tok.loc, "`_` cannot be used as a term");
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == id) return var(it->second);
    if (auto k = sig_.kind(id)) {
      switch (*k) {
        case Signature::Kind::Inductive: return ind(id);
        case Signature::Kind::Constructor: return constr(id);
        case Signature::Kind::Definition: return constant(id);
      }
    }
    return var(id);  // unbound; the kernel reports it
  }

  std::optional<Sort> sort_literal(const Token& tok) const {
    if (tok.kind != Token::Kind::Ident) return std::nullopt;
    const std::string& s = tok.text;
    auto level = [&](std::size_t prefix) -> std::optional<unsigned> {
      if (s.size() == prefix) throw ParseError(tok.loc, "universe level required after `" + s + "`");
      for (std::size_t i = prefix; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      return static_cast<unsigned>(std::stoul(s.substr(prefix)));
    };
    if (s == "Prop") return Sort::prop();
    if (s.rfind("Set", 0) == 0) {
      if (auto l = level(3)) return Sort::set(*l);
    } else if (s.rfind("Type", 0) == 0) {
      if (auto l = level(4)) {
        if (*l == 0) throw ParseError(tok.loc, "Type0 is not a sort; use Set0 or Type1");
        return Sort::type(*l);
      }
    }
    return std::nullopt;
  }

  //--- binders

  /// One or more `(x y : A)` groups. Pushes the binders; the caller pops.
  Binders binder_groups(const std::set<Name>& extra = {}) {
    Binders out;
    if (!is_symbol("(")) fail({"("});
    while (is_symbol("(")) {
      ++pos_;
      std::vector<Token> names;
      do names.push_back(expect_ident());
      while (is_ident());
      expect_symbol(":");
      Term type = term();
      expect_symbol(")");
      for (const auto& n : names) {
        Name core = core_name(n.text, extra);
        push(n.text, core);
        out.emplace_back(core, type);
      }
    }
    return out;
  }

  static Term close_prod(const Binders& bs, Term body) {
    for (auto it = bs.rbegin(); it != bs.rend(); ++it) body = prod(it->first, it->second, body);
    return body;
  }
  static Term close_lam(const Binders& bs, Term body) {
    for (auto it = bs.rbegin(); it != bs.rend(); ++it) body = lam(it->first, it->second, body);
    return body;
  }

  //--- terms

  Term term() {
    if (is_keyword("forall")) {
      ++pos_;
      Binders bs = binder_groups();
      expect_symbol(",");
      Term body = term();
      pop(bs.size());
      return close_prod(bs, body);
    }
    if (is_keyword("fun")) {
      ++pos_;
      Binders bs = binder_groups();
      expect_symbol("=>");
      Term body = term();
      pop(bs.size());
      return close_lam(bs, body);
    }
    if (is_keyword("fix")) return fixpoint();
    Term lhs = application();
    if (is_symbol("->")) {
      ++pos_;
      return arrow(lhs, term());
    }
    return lhs;
  }

  bool atom_start() const {
    if (is_ident()) return peek().text != "_";
    return is_symbol("(") || is_keyword("match");
  }

  Term application() {
    if (!atom_start()) fail({"term"});
    Term t = atom();
    while (atom_start()) t = app(t, atom());
    return t;
  }

  Term atom() {
    if (is_keyword("match")) return match();
    if (is_symbol("(")) {
      ++pos_;
      Term t = term();
      expect_symbol(")");
      return t;
    }
    Token tok = expect_ident();
    if (auto s = sort_literal(tok)) return sort(*s);
    return resolve(tok);
  }

  Term fixpoint() {
    expect_keyword("fix");
    const Token f = expect_ident();
    const Name f_core = core_name(f.text);

    if (is_symbol("{")) {
      ++pos_;
      expect_keyword("struct");
      if (peek().kind != Token::Kind::Number) fail({"argument index"});
      const std::size_t k = std::stoul(tokens_[pos_++].text);
      expect_symbol("}");
      expect_symbol(":");
      Term annotation = term();
      expect_symbol(":=");
      push(f.text, f_core);
      Term body = term();
      pop();
      return fix(f_core, annotation, body, k);
    }

    const std::size_t mark = scope_.size();
    Binders bs = binder_groups({f_core});
    std::vector<Name> surface;
    for (std::size_t i = mark; i < scope_.size(); ++i) surface.push_back(scope_[i].first);
    expect_symbol("{");
    expect_keyword("struct");
    const Token s = expect_ident();
    std::optional<std::size_t> k;
    for (std::size_t i = 0; i < surface.size(); ++i)
      if (surface[i] == s.text) k = i;
    if (!k) throw ParseError(s.loc, "`" + s.text + "` is not an argument of the fixpoint");
    expect_symbol("}");
    expect_symbol(":");
    Term result = term();
    expect_symbol(":=");
    pop(bs.size());
    push(f.text, f_core);
    for (std::size_t i = 0; i < bs.size(); ++i) push(surface[i], bs[i].first);
    Term body = term();
    pop(bs.size() + 1);
    return fix(f_core, close_prod(bs, result), close_lam(bs, body), *k);
  }

  Term match() {
    expect_keyword("match");
    Term scrutinee = term();
    std::optional<Token> as_name;
    if (is_keyword("as")) {
      ++pos_;
      as_name = expect_ident();
    }
    expect_keyword("in");
    const Token ind_tok = expect_ident();
    const Name ind_name = ind_tok.text;

    std::vector<Term> params;
    while (atom_start() && !(is_symbol("(") && is_ident(1) && is_symbol(":", 2)))
      params.push_back(atom());

    Term motive;
    if (is_keyword("motive")) {
      if (as_name) throw ParseError(as_name->loc, "`as` cannot be combined with `motive`");
      ++pos_;
      motive = term();
    } else {
      Binders indices;
      if (is_symbol("(")) indices = binder_groups();
      expect_keyword("return");
      std::vector<Term> args = params;
      for (const auto& [y, ty] : indices) args.push_back(var(y));
      const Name x_surface = as_name ? as_name->text : "_";
      const Name x_core = core_name(x_surface);
      push(x_surface, x_core);
      Term result = term();
      pop(indices.size() + 1);
      motive = close_lam(indices, lam(x_core, app(ind(ind_name), args), result));
    }
    expect_keyword("with");

    std::vector<Branch> branches;
    if (is_symbol("|")) ++pos_;
    if (!is_keyword("end")) {
      branches.push_back(branch(params));
      while (is_symbol("|")) {
        ++pos_;
        branches.push_back(branch(params));
      }
    }
    expect_keyword("end");

    // Canonical constructor order when the inductive is known.
    if (const InductiveDecl* d = sig_.inductive(ind_name);
        d && branches.size() == d->constructors.size()) {
      std::vector<Branch> ordered(branches.size());
      std::vector<bool> filled(branches.size(), false);
      bool ok = true;
      for (auto& b : branches) {
        auto o = sig_.owner(b.constructor);
        if (!o || o->first != ind_name || filled[o->second]) {
          ok = false;
          break;
        }
        filled[o->second] = true;
        ordered[o->second] = b;
      }
      if (ok) branches = std::move(ordered);
    }
    return case_of(ind_name, scrutinee, std::move(params), motive, std::move(branches));
  }

  Branch branch(const std::vector<Term>& params) {
    const Token c = expect_ident();
    // Telescope of the constructor's arguments, when known.
    std::optional<Term> remaining;
    if (auto o = sig_.owner(c.text)) {
      const InductiveDecl* d = sig_.inductive(o->first);
      Term t = d->constructors[o->second].type;
      bool ok = params.size() == d->params;
      for (std::size_t i = 0; ok && i < params.size(); ++i) {
        const auto* p = t.as<Prod>();
        if (p == nullptr) {
          ok = false;
          break;
        }
        t = subst(p->codomain, p->binder, params[i]);
      }
      if (ok) remaining = t;
    }
    Binders bs;
    auto advance_telescope = [&](const Name& core) {
      if (!remaining) return;
      const auto* p = remaining->as<Prod>();
      if (p == nullptr) {
        remaining.reset();
        return;
      }
      remaining = subst(p->codomain, p->binder, var(core));
    };
    while (!is_symbol("=>")) {
      if (is_symbol("(")) {
        ++pos_;
        std::vector<Token> names;
        do names.push_back(expect_ident());
        while (is_ident());
        expect_symbol(":");
        Term type = term();
        expect_symbol(")");
        for (const auto& n : names) {
          Name core = core_name(n.text);
          push(n.text, core);
          bs.emplace_back(core, type);
          advance_telescope(core);
        }
      } else if (is_ident()) {
        const Token n = tokens_[pos_++];
        const auto* p = remaining ? remaining->as<Prod>() : nullptr;
        if (p == nullptr)
          throw ParseError(n.loc, "cannot infer the type of pattern variable `" + n.text +
                                      "`; annotate it as (" + n.text + " : T)");
        Name core = core_name(n.text);
        Term type = p->domain;
        push(n.text, core);
        bs.emplace_back(core, type);
        advance_telescope(core);
      } else {
        fail({"pattern variable", "=>"});
      }
    }
    expect_symbol("=>");
    Term body = term();
    pop(bs.size());
    return Branch{c.text, close_lam(bs, body)};
  }

  //--- declarations

  Declaration declaration() {
    Declaration d;
    d.location = peek().loc;
    if (is_keyword("inductive")) {
      ++pos_;
      d.kind = Declaration::Kind::Inductive;
      const Token name = expect_ident();
      d.name = name.text;
      Binders params;
      if (is_symbol("(")) params = binder_groups();
      expect_symbol(":");
      Term arity = term();
      InductiveDecl decl{name.text, params.size(), close_prod(params, arity), {}};
      // The inductive is visible in its own constructor types.
      Signature saved = sig_;
      sig_.add(decl);
      expect_symbol(":=");
      if (is_symbol("|")) ++pos_;
      if (!is_symbol(".")) {
        while (true) {
          const Token c = expect_ident();
          expect_symbol(":");
          Term ty = term();
          decl.constructors.push_back({c.text, close_prod(params, ty)});
          if (!is_symbol("|")) break;
          ++pos_;
        }
      }
      expect_symbol(".");
      pop(params.size());
      sig_ = std::move(saved);
      sig_.add(decl);
      d.inductive = std::move(decl);
      return d;
    }
    if (is_keyword("def")) {
      ++pos_;
      d.kind = Declaration::Kind::Definition;
      const Token name = expect_ident();
      d.name = name.text;
      Binders params;
      if (is_symbol("(")) params = binder_groups();
      expect_symbol(":");
      Term type = term();
      expect_symbol(":=");
      Term body = term();
      expect_symbol(".");
      pop(params.size());
      d.definition = {name.text, close_prod(params, type), close_lam(params, body)};
      sig_.add_definition(name.text);
      return d;
    }
    if (is_keyword("check")) {
      ++pos_;
      d.kind = Declaration::Kind::Check;
      d.term = term();
      expect_symbol(".");
      return d;
    }
    if (is_keyword("param-check")) {
      ++pos_;
      d.kind = Declaration::Kind::ParamCheck;
      d.name = expect_ident().text;
      expect_symbol(".");
      return d;
    }
    fail({"inductive", "def", "check", "param-check"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Signature& sig_;
  std::vector<std::pair<Name, Name>> scope_;  // (surface, core)
  std::set<Name> identifiers_;
};

}  // namespace detail

/// Parses a whole file. Declared names are added to `sig` so later files
/// can refer to them.
inline SourceFile parse(std::string_view text, Signature& sig, ParseOptions options = {}) {
  return detail::Parser(text, sig, options).file();
}

inline SourceFile parse(std::string_view text, ParseOptions options = {}) {
  Signature sig;
  return parse(text, sig, options);
}

/// Parses a single term against the globals in `sig`.
inline Term parse_term(std::string_view text, const Signature& sig = {}, ParseOptions options = {}) {
  Signature copy = sig;
  return detail::Parser(text, copy, options).single_term();
}

inline Term parse_term(std::string_view text, const GlobalEnv& env, ParseOptions options = {}) {
  return parse_term(text, Signature::from(env), options);
}

}  // namespace rcic

#endif  // RCIC_PARSE_HPP
