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

// Term language: sorts, named-binder terms, capture-avoiding substitution,
// alpha-equivalence and free variables.

#ifndef RCIC_SYNTAX_HPP
#define RCIC_SYNTAX_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rcic {

using Name = std::string;

struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

//------------------------------------------------------------------------------
// Sorts

/// Prop, Set_i (i >= 0) or Type_i (i >= 1). Type_0 cannot be built.
class Sort {
 public:
  enum class Kind : std::uint8_t { Prop, Set, Type };

  static Sort prop() { return Sort(Kind::Prop, 0); }
  static Sort set(unsigned level) { return Sort(Kind::Set, level); }
  static Sort type(unsigned level) {
    if (level == 0) throw std::invalid_argument("Type_0 is not a sort");
    return Sort(Kind::Type, level);
  }

  Kind kind() const { return kind_; }
  /// Zero for Prop.
  unsigned level() const { return level_; }

  bool is_prop() const { return kind_ == Kind::Prop; }
  bool is_set() const { return kind_ == Kind::Set; }
  bool is_type() const { return kind_ == Kind::Type; }

  friend bool operator==(const Sort&, const Sort&) = default;

  std::string to_string() const {
    switch (kind_) {
      case Kind::Prop: return "Prop";
      case Kind::Set: return "Set" + std::to_string(level_);
      case Kind::Type: return "Type" + std::to_string(level_);
    }
    return "?";
  }

 private:
  Sort(Kind kind, unsigned level) : kind_(kind), level_(level) {}

  Kind kind_;
  unsigned level_;
};

//------------------------------------------------------------------------------
// Terms

struct Node;

/// Immutable, shared term handle. A default-constructed Term is empty.
class Term {
 public:
  Term() = default;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const Node& node() const { return *node_; }
  const Node* get() const { return node_.get(); }
  explicit operator bool() const { return node_ != nullptr; }

  template <class T>
  const T* as() const;
  template <class T>
  bool is() const {
    return as<T>() != nullptr;
  }

 private:
  std::shared_ptr<const Node> node_;
};

struct Var {
  Name name;
};
struct SortTerm {
  Sort sort;
};
struct Prod {
  Name binder;
  Term domain;
  Term codomain;
};
struct Lam {
  Name binder;
  Term annotation;
  Term body;
};
struct App {
  Term fn;
  Term arg;
};
/// Inductive type name.
struct Ind {
  Name name;
};
/// Constructor name.
struct Constr {
  Name name;
};
/// Reference to a checked global definition.
struct Const {
  Name name;
};

/// One case branch. The body is a function over the constructor's
/// non-parameter arguments.
struct Branch {
  Name constructor;
  Term body;
};

struct Case {
  Name ind;
  Term scrutinee;
  std::vector<Term> params;
  /// Function over the indices and the scrutinee, returning the result type.
  Term motive;
  std::vector<Branch> branches;
};

/// fix(binder : annotation). body, recursing structurally on argument
/// `decreasing` (0-based) of the annotation's telescope.
struct Fix {
  Name binder;
  Term annotation;
  Term body;
  std::size_t decreasing = 0;
};

struct Node {
  std::variant<Var, SortTerm, Prod, Lam, App, Ind, Constr, Const, Case, Fix> value;
};

template <class T>
const T* Term::as() const {
  return node_ ? std::get_if<T>(&node_->value) : nullptr;
}

namespace detail {
template <class T>
Term make(T&& value) {
  return Term(std::make_shared<const Node>(Node{std::forward<T>(value)}));
}
}  // namespace detail

inline Term var(Name name) { return detail::make(Var{std::move(name)}); }
inline Term sort(Sort s) { return detail::make(SortTerm{s}); }
inline Term prop() { return sort(Sort::prop()); }
inline Term set(unsigned i) { return sort(Sort::set(i)); }
inline Term type(unsigned i) { return sort(Sort::type(i)); }
inline Term prod(Name x, Term a, Term b) {
  return detail::make(Prod{std::move(x), std::move(a), std::move(b)});
}
inline Term arrow(Term a, Term b) { return prod("_", std::move(a), std::move(b)); }
inline Term lam(Name x, Term a, Term b) {
  return detail::make(Lam{std::move(x), std::move(a), std::move(b)});
}
inline Term app(Term f, Term a) { return detail::make(App{std::move(f), std::move(a)}); }
inline Term app(Term f, const std::vector<Term>& args) {
  for (const auto& a : args) f = app(std::move(f), a);
  return f;
}
inline Term ind(Name name) { return detail::make(Ind{std::move(name)}); }
inline Term constr(Name name) { return detail::make(Constr{std::move(name)}); }
inline Term constant(Name name) { return detail::make(Const{std::move(name)}); }
inline Term case_of(Name ind, Term scrutinee, std::vector<Term> params, Term motive,
                    std::vector<Branch> branches) {
  return detail::make(Case{std::move(ind), std::move(scrutinee), std::move(params),
                           std::move(motive), std::move(branches)});
}
inline Term fix(Name f, Term annotation, Term body, std::size_t decreasing) {
  return detail::make(Fix{std::move(f), std::move(annotation), std::move(body), decreasing});
}

/// Head and arguments of an application spine: `h a1 ... an`.
struct Spine {
  Term head;
  std::vector<Term> args;
};

inline Spine spine(Term t) {
  Spine s;
  while (const auto* a = t.as<App>()) {
    s.args.push_back(a->arg);
    t = a->fn;
  }
  s.head = std::move(t);
  std::reverse(s.args.begin(), s.args.end());
  return s;
}

//------------------------------------------------------------------------------
// Free variables

namespace detail {

inline void collect_free(const Term& t, std::vector<Name>& bound, std::set<Name>& out) {
  auto under = [&](const Name& x, const Term& body) {
    bound.push_back(x);
    collect_free(body, bound, out);
    bound.pop_back();
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Var>) {
          if (std::find(bound.begin(), bound.end(), n.name) == bound.end()) out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Prod>) {
          collect_free(n.domain, bound, out);
          under(n.binder, n.codomain);
        } else if constexpr (std::is_same_v<T, Lam>) {
          collect_free(n.annotation, bound, out);
          under(n.binder, n.body);
        } else if constexpr (std::is_same_v<T, App>) {
          collect_free(n.fn, bound, out);
          collect_free(n.arg, bound, out);
        } else if constexpr (std::is_same_v<T, Case>) {
          collect_free(n.scrutinee, bound, out);
          for (const auto& p : n.params) collect_free(p, bound, out);
          collect_free(n.motive, bound, out);
          for (const auto& b : n.branches) collect_free(b.body, bound, out);
        } else if constexpr (std::is_same_v<T, Fix>) {
          collect_free(n.annotation, bound, out);
          under(n.binder, n.body);
        }
      },
      t.node().value);
}

}  // namespace detail

inline std::set<Name> free_vars(const Term& t) {
  std::set<Name> out;
  std::vector<Name> bound;
  detail::collect_free(t, bound, out);
  return out;
}

inline bool occurs_free(const Name& x, const Term& t) { return free_vars(t).count(x) > 0; }

/// Every variable name appearing in `t`, bound or free.
inline void collect_names(const Term& t, std::set<Name>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Var>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Prod>) {
          out.insert(n.binder);
          collect_names(n.domain, out);
          collect_names(n.codomain, out);
        } else if constexpr (std::is_same_v<T, Lam>) {
          out.insert(n.binder);
          collect_names(n.annotation, out);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, App>) {
          collect_names(n.fn, out);
          collect_names(n.arg, out);
        } else if constexpr (std::is_same_v<T, Case>) {
          collect_names(n.scrutinee, out);
          for (const auto& p : n.params) collect_names(p, out);
          collect_names(n.motive, out);
          for (const auto& b : n.branches) collect_names(b.body, out);
        } else if constexpr (std::is_same_v<T, Fix>) {
          out.insert(n.binder);
          collect_names(n.annotation, out);
          collect_names(n.body, out);
        }
      },
      t.node().value);
}

/// Does the global inductive `name` occur anywhere in `t`?
inline bool mentions_ind(const Term& t, const Name& name) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Ind>) {
          return n.name == name;
        } else if constexpr (std::is_same_v<T, Prod>) {
          return mentions_ind(n.domain, name) || mentions_ind(n.codomain, name);
        } else if constexpr (std::is_same_v<T, Lam>) {
          return mentions_ind(n.annotation, name) || mentions_ind(n.body, name);
        } else if constexpr (std::is_same_v<T, App>) {
          return mentions_ind(n.fn, name) || mentions_ind(n.arg, name);
        } else if constexpr (std::is_same_v<T, Case>) {
          if (n.ind == name || mentions_ind(n.scrutinee, name) || mentions_ind(n.motive, name))
            return true;
          for (const auto& p : n.params)
            if (mentions_ind(p, name)) return true;
          for (const auto& b : n.branches)
            if (mentions_ind(b.body, name)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, Fix>) {
          return mentions_ind(n.annotation, name) || mentions_ind(n.body, name);
        } else {
          return false;
        }
      },
      t.node().value);
}

//------------------------------------------------------------------------------
// Fresh names

/// Strips a trailing run of digits: "x12" -> "x". "_" maps to "x".
inline Name name_stem(const Name& base) {
  if (base.empty() || base == "_") return "x";
  std::size_t end = base.size();
  while (end > 1 && std::isdigit(static_cast<unsigned char>(base[end - 1]))) --end;
  return base.substr(0, end);
}

/// First of `stem0, stem1, ...` rejected by neither `taken`.
template <class Taken>
Name fresh_name(const Name& base, Taken&& taken) {
  const Name stem = name_stem(base);
  for (std::size_t i = 0;; ++i) {
    Name candidate = stem + std::to_string(i);
    if (!taken(candidate)) return candidate;
  }
}

inline Name fresh_name(const Name& base, const std::set<Name>& avoid) {
  return fresh_name(base, [&](const Name& n) { return avoid.count(n) > 0; });
}

//------------------------------------------------------------------------------
// Substitution

using Substitution = std::map<Name, Term>;

namespace detail {

class Substituter {
 public:
  explicit Substituter(const Substitution& s) {
    for (const auto& [x, v] : s) {
      const auto fv = free_vars(v);
      range_.insert(fv.begin(), fv.end());
    }
  }

  Term run(const Term& t, const Substitution& s) { return go(t, s, range_); }

 private:
  // `range` over-approximates the free names of the values in `s`.
  Term go(const Term& t, const Substitution& s, const std::set<Name>& range) {
    if (s.empty()) return t;
    return std::visit(
        [&](const auto& n) -> Term {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Var>) {
            auto it = s.find(n.name);
            return it == s.end() ? t : it->second;
          } else if constexpr (std::is_same_v<T, Prod>) {
            auto [x, b] = binder(n.binder, n.codomain, s, range);
            return prod(std::move(x), go(n.domain, s, range), std::move(b));
          } else if constexpr (std::is_same_v<T, Lam>) {
            auto [x, b] = binder(n.binder, n.body, s, range);
            return lam(std::move(x), go(n.annotation, s, range), std::move(b));
          } else if constexpr (std::is_same_v<T, App>) {
            return app(go(n.fn, s, range), go(n.arg, s, range));
          } else if constexpr (std::is_same_v<T, Case>) {
            std::vector<Term> params;
            for (const auto& p : n.params) params.push_back(go(p, s, range));
            std::vector<Branch> branches;
            for (const auto& br : n.branches) branches.push_back({br.constructor, go(br.body, s, range)});
            return case_of(n.ind, go(n.scrutinee, s, range), std::move(params), go(n.motive, s, range),
                           std::move(branches));
          } else if constexpr (std::is_same_v<T, Fix>) {
            auto [x, b] = binder(n.binder, n.body, s, range);
            return fix(std::move(x), go(n.annotation, s, range), std::move(b), n.decreasing);
          } else {
            return t;
          }
        },
        t.node().value);
  }

  std::pair<Name, Term> binder(const Name& x, const Term& body, const Substitution& s,
                               const std::set<Name>& range) {
    Substitution inner = s;
    inner.erase(x);
    if (inner.empty()) return {x, body};
    const auto body_fv = free_vars(body);
    bool hit = false;
    for (const auto& [k, v] : inner) hit = hit || body_fv.count(k) > 0;
    if (!hit) return {x, body};
    if (range.count(x) == 0) return {x, go(body, inner, range)};
    Name z = fresh_name(x, [&](const Name& n) {
      return range.count(n) || body_fv.count(n) || inner.count(n) || n == x;
    });
    inner[x] = var(z);
    std::set<Name> wider = range;
    wider.insert(z);
    return {z, go(body, inner, wider)};
  }

  std::set<Name> range_;
};

}  // namespace detail

/// Simultaneous capture-avoiding substitution.
inline Term substitute(const Term& t, const Substitution& s) {
  detail::Substituter sub(s);
  return sub.run(t, s);
}

inline Term subst(const Term& t, const Name& x, const Term& v) { return substitute(t, {{x, v}}); }

//------------------------------------------------------------------------------
// Alpha-equivalence

namespace detail {

class AlphaEq {
 public:
  bool run(const Term& a, const Term& b) {
    if (a.get() == b.get() && left_.empty()) return true;
    const auto& na = a.node().value;
    const auto& nb = b.node().value;
    if (na.index() != nb.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          const auto& y = std::get<T>(nb);
          if constexpr (std::is_same_v<T, Var>) {
            return vars(x.name, y.name);
          } else if constexpr (std::is_same_v<T, SortTerm>) {
            return x.sort == y.sort;
          } else if constexpr (std::is_same_v<T, Prod>) {
            return run(x.domain, y.domain) && under(x.binder, y.binder, x.codomain, y.codomain);
          } else if constexpr (std::is_same_v<T, Lam>) {
            return run(x.annotation, y.annotation) && under(x.binder, y.binder, x.body, y.body);
          } else if constexpr (std::is_same_v<T, App>) {
            return run(x.fn, y.fn) && run(x.arg, y.arg);
          } else if constexpr (std::is_same_v<T, Ind> || std::is_same_v<T, Constr> ||
                               std::is_same_v<T, Const>) {
            return x.name == y.name;
          } else if constexpr (std::is_same_v<T, Case>) {
            if (x.ind != y.ind || x.params.size() != y.params.size() ||
                x.branches.size() != y.branches.size())
              return false;
            if (!run(x.scrutinee, y.scrutinee) || !run(x.motive, y.motive)) return false;
            for (std::size_t i = 0; i < x.params.size(); ++i)
              if (!run(x.params[i], y.params[i])) return false;
            for (std::size_t i = 0; i < x.branches.size(); ++i) {
              if (x.branches[i].constructor != y.branches[i].constructor) return false;
              if (!run(x.branches[i].body, y.branches[i].body)) return false;
            }
            return true;
          } else {
            static_assert(std::is_same_v<T, Fix>);
            return x.decreasing == y.decreasing && run(x.annotation, y.annotation) &&
                   under(x.binder, y.binder, x.body, y.body);
          }
        },
        na);
  }

 private:
  bool under(const Name& x, const Name& y, const Term& a, const Term& b) {
    left_.push_back(x);
    right_.push_back(y);
    const bool ok = run(a, b);
    left_.pop_back();
    right_.pop_back();
    return ok;
  }

  static std::ptrdiff_t depth(const std::vector<Name>& stack, const Name& x) {
    for (std::size_t i = stack.size(); i-- > 0;)
      if (stack[i] == x) return static_cast<std::ptrdiff_t>(stack.size() - i);
    return -1;
  }

  bool vars(const Name& x, const Name& y) const {
    const auto dx = depth(left_, x);
    const auto dy = depth(right_, y);
    if (dx < 0 && dy < 0) return x == y;
    return dx == dy;
  }

  std::vector<Name> left_;
  std::vector<Name> right_;
};

}  // namespace detail

/// Equality up to consistent renaming of bound variables.
inline bool alpha_eq(const Term& a, const Term& b) { return detail::AlphaEq().run(a, b); }

//------------------------------------------------------------------------------
// Binder hygiene

/// Hands out names that collide with nothing it has seen. Names are derived
/// from a stem, never end in a prime or `_R`, so the derived triple of any
/// name it returns is also fresh.
class NameSupply {
 public:
  NameSupply() = default;

  /// Names that must never be generated (but may still be kept as binders).
  void reserve(const Term& t) { collect_names(t, reserved_); }
  void reserve(const Name& n) { reserved_.insert(n); }

  /// Names that are already bound in the enclosing scope.
  void bind(const Name& n) {
    reserved_.insert(n);
    bound_.insert(n);
  }

  Name fresh(const Name& base) {
    Name n = fresh_name(base, [&](const Name& c) {
      return reserved_.count(c) || bound_.count(c) || reserved_.count(c + "'") ||
             reserved_.count(c + "_R");
    });
    bind(n);
    return n;
  }

  /// Renames binders so that every binder in `t` is distinct from every other
  /// binder seen by this supply and from every bound name.
  Term freshen(const Term& t) {
    return std::visit(
        [&](const auto& n) -> Term {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Prod>) {
            auto dom = freshen(n.domain);
            auto [x, b] = open(n.binder, n.codomain);
            return prod(std::move(x), std::move(dom), std::move(b));
          } else if constexpr (std::is_same_v<T, Lam>) {
            auto ann = freshen(n.annotation);
            auto [x, b] = open(n.binder, n.body);
            return lam(std::move(x), std::move(ann), std::move(b));
          } else if constexpr (std::is_same_v<T, App>) {
            return app(freshen(n.fn), freshen(n.arg));
          } else if constexpr (std::is_same_v<T, Case>) {
            std::vector<Term> params;
            for (const auto& p : n.params) params.push_back(freshen(p));
            std::vector<Branch> branches;
            for (const auto& br : n.branches) branches.push_back({br.constructor, freshen(br.body)});
            return case_of(n.ind, freshen(n.scrutinee), std::move(params), freshen(n.motive),
                           std::move(branches));
          } else if constexpr (std::is_same_v<T, Fix>) {
            auto ann = freshen(n.annotation);
            auto [x, b] = open(n.binder, n.body);
            return fix(std::move(x), std::move(ann), std::move(b), n.decreasing);
          } else {
            return t;
          }
        },
        t.node().value);
  }

 private:
  std::pair<Name, Term> open(const Name& x, const Term& body) {
    if (x != "_" && bound_.count(x) == 0 && x.find('\'') == Name::npos &&
        !(x.size() >= 2 && x.compare(x.size() - 2, 2, "_R") == 0)) {
      bind(x);
      return {x, freshen(body)};
    }
    Name z = fresh(x);
    return {z, freshen(subst(body, x, var(z)))};
  }

  std::set<Name> reserved_;
  std::set<Name> bound_;
};

}  // namespace rcic

#endif  // RCIC_SYNTAX_HPP
