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

// Type-checking kernel: sort rules, reduction, conversion, cumulativity,
// typing, and well-formedness of inductive declarations.
//
// Terms are assumed well-scoped; reduction and conversion are only total on
// well-typed input.

#ifndef RCIC_KERNEL_HPP
#define RCIC_KERNEL_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rcic/env.hpp"
#include "rcic/print.hpp"
#include "rcic/syntax.hpp"

namespace rcic {

/// Star restricts strong elimination to small inductives; Full does not.
enum class EliminationMode { Star, Full };

enum class ErrorKind {
  UnboundVariable,
  NotAFunction,
  NotConvertible,
  NotASort,
  IllFormedInductive,
  PositivityViolation,
  GuardViolation,
  NonSmallStrongElim,
  ArityMismatch,
  UniverseError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::NotAFunction: return "NotAFunction";
    case ErrorKind::NotConvertible: return "NotConvertible";
    case ErrorKind::NotASort: return "NotASort";
    case ErrorKind::IllFormedInductive: return "IllFormedInductive";
    case ErrorKind::PositivityViolation: return "PositivityViolation";
    case ErrorKind::GuardViolation: return "GuardViolation";
    case ErrorKind::NonSmallStrongElim: return "NonSmallStrongElim";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UniverseError: return "UniverseError";
  }
  return "?";
}

/// Every kernel rejection. `expected`/`actual` are printed terms when the
/// error is a mismatch.
class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorKind kind, const std::string& message, Term term = {}, std::string expected = {},
            std::string actual = {})
      : std::runtime_error(std::string(rcic::to_string(kind)) + ": " + message),
        kind_(kind),
        term_(std::move(term)),
        expected_(std::move(expected)),
        actual_(std::move(actual)) {}

  ErrorKind kind() const { return kind_; }
  const Term& term() const { return term_; }
  const std::string& expected() const { return expected_; }
  const std::string& actual() const { return actual_; }

  std::optional<SourceLocation> location;

 private:
  ErrorKind kind_;
  Term term_;
  std::string expected_;
  std::string actual_;
};

//------------------------------------------------------------------------------
// Sort rules

inline Sort axiom_sort(Sort s) {
  switch (s.kind()) {
    case Sort::Kind::Prop: return Sort::type(1);
    case Sort::Kind::Set:
    case Sort::Kind::Type: return Sort::type(s.level() + 1);
  }
  return Sort::type(1);
}

/// Sort of `forall x : A, B` where A : domain and B : codomain.
inline Sort sort_of_product(Sort domain, Sort codomain) {
  if (codomain.is_prop()) return codomain;
  if (domain.is_prop()) return codomain;
  const unsigned level = std::max(domain.level(), codomain.level());
  return codomain.is_set() ? Sort::set(level) : Sort::type(level);
}

/// Reflexive-transitive closure of Prop <: Set_1, Set_i <: Set_j and
/// Type_i <: Type_j (i < j). Set and Type are never related.
inline bool subsort(Sort a, Sort b) {
  if (a == b) return true;
  if (a.is_prop()) return b.is_set() && b.level() >= 1;
  if (a.kind() != b.kind()) return false;
  return a.level() <= b.level();
}

/// Sorts of plain CIC: Prop or Type_i with i >= 0.
struct CicSort {
  bool prop = false;
  unsigned level = 0;

  friend bool operator==(const CicSort&, const CicSort&) = default;
  std::string to_string() const { return prop ? "Prop" : "Type" + std::to_string(level); }
};

/// Set_i and Type_i both land on CIC's Type_i; Prop stays Prop.
inline CicSort embed_sort(Sort s) {
  if (s.is_prop()) return {true, 0};
  return {false, s.level()};
}

//------------------------------------------------------------------------------
// Reduction and conversion

namespace detail {

/// Constructor index and arguments when `t` is `c args` for a constructor c.
struct ConstructorApp {
  const GlobalEnv::ConstructorRef ref;
  std::vector<Term> args;
};

inline std::optional<ConstructorApp> as_constructor_app(const GlobalEnv& env, const Term& t) {
  auto sp = spine(t);
  const auto* c = sp.head.as<Constr>();
  if (c == nullptr) return std::nullopt;
  auto ref = env.constructor(c->name);
  if (!ref) return std::nullopt;
  return ConstructorApp{*ref, std::move(sp.args)};
}

}  // namespace detail

/// Weak-head normal form under beta, iota, guarded fix unfolding and (when
/// `delta`) unfolding of global definitions in head position.
inline Term whnf(const GlobalEnv& env, const Term& t, bool delta = true) {
  auto sp = spine(t);
  Term head = sp.head;
  std::vector<Term> args = std::move(sp.args);
  std::size_t next = 0;  // args[next..] are still pending

  auto rest = [&] { return std::vector<Term>(args.begin() + next, args.end()); };
  auto reset = [&](Term h) {
    auto inner = spine(h);
    head = inner.head;
    std::vector<Term> merged = std::move(inner.args);
    merged.insert(merged.end(), args.begin() + next, args.end());
    args = std::move(merged);
    next = 0;
  };

  while (true) {
    if (const auto* l = head.as<Lam>(); l && next < args.size()) {
      Term body = subst(l->body, l->binder, args[next]);
      ++next;
      reset(body);
      continue;
    }
    if (const auto* c = head.as<Case>()) {
      Term scrutinee = whnf(env, c->scrutinee, true);
      auto ctor = detail::as_constructor_app(env, scrutinee);
      if (ctor && ctor->ref.inductive->decl.name == c->ind && ctor->ref.index < c->branches.size()) {
        const std::size_t p = ctor->ref.inductive->decl.params;
        std::vector<Term> ctor_args(ctor->args.begin() + std::min(p, ctor->args.size()),
                                    ctor->args.end());
        reset(app(c->branches[ctor->ref.index].body, ctor_args));
        continue;
      }
      break;
    }
    if (const auto* f = head.as<Fix>(); f && args.size() - next > f->decreasing) {
      Term& rec_arg = args[next + f->decreasing];
      Term reduced = whnf(env, rec_arg, true);
      if (!detail::as_constructor_app(env, reduced)) break;
      rec_arg = reduced;
      reset(subst(f->body, f->binder, head));
      continue;
    }
    if (const auto* k = head.as<Const>(); k && delta) {
      const Definition* d = env.definition(k->name);
      if (d == nullptr) break;
      reset(d->body);
      continue;
    }
    break;
  }
  return app(head, rest());
}

/// Full beta normal form; no delta, iota or fix unfolding.
inline Term beta_normalize(const Term& t) {
  return std::visit(
      [&](const auto& n) -> Term {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, App>) {
          Term fn = beta_normalize(n.fn);
          Term arg = beta_normalize(n.arg);
          if (const auto* l = fn.as<Lam>()) return beta_normalize(subst(l->body, l->binder, arg));
          return app(std::move(fn), std::move(arg));
        } else if constexpr (std::is_same_v<T, Prod>) {
          return prod(n.binder, beta_normalize(n.domain), beta_normalize(n.codomain));
        } else if constexpr (std::is_same_v<T, Lam>) {
          return lam(n.binder, beta_normalize(n.annotation), beta_normalize(n.body));
        } else if constexpr (std::is_same_v<T, Case>) {
          std::vector<Term> params;
          for (const auto& p : n.params) params.push_back(beta_normalize(p));
          std::vector<Branch> branches;
          for (const auto& b : n.branches) branches.push_back({b.constructor, beta_normalize(b.body)});
          return case_of(n.ind, beta_normalize(n.scrutinee), std::move(params),
                         beta_normalize(n.motive), std::move(branches));
        } else if constexpr (std::is_same_v<T, Fix>) {
          return fix(n.binder, beta_normalize(n.annotation), beta_normalize(n.body), n.decreasing);
        } else {
          return t;
        }
      },
      t.node().value);
}

namespace detail {

class Converter {
 public:
  explicit Converter(const GlobalEnv& env) : env_(env) {}

  bool conv(const Term& a, const Term& b) {
    if (alpha_eq(a, b)) return true;
    Term wa = whnf(env_, a, false);
    Term wb = whnf(env_, b, false);
    if (structural(wa, wb)) return true;
    // Lazy delta: unfold whichever side is headed by a definition.
    bool unfolded = false;
    if (auto u = unfold(wa)) {
      wa = *u;
      unfolded = true;
    }
    if (auto u = unfold(wb)) {
      wb = *u;
      unfolded = true;
    }
    if (unfolded) return conv(wa, wb);
    // A stuck fixpoint equals its unfolding; bounded so conversion terminates.
    if (fuel_ == 0) return false;
    if (auto u = unfold_fix(wa)) {
      wa = *u;
      unfolded = true;
    }
    if (auto u = unfold_fix(wb)) {
      wb = *u;
      unfolded = true;
    }
    if (!unfolded) return false;
    --fuel_;
    return conv(wa, wb);
  }

  bool subtype(const Term& a, const Term& b) {
    if (conv(a, b)) return true;
    Term wa = whnf(env_, a, true);
    Term wb = whnf(env_, b, true);
    if (const auto* sa = wa.as<SortTerm>()) {
      const auto* sb = wb.as<SortTerm>();
      return sb != nullptr && subsort(sa->sort, sb->sort);
    }
    const auto* pa = wa.as<Prod>();
    const auto* pb = wb.as<Prod>();
    if (pa == nullptr || pb == nullptr) return false;
    if (!conv(pa->domain, pb->domain)) return false;
    auto [ca, cb] = open_pair(pa->binder, pa->codomain, pb->binder, pb->codomain);
    return subtype(ca, cb);
  }

 private:
  std::optional<Term> unfold(const Term& t) const {
    auto sp = spine(t);
    const auto* k = sp.head.as<Const>();
    if (k == nullptr) return std::nullopt;
    const Definition* d = env_.definition(k->name);
    if (d == nullptr) return std::nullopt;
    return whnf(env_, app(d->body, sp.args), false);
  }

  std::optional<Term> unfold_fix(const Term& t) const {
    auto sp = spine(t);
    const auto* f = sp.head.as<Fix>();
    if (f == nullptr || sp.args.size() <= f->decreasing) return std::nullopt;
    return whnf(env_, app(subst(f->body, f->binder, sp.head), sp.args), false);
  }

  static std::pair<Term, Term> open_pair(const Name& x, const Term& a, const Name& y,
                                         const Term& b) {
    if (x == y) return {a, b};
    auto fa = free_vars(a);
    auto fb = free_vars(b);
    if (!fa.count(y)) return {subst(a, x, var(y)), b};
    Name z = fresh_name(x, [&](const Name& n) { return fa.count(n) || fb.count(n); });
    return {subst(a, x, var(z)), subst(b, y, var(z))};
  }

  bool structural(const Term& a, const Term& b) {
    if (const auto* sa = a.as<SortTerm>()) {
      const auto* sb = b.as<SortTerm>();
      return sb != nullptr && sa->sort == sb->sort;
    }
    if (const auto* pa = a.as<Prod>()) {
      const auto* pb = b.as<Prod>();
      if (pb == nullptr || !conv(pa->domain, pb->domain)) return false;
      auto [ca, cb] = open_pair(pa->binder, pa->codomain, pb->binder, pb->codomain);
      return conv(ca, cb);
    }
    if (const auto* la = a.as<Lam>()) {
      const auto* lb = b.as<Lam>();
      if (lb == nullptr || !conv(la->annotation, lb->annotation)) return false;
      auto [ba, bb] = open_pair(la->binder, la->body, lb->binder, lb->body);
      return conv(ba, bb);
    }
    auto sa = spine(a);
    auto sb = spine(b);
    if (sa.args.size() != sb.args.size()) return false;
    if (!heads(sa.head, sb.head)) return false;
    for (std::size_t i = 0; i < sa.args.size(); ++i)
      if (!conv(sa.args[i], sb.args[i])) return false;
    return true;
  }

  bool heads(const Term& a, const Term& b) {
    if (const auto* x = a.as<Var>()) {
      const auto* y = b.as<Var>();
      return y && x->name == y->name;
    }
    if (const auto* x = a.as<Ind>()) {
      const auto* y = b.as<Ind>();
      return y && x->name == y->name;
    }
    if (const auto* x = a.as<Constr>()) {
      const auto* y = b.as<Constr>();
      return y && x->name == y->name;
    }
    if (const auto* x = a.as<Const>()) {
      const auto* y = b.as<Const>();
      return y && x->name == y->name;
    }
    if (const auto* x = a.as<Case>()) {
      const auto* y = b.as<Case>();
      if (!y || x->ind != y->ind || x->params.size() != y->params.size() ||
          x->branches.size() != y->branches.size())
        return false;
      if (!conv(x->scrutinee, y->scrutinee) || !conv(x->motive, y->motive)) return false;
      for (std::size_t i = 0; i < x->params.size(); ++i)
        if (!conv(x->params[i], y->params[i])) return false;
      for (std::size_t i = 0; i < x->branches.size(); ++i)
        if (!conv(x->branches[i].body, y->branches[i].body)) return false;
      return true;
    }
    if (const auto* x = a.as<Fix>()) {
      const auto* y = b.as<Fix>();
      if (!y || x->decreasing != y->decreasing || !conv(x->annotation, y->annotation)) return false;
      auto [ba, bb] = open_pair(x->binder, x->body, y->binder, y->body);
      return conv(ba, bb);
    }
    return false;
  }

  const GlobalEnv& env_;
  std::size_t fuel_ = 64;
};

}  // namespace detail

/// Common reduct under beta/iota/fix/delta, up to alpha. Stuck fixpoints
/// may additionally be unfolded a bounded number of times. No eta.
inline bool conv(const GlobalEnv& env, const Term& a, const Term& b) {
  return detail::Converter(env).conv(a, b);
}

/// Cumulativity: conversion, sort inclusion, and products with convertible
/// domains and covariant codomains.
inline bool subtype(const GlobalEnv& env, const Term& a, const Term& b) {
  return detail::Converter(env).subtype(a, b);
}

//------------------------------------------------------------------------------
// Typing

namespace detail {

struct Telescope {
  std::vector<std::pair<Name, Term>> binders;
  Term conclusion;
};

class Checker {
 public:
  Checker(const GlobalEnv& env, Context ctx, EliminationMode mode)
      : env_(env), ctx_(std::move(ctx)), mode_(mode) {}

  Term infer(const Term& t) {
    return std::visit([&](const auto& n) -> Term { return infer_node(t, n); }, t.node().value);
  }

  Sort infer_sort(const Term& t) {
    Term ty = whnf(env_, infer(t));
    const auto* s = ty.as<SortTerm>();
    if (s == nullptr)
      throw TypeError(ErrorKind::NotASort, "expected a type, got a term of type " + print(ty), t,
                      "a sort", print(ty));
    return s->sort;
  }

  void check(const Term& t, const Term& expected) {
    Term actual = infer(t);
    if (!subtype(env_, actual, expected))
      throw TypeError(ErrorKind::NotConvertible,
                      "`" + print(t) + "` has type `" + print(actual) + "` but `" + print(expected) +
                          "` was expected",
                      t, print(expected), print(actual));
  }

  /// Decomposes the product telescope of `t` (whnf at each step), renaming
  /// binders so they can be pushed onto the context. Stops after `max`
  /// binders when given.
  Telescope telescope(Term t, std::optional<std::size_t> max = std::nullopt) {
    Telescope tel;
    while (!max || tel.binders.size() < *max) {
      Term w = whnf(env_, t);
      const auto* p = w.as<Prod>();
      if (p == nullptr) {
        t = w;
        break;
      }
      auto [x, body] = open(p->binder, p->codomain);
      tel.binders.emplace_back(x, p->domain);
      ctx_.push(x, p->domain);
      t = body;
    }
    for (std::size_t i = 0; i < tel.binders.size(); ++i) ctx_.pop();
    tel.conclusion = t;
    return tel;
  }

  Context& context() { return ctx_; }
  const GlobalEnv& env() const { return env_; }

  /// A name for `x` that is not yet in the context; substitutes it into
  /// `body` when a rename is needed.
  std::pair<Name, Term> open(const Name& x, const Term& body) {
    if (x != "_" && !ctx_.contains(x)) return {x, body};
    if (x == "_" && !occurs_free(x, body) && !ctx_.contains(x)) return {x, body};
    auto fv = free_vars(body);
    Name z = fresh_name(x, [&](const Name& n) { return ctx_.contains(n) || fv.count(n) > 0; });
    return {z, subst(body, x, var(z))};
  }

 private:
  struct Scope {
    Scope(Context& ctx, Name x, Term type) : ctx_(ctx) { ctx_.push(std::move(x), std::move(type)); }
    ~Scope() { ctx_.pop(); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;
    Context& ctx_;
  };

  Term infer_node(const Term& t, const Var& v) {
    const Term* ty = ctx_.lookup(v.name);
    if (ty == nullptr)
      throw TypeError(ErrorKind::UnboundVariable, "unbound variable `" + v.name + "`", t);
    return *ty;
  }

  Term infer_node(const Term&, const SortTerm& s) { return sort(axiom_sort(s.sort)); }

  Term infer_node(const Term&, const Prod& p) {
    const Sort dom = infer_sort(p.domain);
    auto [x, body] = open(p.binder, p.codomain);
    Scope scope(ctx_, x, p.domain);
    const Sort cod = infer_sort(body);
    return sort(sort_of_product(dom, cod));
  }

  Term infer_node(const Term&, const Lam& l) {
    infer_sort(l.annotation);
    auto [x, body] = open(l.binder, l.body);
    Scope scope(ctx_, x, l.annotation);
    return prod(x, l.annotation, infer(body));
  }

  Term infer_node(const Term& t, const App& a) {
    Term fn_type = whnf(env_, infer(a.fn));
    const auto* p = fn_type.as<Prod>();
    if (p == nullptr)
      throw TypeError(ErrorKind::NotAFunction,
                      "`" + print(a.fn) + "` of type `" + print(fn_type) + "` is applied to `" +
                          print(a.arg) + "`",
                      t);
    check(a.arg, p->domain);
    return subst(p->codomain, p->binder, a.arg);
  }

  Term infer_node(const Term& t, const Ind& i) {
    const InductiveInfo* info = env_.inductive(i.name);
    if (info == nullptr)
      throw TypeError(ErrorKind::UnboundVariable, "unknown inductive `" + i.name + "`", t);
    return info->decl.arity;
  }

  Term infer_node(const Term& t, const Constr& c) {
    auto ref = env_.constructor(c.name);
    if (!ref) throw TypeError(ErrorKind::UnboundVariable, "unknown constructor `" + c.name + "`", t);
    return ref->inductive->decl.constructors[ref->index].type;
  }

  Term infer_node(const Term& t, const Const& k) {
    const Definition* d = env_.definition(k.name);
    if (d == nullptr)
      throw TypeError(ErrorKind::UnboundVariable, "unknown definition `" + k.name + "`", t);
    return d->type;
  }

  Term infer_node(const Term& t, const Case& c);
  Term infer_node(const Term& t, const Fix& f);

  const GlobalEnv& env_;
  Context ctx_;
  EliminationMode mode_;
};

/// Instantiates the leading binders of `t` with `args`, whnf-ing between steps.
inline Term instantiate(const GlobalEnv& env, Term t, const std::vector<Term>& args) {
  for (const auto& a : args) {
    Term w = whnf(env, t);
    const auto* p = w.as<Prod>();
    if (p == nullptr) throw TypeError(ErrorKind::ArityMismatch, "too many arguments", t);
    t = subst(p->codomain, p->binder, a);
  }
  return t;
}

inline Term Checker::infer_node(const Term& t, const Case& c) {
  const InductiveInfo* info = env_.inductive(c.ind);
  if (info == nullptr)
    throw TypeError(ErrorKind::UnboundVariable, "case over unknown inductive `" + c.ind + "`", t);
  const InductiveDecl& decl = info->decl;
  if (c.params.size() != decl.params)
    throw TypeError(ErrorKind::ArityMismatch,
                    "case over `" + c.ind + "` expects " + std::to_string(decl.params) +
                        " parameters, got " + std::to_string(c.params.size()),
                    t);
  if (c.branches.size() != decl.constructors.size())
    throw TypeError(ErrorKind::ArityMismatch,
                    "case over `" + c.ind + "` expects " + std::to_string(decl.constructors.size()) +
                        " branches, got " + std::to_string(c.branches.size()),
                    t);

  // Parameters are checked against the arity, the scrutinee against I params indices.
  {
    Term arity = decl.arity;
    for (const auto& q : c.params) {
      Term w = whnf(env_, arity);
      const auto* p = w.as<Prod>();
      if (p == nullptr) throw TypeError(ErrorKind::ArityMismatch, "arity too short", t);
      check(q, p->domain);
      arity = subst(p->codomain, p->binder, q);
    }
  }
  Term scrut_type = whnf(env_, infer(c.scrutinee));
  auto scrut = spine(scrut_type);
  const auto* head = scrut.head.as<Ind>();
  if (head == nullptr || head->name != c.ind || scrut.args.size() != decl.params + info->indices)
    throw TypeError(ErrorKind::NotConvertible,
                    "scrutinee `" + print(c.scrutinee) + "` has type `" + print(scrut_type) +
                        "`, not an instance of `" + c.ind + "`",
                    t, c.ind, print(scrut_type));
  for (std::size_t i = 0; i < decl.params; ++i)
    if (!conv(env_, scrut.args[i], c.params[i]))
      throw TypeError(ErrorKind::NotConvertible,
                      "case parameter `" + print(c.params[i]) + "` does not match `" +
                          print(scrut.args[i]) + "`",
                      t, print(scrut.args[i]), print(c.params[i]));
  const std::vector<Term> indices(scrut.args.begin() + decl.params, scrut.args.end());

  // Motive : forall (y : Y[params]) .. (x : I params y), s
  Sort result_sort = Sort::prop();
  {
    Term motive_type = infer(c.motive);
    Term expected_dom = instantiate(env_, decl.arity, c.params);
    std::vector<Term> index_vars;
    std::size_t pushed = 0;
    for (std::size_t j = 0; j <= info->indices; ++j) {
      Term w = whnf(env_, motive_type);
      const auto* p = w.as<Prod>();
      if (p == nullptr) {
        for (; pushed > 0; --pushed) ctx_.pop();
        throw TypeError(ErrorKind::ArityMismatch, "motive `" + print(c.motive) +
                                                      "` takes too few arguments",
                        t);
      }
      Term want;
      if (j < info->indices) {
        Term we = whnf(env_, expected_dom);
        const auto* ep = we.as<Prod>();
        want = ep->domain;
        auto [y, rest] = open(p->binder, p->codomain);
        expected_dom = subst(ep->codomain, ep->binder, var(y));
        index_vars.push_back(var(y));
        if (!conv(env_, p->domain, want)) {
          for (; pushed > 0; --pushed) ctx_.pop();
          throw TypeError(ErrorKind::NotConvertible, "motive index type mismatch", t, print(want),
                          print(p->domain));
        }
        ctx_.push(y, p->domain);
        ++pushed;
        motive_type = rest;
      } else {
        std::vector<Term> args = c.params;
        args.insert(args.end(), index_vars.begin(), index_vars.end());
        want = app(ind(c.ind), args);
        if (!conv(env_, p->domain, want)) {
          for (; pushed > 0; --pushed) ctx_.pop();
          throw TypeError(ErrorKind::NotConvertible,
                          "motive must abstract over `" + print(want) + "`", t, print(want),
                          print(p->domain));
        }
        auto [x, rest] = open(p->binder, p->codomain);
        ctx_.push(x, p->domain);
        ++pushed;
        Term w2 = whnf(env_, rest);
        const auto* s = w2.as<SortTerm>();
        if (s == nullptr) {
          for (; pushed > 0; --pushed) ctx_.pop();
          throw TypeError(ErrorKind::NotASort, "motive must return a sort", t);
        }
        result_sort = s->sort;
      }
    }
    for (; pushed > 0; --pushed) ctx_.pop();
  }
  if (mode_ == EliminationMode::Star && result_sort.is_type() && !info->small)
    throw TypeError(ErrorKind::NonSmallStrongElim,
                    "strong elimination of non-small inductive `" + c.ind + "` into " +
                        result_sort.to_string(),
                    t);

  // Branch i : forall args, motive v (c_i params args)
  for (std::size_t i = 0; i < decl.constructors.size(); ++i) {
    const Constructor& ctor = decl.constructors[i];
    if (c.branches[i].constructor != ctor.name)
      throw TypeError(ErrorKind::ArityMismatch,
                      "branch " + std::to_string(i) + " is for `" + c.branches[i].constructor +
                          "`, expected `" + ctor.name + "`",
                      t);
    Term ctor_type = instantiate(env_, ctor.type, c.params);
    Telescope tel = telescope(ctor_type);
    auto concl = spine(whnf(env_, tel.conclusion));
    std::vector<Term> ctor_indices(concl.args.begin() + std::min(decl.params, concl.args.size()),
                                   concl.args.end());
    std::vector<Term> ctor_args = c.params;
    for (const auto& [x, ty] : tel.binders) ctor_args.push_back(var(x));
    ctor_indices.push_back(app(constr(ctor.name), ctor_args));
    Term expected = app(c.motive, ctor_indices);
    for (auto it = tel.binders.rbegin(); it != tel.binders.rend(); ++it)
      expected = prod(it->first, it->second, expected);
    check(c.branches[i].body, expected);
  }

  std::vector<Term> result_args = indices;
  result_args.push_back(c.scrutinee);
  return app(c.motive, result_args);
}

/// Structural-descent guard for `fix f`: every occurrence of f is applied to
/// at least k+1 arguments and argument k is a variable bound by a recursive
/// constructor argument of a case on the decreasing parameter (or on one of
/// its subterms).
class GuardChecker {
 public:
  GuardChecker(const GlobalEnv& env, Name f, std::size_t k) : env_(env), f_(std::move(f)), k_(k) {}

  void run(const Term& body) {
    Term t = body;
    for (std::size_t i = 0; i <= k_; ++i) {
      const auto* l = t.as<Lam>();
      if (l == nullptr)
        throw TypeError(ErrorKind::GuardViolation,
                        "fixpoint body must abstract over its decreasing argument", body);
      walk(l->annotation);
      if (l->binder == f_) return;  // f is shadowed; no recursive calls possible
      roots_.erase(l->binder);
      if (i == k_) roots_.insert(l->binder);
      t = l->body;
    }
    walk(t);
  }

 private:
  void violation(const Term& t, const std::string& why) {
    throw TypeError(ErrorKind::GuardViolation, "recursive call to `" + f_ + "` " + why, t);
  }

  bool is_var_in(const Term& t, const std::set<Name>& names) const {
    const auto* v = t.as<Var>();
    return v != nullptr && names.count(v->name) > 0;
  }

  // Binder `x` hides f and any tracked variable of the same name.
  template <class F>
  void under(const Name& x, F&& body) {
    if (x == f_) return;
    auto saved_sub = subterms_;
    auto saved_root = roots_;
    subterms_.erase(x);
    roots_.erase(x);
    body();
    subterms_ = std::move(saved_sub);
    roots_ = std::move(saved_root);
  }

  void walk(const Term& t) {
    if (const auto* v = t.as<Var>()) {
      if (v->name == f_) violation(t, "must be applied to its decreasing argument");
      return;
    }
    if (t.is<App>()) {
      auto sp = spine(t);
      if (const auto* h = sp.head.as<Var>(); h && h->name == f_) {
        if (sp.args.size() <= k_) violation(t, "is not applied to its decreasing argument");
        if (!is_var_in(sp.args[k_], subterms_))
          violation(t, "on `" + print(sp.args[k_]) + "`, which is not a structural subterm");
      } else {
        walk(sp.head);
      }
      for (const auto& a : sp.args) walk(a);
      return;
    }
    if (const auto* p = t.as<Prod>()) {
      walk(p->domain);
      under(p->binder, [&] { walk(p->codomain); });
      return;
    }
    if (const auto* l = t.as<Lam>()) {
      walk(l->annotation);
      under(l->binder, [&] { walk(l->body); });
      return;
    }
    if (const auto* f = t.as<Fix>()) {
      walk(f->annotation);
      under(f->binder, [&] { walk(f->body); });
      return;
    }
    if (const auto* c = t.as<Case>()) {
      walk(c->scrutinee);
      for (const auto& q : c->params) walk(q);
      walk(c->motive);
      const bool descends = is_var_in(c->scrutinee, subterms_) || is_var_in(c->scrutinee, roots_);
      const InductiveInfo* info = env_.inductive(c->ind);
      for (std::size_t i = 0; i < c->branches.size(); ++i) {
        if (!descends || info == nullptr || i >= info->constructor_arity.size()) {
          walk(c->branches[i].body);
          continue;
        }
        branch(c->branches[i].body, info->constructor_arity[i], c->ind);
      }
      return;
    }
  }

  // Peels the constructor-argument lambdas of a branch, marking recursive
  // arguments as strict subterms.
  void branch(const Term& t, std::size_t remaining, const Name& ind_name) {
    const auto* l = t.as<Lam>();
    if (remaining == 0 || l == nullptr) {
      walk(t);
      return;
    }
    walk(l->annotation);
    under(l->binder, [&] {
      if (spine(l->annotation).head.is<Ind>() &&
          spine(l->annotation).head.as<Ind>()->name == ind_name)
        subterms_.insert(l->binder);
      branch(l->body, remaining - 1, ind_name);
    });
  }

  const GlobalEnv& env_;
  Name f_;
  std::size_t k_;
  std::set<Name> subterms_;
  std::set<Name> roots_;
};

inline Term Checker::infer_node(const Term& t, const Fix& f) {
  infer_sort(f.annotation);
  Telescope tel = telescope(f.annotation, f.decreasing + 1);
  if (tel.binders.size() <= f.decreasing)
    throw TypeError(ErrorKind::GuardViolation,
                    "fixpoint type has fewer than " + std::to_string(f.decreasing + 1) +
                        " arguments",
                    t);
  {
    // The decreasing argument's type must be an inductive; check it under
    // the preceding binders.
    std::size_t pushed = 0;
    for (std::size_t i = 0; i < f.decreasing; ++i, ++pushed)
      ctx_.push(tel.binders[i].first, tel.binders[i].second);
    Term dom = whnf(env_, tel.binders[f.decreasing].second);
    for (; pushed > 0; --pushed) ctx_.pop();
    if (!spine(dom).head.is<Ind>())
      throw TypeError(ErrorKind::GuardViolation,
                      "decreasing argument of type `" + print(dom) + "` is not inductive", t);
  }
  auto [x, body] = open(f.binder, f.body);
  {
    Scope scope(ctx_, x, f.annotation);
    check(body, f.annotation);
  }
  GuardChecker(env_, x, f.decreasing).run(body);
  return f.annotation;
}

}  // namespace detail

/// Principal type of `t` (whnf-headed) in `ctx`.
inline Term infer(const GlobalEnv& env, const Context& ctx, const Term& t,
                  EliminationMode mode = EliminationMode::Star) {
  return whnf(env, detail::Checker(env, ctx, mode).infer(t));
}

inline Sort infer_sort(const GlobalEnv& env, const Context& ctx, const Term& t,
                       EliminationMode mode = EliminationMode::Star) {
  return detail::Checker(env, ctx, mode).infer_sort(t);
}

/// Throws TypeError unless `t : expected` up to cumulativity.
inline void check(const GlobalEnv& env, const Context& ctx, const Term& t, const Term& expected,
                  EliminationMode mode = EliminationMode::Star) {
  detail::Checker(env, ctx, mode).check(t, expected);
}

inline bool is_small(const GlobalEnv& env, const Name& ind_name) {
  const InductiveInfo* info = env.inductive(ind_name);
  if (info == nullptr)
    throw TypeError(ErrorKind::UnboundVariable, "unknown inductive `" + ind_name + "`");
  return info->small;
}

//------------------------------------------------------------------------------
// Inductive declarations

namespace detail {

/// May an argument of sort `arg` appear in a constructor of an inductive of
/// sort `ind` without raising its level?
inline bool fits(Sort arg, Sort ind) {
  if (ind.is_prop() || arg.is_prop()) return true;
  return subsort(sort_of_product(arg, ind), ind);
}

inline InductiveInfo check_inductive(const GlobalEnv& env, const InductiveDecl& d,
                                     EliminationMode mode) {
  auto ill = [&](const std::string& why, Term t = {}) {
    return TypeError(ErrorKind::IllFormedInductive, "inductive `" + d.name + "`: " + why, t);
  };
  if (env.contains(d.name)) throw ill("name already declared");
  std::set<Name> names{d.name};
  for (const auto& c : d.constructors)
    if (env.contains(c.name) || !names.insert(c.name).second)
      throw ill("constructor name `" + c.name + "` already declared");

  InductiveInfo info;
  info.decl = d;

  Checker arity_checker(env, {}, mode);
  arity_checker.infer_sort(d.arity);
  Telescope arity = arity_checker.telescope(d.arity);
  const Term arity_end = whnf(env, arity.conclusion);
  const auto* arity_sort = arity_end.as<SortTerm>();
  if (arity_sort == nullptr) throw ill("arity does not end in a sort", d.arity);
  if (arity.binders.size() < d.params)
    throw TypeError(ErrorKind::ArityMismatch,
                    "inductive `" + d.name + "` declares " + std::to_string(d.params) +
                        " parameters but its arity has " + std::to_string(arity.binders.size()) +
                        " binders",
                    d.arity);
  info.indices = arity.binders.size() - d.params;
  info.sort = arity_sort->sort;

  // I is visible (without constructors) while its constructors are checked.
  GlobalEnv scratch = env;
  {
    InductiveInfo bare = info;
    bare.decl.constructors.clear();
    scratch.insert(std::move(bare));
  }

  for (const auto& ctor : d.constructors) {
    Checker ck(scratch, {}, mode);
    ck.infer_sort(ctor.type);
    Term t = ctor.type;
    std::vector<Term> param_vars;
    std::size_t pushed = 0;
    auto unwind = [&] {
      for (; pushed > 0; --pushed) ck.context().pop();
    };
    Term arity_rest = d.arity;
    for (std::size_t i = 0; i < d.params; ++i) {
      Term w = whnf(scratch, t);
      const auto* p = w.as<Prod>();
      const Term aw = whnf(scratch, arity_rest);
      const auto* ap = aw.as<Prod>();
      if (p == nullptr || !conv(scratch, p->domain, ap->domain)) {
        unwind();
        throw ill("constructor `" + ctor.name + "` does not share the parameter binders",
                  ctor.type);
      }
      auto [x, body] = ck.open(p->binder, p->codomain);
      arity_rest = subst(ap->codomain, ap->binder, var(x));
      ck.context().push(x, p->domain);
      ++pushed;
      param_vars.push_back(var(x));
      t = body;
    }
    std::size_t nargs = 0;
    while (true) {
      Term w = whnf(scratch, t);
      const auto* p = w.as<Prod>();
      if (p == nullptr) {
        t = w;
        break;
      }
      // Strict positivity of I in the argument type.
      if (mentions_ind(p->domain, d.name)) {
        Term arg = whnf(scratch, p->domain);
        while (const auto* q = arg.as<Prod>()) {
          if (mentions_ind(q->domain, d.name)) {
            unwind();
            throw TypeError(ErrorKind::PositivityViolation,
                            "`" + d.name + "` occurs to the left of an arrow in constructor `" +
                                ctor.name + "`",
                            ctor.type);
          }
          arg = whnf(scratch, q->codomain);
        }
        auto sp = spine(arg);
        const auto* h = sp.head.as<Ind>();
        bool ok = h != nullptr && h->name == d.name && sp.args.size() == d.params + info.indices;
        for (std::size_t i = 0; ok && i < sp.args.size(); ++i) {
          if (i < d.params)
            ok = alpha_eq(sp.args[i], param_vars[i]);
          else
            ok = !mentions_ind(sp.args[i], d.name);
        }
        if (!ok) {
          unwind();
          throw TypeError(ErrorKind::PositivityViolation,
                          "`" + d.name + "` occurs in a non-strictly-positive position in `" +
                              ctor.name + "`",
                          ctor.type);
        }
      }
      const Sort arg_sort = ck.infer_sort(p->domain);
      if (!fits(arg_sort, info.sort)) {
        unwind();
        throw TypeError(ErrorKind::UniverseError,
                        "constructor `" + ctor.name + "` has an argument in " +
                            arg_sort.to_string() + ", too large for " + info.sort.to_string(),
                        ctor.type);
      }
      info.small = info.small && (arg_sort.is_prop() || arg_sort.is_set());
      auto [x, body] = ck.open(p->binder, p->codomain);
      ck.context().push(x, p->domain);
      ++pushed;
      ++nargs;
      t = body;
    }
    unwind();
    auto concl = spine(t);
    const auto* h = concl.head.as<Ind>();
    if (h == nullptr || h->name != d.name || concl.args.size() != d.params + info.indices)
      throw ill("constructor `" + ctor.name + "` must build `" + d.name + "` applied to " +
                    std::to_string(d.params + info.indices) + " arguments",
                ctor.type);
    for (std::size_t i = 0; i < concl.args.size(); ++i) {
      if (i < d.params && !alpha_eq(concl.args[i], param_vars[i]))
        throw ill("constructor `" + ctor.name + "` changes parameter " + std::to_string(i),
                  ctor.type);
      if (i >= d.params && mentions_ind(concl.args[i], d.name))
        throw TypeError(ErrorKind::PositivityViolation,
                        "`" + d.name + "` occurs in an index of `" + ctor.name + "`", ctor.type);
    }
    info.constructor_arity.push_back(nargs);
  }
  return info;
}

}  // namespace detail

/// Accepts `d` or throws TypeError (IllFormedInductive, PositivityViolation,
/// ArityMismatch, UniverseError or a typing error in the arity/constructors).
inline void check_inductive(const GlobalEnv& env, const InductiveDecl& d,
                            EliminationMode mode = EliminationMode::Star) {
  detail::check_inductive(env, d, mode);
}

inline void declare_inductive(GlobalEnv& env, const InductiveDecl& d,
                              EliminationMode mode = EliminationMode::Star) {
  env.insert(detail::check_inductive(env, d, mode));
}

inline void check_definition(const GlobalEnv& env, const Definition& def,
                             EliminationMode mode = EliminationMode::Star) {
  if (env.contains(def.name))
    throw TypeError(ErrorKind::IllFormedInductive, "`" + def.name + "` is already declared");
  infer_sort(env, {}, def.type, mode);
  check(env, {}, def.body, def.type, mode);
}

inline void declare_definition(GlobalEnv& env, const Definition& def,
                               EliminationMode mode = EliminationMode::Star) {
  check_definition(env, def, mode);
  env.insert(def);
}

}  // namespace rcic

#endif  // RCIC_KERNEL_HPP
