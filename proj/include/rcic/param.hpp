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

// Relational parametricity translation [t] and the abstraction check.
//
// Every variable x gives rise to a triple (x, x', x_R); every global g to a
// translated global g_R. Types become binary relations, and relations over
// Prop and Set_i land in Prop.

#ifndef RCIC_PARAM_HPP
#define RCIC_PARAM_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rcic/env.hpp"
#include "rcic/kernel.hpp"
#include "rcic/syntax.hpp"

namespace rcic {

struct NameTriple {
  Name base;
  Name primed;
  Name witness;
};

inline NameTriple triple(const Name& x) { return {x, x + "'", x + "_R"}; }

/// Name of the translation of a global (inductive, constructor or definition).
inline Name relation_name(const Name& g) { return g + "_R"; }

inline Sort hat_sort(Sort s) { return s.is_type() ? s : Sort::prop(); }

/// Renames every variable, free or bound, to its primed copy. Globals are
/// left alone.
inline Term prime(const Term& t) {
  auto p = [](const Name& x) { return x == "_" ? x : x + "'"; };
  return std::visit(
      [&](const auto& n) -> Term {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Var>) {
          return var(p(n.name));
        } else if constexpr (std::is_same_v<T, Prod>) {
          return prod(p(n.binder), prime(n.domain), prime(n.codomain));
        } else if constexpr (std::is_same_v<T, Lam>) {
          return lam(p(n.binder), prime(n.annotation), prime(n.body));
        } else if constexpr (std::is_same_v<T, App>) {
          return app(prime(n.fn), prime(n.arg));
        } else if constexpr (std::is_same_v<T, Case>) {
          std::vector<Term> params;
          for (const auto& q : n.params) params.push_back(prime(q));
          std::vector<Branch> branches;
          for (const auto& b : n.branches) branches.push_back({b.constructor, prime(b.body)});
          return case_of(n.ind, prime(n.scrutinee), std::move(params), prime(n.motive),
                         std::move(branches));
        } else if constexpr (std::is_same_v<T, Fix>) {
          return fix(p(n.binder), prime(n.annotation), prime(n.body), n.decreasing);
        } else {
          return t;
        }
      },
      t.node().value);
}

/// [I] together with the constructor correspondence c_i -> [c_i].
struct TranslatedInductive {
  Name source;
  InductiveDecl relation;
  std::vector<std::pair<Name, Name>> constructors;
};

namespace detail {

/// Clause-wise translation. Input binders must be globally distinct and
/// distinct from the free variables (see NameSupply::freshen).
class Translator {
 public:
  Translator(const GlobalEnv& env, NameSupply& supply) : env_(env), supply_(supply) {}

  Term run(const Term& t) {
    return std::visit([&](const auto& n) -> Term { return clause(t, n); }, t.node().value);
  }

  /// The motive of a translated case over I.
  Term theta(const Case& c) {
    const InductiveInfo* info = env_.inductive(c.ind);
    if (info == nullptr)
      throw TypeError(ErrorKind::UnboundVariable, "case over unknown inductive `" + c.ind + "`");

    std::vector<Term> params_p, params_r;
    for (const auto& q : c.params) {
      params_p.push_back(prime(q));
      params_r.push_back(run(q));
    }

    // Index binders, read off the arity instantiated at the parameters.
    std::vector<std::pair<NameTriple, Term>> indices;
    Term rest = instantiate(env_, info->decl.arity, c.params);
    for (std::size_t j = 0; j < info->indices; ++j) {
      Term w = whnf(env_, rest);
      const auto* p = w.as<Prod>();
      if (p == nullptr) throw TypeError(ErrorKind::ArityMismatch, "arity too short", w);
      const NameTriple y = triple(supply_.fresh(p->binder == "_" ? "y" : p->binder));
      indices.emplace_back(y, supply_.freshen(p->domain));
      rest = subst(p->codomain, p->binder, var(y.base));
    }

    std::vector<Term> ys, ys_p, ys3;
    for (const auto& [y, ty] : indices) {
      ys.push_back(var(y.base));
      ys_p.push_back(var(y.primed));
      ys3.insert(ys3.end(), {var(y.base), var(y.primed), var(y.witness)});
    }
    std::vector<Term> params3;
    for (std::size_t i = 0; i < c.params.size(); ++i)
      params3.insert(params3.end(), {c.params[i], params_p[i], params_r[i]});

    const NameTriple a = triple(supply_.fresh("a"));
    std::vector<Branch> branches_p;
    for (const auto& b : c.branches) branches_p.push_back({b.constructor, prime(b.body)});
    Term case_a = case_of(c.ind, var(a.base), c.params, c.motive, c.branches);
    Term case_a_p = case_of(c.ind, var(a.primed), params_p, prime(c.motive), branches_p);

    std::vector<Term> args = ys3;
    args.insert(args.end(), {var(a.base), var(a.primed), var(a.witness), case_a, case_a_p});
    Term body = app(run(c.motive), args);

    std::vector<Term> rel_args = params3;
    rel_args.insert(rel_args.end(), ys3.begin(), ys3.end());
    rel_args.insert(rel_args.end(), {var(a.base), var(a.primed)});
    std::vector<Term> src_args = c.params;
    src_args.insert(src_args.end(), ys.begin(), ys.end());
    std::vector<Term> src_args_p = params_p;
    src_args_p.insert(src_args_p.end(), ys_p.begin(), ys_p.end());

    body = lam(a.witness, app(ind(relation_name(c.ind)), rel_args), body);
    body = lam(a.primed, app(ind(c.ind), src_args_p), body);
    body = lam(a.base, app(ind(c.ind), src_args), body);
    for (auto it = indices.rbegin(); it != indices.rend(); ++it) body = bind3(it->first, it->second, body);
    return body;
  }

 private:
  /// lam (x : A) (x' : A') (x_R : [A] x x'), body
  Term bind3(const NameTriple& x, const Term& a, Term body) {
    body = lam(x.witness, app(run(a), {var(x.base), var(x.primed)}), body);
    body = lam(x.primed, prime(a), body);
    return lam(x.base, a, body);
  }

  Term clause(const Term&, const Var& v) { return var(triple(v.name).witness); }

  Term clause(const Term&, const SortTerm& s) {
    const Term x = var("x");
    const Term xp = var("x'");
    return lam("x", sort(s.sort),
               lam("x'", sort(s.sort), arrow(x, arrow(xp, sort(hat_sort(s.sort))))));
  }

  Term clause(const Term& t, const Prod& p) {
    const NameTriple f = triple(supply_.fresh("f"));
    const NameTriple x = triple(p.binder);
    Term body = app(run(p.codomain), {app(var(f.base), var(x.base)), app(var(f.primed), var(x.primed))});
    body = prod(x.witness, app(run(p.domain), {var(x.base), var(x.primed)}), body);
    body = prod(x.primed, prime(p.domain), body);
    body = prod(x.base, p.domain, body);
    return lam(f.base, t, lam(f.primed, prime(t), body));
  }

  Term clause(const Term&, const Lam& l) { return bind3(triple(l.binder), l.annotation, run(l.body)); }

  Term clause(const Term&, const App& a) {
    return app(run(a.fn), {a.arg, prime(a.arg), run(a.arg)});
  }

  Term clause(const Term&, const Ind& i) { return ind(relation_name(i.name)); }
  Term clause(const Term&, const Constr& c) { return constr(relation_name(c.name)); }
  Term clause(const Term&, const Const& k) { return constant(relation_name(k.name)); }

  Term clause(const Term& t, const Fix& f) {
    const NameTriple x = triple(f.binder);
    Term rel = fix(x.witness, app(run(f.annotation), {var(x.base), var(x.primed)}), run(f.body),
                   3 * f.decreasing + 2);
    return substitute(rel, {{x.base, t}, {x.primed, prime(t)}});
  }

  Term clause(const Term&, const Case& c) {
    std::vector<Term> params3;
    for (const auto& q : c.params) params3.insert(params3.end(), {q, prime(q), run(q)});
    std::vector<Branch> branches;
    for (const auto& b : c.branches) branches.push_back({relation_name(b.constructor), run(b.body)});
    return case_of(relation_name(c.ind), run(c.scrutinee), std::move(params3), theta(c),
                   std::move(branches));
  }

  const GlobalEnv& env_;
  NameSupply& supply_;
};

inline void collect_globals(const GlobalEnv& env, const Term& t, std::set<Name>& inductives,
                            std::set<Name>& definitions) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Ind>) {
          inductives.insert(n.name);
        } else if constexpr (std::is_same_v<T, Constr>) {
          if (auto ref = env.constructor(n.name)) inductives.insert(ref->inductive->decl.name);
        } else if constexpr (std::is_same_v<T, Const>) {
          definitions.insert(n.name);
        } else if constexpr (std::is_same_v<T, Prod>) {
          collect_globals(env, n.domain, inductives, definitions);
          collect_globals(env, n.codomain, inductives, definitions);
        } else if constexpr (std::is_same_v<T, Lam>) {
          collect_globals(env, n.annotation, inductives, definitions);
          collect_globals(env, n.body, inductives, definitions);
        } else if constexpr (std::is_same_v<T, App>) {
          collect_globals(env, n.fn, inductives, definitions);
          collect_globals(env, n.arg, inductives, definitions);
        } else if constexpr (std::is_same_v<T, Case>) {
          inductives.insert(n.ind);
          collect_globals(env, n.scrutinee, inductives, definitions);
          for (const auto& q : n.params) collect_globals(env, q, inductives, definitions);
          collect_globals(env, n.motive, inductives, definitions);
          for (const auto& b : n.branches) collect_globals(env, b.body, inductives, definitions);
        } else if constexpr (std::is_same_v<T, Fix>) {
          collect_globals(env, n.annotation, inductives, definitions);
          collect_globals(env, n.body, inductives, definitions);
        }
      },
      t.node().value);
}

inline NameSupply supply_for(const std::vector<Term>& terms, const Context& ctx = {}) {
  NameSupply supply;
  for (const auto& [x, ty] : ctx.entries()) {
    supply.bind(x);
    supply.reserve(ty);
  }
  for (const auto& t : terms) {
    supply.reserve(t);
    for (const auto& x : free_vars(t)) supply.bind(x);
  }
  return supply;
}

}  // namespace detail

/// [t]. Binders of `t` are renamed first where they would shadow; the result
/// mentions the translated globals g_R of every global g in `t`.
inline Term translate_term(const GlobalEnv& env, const Term& t) {
  NameSupply supply = detail::supply_for({t});
  const Term u = supply.freshen(t);
  return detail::Translator(env, supply).run(u);
}

/// Theta for the case expression `c` (which must be a Case node).
inline Term theta(const GlobalEnv& env, const Term& c) {
  const auto* cs = c.as<Case>();
  if (cs == nullptr) throw TypeError(ErrorKind::IllFormedInductive, "theta expects a case", c);
  NameSupply supply = detail::supply_for({c});
  const Term u = supply.freshen(c);
  return detail::Translator(env, supply).theta(*u.as<Case>());
}

/// [<>] = <>, [G, x : A] = [G], x : A, x' : A', x_R : [A] x x' (beta-normal).
inline Context translate_context(const GlobalEnv& env, const Context& ctx) {
  NameSupply supply = detail::supply_for({}, ctx);
  Context out;
  for (const auto& [x, a0] : ctx.entries()) {
    const Term a = supply.freshen(a0);
    const NameTriple n = triple(x);
    out.push(n.base, a);
    out.push(n.primed, prime(a));
    out.push(n.witness,
             beta_normalize(app(detail::Translator(env, supply).run(a), {var(n.base), var(n.primed)})));
  }
  return out;
}

/// Builds and kernel-checks [I] for a declared inductive. Requires the
/// translations of every inductive that `d` mentions to be in `env`.
inline TranslatedInductive translate_inductive(const GlobalEnv& env, const InductiveDecl& d) {
  NameSupply supply;
  supply.reserve(d.arity);
  for (const auto& c : d.constructors) supply.reserve(c.type);
  TranslatedInductive out;
  out.source = d.name;
  out.relation.name = relation_name(d.name);
  out.relation.params = 3 * d.params;
  out.relation.arity = beta_normalize(
      app(detail::Translator(env, supply).run(supply.freshen(d.arity)), {ind(d.name), ind(d.name)}));
  for (const auto& c : d.constructors) {
    const Term ty = beta_normalize(app(detail::Translator(env, supply).run(supply.freshen(c.type)),
                                       {constr(c.name), constr(c.name)}));
    out.relation.constructors.push_back({relation_name(c.name), ty});
    out.constructors.emplace_back(c.name, relation_name(c.name));
  }
  check_inductive(env, out.relation, EliminationMode::Star);
  return out;
}

/// d_R : [T] d d := [body], kernel-checked in Star mode.
inline Definition translate_definition(const GlobalEnv& env, const Definition& d) {
  NameSupply supply = detail::supply_for({d.type, d.body});
  const Term type = supply.freshen(d.type);
  const Term body = supply.freshen(d.body);
  Definition out{relation_name(d.name),
                 beta_normalize(app(detail::Translator(env, supply).run(type),
                                    {constant(d.name), constant(d.name)})),
                 detail::Translator(env, supply).run(body)};
  check_definition(env, out, EliminationMode::Star);
  return out;
}

/// Declares g_R for every global g reachable from `t` that lacks one.
/// Throws TypeError when a translation does not check.
inline void ensure_translated(GlobalEnv& env, const Term& t) {
  std::set<Name> inds, defs;
  detail::collect_globals(env, t, inds, defs);
  for (const auto& i : inds) {
    if (env.contains(relation_name(i))) continue;
    const InductiveInfo* info = env.inductive(i);
    if (info == nullptr) continue;  // reported by the kernel later
    ensure_translated(env, info->decl.arity);
    for (const auto& c : info->decl.constructors) {
      std::set<Name> deps, dep_defs;
      detail::collect_globals(env, c.type, deps, dep_defs);
      deps.erase(i);
      for (const auto& dep : deps) ensure_translated(env, ind(dep));
      for (const auto& dep : dep_defs) ensure_translated(env, constant(dep));
    }
    if (env.contains(relation_name(i))) continue;
    const TranslatedInductive tr = translate_inductive(env, info->decl);
    declare_inductive(env, tr.relation, EliminationMode::Star);
  }
  for (const auto& k : defs) {
    if (env.contains(relation_name(k))) continue;
    const Definition* d = env.definition(k);
    if (d == nullptr) continue;
    const Definition copy = *d;
    ensure_translated(env, copy.type);
    ensure_translated(env, copy.body);
    if (env.contains(relation_name(k))) continue;
    env.insert(translate_definition(env, copy));
  }
}

/// Checks, in Star mode, that [G] |- a : b, [G] |- a' : b' and
/// [G] |- [a] : [b] a a'. Translations of the globals involved are added to
/// `env` on demand. On failure, `diagnostic` (when given) receives the reason.
inline bool abstraction_check(GlobalEnv& env, const Context& ctx, const Term& a, const Term& b,
                              std::string* diagnostic = nullptr) {
  try {
    for (const auto& [x, ty] : ctx.entries()) ensure_translated(env, ty);
    ensure_translated(env, a);
    ensure_translated(env, b);

    NameSupply supply = detail::supply_for({a, b}, ctx);
    Context ctx_f;
    for (const auto& [x, ty] : ctx.entries()) ctx_f.push(x, supply.freshen(ty));
    const Term af = supply.freshen(a);
    const Term bf = supply.freshen(b);

    const Context ctx_r = translate_context(env, ctx_f);
    check(env, ctx_r, af, bf, EliminationMode::Star);
    check(env, ctx_r, prime(af), prime(bf), EliminationMode::Star);
    detail::Translator tr(env, supply);
    const Term ar = tr.run(af);
    const Term br = beta_normalize(app(tr.run(bf), {af, prime(af)}));
    check(env, ctx_r, ar, br, EliminationMode::Star);
    return true;
  } catch (const TypeError& e) {
    if (diagnostic != nullptr) *diagnostic = e.what();
    return false;
  }
}

}  // namespace rcic

#endif  // RCIC_PARAM_HPP
