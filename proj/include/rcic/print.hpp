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

// Deterministic pretty-printer. Output re-parses (see parse.hpp) to an
// alpha-equivalent term.

#ifndef RCIC_PRINT_HPP
#define RCIC_PRINT_HPP

#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "rcic/syntax.hpp"

namespace rcic {

namespace detail {

class Printer {
 public:
  std::string run(const Term& t) {
    term(t, kTop);
    return std::move(out_);
  }

 private:
  // Precedence of the slot being printed into.
  static constexpr int kTop = 0;    // binders, arrows
  static constexpr int kArrow = 1;  // left of an arrow
  static constexpr int kArg = 2;    // application argument

  void term(const Term& t, int prec) {
    if (const auto* v = t.as<Var>()) {
      out_ += v->name;
    } else if (const auto* s = t.as<SortTerm>()) {
      out_ += s->sort.to_string();
    } else if (const auto* i = t.as<Ind>()) {
      out_ += i->name;
    } else if (const auto* c = t.as<Constr>()) {
      out_ += c->name;
    } else if (const auto* k = t.as<Const>()) {
      out_ += k->name;
    } else if (const auto* p = t.as<Prod>()) {
      paren(prec >= kArrow, [&] { product(*p); });
    } else if (t.is<Lam>()) {
      paren(prec >= kArrow, [&] { lambda(t); });
    } else if (t.is<App>()) {
      paren(prec >= kArg, [&] {
        const auto sp = spine(t);
        term(sp.head, kArg);
        for (const auto& a : sp.args) {
          out_ += ' ';
          term(a, kArg);
        }
      });
    } else if (const auto* cs = t.as<Case>()) {
      paren(prec >= kArg, [&] { match(*cs); });
    } else if (const auto* f = t.as<Fix>()) {
      paren(prec >= kArrow, [&] { fixpoint(*f); });
    }
  }

  template <class F>
  void paren(bool wrap, F&& body) {
    if (wrap) out_ += '(';
    body();
    if (wrap) out_ += ')';
  }

  static bool dependent(const Prod& p) {
    return p.binder != "_" && occurs_free(p.binder, p.codomain);
  }

  void binder(const Name& x, const Term& type) {
    out_ += " (";
    out_ += x;
    out_ += " : ";
    term(type, kTop);
    out_ += ')';
  }

  void product(const Prod& p) {
    if (!dependent(p)) {
      term(p.domain, kArrow);
      out_ += " -> ";
      term(p.codomain, kTop);
      return;
    }
    out_ += "forall";
    const Prod* cur = &p;
    while (true) {
      binder(cur->binder, cur->domain);
      const auto* next = cur->codomain.as<Prod>();
      if (next == nullptr || !dependent(*next)) break;
      cur = next;
    }
    out_ += ", ";
    term(cur->codomain, kTop);
  }

  void lambda(Term t) {
    out_ += "fun";
    while (const auto* l = t.as<Lam>()) {
      binder(l->binder, l->annotation);
      t = l->body;
    }
    out_ += " => ";
    term(t, kTop);
  }

  void match(const Case& c) {
    out_ += "match ";
    term(c.scrutinee, kTop);

    std::vector<const Lam*> lams;
    for (const Lam* l = c.motive.as<Lam>(); l != nullptr; l = l->body.as<Lam>()) lams.push_back(l);

    std::set<Name> param_fv;
    for (const auto& q : c.params) {
      const auto fv = free_vars(q);
      param_fv.insert(fv.begin(), fv.end());
    }

    // Sugared form: motive = fun (y1 : Y1) .. (yn : Yn) (x : I Q y1 .. yn) => T.
    std::optional<std::size_t> indices;
    std::set<Name> seen;
    for (std::size_t n = 0; n < lams.size(); ++n) {
      std::vector<Term> args = c.params;
      for (std::size_t j = 0; j < n; ++j) args.push_back(var(lams[j]->binder));
      if (alpha_eq(lams[n]->annotation, app(ind(c.ind), args))) {
        indices = n;
        break;
      }
      const Name& y = lams[n]->binder;
      if (y == "_" || param_fv.count(y) || !seen.insert(y).second) break;
    }

    if (indices) {
      const Lam* scrut = lams[*indices];
      if (scrut->binder != "_") {
        out_ += " as ";
        out_ += scrut->binder;
      }
    }
    out_ += " in ";
    out_ += c.ind;
    for (const auto& q : c.params) {
      out_ += ' ';
      term(q, kArg);
    }
    if (indices) {
      for (std::size_t j = 0; j < *indices; ++j) binder(lams[j]->binder, lams[j]->annotation);
      out_ += " return ";
      term(lams[*indices]->body, kTop);
    } else {
      out_ += " motive ";
      term(c.motive, kTop);
    }
    out_ += " with";
    for (const auto& br : c.branches) {
      out_ += " | ";
      out_ += br.constructor;
      Term body = br.body;
      while (const auto* l = body.as<Lam>()) {
        binder(l->binder, l->annotation);
        body = l->body;
      }
      out_ += " => ";
      term(body, kTop);
    }
    out_ += " end";
  }

  void fixpoint(const Fix& f) {
    std::vector<std::pair<Name, Term>> params;
    Term type = f.annotation;
    Term body = f.body;
    std::set<Name> names;
    bool distinct = true;
    if (!occurs_free(f.binder, f.annotation)) {
      while (true) {
        const auto* p = type.as<Prod>();
        const auto* l = body.as<Lam>();
        if (p == nullptr || l == nullptr || !alpha_eq(p->domain, l->annotation)) break;
        if (l->binder != p->binder && occurs_free(l->binder, p->codomain)) break;
        params.emplace_back(l->binder, l->annotation);
        distinct = distinct && l->binder != "_" && names.insert(l->binder).second;
        type = subst(p->codomain, p->binder, var(l->binder));
        body = l->body;
      }
    }
    out_ += "fix ";
    out_ += f.binder;
    if (distinct && params.size() > f.decreasing) {
      for (const auto& [x, a] : params) binder(x, a);
      out_ += " {struct ";
      out_ += params[f.decreasing].first;
      out_ += "} : ";
      term(type, kTop);
      out_ += " := ";
      term(body, kTop);
    } else {
      out_ += " {struct " + std::to_string(f.decreasing) + "} : ";
      term(f.annotation, kTop);
      out_ += " := ";
      term(f.body, kTop);
    }
  }

  std::string out_;
};

}  // namespace detail

inline std::string print(const Term& t) { return detail::Printer().run(t); }

inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << print(t); }

}  // namespace rcic

#endif  // RCIC_PRINT_HPP
