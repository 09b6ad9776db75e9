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

// Hand-written relations for the prelude inductives, compared up to alpha.

#ifndef RCIC_TESTS_GOLDENS_HPP
#define RCIC_TESTS_GOLDENS_HPP

#include <string>
#include <utility>
#include <vector>

#include "rcic/param.hpp"
#include "rcic/parse.hpp"
#include "rcic/print.hpp"

namespace rcic::testing {

struct InductiveGolden {
  std::string name;
  std::string arity;
  std::vector<std::pair<std::string, std::string>> constructors;
  /// Inductives whose relations must exist before this one is translated.
  std::vector<std::string> deps;
};

inline const std::vector<InductiveGolden>& inductive_goldens() {
  static const std::vector<InductiveGolden> g = {
      {"Bool", "Bool -> Bool -> Prop", {{"true_R", "Bool_R true true"}, {"false_R", "Bool_R false false"}}, {}},
      {"Nat",
       "Nat -> Nat -> Prop",
       {{"O_R", "Nat_R O O"}, {"S_R", "forall (n : Nat) (n' : Nat), Nat_R n n' -> Nat_R (S n) (S n')"}},
       {}},
      {"List",
       "forall (A : Set0) (A' : Set0), (A -> A' -> Prop) -> List A -> List A' -> Prop",
       {{"nil_R", "forall (A : Set0) (A' : Set0) (A_R : A -> A' -> Prop), List_R A A' A_R (nil A) (nil A')"},
        {"cons_R",
         "forall (A : Set0) (A' : Set0) (A_R : A -> A' -> Prop) (a : A) (a' : A'), A_R a a' -> "
         "forall (l : List A) (l' : List A'), List_R A A' A_R l l' -> "
         "List_R A A' A_R (cons A a l) (cons A' a' l')"}},
       {}},
      {"Vec",
       "forall (A : Set0) (A' : Set0), (A -> A' -> Prop) -> forall (n : Nat) (n' : Nat), Nat_R n n' -> "
       "Vec A n -> Vec A' n' -> Prop",
       {{"vnil_R",
         "forall (A : Set0) (A' : Set0) (A_R : A -> A' -> Prop), Vec_R A A' A_R O O O_R (vnil A) (vnil A')"},
        {"vcons_R",
         "forall (A : Set0) (A' : Set0) (A_R : A -> A' -> Prop) (n : Nat) (n' : Nat) (n_R : Nat_R n n') "
         "(a : A) (a' : A'), A_R a a' -> forall (v : Vec A n) (v' : Vec A' n'), "
         "Vec_R A A' A_R n n' n_R v v' -> "
         "Vec_R A A' A_R (S n) (S n') (S_R n n' n_R) (vcons A n a v) (vcons A' n' a' v')"}},
       {"Nat"}},
  };
  return g;
}

/// Translates `g.name` in a copy of `base` and compares with the golden.
/// Returns an empty string on success, otherwise a description of the
/// first mismatch.
inline std::string compare_golden(const GlobalEnv& base, const InductiveGolden& g) {
  GlobalEnv env = base;
  for (const auto& d : g.deps) ensure_translated(env, ind(d));
  const InductiveInfo* info = env.inductive(g.name);
  if (info == nullptr) return "unknown inductive " + g.name;
  const TranslatedInductive tr = translate_inductive(env, info->decl);

  GlobalEnv with_relation = env;
  declare_inductive(with_relation, tr.relation);
  ParseOptions opts;
  opts.allow_reserved = true;
  auto differs = [&](const Term& actual, const std::string& expected) -> std::string {
    const Term want = parse_term(expected, with_relation, opts);
    if (alpha_eq(actual, want)) return "";
    return "got " + print(actual) + "\n  want " + expected;
  };

  if (tr.relation.name != g.name + "_R") return "relation named " + tr.relation.name;
  if (tr.relation.params != 3 * info->decl.params) return "wrong parameter count";
  if (auto d = differs(tr.relation.arity, g.arity); !d.empty()) return d;
  if (tr.relation.constructors.size() != g.constructors.size()) return "wrong constructor count";
  for (std::size_t i = 0; i < g.constructors.size(); ++i) {
    if (tr.relation.constructors[i].name != g.constructors[i].first)
      return "constructor named " + tr.relation.constructors[i].name;
    if (auto d = differs(tr.relation.constructors[i].type, g.constructors[i].second); !d.empty()) return d;
  }
  return "";
}

}  // namespace rcic::testing

#endif  // RCIC_TESTS_GOLDENS_HPP
