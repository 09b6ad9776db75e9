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

#include <gtest/gtest.h>

#include <set>
#include <stdexcept>
#include <string>

#include "rcic/kernel.hpp"
#include "rcic/param.hpp"
#include "rcic/parse.hpp"
#include "rcic/print.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/goldens.hpp"
#include "support/properties.hpp"

namespace rcic {
namespace {

using testing::prelude;

/// The prelude with every translation declared.
const GlobalEnv& translated() {
  static const GlobalEnv env = [] {
    GlobalEnv e = prelude().env;
    for (const auto& name : prelude().env.order()) {
      if (e.inductive(name) != nullptr) ensure_translated(e, ind(name));
      if (e.definition(name) != nullptr) ensure_translated(e, constant(name));
    }
    return e;
  }();
  return env;
}

Term golden(const std::string& text) {
  ParseOptions opts;
  opts.allow_reserved = true;
  return parse_term(text, translated(), opts);
}

void expect_alpha(const Term& actual, const std::string& expected) {
  EXPECT_TRUE(alpha_eq(actual, golden(expected))) << "actual:   " << print(actual) << "\nexpected: " << expected;
}

//------------------------------------------------------------------------------
// Naming and sorts

TEST(Naming, Triples) {
  const NameTriple t = triple("x");
  EXPECT_EQ(t.base, "x");
  EXPECT_EQ(t.primed, "x'");
  EXPECT_EQ(t.witness, "x_R");
  EXPECT_EQ(relation_name("plus"), "plus_R");
}

TEST(Naming, PrimeRenamesAllVariables) {
  Term t = lam("x", var("A"), app(var("f"), var("x")));
  EXPECT_TRUE(alpha_eq(prime(t), lam("x'", var("A'"), app(var("f'"), var("x'")))));
  EXPECT_TRUE(alpha_eq(prime(app(constant("plus"), ind("Nat"))), app(constant("plus"), ind("Nat"))));
  EXPECT_TRUE(alpha_eq(prime(arrow(var("A"), var("A"))), arrow(var("A'"), var("A'"))));
}

TEST(Sorts, HatSort) {
  EXPECT_EQ(hat_sort(Sort::prop()), Sort::prop());
  EXPECT_EQ(hat_sort(Sort::set(3)), Sort::prop());
  EXPECT_EQ(hat_sort(Sort::type(2)), Sort::type(2));
}

//------------------------------------------------------------------------------
// Clauses

TEST(Translate, Sorts) {
  GlobalEnv empty;
  EXPECT_EQ(print(translate_term(empty, prop())), "fun (x : Prop) (x' : Prop) => x -> x' -> Prop");
  expect_alpha(translate_term(empty, set(1)), "fun (x : Set1) (x' : Set1) => x -> x' -> Prop");
  expect_alpha(translate_term(empty, type(2)), "fun (x : Type2) (x' : Type2) => x -> x' -> Type2");
}

TEST(Translate, VariablesAndGlobals) {
  GlobalEnv empty;
  EXPECT_TRUE(alpha_eq(translate_term(empty, var("x")), var("x_R")));
  EXPECT_TRUE(alpha_eq(translate_term(translated(), ind("Nat")), ind("Nat_R")));
  EXPECT_TRUE(alpha_eq(translate_term(translated(), constr("S")), constr("S_R")));
  EXPECT_TRUE(alpha_eq(translate_term(translated(), constant("plus")), constant("plus_R")));
}

TEST(Translate, LambdaAndApplication) {
  GlobalEnv empty;
  expect_alpha(translate_term(empty, lam("x", var("A"), var("x"))),
               "fun (x : A) (x' : A') (x_R : A_R x x') => x_R");
  expect_alpha(translate_term(empty, app(var("f"), var("a"))), "f_R a a' a_R");
}

TEST(Translate, Product) {
  GlobalEnv empty;
  expect_alpha(translate_term(empty, prod("x", var("A"), var("B"))),
               "fun (f : forall (x : A), B) (f' : forall (x' : A'), B') => "
               "forall (x : A) (x' : A') (x_R : A_R x x'), B_R (f x) (f' x')");
}

TEST(Translate, Context) {
  GlobalEnv empty;
  Context ctx{{"A", set(0)}, {"a", var("A")}};
  Context r = translate_context(empty, ctx);
  ASSERT_EQ(r.entries().size(), 6u);
  const std::vector<std::string> names = {"A", "A'", "A_R", "a", "a'", "a_R"};
  for (std::size_t i = 0; i < names.size(); ++i) EXPECT_EQ(r.entries()[i].first, names[i]);
  EXPECT_EQ(print(r.entries()[2].second), "A -> A' -> Prop");
  EXPECT_EQ(print(r.entries()[5].second), "A_R a a'");
  EXPECT_TRUE(translate_context(empty, {}).entries().empty());
}

//------------------------------------------------------------------------------
// Inductive goldens

const testing::InductiveGolden& golden_for(const std::string& name) {
  for (const auto& g : testing::inductive_goldens())
    if (g.name == name) return g;
  throw std::out_of_range(name);
}

TEST(Goldens, Bool) { EXPECT_EQ(testing::compare_golden(prelude().env, golden_for("Bool")), ""); }
TEST(Goldens, Nat) { EXPECT_EQ(testing::compare_golden(prelude().env, golden_for("Nat")), ""); }
TEST(Goldens, List) { EXPECT_EQ(testing::compare_golden(prelude().env, golden_for("List")), ""); }
TEST(Goldens, IndexedFamily) { EXPECT_EQ(testing::compare_golden(prelude().env, golden_for("Vec")), ""); }

TEST(Goldens, DetectsMismatch) {
  testing::InductiveGolden wrong = golden_for("Nat");
  wrong.constructors[1].second = "forall (n : Nat) (n' : Nat), Nat_R n n' -> Nat_R (S n') (S n)";
  EXPECT_NE(testing::compare_golden(prelude().env, wrong), "");
}

TEST(Goldens, DefinitionTypes) {
  expect_alpha(translated().definition("negb_R")->type,
               "forall (b : Bool) (b' : Bool), Bool_R b b' -> Bool_R (negb b) (negb b')");
  expect_alpha(translated().definition("id_R")->type,
               "forall (A : Set0) (A' : Set0) (A_R : A -> A' -> Prop) (x : A) (x' : A'), "
               "A_R x x' -> A_R (id A x) (id A' x')");
  expect_alpha(beta_normalize(translated().definition("id_R")->body),
               "fun (A : Set0) (A' : Set0) (A_R : A -> A' -> Prop) (a : A) (a' : A') (a_R : A_R a a') => a_R");
}

TEST(Theta, NonDependentMotive) {
  Term c = parse_term("match b in Bool return Nat with | true => O | false => S O end",
                      Signature::from(prelude().env));
  Term th = theta(translated(), c);
  Context ctx{{"b", ind("Bool")}};
  Term ty = infer(translated(), translate_context(translated(), ctx), th);
  expect_alpha(ty, "forall (a : Bool) (a' : Bool), Bool_R a a' -> Prop");
}

TEST(Theta, IndexedMotive) {
  Term c = parse_term(
      "match v in Vec Nat (m : Nat) return List Nat with | vnil => nil Nat | vcons k x r => cons Nat x (nil Nat) end",
      Signature::from(prelude().env));
  Term th = theta(translated(), c);
  Context ctx{{"n", ind("Nat")}, {"v", app(ind("Vec"), {ind("Nat"), var("n")})}};
  Term ty = infer(translated(), translate_context(translated(), ctx), th);
  expect_alpha(ty,
               "forall (m : Nat) (m' : Nat) (m_R : Nat_R m m') (a : Vec Nat m) (a' : Vec Nat m'), "
               "Vec_R Nat Nat Nat_R m m' m_R a a' -> Prop");
}

//------------------------------------------------------------------------------
// Abstraction theorem

TEST(Abstraction, HoldsForEveryCorpusDefinition) {
  GlobalEnv env = prelude().env;
  for (const auto& d : prelude().definitions) {
    std::string why;
    EXPECT_TRUE(abstraction_check(env, {}, constant(d.name), d.type, &why)) << d.name << ": " << why;
    EXPECT_TRUE(abstraction_check(env, {}, d.body, d.type, &why)) << d.name << ": " << why;
  }
}

TEST(Abstraction, OpenTerms) {
  GlobalEnv env = prelude().env;
  Context ctx{{"A", set(0)}, {"f", arrow(var("A"), var("A"))}, {"a", var("A")}};
  std::string why;
  EXPECT_TRUE(abstraction_check(env, ctx, app(var("f"), app(var("f"), var("a"))), var("A"), &why)) << why;
}

TEST(Abstraction, RejectsIllTyped) {
  GlobalEnv env = prelude().env;
  std::string why;
  EXPECT_FALSE(abstraction_check(env, {}, constr("true"), ind("Nat"), &why));
  EXPECT_NE(why.find("NotConvertible"), std::string::npos) << why;
}

TEST(Abstraction, TranslationsAreCached) {
  GlobalEnv env = prelude().env;
  EXPECT_FALSE(env.contains("plus_R"));
  ensure_translated(env, constant("mult"));
  EXPECT_TRUE(env.contains("plus_R"));
  EXPECT_TRUE(env.contains("mult_R"));
  EXPECT_TRUE(env.contains("Nat_R"));
  EXPECT_FALSE(env.contains("Bool_R"));
}

// Property: generated closed terms satisfy the abstraction theorem.
TEST(AbstractionProperty, GeneratedTerms) {
  GlobalEnv env = prelude().env;
  testing::TypedGen gen(prelude().env, 2024);
  for (int i = 0; i < 150; ++i) {
    auto [t, ty] = gen.any(3);
    std::string why;
    ASSERT_TRUE(abstraction_check(env, {}, t, ty, &why)) << print(t) << " : " << print(ty) << "\n" << why;
  }
}

// Property: [T] t t' lives in Prop whenever T is a small type.
TEST(RelationProperty, SmallTypesGivePropRelations) {
  GlobalEnv env = prelude().env;
  testing::TypedGen gen(prelude().env, 5);
  for (const auto& ty : gen.types()) {
    if (infer_sort(env, {}, ty).is_type()) continue;
    std::string why;
    EXPECT_TRUE(testing::relation_in_prop(env, ty, &why)) << print(ty) << ": " << why;
  }
}

// Property: prime commutes with free variables.
TEST(PrimeProperty, FreeVariablesArePrimed) {
  testing::RawGen gen(31);
  for (int i = 0; i < 500; ++i) {
    Term t = gen.term(4);
    std::set<Name> expected;
    for (const auto& x : free_vars(t)) expected.insert(x + "'");
    ASSERT_EQ(free_vars(prime(t)), expected) << print(t);
  }
}

// Property: translation commutes with substitution,
// [b[x := u]] ~ [b][x := u, x' := u', x_R := [u]].
TEST(TranslateProperty, CommutesWithSubstitution) {
  const GlobalEnv& env = translated();
  testing::TypedGen gen(prelude().env, 77);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    auto f = gen.term(arrow(ind("Nat"), ind("Nat")), 3);
    auto u = gen.term(ind("Nat"), 2);
    if (!f || !u) continue;
    const auto* l = f->as<Lam>();
    if (l == nullptr) continue;
    const Term direct = translate_term(env, subst(l->body, l->binder, *u));
    NameSupply supply = detail::supply_for({*f});
    const Term fresh = supply.freshen(*f);
    const Term body = fresh.as<Lam>()->body;
    const Name x = fresh.as<Lam>()->binder;
    const Term tb = detail::Translator(env, supply).run(body);
    const NameTriple m = triple(x);
    const Term via = substitute(tb, {{m.base, *u}, {m.primed, prime(*u)}, {m.witness, translate_term(env, *u)}});
    ASSERT_TRUE(conv(env, direct, via)) << print(*f) << " @ " << print(*u) << "\n"
                                        << print(direct) << "\n"
                                        << print(via);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

}  // namespace
}  // namespace rcic
