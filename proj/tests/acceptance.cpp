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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rcic/driver.hpp"
#include "rcic/kernel.hpp"
#include "rcic/param.hpp"
#include "rcic/print.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/goldens.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

namespace {

using namespace rcic;
using testing::prelude;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

// 1. Exhaustive product-sort table up to level 4.
Outcome product_table() {
  Outcome o;
  std::size_t cells = 0;
  const auto sorts = oracle::sorts_up_to(4);
  for (const auto& r : sorts) {
    for (const auto& s : sorts) {
      ++cells;
      const auto allowed = oracle::product_rules(r, s);
      if (allowed.size() != 1) o.fail("rules ambiguous at " + r.to_string() + ", " + s.to_string());
      else if (sort_of_product(r, s) != allowed[0])
        o.fail(r.to_string() + " -> " + s.to_string() + " gave " + sort_of_product(r, s).to_string());
    }
  }
  if (o.ok) o.detail = std::to_string(cells) + " cells";
  return o;
}

// 2. Predicative Set products and impredicative Prop.
Outcome universe_probes() {
  Outcome o;
  GlobalEnv empty;
  for (unsigned i = 0; i <= 3; ++i) {
    const Term t = prod("A", set(i), var("A"));
    const Term ty = infer(empty, {}, t);
    if (!alpha_eq(ty, set(i + 1))) o.fail(print(t) + " : " + print(ty));
  }
  std::vector<Term> doms = {prop(), set(0), set(3), type(1), type(4), arrow(set(2), prop())};
  for (const auto& d : doms) {
    const Term t = prod("A", d, prod("P", prop(), arrow(var("P"), var("P"))));
    const Term ty = infer(empty, {}, t);
    if (!alpha_eq(ty, prop())) o.fail(print(t) + " : " + print(ty));
  }
  return o;
}

// 3. subsort agrees with a brute-force closure up to level 5.
Outcome subsort_closure() {
  Outcome o;
  const auto sorts = oracle::sorts_up_to(5);
  const auto closure = oracle::inclusion_closure(sorts);
  for (std::size_t i = 0; i < sorts.size(); ++i)
    for (std::size_t j = 0; j < sorts.size(); ++j)
      if (subsort(sorts[i], sorts[j]) != closure[i][j])
        o.fail(sorts[i].to_string() + " <: " + sorts[j].to_string());
  return o;
}

// 4. param-check passes on at least 20 corpus definitions.
Outcome param_check() {
  Outcome o;
  RunConfig c;
  c.command = Command::ParamCheck;
  c.files = {testing::corpus_path("prelude.rcic")};
  std::ostringstream out, err;
  const int code = run(c, out, err);
  std::size_t pass = 0;
  std::istringstream lines(out.str());
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("PASS ", 0) == 0) ++pass;
    else o.fail(line + " " + err.str());
  }
  if (code != kExitOk) o.fail("exit " + std::to_string(code) + ": " + err.str());
  if (pass < 20) o.fail("only " + std::to_string(pass) + " passed");
  if (o.ok) o.detail = std::to_string(pass) + " definitions";
  return o;
}

// 5. [T] t t' : Prop for every corpus type of sort Prop or Set_i.
Outcome relations_in_prop() {
  Outcome o;
  GlobalEnv env = prelude().env;
  std::vector<Term> types;
  for (const auto& d : prelude().definitions) types.push_back(d.type);
  for (const auto& i : prelude().inductives)
    for (const auto& c : i.constructors) types.push_back(c.type);
  for (const char* text : {"Bool", "Nat", "List Nat", "Prod Nat Bool", "Empty", "Eq Nat O (S O)", "Vec Bool (S O)",
                           "List (List Bool)", "forall (P : Prop), P -> P", "cnat", "Nat -> Prop"})
    types.push_back(parse_term(text, env));
  std::size_t checked = 0;
  for (const auto& t : types) {
    if (infer_sort(env, {}, t).is_type()) continue;
    ++checked;
    std::string why;
    if (!testing::relation_in_prop(env, t, &why)) o.fail(print(t) + ": " + why);
  }
  if (o.ok) o.detail = std::to_string(checked) + " types";
  return o;
}

// 6. Bool, Nat and List relations match the goldens.
Outcome goldens() {
  Outcome o;
  for (const auto& g : testing::inductive_goldens()) {
    if (g.name != "Bool" && g.name != "Nat" && g.name != "List") continue;
    const std::string d = testing::compare_golden(prelude().env, g);
    if (!d.empty()) o.fail(g.name + ": " + d);
  }
  return o;
}

// 7. Star mode rejects the large elimination, --full-elim accepts it.
Outcome elimination_gate() {
  Outcome o;
  RunConfig c;
  c.command = Command::Check;
  c.files = {testing::corpus_path("bad_elim.rcic")};
  std::ostringstream out, err;
  if (run(c, out, err) != kExitFailure || err.str().find("NonSmallStrongElim") == std::string::npos)
    o.fail("star mode: " + err.str());
  c.mode = EliminationMode::Full;
  std::ostringstream out2, err2;
  if (run(c, out2, err2) != kExitOk) o.fail("full mode: " + err2.str());
  return o;
}

// 8. 100 random single-step reducts per definition keep their type.
Outcome subject_reduction() {
  Outcome o;
  std::uint32_t seed = 100;
  for (const auto& d : prelude().definitions) {
    std::string why;
    if (!testing::subject_reduction(prelude().env, d, 100, seed++, &why)) o.fail(d.name + ": " + why);
  }
  if (o.ok) o.detail = std::to_string(prelude().definitions.size() * 100) + " steps";
  return o;
}

// 9. parse(print(t)) is alpha-equal to t.
Outcome round_trip() {
  Outcome o;
  const Signature sig = Signature::from(prelude().env);
  std::size_t count = 0;
  auto one = [&](const Term& t) {
    ++count;
    std::string why;
    if (!testing::round_trip(t, sig, &why)) o.fail(why);
  };
  for (const auto& d : prelude().definitions) {
    one(d.type);
    one(d.body);
  }
  for (const auto& i : prelude().inductives) {
    one(i.arity);
    for (const auto& c : i.constructors) one(c.type);
  }
  testing::TypedGen gen(prelude().env, 9);
  for (int i = 0; i < 500; ++i) {
    auto [t, ty] = gen.any(4);
    try {
      check(prelude().env, {}, t, ty);
    } catch (const TypeError& e) {
      o.fail("generated term ill-typed: " + print(t) + ": " + e.what());
    }
    one(t);
  }
  if (o.ok) o.detail = std::to_string(count) + " terms";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"sort_of_product matches the product rules (levels <= 4)", product_table},
      {"infer: Set_i products are predicative, Prop is impredicative", universe_probes},
      {"subsort equals the brute-force closure (levels <= 5)", subsort_closure},
      {"param-check passes on >= 20 corpus definitions", param_check},
      {"[T] t t' : Prop for corpus types of sort Prop/Set_i", relations_in_prop},
      {"Bool/Nat/List relations match goldens up to alpha", goldens},
      {"bad_elim: NonSmallStrongElim in star mode, accepted with --full-elim", elimination_gate},
      {"single-step reducts preserve typing up to subtyping", subject_reduction},
      {"parse(print(t)) alpha-equals t", round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << '\n';
    failures += o.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
