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

#ifndef RCIC_ENV_HPP
#define RCIC_ENV_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rcic/syntax.hpp"

namespace rcic {

struct Constructor {
  Name name;
  /// Full type, including the parameter binders.
  Term type;
};

/// I with `params` uniform parameters. `arity` is the full telescope
/// (parameters, then indices) ending in a sort.
struct InductiveDecl {
  Name name;
  std::size_t params = 0;
  Term arity;
  std::vector<Constructor> constructors;
};

struct Definition {
  Name name;
  Term type;
  Term body;
};

/// Facts about a checked inductive that the kernel reuses.
struct InductiveInfo {
  InductiveDecl decl;
  std::size_t indices = 0;
  Sort sort = Sort::prop();
  /// Constructor arguments (after parameters) all have types in Prop or Set_i.
  bool small = true;
  /// Number of non-parameter arguments of each constructor.
  std::vector<std::size_t> constructor_arity;
};

/// Append-only, name-keyed table of checked globals. Only the kernel inserts
/// (see kernel.hpp), so every entry has been accepted before it lands here.
class GlobalEnv {
 public:
  struct ConstructorRef {
    const InductiveInfo* inductive;
    std::size_t index;
  };

  bool contains(const Name& name) const { return kinds_.count(name) > 0; }

  const InductiveInfo* inductive(const Name& name) const {
    auto it = inductives_.find(name);
    return it == inductives_.end() ? nullptr : &it->second;
  }

  std::optional<ConstructorRef> constructor(const Name& name) const {
    auto it = constructors_.find(name);
    if (it == constructors_.end()) return std::nullopt;
    return ConstructorRef{&inductives_.at(it->second.first), it->second.second};
  }

  const Definition* definition(const Name& name) const {
    auto it = definitions_.find(name);
    return it == definitions_.end() ? nullptr : &it->second;
  }

  /// Declaration order of inductives and definitions.
  const std::vector<Name>& order() const { return order_; }

  // Kernel-only.
  void insert(InductiveInfo info) {
    const Name name = info.decl.name;
    kinds_[name] = Kind::Inductive;
    for (std::size_t i = 0; i < info.decl.constructors.size(); ++i) {
      kinds_[info.decl.constructors[i].name] = Kind::Constructor;
      constructors_[info.decl.constructors[i].name] = {name, i};
    }
    inductives_.emplace(name, std::move(info));
    order_.push_back(name);
  }

  // Kernel-only.
  void insert(Definition def) {
    const Name name = def.name;
    kinds_[name] = Kind::Definition;
    definitions_.emplace(name, std::move(def));
    order_.push_back(name);
  }

 private:
  enum class Kind { Inductive, Constructor, Definition };

  std::map<Name, Kind> kinds_;
  std::map<Name, InductiveInfo> inductives_;
  std::map<Name, std::pair<Name, std::size_t>> constructors_;
  std::map<Name, Definition> definitions_;
  std::vector<Name> order_;
};

/// Ordered local assumptions; names are pairwise distinct.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<std::pair<Name, Term>> entries) : entries_(entries) {}

  const std::vector<std::pair<Name, Term>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const Term* lookup(const Name& x) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
      if (it->first == x) return &it->second;
    return nullptr;
  }
  bool contains(const Name& x) const { return lookup(x) != nullptr; }

  void push(Name x, Term type) { entries_.emplace_back(std::move(x), std::move(type)); }
  void pop() { entries_.pop_back(); }

 private:
  std::vector<std::pair<Name, Term>> entries_;
};

}  // namespace rcic

#endif  // RCIC_ENV_HPP
