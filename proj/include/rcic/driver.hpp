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

// The `rcic` command-line workflows, callable in-process.

#ifndef RCIC_DRIVER_HPP
#define RCIC_DRIVER_HPP

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rcic/env.hpp"
#include "rcic/kernel.hpp"
#include "rcic/param.hpp"
#include "rcic/parse.hpp"
#include "rcic/print.hpp"

namespace rcic {

enum class Command { Check, Translate, ParamCheck };

struct RunConfig {
  Command command = Command::Check;
  std::vector<std::string> files;
  EliminationMode mode = EliminationMode::Star;
  bool print_universes = false;
  /// translate: print only the translated inductives.
  bool print_goldens = false;
  /// Restrict translate / param-check output to one definition.
  std::optional<std::string> def_filter;
};

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitInput = 2 };

namespace detail {

struct LoadedFile {
  std::string path;
  SourceFile source;
};

inline void print_translated_inductive(const GlobalEnv& env, const Name& name, std::ostream& out) {
  const InductiveInfo* info = env.inductive(relation_name(name));
  if (info == nullptr) return;
  out << info->decl.name << " : " << print(info->decl.arity) << '\n';
  for (const auto& c : info->decl.constructors) out << c.name << " : " << print(c.type) << '\n';
}

}  // namespace detail

/// Runs one command over `config.files`. Results go to `out`, diagnostics to
/// `err` as `file:line:col: error: Kind: message`. Returns an ExitCode.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  // Parse everything before checking anything.
  std::vector<detail::LoadedFile> files;
  Signature sig;
  for (const auto& path : config.files) {
    std::ifstream in(path);
    if (!in) {
      err << path << ": error: IOError: cannot open file\n";
      return kExitInput;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      files.push_back({path, parse(buf.str(), sig)});
    } catch (const ParseError& e) {
      err << path << ':' << e.location().line << ':' << e.location().column
          << ": error: ParseError: " << e.message() << '\n';
      return kExitInput;
    }
  }

  GlobalEnv env;
  int status = kExitOk;
  auto report = [&](const std::string& path, const SourceLocation& loc, const std::string& what) {
    err << path << ':' << loc.line << ':' << loc.column << ": error: " << what << '\n';
    status = kExitFailure;
  };
  auto universe = [&](const Term& type) -> std::string {
    if (!config.print_universes) return "";
    return "  (* " + infer_sort(env, {}, type, config.mode).to_string() + " *)";
  };
  auto selected = [&](const Name& name) { return !config.def_filter || *config.def_filter == name; };

  std::vector<Name> definitions;
  for (const auto& file : files) {
    for (const auto& d : file.source.declarations) {
      try {
        switch (d.kind) {
          case Declaration::Kind::Inductive: {
            declare_inductive(env, d.inductive, config.mode);
            const InductiveInfo* info = env.inductive(d.name);
            if (config.command == Command::Check) {
              out << d.name << " : " << print(d.inductive.arity);
              if (config.print_universes) out << "  (* " << (info->small ? "small" : "large") << " *)";
              out << '\n';
              for (const auto& c : d.inductive.constructors)
                out << c.name << " : " << print(c.type) << universe(c.type) << '\n';
            }
            if (config.command == Command::Translate && !config.def_filter) {
              ensure_translated(env, ind(d.name));
              detail::print_translated_inductive(env, d.name, out);
            }
            break;
          }
          case Declaration::Kind::Definition: {
            declare_definition(env, d.definition, config.mode);
            definitions.push_back(d.name);
            if (config.command == Command::Check)
              out << d.name << " : " << print(d.definition.type) << universe(d.definition.type)
                  << '\n';
            if (config.command == Command::Translate && !config.print_goldens && selected(d.name)) {
              ensure_translated(env, constant(d.name));
              const Definition* r = env.definition(relation_name(d.name));
              out << r->name << " : " << print(r->type) << '\n';
              out << r->name << " := " << print(beta_normalize(r->body)) << '\n';
            }
            break;
          }
          case Declaration::Kind::Check: {
            const Term ty = infer(env, {}, d.term, config.mode);
            if (config.command == Command::Check)
              out << print(d.term) << " : " << print(ty) << '\n';
            break;
          }
          case Declaration::Kind::ParamCheck: {
            if (config.command == Command::ParamCheck) break;  // every definition is run below
            const Definition* def = env.definition(d.name);
            if (def == nullptr) {
              report(file.path, d.location, "UnboundVariable: unknown definition `" + d.name + "`");
              break;
            }
            std::string why;
            const Definition copy = *def;
            if (abstraction_check(env, {}, copy.body, copy.type, &why)) {
              out << "PASS " << d.name << '\n';
            } else {
              out << "FAIL " << d.name << '\n';
              report(file.path, d.location, why);
            }
            break;
          }
        }
      } catch (const TypeError& e) {
        report(file.path, e.location.value_or(d.location), e.what());
      }
    }
  }

  if (config.def_filter && config.command != Command::Check &&
      std::find(definitions.begin(), definitions.end(), *config.def_filter) == definitions.end()) {
    err << "error: unknown definition `" << *config.def_filter << "`\n";
    return kExitFailure;
  }

  if (config.command == Command::ParamCheck) {
    for (const auto& name : definitions) {
      if (!selected(name)) continue;
      const Definition copy = *env.definition(name);
      std::string why;
      if (abstraction_check(env, {}, copy.body, copy.type, &why)) {
        out << "PASS " << name << '\n';
      } else {
        out << "FAIL " << name << '\n';
        err << name << ": " << why << '\n';
        status = kExitFailure;
      }
    }
  }
  return status;
}

}  // namespace rcic

#endif  // RCIC_DRIVER_HPP
