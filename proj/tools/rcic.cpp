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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcic/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rcic: type checker and parametricity translator"};
  app.require_subcommand(1);

  rcic::RunConfig config;
  bool full_elim = false;
  std::string def_name;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("files", config.files, "Source files (.rcic)")->required();
    sub->add_flag("--full-elim", full_elim, "Allow strong elimination of non-small inductives");
    sub->add_flag("--print-universes", config.print_universes, "Print the sort of each type");
  };

  CLI::App* check = app.add_subcommand("check", "Type-check every declaration");
  add_common(check);
  CLI::App* translate = app.add_subcommand("translate", "Print parametricity translations");
  add_common(translate);
  translate->add_option("--def", def_name, "Only translate this definition");
  translate->add_flag("--print-goldens", config.print_goldens,
                      "Print only the translated inductives");
  CLI::App* param = app.add_subcommand("param-check", "Run the abstraction check on definitions");
  add_common(param);
  param->add_option("--def", def_name, "Only check this definition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rcic::kExitInput;
  }

  if (*translate)
    config.command = rcic::Command::Translate;
  else if (*param)
    config.command = rcic::Command::ParamCheck;
  else
    config.command = rcic::Command::Check;
  if (full_elim) config.mode = rcic::EliminationMode::Full;
  if (!def_name.empty()) config.def_filter = def_name;

  return rcic::run(config, std::cout, std::cerr);
}
