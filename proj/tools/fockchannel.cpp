// Copyright 2026 The fockchannel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fockchannel <command> [--config file] [--key value ...] [--out path] [--format csv|json]

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "fockchannel/cli.hpp"

int main(int argc, char** argv) {
  using namespace fockchannel;

  CLI::App app{"Decoherence-free Fock channel simulator"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  // Each config key becomes --key; values are collected raw and validated by parse_config.
  std::map<std::string, std::string> flags;
  for (const std::string& key : config_keys()) {
    if (key == "command") continue;
    app.add_option("--" + key, flags[key], "config key '" + key + "'");
  }

  for (const char* name : {"channel", "control", "raman", "stats", "charfunc", "verify", "sweep"})
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // malformed command line counts as a validation failure
  }

  std::string text;
  if (!config_path.empty()) {
    std::ifstream file(config_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot read config '" << config_path << "'\n";
      return 1;
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    text = buffer.str();
  }

  std::vector<Override> overrides;
  for (const std::string& key : config_keys()) {
    if (key == "command") continue;
    if (app.count("--" + key) > 0) overrides.emplace_back(key, flags[key]);
  }
  const auto chosen = app.get_subcommands();
  if (!chosen.empty()) overrides.emplace_back("command", chosen.front()->get_name());

  RunConfig config;
  try {
    config = parse_config(text, overrides);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return execute(config, std::cout, std::cerr);
}
