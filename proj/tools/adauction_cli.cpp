// Copyright 2026 The adauction Authors
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

// Command-line front end: adauction <solve|mechanism|simulate|audit> [flags].
// Any flag may also come from a TOML/INI file given with --config.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "adauction/commands.hpp"

int main(int argc, char** argv) {
  adauction::RunConfig config;
  std::size_t samples = 0;

  CLI::App app{"Position auctions: winner determination, VCG and Myerson mechanisms"};
  app.set_config("--config", "", "Read flags from a TOML/INI file");
  app.add_option("command", config.command, "solve | mechanism | simulate | audit")
      ->required()
      ->check(CLI::IsMember({"solve", "mechanism", "simulate", "audit"}));
  app.add_option("--instance", config.instance_path, "Instance JSON file");
  app.add_option("--values", config.values_path, "JSON array of per-advertiser values/bids");
  app.add_option("--dist", config.dist_path, "Distribution JSON (object or per-advertiser array)");
  app.add_option("--algorithm", config.algorithm, "lp | dinkelbach | greedy | ptas | brute");
  app.add_option("--mechanism", config.mechanism, "vcg | myerson | both");
  app.add_option("--epsilon", config.epsilon, "Approximation parameter in (0, 1)");
  app.add_option("--grid", config.grid, "Myerson payment grid size");
  auto* samples_opt = app.add_option("--samples", samples, "Monte Carlo samples / audit trials");
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--out", config.out_path, "Output file (default stdout)");
  app.add_flag("--planted-bug", config.planted_bug, "Audit a solver with a known violation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? adauction::kExitOk : adauction::kExitUsage;
  }
  if (samples_opt->count() > 0) config.samples = samples;
  return adauction::run(config, std::cout, std::cerr);
}
