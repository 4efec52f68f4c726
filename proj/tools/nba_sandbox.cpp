// Synthetic-world tooling: dump the world, serve the mock NCBI and model
// endpoints over HTTP, or rebuild data/ from scratch.
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nba/eval/dataset.hpp"
#include "nba/sandbox/mock_model.hpp"
#include "nba/sandbox/mock_ncbi.hpp"
#include "nba/sandbox/regenerate.hpp"
#include "nba/sandbox/server.hpp"

namespace sb = nba::sandbox;

int main(int argc, char** argv) {
  CLI::App cli{"Synthetic NCBI world and mock model endpoints."};
  cli.require_subcommand(1);
  std::uint64_t seed = sb::kDefaultWorldSeed;
  cli.add_option("--seed", seed, "world seed");

  auto* world_cmd = cli.add_subcommand("world", "print the generated dataset as JSON");

  std::string host = "127.0.0.1";
  int ncbi_port = 18081, model_port = 18080;
  auto* ncbi_cmd = cli.add_subcommand("serve-ncbi", "serve mock E-utilities and BLAST (/entrez/eutils, /Blast.cgi)");
  ncbi_cmd->add_option("--host", host);
  ncbi_cmd->add_option("--port", ncbi_port);
  auto* model_cmd = cli.add_subcommand("serve-model", "serve a mock OpenAI-compatible API under /v1");
  model_cmd->add_option("--host", host);
  model_cmd->add_option("--port", model_port);

  sb::RegenerateOptions regen;
  auto* regen_cmd = cli.add_subcommand("regenerate", "rebuild dataset, index, fixtures and transcripts");
  regen_cmd->add_option("--config-dir", regen.config_dir)->required();
  regen_cmd->add_option("--out", regen.out_dir)->required();
  regen_cmd->add_option("--workers", regen.workers);

  CLI11_PARSE(cli, argc, argv);

  try {
    if (world_cmd->parsed()) {
      const auto world = sb::generate_world(seed);
      std::cout << nba::dataset_to_json(world.dataset, "GeneTuring (synthetic world)").dump(1) << "\n";
    } else if (ncbi_cmd->parsed()) {
      auto ncbi = std::make_shared<sb::MockNcbi>(std::make_shared<const sb::World>(sb::generate_world(seed)));
      std::cerr << "mock NCBI on http://" << host << ":" << ncbi_port << "\n";
      sb::serve_forever([ncbi](const nba::HttpRequest& r) { return ncbi->handle(r); }, host, ncbi_port);
    } else if (model_cmd->parsed()) {
      auto model = std::make_shared<const sb::MockModel>();
      std::cerr << "mock model on http://" << host << ":" << model_port << "/v1\n";
      sb::serve_forever([model](const nba::HttpRequest& r) { return model->handle(r); }, host, model_port);
    } else if (regen_cmd->parsed()) {
      regen.seed = seed;
      sb::regenerate(regen, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
