#include "nba/sandbox/regenerate.hpp"

#include <fstream>

#include "nba/app/commands.hpp"
#include "nba/sandbox/mock_model.hpp"
#include "nba/sandbox/mock_ncbi.hpp"

namespace nba::sandbox {

namespace fs = std::filesystem;

void regenerate(const RegenerateOptions& options, std::ostream& log) {
  const auto& cfg_dir = options.config_dir;
  const auto& out = options.out_dir;
  fs::create_directories(out);
  fs::remove_all(out / "fixtures");
  fs::remove_all(out / "transcripts");
  fs::remove(out / "index.json");

  auto world = std::make_shared<const World>(generate_world(options.seed));
  {
    std::ofstream f(out / "geneturing.json", std::ios::trunc);
    f << dataset_to_json(world->dataset, "GeneTuring (synthetic world, seed " + std::to_string(options.seed) + ")")
             .dump(1)
      << "\n";
  }
  log << "world: " << world->genes.size() << " genes, " << world->snps.size() << " SNPs, " << world->diseases.size()
      << " diseases, " << world->alignments.size() << " sequences, " << world->dataset.size() << " questions\n";

  RunConfig rc;
  rc.plan_dir = cfg_dir / "plans";
  rc.prompts = cfg_dir / "prompts.json";
  rc.classifier_examples = cfg_dir / "classifier_examples.json";
  rc.tables = cfg_dir / "tables.json";
  rc.models_file = cfg_dir / "models.json";
  rc.pricing = cfg_dir / "pricing.json";
  rc.dataset = out / "geneturing.json";
  rc.fixture_dir = out / "fixtures";
  rc.transcript_dir = out / "transcripts";
  rc.index = out / "index.json";
  rc.record_transcripts = true;
  rc.workers = options.workers;
  rc.rate_cap = 1000;
  rc.poll_interval_ms = 2000;
  rc.models = {"mock-slm"};
  rc.embedding_model = "mock-embed";
  rc.methods = {Method::agentic, Method::code, Method::direct, Method::genegpt};

  AppDeps deps;
  // Simulated time: BLAST poll waits and rate-limit pauses cost nothing.
  deps.clock = std::make_shared<ManualClock>();
  deps.ncbi_transport = std::make_shared<MockNcbiTransport>(std::make_shared<MockNcbi>(world));
  deps.model_transport = std::make_shared<MockModelTransport>(std::make_shared<MockModel>());
  deps.capture = true;

  App app(rc, deps);
  cmd_index_build(app, log);
  cmd_fixtures_capture(app, log);
  cmd_bench(app, log);
  log << "model requests " << app.model_network_requests() << ", NCBI requests " << app.ncbi_network_requests()
      << "\n";
}

}  // namespace nba::sandbox
