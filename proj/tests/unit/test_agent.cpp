#include <gtest/gtest.h>

#include <set>

#include "nba/agent/agent.hpp"
#include "nba/common/text.hpp"
#include "nba/eval/dataset.hpp"
#include "nba/exec/tools.hpp"
#include "sandbox_app.hpp"

namespace nba {
namespace {

using testing::kRoot;
using testing::SandboxApp;

const std::vector<DatasetItem>& items() {
  static const auto d = load_dataset(kRoot / "data" / "geneturing.json");
  return d;
}

struct AgentRig {
  SandboxApp sb;
  std::unique_ptr<Agent> agent;

  AgentRig() {
    AgentDeps d;
    d.plans = sb->plans();
    d.tools = make_tool_handlers(sb->toolbox(), std::make_shared<const LookupTables>(
                                                    LookupTables::load(kRoot / "config" / "tables.json")));
    d.gateway = sb->gateway();
    d.chat = sb->catalog().get("mock-slm");
    d.prompts = std::make_shared<const PromptSet>(PromptSet::load(kRoot / "config" / "prompts.json"));
    d.examples =
        std::make_shared<const ClassifierExamples>(ClassifierExamples::load(kRoot / "config" / "classifier_examples.json"));
    d.toolbox = sb->toolbox();
    d.clock = sb.clock;
    agent = std::make_unique<Agent>(std::move(d));
  }
  const PlanStep& step(TaskType task, const std::string& target) {
    for (const auto& s : sb->plans()->retrieve_plan(task).steps)
      if (s.target == target) return s;
    throw std::logic_error("no step " + target);
  }
};

TEST(Classify, ExamplesAndOffDomain) {
  AgentRig rig;
  StepTrace trace;
  EXPECT_EQ(rig.agent->classify_task("Which chromosome is FAM66D gene located on human genome?", &trace),
            TaskType::GeneLocation);
  EXPECT_EQ(trace.kind, StepKind::ModelCall);
  EXPECT_GT(trace.usage.est_tokens_in, 0u);
  EXPECT_EQ(rig.agent->classify_task("What is the capital of France?"), TaskType::Unknown);
  EXPECT_THROW(rig.agent->classify_task(""), PreconditionError);
}

TEST(Classify, DatasetQuestionsClassifyToTheirTask) {
  AgentRig rig;
  for (std::size_t i = 0; i < items().size(); i += 9)
    EXPECT_EQ(rig.agent->classify_task(items()[i].question), items()[i].task) << items()[i].question;
}

TEST(Classify, InContextExamplesAreNotBenchmarkQuestions) {
  const auto ex = ClassifierExamples::load(kRoot / "config" / "classifier_examples.json");
  std::set<std::string> bench;
  for (const auto& it : items()) bench.insert(text::to_lower(it.question));
  ASSERT_FALSE(ex.examples.empty());
  for (const auto& e : ex.examples) EXPECT_FALSE(bench.contains(text::to_lower(e.question))) << e.question;
  const auto picked = ex.pick(2);
  EXPECT_EQ(picked.size(), 18u);
}

TEST(InferParameters, GeneAliasAndSequence) {
  AgentRig rig;
  auto p = rig.agent->infer_parameters("What is the official gene symbol of LMP10?",
                                       rig.step(TaskType::GeneAlias, "infer_parameters"));
  EXPECT_EQ(p.at("gene"), "LMP10");
  for (const auto& item : items()) {
    if (item.task != TaskType::AlignHuman) continue;
    const auto s = rig.agent->infer_parameters(text::to_lower(item.question), rig.step(item.task, "infer_parameters"));
    const auto& seq = s.begin()->second;
    EXPECT_EQ(seq, text::to_upper(seq));
    EXPECT_EQ(seq.find_first_not_of("ACGTN"), std::string::npos);
    EXPECT_GE(seq.size(), 11u);
    break;
  }
  EXPECT_THROW(rig.agent->infer_parameters("What is the official gene symbol of?",
                                           rig.step(TaskType::GeneAlias, "infer_parameters")),
               MissingParameter);
}

TEST(ParseDocument, ExtractsFromToolboxDocuments) {
  AgentRig rig;
  const sandbox::Gene* g = nullptr;
  for (const auto& x : testing::shared_world()->genes)
    if (x.chromosome.find(',') == std::string::npos) {
      g = &x;
      break;
    }
  ASSERT_NE(g, nullptr);
  const auto doc = rig.sb->toolbox()->eutils_call({EutilsUtil::esummary, "gene", {{"id", g->uid}}}).body;
  StepTrace trace;
  EXPECT_EQ(normalize_answer(AnswerKind::Chromosome, rig.agent->parse_document(doc, "chromosome", g->symbol, &trace)),
            "chr" + text::to_lower(g->chromosome));
  EXPECT_EQ(trace.kind, StepKind::ModelCall);
  EXPECT_THROW(rig.agent->parse_document("", "chromosome", g->symbol), PreconditionError);
}

TEST(Helpers, AnswerLineAndParameterNormalization) {
  EXPECT_EQ(parse_answer_line("thinking...\nAnswer: chr2\n"), "chr2");
  EXPECT_EQ(parse_answer_line("Answer: a\nAnswer: b"), "b");
  EXPECT_EQ(parse_answer_line("\n\n  PSMB10  \nmore"), "PSMB10");
  EXPECT_EQ(normalize_parameter("dna", "acgt acgt\nacgtac"), "ACGTACGTACGTAC");
  EXPECT_EQ(normalize_parameter("gene_symbol", "\"LMP10\"."), "LMP10");
  EXPECT_EQ(normalize_parameter("rsid", " RS123 "), "rs123");
}

TEST(AnswerQuestion, DirectMakesExactlyOneModelCall) {
  AgentRig rig;
  const auto rec = rig.agent->answer_question(items()[0].question, Method::direct);
  ASSERT_EQ(rec.traces.size(), 1u);
  EXPECT_EQ(rec.traces[0].kind, StepKind::ModelCall);
  EXPECT_EQ(rec.method, Method::direct);
  EXPECT_EQ(rig.sb->ncbi_network_requests(), 0u);
}

TEST(AnswerQuestion, AgenticAndGeneGptAcrossTasks) {
  AgentRig rig;
  std::set<TaskType> done;
  for (const auto& item : items()) {
    if (item.excluded || done.contains(item.task)) continue;
    done.insert(item.task);
    for (auto method : {Method::agentic, Method::genegpt}) {
      const auto rec = rig.agent->answer_question(item.question, method);
      ASSERT_TRUE(rec.ok()) << item.id << " " << to_string(method) << ": " << *rec.error;
      EXPECT_EQ(rec.total_usage, sum_usage(rec.traces));
      EXPECT_FALSE(rec.final_answer.empty());
      EXPECT_EQ(rec.canonical_answer, normalize_answer(item.task, rec.canonical_answer));
      if (method == Method::agentic) {
        EXPECT_EQ(rec.task, item.task);
        EXPECT_EQ(rec.traces.front().kind, StepKind::ModelCall);  // classification
        EXPECT_EQ(rec.traces.back().kind, StepKind::ModelCall);   // aggregation
      }
      for (const auto& t : rec.traces) EXPECT_EQ(t.ok(), t.error == std::nullopt);
    }
  }
  EXPECT_EQ(done.size(), 9u);
}

TEST(AnswerQuestion, DeterministicAtTemperatureZero) {
  AgentRig a, b;
  for (std::size_t i = 0; i < items().size(); i += 50) {
    const auto ra = a.agent->answer_question(items()[i].question, Method::agentic);
    const auto rb = b.agent->answer_question(items()[i].question, Method::agentic);
    EXPECT_EQ(ra.final_answer, rb.final_answer);
    ASSERT_EQ(ra.traces.size(), rb.traces.size());
    for (std::size_t k = 0; k < ra.traces.size(); ++k) {
      EXPECT_EQ(ra.traces[k].raw_output, rb.traces[k].raw_output);
      EXPECT_EQ(ra.traces[k].rendered_inputs, rb.traces[k].rendered_inputs);
    }
  }
}

// Off-domain: the classifier says Unknown, the stored-question match misses
// too, and the run degrades to direct prompting with a warning.
TEST(AnswerQuestion, UnknownTaskDegradesToDirect) {
  SandboxApp sb;
  const auto rec = sb->answer("What is the capital of France?", "mock-slm", Method::agentic);
  EXPECT_EQ(rec.task, TaskType::Unknown);
  ASSERT_EQ(rec.warnings.size(), 1u);
  EXPECT_NE(rec.warnings[0].find("direct"), std::string::npos);
  ASSERT_EQ(rec.traces.size(), 3u);  // classify, embedding match, direct answer
  EXPECT_EQ(rec.traces[1].kind, StepKind::Embedding);
  EXPECT_EQ(rec.traces[2].kind, StepKind::ModelCall);
}

}  // namespace
}  // namespace nba
