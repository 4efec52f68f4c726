#include <gtest/gtest.h>

#include <fstream>

#include "nba/plans/registry.hpp"

namespace nba {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kPlanDir = fs::path(NBA_SOURCE_DIR) / "config" / "plans";

json step(std::string id, std::string kind, std::string target, json inputs, std::string output) {
  return {{"id", id}, {"kind", kind}, {"target", target}, {"inputs", inputs}, {"output", output}};
}

json minimal_plan(const std::string& task = "GeneLocation") {
  return {{"schema_version", 1},
          {"task", task},
          {"steps",
           {step("search", "ToolCall", "eutils.esearch",
                 {{"db", {{"literal", "gene"}}}, {"term", {{"question", true}}}}, "hits"),
            step("summary", "ToolCall", "eutils.esummary",
                 {{"db", {{"literal", "gene"}}}, {"id", {{"ref", "hits.first_id"}}}}, "doc")}},
          {"answer", "doc"}};
}

PlanRegistry load_one(const json& j, const ToolRegistry& tools = builtin_tool_registry()) {
  std::vector<PlanDocument> docs = {{"test.json", j.dump()}};
  return PlanRegistry::load(docs, tools);
}

TEST(TaskType, EveryTaskHasExactlyOneArea) {
  std::map<TaskArea, int> per_area;
  for (auto t : kAllTasks) per_area[area_of(t)]++;
  EXPECT_EQ(per_area[TaskArea::Nomenclature], 2);
  EXPECT_EQ(per_area[TaskArea::GenomicLocation], 3);
  EXPECT_EQ(per_area[TaskArea::FunctionalAnalysis], 2);
  EXPECT_EQ(per_area[TaskArea::SequenceAlignment], 2);
  EXPECT_THROW(area_of(TaskType::Unknown), PreconditionError);
}

TEST(TaskType, NamesRoundTrip) {
  for (auto t : kAllTasks) {
    EXPECT_EQ(task_from_string(to_string(t)), t);
    EXPECT_EQ(task_index(t), static_cast<std::size_t>(std::find(kAllTasks.begin(), kAllTasks.end(), t) - kAllTasks.begin()));
  }
  EXPECT_EQ(task_from_string("genelocation"), TaskType::GeneLocation);
  EXPECT_EQ(task_from_string("Gene alias"), TaskType::GeneAlias);
  EXPECT_FALSE(task_from_string("Capital cities"));
}

TEST(PlanRegistry, ShippedDirectoryCoversAllNineTasks) {
  const auto reg = PlanRegistry::load_directory(kPlanDir, builtin_tool_registry());
  EXPECT_EQ(reg.size(), 9u);
  for (auto t : kAllTasks) EXPECT_TRUE(reg.covers(t)) << to_string(t);
}

TEST(PlanRegistry, GeneLocationEndsWithGeneLookup) {
  const auto reg = PlanRegistry::load_directory(kPlanDir, builtin_tool_registry());
  const auto& plan = reg.retrieve_plan(TaskType::GeneLocation);
  const PlanStep* last_tool = nullptr;
  for (const auto& s : plan.steps)
    if (s.kind == StepKind::ToolCall) last_tool = &s;
  ASSERT_NE(last_tool, nullptr);
  EXPECT_EQ(last_tool->target.rfind("eutils.", 0), 0u);
  EXPECT_EQ(last_tool->inputs.at("db"), Binding::literal("gene"));
}

TEST(PlanRegistry, AlignHumanSubmitsBeforePolling) {
  const auto reg = PlanRegistry::load_directory(kPlanDir, builtin_tool_registry());
  std::vector<std::string> targets;
  for (const auto& s : reg.retrieve_plan(TaskType::AlignHuman).steps) targets.push_back(s.target);
  auto submit = std::find(targets.begin(), targets.end(), "blast.submit");
  auto poll = std::find(targets.begin(), targets.end(), "blast.poll");
  ASSERT_NE(submit, targets.end());
  ASSERT_NE(poll, targets.end());
  EXPECT_LT(submit, poll);
}

TEST(PlanRegistry, UnknownHasNoPlan) {
  const auto reg = PlanRegistry::load_directory(kPlanDir, builtin_tool_registry());
  EXPECT_THROW(reg.retrieve_plan(TaskType::Unknown), NoPlanForTask);
  const auto partial = load_one(minimal_plan());
  EXPECT_THROW(partial.retrieve_plan(TaskType::AlignHuman), NoPlanForTask);
}

TEST(PlanRegistry, LookupIsPure) {
  const auto reg = PlanRegistry::load_directory(kPlanDir, builtin_tool_registry());
  for (auto t : kAllTasks) EXPECT_EQ(reg.retrieve_plan(t), reg.retrieve_plan(t));
}

TEST(PlanValidation, EmptyStepListIsSchemaError) {
  auto j = minimal_plan();
  j["steps"] = json::array();
  EXPECT_THROW(load_one(j), SchemaError);
}

TEST(PlanValidation, ForwardReferenceIsBindingError) {
  auto j = minimal_plan();
  std::swap(j["steps"][0], j["steps"][1]);
  EXPECT_THROW(load_one(j), BindingError);
}

TEST(PlanValidation, SelfReferenceIsBindingError) {
  auto j = minimal_plan();
  j["steps"][1]["inputs"]["id"] = {{"ref", "doc"}};
  EXPECT_THROW(load_one(j), BindingError);
}

TEST(PlanValidation, AbsentFieldIsBindingError) {
  auto j = minimal_plan();
  j["steps"][1]["inputs"]["id"] = {{"ref", "hits.no_such_field"}};
  EXPECT_THROW(load_one(j), BindingError);
}

TEST(PlanValidation, TemplateReferencesAreChecked) {
  auto j = minimal_plan();
  j["steps"][0]["inputs"]["term"] = {{"template", "{later.x}[sym]"}};
  EXPECT_THROW(load_one(j), BindingError);
  j["steps"][0]["inputs"]["term"] = {{"template", "{question}[sym]"}};
  EXPECT_NO_THROW(load_one(j));
}

TEST(PlanValidation, DuplicateOutputIsRejected) {
  auto j = minimal_plan();
  j["steps"][1]["output"] = "hits";
  EXPECT_THROW(load_one(j), SchemaError);
}

TEST(PlanValidation, AnswerMustNameAnOutput) {
  auto j = minimal_plan();
  j["answer"] = "nowhere";
  EXPECT_THROW(load_one(j), BindingError);
  j["answer"] = "question";
  EXPECT_THROW(load_one(j), BindingError);
}

TEST(PlanValidation, MissingRequiredInput) {
  auto j = minimal_plan();
  j["steps"][0]["inputs"].erase("term");
  EXPECT_THROW(load_one(j), SchemaError);
}

TEST(PlanValidation, KindMustMatchTarget) {
  auto j = minimal_plan();
  j["steps"][0]["kind"] = "Transform";
  EXPECT_THROW(load_one(j), SchemaError);
}

TEST(PlanValidation, MalformedJsonAndWrongVersion) {
  std::vector<PlanDocument> bad = {{"bad.json", "{not json"}};
  EXPECT_THROW(PlanRegistry::load(bad, builtin_tool_registry()), SchemaError);
  auto j = minimal_plan();
  j["schema_version"] = 2;
  EXPECT_THROW(load_one(j), SchemaError);
}

TEST(PlanValidation, SecondPlanForTaskIsRejected) {
  json bundle = {{"schema_version", 1}, {"plans", {minimal_plan(), minimal_plan()}}};
  std::vector<PlanDocument> docs = {{"bundle.json", bundle.dump()}};
  EXPECT_THROW(PlanRegistry::load(docs, builtin_tool_registry()), SchemaError);
}

TEST(PlanValidation, BundleLoads) {
  json bundle = {{"schema_version", 1}, {"plans", {minimal_plan("GeneLocation"), minimal_plan("GeneAlias")}}};
  std::vector<PlanDocument> docs = {{"bundle.json", bundle.dump()}};
  EXPECT_EQ(PlanRegistry::load(docs, builtin_tool_registry()).size(), 2u);
}

TEST(ToolRegistry, DuplicateNameIsRejected) {
  ToolRegistry r;
  r.register_tool({"eutils.esearch", StepKind::ToolCall, {{"db", true}}, {}});
  EXPECT_THROW(r.register_tool({"eutils.esearch", StepKind::ToolCall, {}, {}}), DuplicateTool);
}

TEST(ToolRegistry, ExtensionToolIsUnknownUntilRegistered) {
  auto j = minimal_plan();
  j["steps"].push_back(step("predict", "ToolCall", "alphagenome.predict", {{"interval", {{"ref", "doc"}}}}, "effect"));
  j["answer"] = "effect";

  auto tools = builtin_tool_registry();
  EXPECT_THROW(load_one(j, tools), UnknownTool);

  tools.register_tool({"alphagenome.predict", StepKind::ToolCall, {{"interval", true}}, {}});
  const auto reg = load_one(j, tools);
  EXPECT_EQ(reg.retrieve_plan(TaskType::GeneLocation).steps.back().target, "alphagenome.predict");
}

TEST(PlanJson, RoundTripIsIdentity) {
  const auto reg = PlanRegistry::load_directory(kPlanDir, builtin_tool_registry());
  for (auto t : kAllTasks) {
    const auto& plan = reg.retrieve_plan(t);
    const auto again = plan_from_json(plan_to_json(plan), "roundtrip");
    EXPECT_EQ(again, plan) << to_string(t);
    EXPECT_NO_THROW(load_one(plan_to_json(again)));
  }
}

TEST(PlanJson, ReferenceHelpers) {
  EXPECT_EQ(split_reference("hits.first_id"), (std::pair<std::string, std::string>{"hits", "first_id"}));
  EXPECT_EQ(split_reference("doc"), (std::pair<std::string, std::string>{"doc", ""}));
  EXPECT_EQ(template_references("{args.gene}[sym] AND {question}"),
            (std::vector<std::string>{"args.gene", "question"}));
  EXPECT_EQ(Binding::templated("{a.b} {c}").references(), (std::vector<std::string>{"a.b", "c"}));
  EXPECT_EQ(Binding::question().references(), (std::vector<std::string>{"question"}));
  EXPECT_TRUE(Binding::literal("x").references().empty());
}

TEST(PlanFiles, ReadDirectoryIsSorted) {
  const auto docs = read_plan_directory(kPlanDir);
  ASSERT_EQ(docs.size(), 9u);
  EXPECT_TRUE(std::is_sorted(docs.begin(), docs.end(),
                             [](const PlanDocument& a, const PlanDocument& b) { return a.origin < b.origin; }));
  EXPECT_THROW(read_plan_directory(kPlanDir / "missing"), ConfigError);
}

}  // namespace
}  // namespace nba
