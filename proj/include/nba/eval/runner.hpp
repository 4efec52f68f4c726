#pragma once

#include <functional>
#include <stop_token>
#include <string>
#include <vector>

#include "nba/eval/dataset.hpp"
#include "nba/eval/pricing.hpp"
#include "nba/eval/report.hpp"

namespace nba {

struct BenchmarkConfig {
  std::vector<std::string> models;  // chat endpoint names
  std::vector<Method> methods;
  /// Label of code-method rows (code mode uses no chat model).
  std::string embedding_model;
  ScoringMode mode = ScoringMode::strict;
  std::size_t workers = 4;
};

/// Resolves one question. Exceptions are caught and scored 0.
using AnswerFn = std::function<AnswerRecord(const DatasetItem&, const std::string& model, Method, std::stop_token)>;

struct BenchmarkRun {
  ScoreReport report;
  std::vector<AnswerRecord> records;  // same order as report.rows
};

/// Cartesian run over (model, method, non-excluded item) on a bounded pool
/// of worker threads. Code mode runs once, labeled with the embedding
/// model. Throws ConfigError only for an unusable configuration.
BenchmarkRun run_benchmark(const std::vector<DatasetItem>& items, const BenchmarkConfig& config,
                           const AnswerFn& answer, const PricingTable& pricing);

}  // namespace nba
