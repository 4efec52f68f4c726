#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "nba/common/error.hpp"
#include "nba/gateway/usage.hpp"

namespace nba {

class UnknownModel : public Error {
 public:
  using Error::Error;
};

/// Dollars per million tokens.
///
///   {"schema_version": 1, "models": {"gpt-4o-mini": {"input_price": 0.15, "output_price": 0.6}}}
struct PricingTable {
  struct Price {
    double input_price = 0;
    double output_price = 0;
  };
  std::map<std::string, Price> models;

  static PricingTable from_json(const nlohmann::json& j, const std::string& origin);
  static PricingTable load(const std::filesystem::path& path);
  bool contains(const std::string& model) const { return models.contains(model); }
};

/// est_tokens_in * input_price / 1e6 + est_tokens_out * output_price / 1e6.
/// Throws UnknownModel.
double estimate_cost(const UsageMetrics& usage, const std::string& model, const PricingTable& pricing);

}  // namespace nba
