#include "nba/eval/pricing.hpp"

#include <cmath>
#include <fstream>

namespace nba {

using nlohmann::json;

PricingTable PricingTable::from_json(const json& j, const std::string& origin) {
  if (!j.is_object() || j.value("schema_version", 0) != 1 || !j.contains("models"))
    throw SchemaError(origin + ": unsupported pricing schema");
  PricingTable t;
  for (const auto& [name, p] : j["models"].items()) {
    Price price;
    try {
      price.input_price = p.at("input_price").get<double>();
      price.output_price = p.at("output_price").get<double>();
    } catch (const json::exception& e) {
      throw SchemaError(origin + ": model " + name + ": " + e.what());
    }
    if (!(price.input_price >= 0) || !(price.output_price >= 0) || !std::isfinite(price.input_price) ||
        !std::isfinite(price.output_price))
      throw SchemaError(origin + ": model " + name + " has a negative price");
    t.models[name] = price;
  }
  return t;
}

PricingTable PricingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pricing file " + path.string());
  try {
    return from_json(json::parse(in), path.string());
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

double estimate_cost(const UsageMetrics& usage, const std::string& model, const PricingTable& pricing) {
  auto it = pricing.models.find(model);
  if (it == pricing.models.end()) throw UnknownModel("no price for model '" + model + "'");
  return static_cast<double>(usage.est_tokens_in) * it->second.input_price / 1e6 +
         static_cast<double>(usage.est_tokens_out) * it->second.output_price / 1e6;
}

}  // namespace nba
