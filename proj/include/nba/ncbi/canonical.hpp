#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nba {

using Params = std::vector<std::pair<std::string, std::string>>;

/// Cache and fixture key for one NCBI request:
///
///   eutils:esummary?db=gene&id=5699&retmode=json
///
/// Parameter names are lower-cased and sorted (value breaks ties), values
/// trimmed, enumerated values (db, cmd, program, retmode, ...) lower-cased,
/// and credentials (api_key, tool, email) dropped, so every ordering and
/// spelling of one request maps to one key.
std::string canonical_key(std::string_view service, std::string_view endpoint, const Params& params);

/// True for parameters that never reach a key or a recorded URL.
bool is_credential_param(std::string_view name);

}  // namespace nba
