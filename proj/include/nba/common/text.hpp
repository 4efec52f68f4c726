#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace nba::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::string collapse_whitespace(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool starts_with_ci(std::string_view s, std::string_view prefix);
bool contains_ci(std::string_view haystack, std::string_view needle);

/// Splits on any character in `delims`, dropping empty pieces.
std::vector<std::string> split_any(std::string_view s, std::string_view delims);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Number of Unicode code points in a UTF-8 string (invalid bytes count as one).
std::size_t utf8_length(std::string_view s);

/// Replaces every `{{name}}` with vars[name]; unknown names are left untouched.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars);

/// True when `word` occurs in `haystack` bounded by non-identifier characters.
bool contains_word_ci(std::string_view haystack, std::string_view word);

}  // namespace nba::text
