#include "nba/eval/leakage.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "nba/common/text.hpp"

namespace nba {

namespace fs = std::filesystem;

bool is_closed_vocabulary(TaskType task, const std::string& gold) {
  static const std::regex chromosome(R"(^chr([0-9]{1,2}|x|y|mt)$)", std::regex::icase);
  switch (task) {
    case TaskType::GeneLocation:
    case TaskType::SnpLocation:
      return std::regex_match(gold, chromosome);
    case TaskType::ProteinCodingGenes:
      return text::iequals(gold, "TRUE") || text::iequals(gold, "NA");
    case TaskType::AlignSpecies:
      return true;
    default:
      return false;
  }
}

LeakageReport audit_leakage(const std::vector<DatasetItem>& items, const std::vector<fs::path>& roots) {
  LeakageReport report;
  std::vector<std::pair<fs::path, std::string>> files;
  for (const auto& root : roots) {
    if (fs::is_regular_file(root)) {
      files.emplace_back(root, std::string{});
      continue;
    }
    if (!fs::is_directory(root)) throw ConfigError("leakage audit: no such path " + root.string());
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file()) files.emplace_back(e.path(), std::string{});
  }
  std::sort(files.begin(), files.end());
  for (auto& [path, body] : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    body = ss.str();
    report.files_scanned.push_back(path.string());
  }

  for (const auto& item : items) {
    for (const auto& gold : item.gold) {
      const auto g = text::trim(gold);
      if (g.empty()) continue;
      if (is_closed_vocabulary(item.task, g)) {
        report.exempted.insert(g);
        continue;
      }
      ++report.golds_checked;
      for (const auto& [path, body] : files)
        if (text::contains_word_ci(body, g)) report.hits.push_back({path.string(), g, item.id});
    }
  }
  return report;
}

}  // namespace nba
