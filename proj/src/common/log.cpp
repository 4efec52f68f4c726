#include "nba/common/log.hpp"

#include <unistd.h>

#include "nba/common/error.hpp"

namespace nba {

JsonLinesLogSink::JsonLinesLogSink(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::app);
  if (!out_) throw ConfigError("cannot open log file " + path.string());
}

void JsonLinesLogSink::write(const nlohmann::json& record) {
  std::lock_guard lock(mu_);
  out_ << record.dump() << '\n';
  out_.flush();
}

long resident_memory_kb() {
  std::ifstream statm("/proc/self/statm");
  long pages_total = 0, pages_resident = 0;
  if (!(statm >> pages_total >> pages_resident)) return 0;
  return pages_resident * (sysconf(_SC_PAGESIZE) / 1024);
}

}  // namespace nba
