#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <vector>

#include <nlohmann/json.hpp>

namespace nba {

/// Destination for structured (JSON) log records. Implementations are
/// safe to share between worker threads.
class LogSink {
 public:
  virtual ~LogSink() = default;
  virtual void write(const nlohmann::json& record) = 0;
};

class NullLogSink final : public LogSink {
 public:
  void write(const nlohmann::json&) override {}
};

/// One JSON object per line.
class JsonLinesLogSink final : public LogSink {
 public:
  explicit JsonLinesLogSink(const std::filesystem::path& path);
  void write(const nlohmann::json& record) override;

 private:
  std::mutex mu_;
  std::ofstream out_;
};

/// Keeps records in memory; used by log-capture tests.
class MemoryLogSink final : public LogSink {
 public:
  void write(const nlohmann::json& record) override {
    std::lock_guard lock(mu_);
    records_.push_back(record);
  }
  std::vector<nlohmann::json> records() const {
    std::lock_guard lock(mu_);
    return records_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<nlohmann::json> records_;
};

/// Resident set size of this process in KiB, 0 when unavailable.
long resident_memory_kb();

}  // namespace nba
