#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tog/metrics.hpp"

namespace togcli {

// Exclusive claim on an output directory for the life of the process, so
// two commands never write the same directory at once.
class DirLock {
 public:
  explicit DirLock(const std::filesystem::path& dir);
  ~DirLock();
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  std::filesystem::path lock_path_;
};

std::map<std::string, std::string> parse_swaps(const std::vector<std::string>& pairs);

// Prints the table to stdout and optionally writes the JSON report.
void emit_report(const tog::metrics::ApReport& report, const std::string& report_path);

void register_datagen(CLI::App& app);
void register_train(CLI::App& app);
void register_eval(CLI::App& app);
void register_score(CLI::App& app);
void register_baseline(CLI::App& app);

}  // namespace togcli
