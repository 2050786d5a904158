#include "common.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <iostream>

#include "tog/errors.hpp"

namespace togcli {

DirLock::DirLock(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  lock_path_ = dir / ".lock";
  const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0)
    throw tog::IoError("output directory is locked by another writer: " + lock_path_.string() +
                       " (delete the file if that process is gone)");
  ::close(fd);
}

DirLock::~DirLock() {
  std::error_code ec;
  std::filesystem::remove(lock_path_, ec);
}

std::map<std::string, std::string> parse_swaps(const std::vector<std::string>& pairs) {
  std::map<std::string, std::string> swaps;
  for (const auto& pair : pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size())
      throw tog::InvalidInput("swap must look like original=replacement: " + pair);
    swaps[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  return swaps;
}

void emit_report(const tog::metrics::ApReport& report, const std::string& report_path) {
  std::cout << tog::metrics::format_table(report);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw tog::IoError("cannot write report to " + report_path);
    out << tog::metrics::to_json(report) << "\n";
    std::cout << "report written to " << report_path << "\n";
  }
}

}  // namespace togcli
