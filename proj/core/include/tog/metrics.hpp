#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace tog::metrics {

// Average precision of a descending-score ranking: the mean of precision
// taken at each positive's rank. Ties rank lower-index samples first.
double average_precision(const std::vector<double>& scores, const std::vector<int>& labels);

struct ScoredSample {
  std::string instance_id;
  std::string class_id;
  std::string task;
  int label = 0;
  double score = 0.0;
};

// mAP aggregated three ways: per object instance, per object class, and per
// task. Groups without a positive sample have no defined AP; they are
// skipped and counted as degenerate.
struct ApReport {
  std::map<std::string, double> instance_ap;
  std::map<std::string, double> class_ap;
  std::map<std::string, double> task_ap;
  double instance_map = 0.0;
  double class_map = 0.0;
  double task_map = 0.0;
  std::size_t degenerate_instances = 0;
  std::size_t degenerate_classes = 0;
  std::size_t degenerate_tasks = 0;
  std::size_t sample_count = 0;
};

ApReport map_report(const std::vector<ScoredSample>& samples);

std::string to_json(const ApReport& report);
std::string format_table(const ApReport& report);

}  // namespace tog::metrics
