#include "tog/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tog/errors.hpp"

namespace tog::metrics {

double average_precision(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw ShapeMismatch("average_precision: size mismatch");
  if (scores.empty()) throw InvalidInput("average_precision: empty ranking");
  std::size_t positives = 0;
  for (int label : labels) {
    if (label != 0 && label != 1) throw InvalidInput("average_precision: labels must be 0 or 1");
    positives += static_cast<std::size_t>(label);
  }
  if (positives == 0) throw NoPositives("average_precision: no positive labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });

  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 1; rank <= order.size(); ++rank) {
    if (labels[order[rank - 1]] == 1) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank);
    }
  }
  return sum / static_cast<double>(positives);
}

namespace {

struct GroupStats {
  std::map<std::string, double>* ap;
  double* mean;
  std::size_t* degenerate;
};

void fill_grouping(const std::vector<ScoredSample>& samples, const std::string ScoredSample::*key,
                   GroupStats stats) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<int>>> groups;
  for (const auto& sample : samples) {
    auto& group = groups[sample.*key];
    group.first.push_back(sample.score);
    group.second.push_back(sample.label);
  }
  double total = 0.0;
  for (const auto& [name, group] : groups) {
    try {
      const double ap = average_precision(group.first, group.second);
      (*stats.ap)[name] = ap;
      total += ap;
    } catch (const NoPositives&) {
      ++*stats.degenerate;
    }
  }
  if (stats.ap->empty()) throw NoValidGroups("every group lacks positive labels");
  *stats.mean = total / static_cast<double>(stats.ap->size());
}

}  // namespace

ApReport map_report(const std::vector<ScoredSample>& samples) {
  if (samples.empty()) throw EmptyBatch("map_report: no samples");
  ApReport report;
  report.sample_count = samples.size();
  fill_grouping(samples, &ScoredSample::instance_id,
                {&report.instance_ap, &report.instance_map, &report.degenerate_instances});
  fill_grouping(samples, &ScoredSample::class_id, {&report.class_ap, &report.class_map, &report.degenerate_classes});
  fill_grouping(samples, &ScoredSample::task, {&report.task_ap, &report.task_map, &report.degenerate_tasks});
  return report;
}

std::string to_json(const ApReport& report) {
  const nlohmann::json root{{"instance_ap", report.instance_ap},
                            {"class_ap", report.class_ap},
                            {"task_ap", report.task_ap},
                            {"instance_map", report.instance_map},
                            {"class_map", report.class_map},
                            {"task_map", report.task_map},
                            {"degenerate_instances", report.degenerate_instances},
                            {"degenerate_classes", report.degenerate_classes},
                            {"degenerate_tasks", report.degenerate_tasks},
                            {"sample_count", report.sample_count}};
  return root.dump(2);
}

std::string format_table(const ApReport& report) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  auto section = [&](const char* title, const std::map<std::string, double>& ap, double mean,
                     std::size_t degenerate) {
    out << title << " mAP " << mean;
    if (degenerate) out << " (" << degenerate << " degenerate)";
    out << "\n";
    for (const auto& [name, value] : ap) out << "  " << name << " " << value << "\n";
  };
  section("instance", report.instance_ap, report.instance_map, report.degenerate_instances);
  section("class", report.class_ap, report.class_map, report.degenerate_classes);
  section("task", report.task_ap, report.task_map, report.degenerate_tasks);
  out << "samples " << report.sample_count << "\n";
  return out.str();
}

}  // namespace tog::metrics
