#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tog/geometry.hpp"
#include "tog/random.hpp"

namespace tog::data {

// Resolves the bundled data directory: $TOGEVAL_DATA_DIR when set, else the
// source-tree default compiled into the library.
std::string data_dir();

enum class ConceptKind { ObjectClass, Task };

// The first prompt set asks about the concept itself (shape/geometry and
// use/function for classes, affordance for tasks); the second asks about
// related concepts (similarity for classes, relevance for tasks).
struct PromptSets {
  std::vector<std::string> first;
  std::vector<std::string> second;
};

PromptSets build_prompt_sets(ConceptKind kind, std::size_t prompts_per_set);
std::string fill_prompt(const std::string& prompt, const std::string& concept_name);

// Text completion client for description generation.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::string& prompt, double temperature, std::size_t max_tokens) = 0;
};

struct GroupLexicon {
  std::vector<std::string> members;
  std::vector<std::string> tokens;
  std::vector<std::string> variants;
};

struct ConceptLexicon {
  std::string group;
  std::string token;
};

// Vocabulary, relatedness groups, per-concept tokens, part names, and the
// per-(class, part, task) label table backing the synthetic dataset.
struct SynthLexicon {
  std::vector<std::string> parts;
  std::vector<std::string> stopwords;
  std::map<std::string, GroupLexicon> groups;
  std::map<std::string, ConceptLexicon> classes;
  std::map<std::string, ConceptLexicon> tasks;
  // class -> part -> task -> 0/1
  std::map<std::string, std::map<std::string, std::map<std::string, int>>> label_rules;

  std::vector<std::string> class_names() const;
  std::vector<std::string> task_names() const;
  std::vector<std::string> siblings(const std::string& concept_name) const;
  bool related(const std::string& a, const std::string& b) const;
};

SynthLexicon load_lexicon(const std::string& path);
SynthLexicon builtin_lexicon();

// Offline stand-in for a text-generation service. Answers are deterministic
// given (prompt, per-prompt call ordinal, seed); answers for related
// concepts share group vocabulary, unrelated ones share none.
class StubLlmClient : public LlmClient {
 public:
  StubLlmClient(SynthLexicon lexicon, std::uint64_t seed);
  std::string complete(const std::string& prompt, double temperature, std::size_t max_tokens) override;

 private:
  SynthLexicon lexicon_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::size_t> calls_;
};

// Remote completion service: POST {"prompt","temperature","max_tokens"}
// returning {"text"}; retries with exponential backoff.
class HttpLlmClient : public LlmClient {
 public:
  HttpLlmClient(std::string endpoint, int timeout_seconds = 60, int retries = 3);
  std::string complete(const std::string& prompt, double temperature, std::size_t max_tokens) override;

 private:
  std::string endpoint_;
  int timeout_seconds_;
  int retries_;
};

struct DescriptionRecord {
  std::string concept_name;
  std::size_t prompt_index = 0;
  std::size_t answer_index = 0;
  std::string text;
};

// 2 * prompts_per_set prompts, answers_per_prompt completions each.
std::vector<DescriptionRecord> generate_descriptions(LlmClient& client, const std::string& concept_name,
                                                     ConceptKind kind, std::size_t prompts_per_set,
                                                     std::size_t answers_per_prompt);

struct DescriptionParagraph {
  std::string concept_name;
  std::vector<std::size_t> answer_indices;  // one per prompt, in prompt order
  std::string text;
};

// One paragraph per combination of answer choices (answers^prompts in
// total), subsampled without replacement to at most limit paragraphs.
std::vector<DescriptionParagraph> assemble_paragraphs(const std::vector<DescriptionRecord>& records,
                                                      std::size_t limit, std::uint64_t seed);

// Instruction templates use [obj] for the class, [task] for the verb, and
// [tasking] for its gerund.
std::vector<std::string> load_templates(const std::string& path);
std::vector<std::string> builtin_templates();
void validate_template(const std::string& tmpl);
std::string gerund(const std::string& verb);
std::string fill_template(const std::string& tmpl, const std::string& object_class, const std::string& task);
std::vector<std::string> enumerate_instructions(const std::vector<std::string>& templates,
                                                const std::vector<std::string>& classes,
                                                const std::vector<std::string>& tasks);

// Grows the template pool by asking the client to paraphrase; offline
// (null client) returns the base set unchanged. Paraphrases must keep the
// slots and be new; gives up after retry_budget rejected attempts.
std::vector<std::string> augment_templates(LlmClient* client, const std::vector<std::string>& base,
                                           std::size_t target_total, std::size_t retry_budget);

struct GraspEntry {
  geom::GraspPose pose;
  std::string part;
  std::map<std::string, int> labels;  // task -> 0/1
};

struct InstanceEntry {
  std::string instance_id;
  std::string class_id;
  std::string cloud_file;  // relative to the manifest directory
  std::vector<GraspEntry> grasps;
};

struct SplitDef {
  std::string mode;  // held_out_class | held_out_task | held_out_instance
  std::vector<std::string> held_out;
  double fraction = 0.25;
  std::uint64_t seed = 0;
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  std::vector<std::string> classes;
  std::vector<std::string> tasks;
  std::map<std::string, std::string> concept_group;
  std::map<std::string, std::vector<std::string>> class_paragraphs;
  std::map<std::string, std::vector<std::string>> task_paragraphs;
  std::vector<std::string> templates;
  std::map<std::string, std::map<std::string, std::map<std::string, int>>> label_rules;
  std::vector<InstanceEntry> instances;
  std::map<std::string, SplitDef> splits;
  std::vector<std::string> stopwords;

  std::string root_dir;  // set on load; not serialized

  Tensor load_cloud(std::size_t instance_index) const;
};

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const std::string& text);
void save_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest load_manifest(const std::string& path);

struct Sample {
  std::size_t instance = 0;
  std::size_t grasp = 0;
  std::string task;
};

enum class Partition { Train, Test };

SplitDef make_split(const DatasetManifest& manifest, const std::string& mode, double fraction, std::uint64_t seed,
                    std::vector<std::string> held_out = {});
bool in_test_partition(const DatasetManifest& manifest, const SplitDef& split, std::size_t instance_index,
                       const std::string& task);
std::vector<Sample> partition_samples(const DatasetManifest& manifest, const SplitDef& split, Partition partition);

struct DatagenConfig {
  std::uint64_t seed = 42;
  std::vector<std::string> classes;  // empty selects every builtin class
  std::vector<std::string> tasks;    // empty selects every builtin task
  std::size_t instances_per_class = 4;
  std::size_t grasps_per_instance = 32;
  std::size_t points_per_cloud = 512;
  std::size_t prompts_per_set = 2;
  std::size_t answers_per_class_prompt = 20;
  std::size_t answers_per_task_prompt = 10;
  std::size_t paragraph_limit = 10;
  double holdout_fraction = 0.25;
};

// Full offline pipeline: synthesizes clouds and labeled grasps, generates
// descriptions and paragraphs through the client, attaches templates and
// default splits, writes clouds plus manifest.json under out_dir.
DatasetManifest generate_dataset(const DatagenConfig& config, const SynthLexicon& lexicon, LlmClient& client,
                                 const std::string& out_dir);

}  // namespace tog::data
