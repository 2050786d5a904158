#include "tog/datagen.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "net_util.hpp"
#include "tog/errors.hpp"
#include "tog/lang.hpp"

namespace tog::data {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("short write to " + path);
}

json parse_json(const std::string& text, const std::string& what) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) throw InvalidInput(what + ": malformed json");
  return parsed;
}

bool contains_whole_token(const std::vector<std::string>& tokens, const std::string& word) {
  return std::find(tokens.begin(), tokens.end(), word) != tokens.end();
}

std::string replace_all(std::string text, const std::string& slot, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(slot, pos)) != std::string::npos) {
    text.replace(pos, slot.size(), value);
    pos += value.size();
  }
  return text;
}

}  // namespace

std::string data_dir() {
  if (const char* env = std::getenv("TOGEVAL_DATA_DIR"); env && *env) return env;
#ifdef TOGEVAL_SOURCE_DATA_DIR
  if (std::filesystem::exists(std::filesystem::path(TOGEVAL_SOURCE_DATA_DIR) / "instruction_templates.txt"))
    return TOGEVAL_SOURCE_DATA_DIR;
#endif
#ifdef TOGEVAL_INSTALLED_DATA_DIR
  return TOGEVAL_INSTALLED_DATA_DIR;
#else
  throw IoError("no data directory configured; set TOGEVAL_DATA_DIR");
#endif
}

PromptSets build_prompt_sets(ConceptKind kind, std::size_t prompts_per_set) {
  const json prompts = parse_json(read_file(data_dir() + "/description_prompts.json"), "description prompts");
  const char* top = kind == ConceptKind::ObjectClass ? "class" : "task";
  const char* first_key = kind == ConceptKind::ObjectClass ? "property" : "affordance";
  const char* second_key = kind == ConceptKind::ObjectClass ? "similarity" : "relevance";
  if (!prompts.contains(top)) throw InvalidInput("description prompts: missing section");
  const json& section = prompts.at(top);

  PromptSets sets;
  auto take = [&](const char* key, std::vector<std::string>& dest) {
    const auto& list = section.at(key);
    if (list.size() < prompts_per_set)
      throw NotEnoughPrompts("prompt set '" + std::string(key) + "' has " + std::to_string(list.size()) +
                             " prompts, need " + std::to_string(prompts_per_set));
    for (std::size_t i = 0; i < prompts_per_set; ++i) dest.push_back(list[i].get<std::string>());
  };
  take(first_key, sets.first);
  take(second_key, sets.second);
  return sets;
}

std::string fill_prompt(const std::string& prompt, const std::string& concept_name) {
  return replace_all(replace_all(prompt, "[obj]", concept_name), "[task]", concept_name);
}

std::vector<std::string> SynthLexicon::class_names() const {
  std::vector<std::string> names;
  for (const auto& [name, entry] : classes) names.push_back(name);
  return names;
}

std::vector<std::string> SynthLexicon::task_names() const {
  std::vector<std::string> names;
  for (const auto& [name, entry] : tasks) names.push_back(name);
  return names;
}

std::vector<std::string> SynthLexicon::siblings(const std::string& concept_name) const {
  std::string group;
  if (auto it = classes.find(concept_name); it != classes.end()) group = it->second.group;
  else if (auto jt = tasks.find(concept_name); jt != tasks.end()) group = jt->second.group;
  else throw InvalidInput("unknown concept_name: " + concept_name);
  std::vector<std::string> out;
  for (const auto& member : groups.at(group).members)
    if (member != concept_name) out.push_back(member);
  return out;
}

bool SynthLexicon::related(const std::string& a, const std::string& b) const {
  auto group_of = [this](const std::string& c) {
    if (auto it = classes.find(c); it != classes.end()) return it->second.group;
    if (auto jt = tasks.find(c); jt != tasks.end()) return jt->second.group;
    throw InvalidInput("unknown concept_name: " + c);
  };
  return group_of(a) == group_of(b);
}

SynthLexicon load_lexicon(const std::string& path) {
  const json parsed = parse_json(read_file(path), "lexicon");
  SynthLexicon lex;
  lex.parts = parsed.at("parts").get<std::vector<std::string>>();
  lex.stopwords = parsed.at("stopwords").get<std::vector<std::string>>();
  for (const auto& [name, entry] : parsed.at("groups").items()) {
    GroupLexicon group;
    group.members = entry.at("members").get<std::vector<std::string>>();
    group.tokens = entry.at("tokens").get<std::vector<std::string>>();
    group.variants = entry.at("variants").get<std::vector<std::string>>();
    if (group.tokens.size() != 4) throw InvalidInput("group '" + name + "' needs exactly 4 tokens");
    if (group.variants.size() != 5) throw InvalidInput("group '" + name + "' needs exactly 5 variants");
    lex.groups[name] = std::move(group);
  }
  auto read_concepts = [&](const char* key, std::map<std::string, ConceptLexicon>& dest) {
    for (const auto& [name, entry] : parsed.at(key).items()) {
      ConceptLexicon concept_name{entry.at("group").get<std::string>(), entry.at("token").get<std::string>()};
      if (!lex.groups.count(concept_name.group)) throw InvalidInput("concept_name '" + name + "' names unknown group");
      dest[name] = std::move(concept_name);
    }
  };
  read_concepts("classes", lex.classes);
  read_concepts("tasks", lex.tasks);
  for (const auto& [cls, parts] : parsed.at("label_rules").items())
    for (const auto& [part, rules] : parts.items())
      for (const auto& [task, label] : rules.items()) lex.label_rules[cls][part][task] = label.get<int>();
  for (const auto& [cls, entry] : lex.classes) {
    if (!lex.label_rules.count(cls)) throw InvalidInput("class '" + cls + "' has no label rules");
    for (const auto& part : lex.parts) {
      auto it = lex.label_rules.at(cls).find(part);
      if (it == lex.label_rules.at(cls).end()) throw InvalidInput("class '" + cls + "' missing part " + part);
      for (const auto& [task, entry2] : lex.tasks)
        if (!it->second.count(task)) throw InvalidInput("class '" + cls + "' missing task label " + task);
    }
  }
  return lex;
}

SynthLexicon builtin_lexicon() { return load_lexicon(data_dir() + "/synthetic_lexicon.json"); }

StubLlmClient::StubLlmClient(SynthLexicon lexicon, std::uint64_t seed)
    : lexicon_(std::move(lexicon)), seed_(seed) {}

std::string StubLlmClient::complete(const std::string& prompt, double temperature, std::size_t max_tokens) {
  if (temperature < 0.0) throw InvalidInput("negative temperature");
  if (max_tokens == 0) throw InvalidInput("max_tokens must be positive");
  const std::size_t k = calls_[prompt]++;

  const auto tokens = lang::tokenize(prompt, 1 << 12);
  const bool about_task = prompt.find("verbs") != std::string::npos ||
                          prompt.find("can be used to") != std::string::npos ||
                          prompt.find("support the function of") != std::string::npos;

  std::string concept_name;
  if (about_task) {
    for (const auto& [name, entry] : lexicon_.tasks)
      if (contains_whole_token(tokens, name)) concept_name = name;
  } else {
    for (const auto& [name, entry] : lexicon_.classes)
      if (contains_whole_token(tokens, name)) concept_name = name;
  }
  if (concept_name.empty()) throw InvalidInput("prompt names no known concept_name: " + prompt);

  int kind;
  if (about_task) {
    if (prompt.find("semantically close") != std::string::npos) kind = 2;
    else if (prompt.find("similar effects") != std::string::npos) kind = 3;
    else if (prompt.find("can be used to") != std::string::npos) kind = 0;
    else if (prompt.find("support the function of") != std::string::npos) kind = 1;
    else throw InvalidInput("unrecognized task prompt: " + prompt);
  } else {
    if (prompt.find("similar shapes/geometries") != std::string::npos) kind = 2;
    else if (prompt.find("similar uses/functions") != std::string::npos) kind = 3;
    else if (prompt.find("shape/geometry") != std::string::npos) kind = 0;
    else if (prompt.find("use/function") != std::string::npos) kind = 1;
    else throw InvalidInput("unrecognized class prompt: " + prompt);
  }

  const auto& entry = about_task ? lexicon_.tasks.at(concept_name) : lexicon_.classes.at(concept_name);
  const auto& group = lexicon_.groups.at(entry.group);
  const std::size_t rotation = (k + seed_) % 4;
  const auto& w = group.variants[(k + seed_ / 4) % 5];
  const auto& u = entry.token;
  auto t = [&](std::size_t i) { return group.tokens[(rotation + i) % 4]; };

  std::string sibling = concept_name;
  if (!about_task) {
    const auto sibs = lexicon_.siblings(concept_name);
    if (!sibs.empty()) sibling = sibs[k % sibs.size()];
  }

  std::string text;
  if (!about_task) {
    switch (kind) {
      case 0:
        text = "the " + concept_name + " has a " + w + " " + t(0) + " " + t(1) + " shape with " + t(2) + " " + t(3) +
               " contours and a " + u + " build.";
        break;
      case 1:
        text = "the " + concept_name + " is used for " + t(0) + " " + t(1) + " purposes and its " + u +
               " design can support " + t(2) + " " + t(3) + " handling in " + w + " use.";
        break;
      case 2:
        text = "items like the " + sibling + " show a similar " + t(0) + " " + t(1) + " shape to the " + concept_name +
               " with " + w + " " + t(2) + " " + t(3) + " contours.";
        break;
      default:
        text = "items like the " + sibling + " have similar uses to the " + concept_name + " since each can serve " +
               t(0) + " " + t(1) + " and " + t(2) + " " + t(3) + " purposes in a " + w + " household.";
    }
  } else {
    switch (kind) {
      case 0:
        text = "items with a " + w + " " + u + " design can be used to " + concept_name + " since these show " + t(0) +
               " " + t(1) + " and " + t(2) + " " + t(3) + " handling.";
        break;
      case 1:
        text = "household objects that support the function of " + concept_name + " rely on " + t(0) + " " + t(1) +
               " motion and " + w + " " + t(2) + " " + t(3) + " action with a " + u + " effect.";
        break;
      case 2:
        text = "verbs semantically close to " + concept_name + " include " + t(0) + " " + t(1) + " " + t(2) + " and " +
               t(3) + " describing a " + w + " " + u + " motion.";
        break;
      default:
        text = "verbs like " + t(0) + " " + t(1) + " " + t(2) + " and " + t(3) + " imply effects similar to " +
               concept_name + " in a " + w + " " + u + " action.";
    }
  }

  const std::string filler = about_task ? " and a " + u + " motion" : " and a " + u + " form";
  for (std::size_t extra = k / 20; extra > 0; --extra) text.insert(text.size() - 1, filler);
  return text;
}

HttpLlmClient::HttpLlmClient(std::string endpoint, int timeout_seconds, int retries)
    : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds), retries_(retries) {}

std::string HttpLlmClient::complete(const std::string& prompt, double temperature, std::size_t max_tokens) {
  const json request{{"prompt", prompt}, {"temperature", temperature}, {"max_tokens", max_tokens}};
  const auto target = detail::split_url(endpoint_);

  std::string payload;
  std::string last_error = "no attempts made";
  for (int attempt = 0; attempt <= retries_; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(200) * (1 << (attempt - 1)));
    httplib::Client client(target.base);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    auto res = client.Post(target.path, request.dump(), "application/json");
    if (res && res->status == 200) {
      payload = res->body;
      break;
    }
    last_error = res ? "status " + std::to_string(res->status) : "connection failed";
    if (attempt == retries_) throw RetryExhausted("completion request failed: " + last_error);
  }

  const json reply = json::parse(payload, nullptr, false);
  if (reply.is_discarded() || !reply.contains("text") || !reply["text"].is_string())
    throw ClientFailure("completion reply missing text field");
  return reply["text"].get<std::string>();
}

std::vector<DescriptionRecord> generate_descriptions(LlmClient& client, const std::string& concept_name,
                                                     ConceptKind kind, std::size_t prompts_per_set,
                                                     std::size_t answers_per_prompt) {
  if (answers_per_prompt == 0) throw InvalidInput("answers_per_prompt must be positive");
  const PromptSets sets = build_prompt_sets(kind, prompts_per_set);
  std::vector<std::string> prompts = sets.first;
  prompts.insert(prompts.end(), sets.second.begin(), sets.second.end());

  std::vector<DescriptionRecord> records;
  records.reserve(prompts.size() * answers_per_prompt);
  for (std::size_t p = 0; p < prompts.size(); ++p) {
    const std::string filled = fill_prompt(prompts[p], concept_name);
    for (std::size_t a = 0; a < answers_per_prompt; ++a)
      records.push_back({concept_name, p, a, client.complete(filled, 1.0, 256)});
  }
  return records;
}

std::vector<DescriptionParagraph> assemble_paragraphs(const std::vector<DescriptionRecord>& records,
                                                      std::size_t limit, std::uint64_t seed) {
  if (records.empty()) throw IncompleteRecords("no description records");
  if (limit == 0) throw InvalidInput("paragraph limit must be positive");
  const std::string& concept_name = records.front().concept_name;

  std::size_t prompts = 0;
  for (const auto& r : records) prompts = std::max(prompts, r.prompt_index + 1);
  std::vector<std::vector<const std::string*>> answers(prompts);
  for (const auto& r : records) {
    if (r.concept_name != concept_name) throw InvalidInput("records mix concepts");
    auto& slot = answers[r.prompt_index];
    if (slot.size() <= r.answer_index) slot.resize(r.answer_index + 1, nullptr);
    if (slot[r.answer_index]) throw IncompleteRecords("duplicate answer index");
    slot[r.answer_index] = &r.text;
  }

  std::uint64_t total = 1;
  for (std::size_t p = 0; p < prompts; ++p) {
    if (answers[p].empty()) throw IncompleteRecords("prompt " + std::to_string(p) + " has no answers");
    for (std::size_t a = 0; a < answers[p].size(); ++a)
      if (!answers[p][a]) throw IncompleteRecords("prompt " + std::to_string(p) + " missing answer " + std::to_string(a));
    if (total > (std::uint64_t(1) << 40) / answers[p].size()) throw InvalidInput("combination count overflows");
    total *= answers[p].size();
  }

  std::vector<std::uint64_t> chosen;
  if (total <= limit) {
    chosen.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) chosen[i] = i;
  } else {
    Rng rng(seed);
    std::set<std::uint64_t> picked;
    while (picked.size() < limit) picked.insert(rng.uniform_index(total));
    chosen.assign(picked.begin(), picked.end());
  }

  std::vector<DescriptionParagraph> paragraphs;
  paragraphs.reserve(chosen.size());
  for (const auto combo : chosen) {
    DescriptionParagraph paragraph;
    paragraph.concept_name = concept_name;
    paragraph.answer_indices.resize(prompts);
    std::uint64_t rest = combo;
    for (std::size_t p = prompts; p-- > 0;) {
      paragraph.answer_indices[p] = rest % answers[p].size();
      rest /= answers[p].size();
    }
    for (std::size_t p = 0; p < prompts; ++p) {
      if (p) paragraph.text.push_back(' ');
      paragraph.text += *answers[p][paragraph.answer_indices[p]];
    }
    paragraphs.push_back(std::move(paragraph));
  }
  return paragraphs;
}

std::vector<std::string> load_templates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> templates;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    validate_template(line);
    templates.push_back(line);
  }
  if (templates.empty()) throw InvalidInput("template file is empty: " + path);
  return templates;
}

std::vector<std::string> builtin_templates() { return load_templates(data_dir() + "/instruction_templates.txt"); }

void validate_template(const std::string& tmpl) {
  if (tmpl.find("[obj]") == std::string::npos)
    throw MissingSlot("template lacks [obj]: " + tmpl);
  if (tmpl.find("[task]") == std::string::npos && tmpl.find("[tasking]") == std::string::npos)
    throw MissingSlot("template lacks [task] or [tasking]: " + tmpl);
  for (std::size_t pos = tmpl.find('['); pos != std::string::npos; pos = tmpl.find('[', pos + 1)) {
    const bool known = tmpl.compare(pos, 5, "[obj]") == 0 || tmpl.compare(pos, 9, "[tasking]") == 0 ||
                       tmpl.compare(pos, 6, "[task]") == 0;
    if (!known) throw MissingSlot("template has an unknown slot: " + tmpl);
  }
}

std::string gerund(const std::string& verb) {
  static const std::map<std::string, std::string> irregular{{"handover", "handing over"}};
  if (auto it = irregular.find(verb); it != irregular.end()) return it->second;
  if (verb.size() < 2) throw InvalidInput("verb too short: " + verb);

  auto is_vowel = [](char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; };
  const std::size_t n = verb.size();
  if (verb.back() == 'e' && verb[n - 2] != 'e' && verb[n - 2] != 'y')
    return verb.substr(0, n - 1) + "ing";
  const char last = verb[n - 1];
  if (n >= 3 && !is_vowel(last) && last != 'w' && last != 'x' && last != 'y' && is_vowel(verb[n - 2]) &&
      !is_vowel(verb[n - 3]))
    return verb + last + "ing";
  return verb + "ing";
}

std::string fill_template(const std::string& tmpl, const std::string& object_class, const std::string& task) {
  validate_template(tmpl);
  std::string filled = replace_all(tmpl, "[obj]", object_class);
  filled = replace_all(filled, "[tasking]", gerund(task));
  return replace_all(filled, "[task]", task);
}

std::vector<std::string> enumerate_instructions(const std::vector<std::string>& templates,
                                                const std::vector<std::string>& classes,
                                                const std::vector<std::string>& tasks) {
  std::vector<std::string> instructions;
  instructions.reserve(templates.size() * classes.size() * tasks.size());
  for (const auto& tmpl : templates)
    for (const auto& cls : classes)
      for (const auto& task : tasks) instructions.push_back(fill_template(tmpl, cls, task));
  return instructions;
}

std::vector<std::string> augment_templates(LlmClient* client, const std::vector<std::string>& base,
                                           std::size_t target_total, std::size_t retry_budget) {
  if (base.empty()) throw InvalidInput("no base templates");
  std::vector<std::string> pool = base;
  if (!client || pool.size() >= target_total) return pool;

  std::set<std::string> seen(pool.begin(), pool.end());
  std::size_t failures = 0;
  for (std::size_t i = 0; pool.size() < target_total; ++i) {
    const std::string& source = pool[i % base.size()];
    const std::string prompt = "Rewrite this robot instruction with the same meaning, keeping the bracketed "
                               "placeholders untouched: " + source;
    std::string candidate = client->complete(prompt, 1.0, 256);
    while (!candidate.empty() && (candidate.back() == '\n' || candidate.back() == ' ')) candidate.pop_back();
    bool ok = !candidate.empty() && !seen.count(candidate);
    if (ok) {
      try {
        validate_template(candidate);
      } catch (const MissingSlot&) {
        ok = false;
      }
    }
    if (ok) {
      pool.push_back(candidate);
      seen.insert(candidate);
    } else if (++failures > retry_budget) {
      throw RetryExhausted("template augmentation stalled after " + std::to_string(failures) + " rejects");
    }
  }
  return pool;
}

namespace {

json pose_to_json(const geom::GraspPose& pose) {
  json flat = json::array();
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) flat.push_back(pose.rotation.at(r, c));
  for (std::size_t i = 0; i < 3; ++i) flat.push_back(pose.translation.at(0, i));
  return flat;
}

geom::GraspPose pose_from_json(const json& flat) {
  if (!flat.is_array() || flat.size() != 12) throw InvalidInput("pose must be 12 numbers");
  Tensor rotation({3, 3});
  Tensor translation({3});
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) rotation.at(r, c) = flat[3 * r + c].get<double>();
  for (std::size_t i = 0; i < 3; ++i) translation.at(0, i) = flat[9 + i].get<double>();
  geom::GraspPose pose(std::move(rotation), std::move(translation));
  pose.validate();
  return pose;
}

json split_to_json(const SplitDef& split) {
  return json{{"mode", split.mode}, {"held_out", split.held_out}, {"fraction", split.fraction}, {"seed", split.seed}};
}

SplitDef split_from_json(const json& entry) {
  SplitDef split;
  split.mode = entry.at("mode").get<std::string>();
  split.held_out = entry.at("held_out").get<std::vector<std::string>>();
  split.fraction = entry.at("fraction").get<double>();
  split.seed = entry.at("seed").get<std::uint64_t>();
  return split;
}

}  // namespace

Tensor DatasetManifest::load_cloud(std::size_t instance_index) const {
  if (instance_index >= instances.size()) throw InvalidInput("instance index out of range");
  std::filesystem::path path(instances[instance_index].cloud_file);
  if (path.is_relative()) path = std::filesystem::path(root_dir) / path;
  return geom::read_pcld(path.string());
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  json instances = json::array();
  for (const auto& instance : manifest.instances) {
    json grasps = json::array();
    for (const auto& grasp : instance.grasps)
      grasps.push_back(json{{"pose", pose_to_json(grasp.pose)}, {"part", grasp.part}, {"labels", grasp.labels}});
    instances.push_back(json{{"instance_id", instance.instance_id},
                             {"class_id", instance.class_id},
                             {"cloud_file", instance.cloud_file},
                             {"grasps", std::move(grasps)}});
  }
  json splits = json::object();
  for (const auto& [name, split] : manifest.splits) splits[name] = split_to_json(split);

  const json root{{"format", "tog-dataset-v1"},
                  {"seed", manifest.seed},
                  {"classes", manifest.classes},
                  {"tasks", manifest.tasks},
                  {"concept_group", manifest.concept_group},
                  {"class_paragraphs", manifest.class_paragraphs},
                  {"task_paragraphs", manifest.task_paragraphs},
                  {"templates", manifest.templates},
                  {"label_rules", manifest.label_rules},
                  {"instances", std::move(instances)},
                  {"splits", std::move(splits)},
                  {"stopwords", manifest.stopwords}};
  return root.dump(2);
}

DatasetManifest manifest_from_json(const std::string& text) {
  const json root = parse_json(text, "dataset manifest");
  if (root.value("format", "") != "tog-dataset-v1") throw InvalidInput("unrecognized manifest format tag");

  DatasetManifest manifest;
  manifest.seed = root.at("seed").get<std::uint64_t>();
  manifest.classes = root.at("classes").get<std::vector<std::string>>();
  manifest.tasks = root.at("tasks").get<std::vector<std::string>>();
  manifest.concept_group = root.at("concept_group").get<std::map<std::string, std::string>>();
  manifest.class_paragraphs = root.at("class_paragraphs").get<std::map<std::string, std::vector<std::string>>>();
  manifest.task_paragraphs = root.at("task_paragraphs").get<std::map<std::string, std::vector<std::string>>>();
  manifest.templates = root.at("templates").get<std::vector<std::string>>();
  for (const auto& [cls, parts] : root.at("label_rules").items())
    for (const auto& [part, rules] : parts.items())
      for (const auto& [task, label] : rules.items()) manifest.label_rules[cls][part][task] = label.get<int>();
  for (const auto& entry : root.at("instances")) {
    InstanceEntry instance;
    instance.instance_id = entry.at("instance_id").get<std::string>();
    instance.class_id = entry.at("class_id").get<std::string>();
    instance.cloud_file = entry.at("cloud_file").get<std::string>();
    for (const auto& grasp : entry.at("grasps")) {
      GraspEntry parsed;
      parsed.pose = pose_from_json(grasp.at("pose"));
      parsed.part = grasp.at("part").get<std::string>();
      parsed.labels = grasp.at("labels").get<std::map<std::string, int>>();
      instance.grasps.push_back(std::move(parsed));
    }
    manifest.instances.push_back(std::move(instance));
  }
  for (const auto& [name, entry] : root.at("splits").items()) manifest.splits[name] = split_from_json(entry);
  manifest.stopwords = root.at("stopwords").get<std::vector<std::string>>();

  for (const auto& cls : manifest.classes)
    if (!manifest.class_paragraphs.count(cls) || manifest.class_paragraphs.at(cls).empty())
      throw InvalidInput("class '" + cls + "' has no description paragraphs");
  for (const auto& task : manifest.tasks)
    if (!manifest.task_paragraphs.count(task) || manifest.task_paragraphs.at(task).empty())
      throw InvalidInput("task '" + task + "' has no description paragraphs");
  for (const auto& instance : manifest.instances) {
    if (std::find(manifest.classes.begin(), manifest.classes.end(), instance.class_id) == manifest.classes.end())
      throw InvalidInput("instance '" + instance.instance_id + "' has unlisted class");
    for (const auto& grasp : instance.grasps)
      for (const auto& [task, label] : grasp.labels) {
        if (std::find(manifest.tasks.begin(), manifest.tasks.end(), task) == manifest.tasks.end())
          throw InvalidInput("grasp labels unlisted task '" + task + "'");
        if (label != 0 && label != 1) throw InvalidInput("grasp labels must be 0 or 1");
      }
  }
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
  write_file(path, manifest_to_json(manifest));
}

DatasetManifest load_manifest(const std::string& path) {
  DatasetManifest manifest = manifest_from_json(read_file(path));
  manifest.root_dir = std::filesystem::path(path).parent_path().string();
  if (manifest.root_dir.empty()) manifest.root_dir = ".";
  return manifest;
}

SplitDef make_split(const DatasetManifest& manifest, const std::string& mode, double fraction, std::uint64_t seed,
                    std::vector<std::string> held_out) {
  std::vector<std::string> universe;
  if (mode == "held_out_class") universe = manifest.classes;
  else if (mode == "held_out_task") universe = manifest.tasks;
  else if (mode == "held_out_instance")
    for (const auto& instance : manifest.instances) universe.push_back(instance.instance_id);
  else throw InvalidInput("unknown split mode: " + mode);
  std::sort(universe.begin(), universe.end());

  if (held_out.empty()) {
    if (universe.size() < 2) throw InsufficientConcepts("need at least 2 concepts to split over " + mode);
    if (fraction <= 0.0 || fraction >= 1.0) throw InvalidInput("holdout fraction must be in (0,1)");
    std::size_t k = static_cast<std::size_t>(fraction * static_cast<double>(universe.size()) + 0.5);
    k = std::clamp<std::size_t>(k, 1, universe.size() - 1);
    Rng rng(seed);
    rng.shuffle(universe);
    held_out.assign(universe.begin(), universe.begin() + static_cast<std::ptrdiff_t>(k));
  } else {
    std::set<std::string> pool(universe.begin(), universe.end());
    std::set<std::string> unique(held_out.begin(), held_out.end());
    if (unique.size() != held_out.size()) throw InvalidInput("held-out list repeats an entry");
    for (const auto& name : held_out)
      if (!pool.count(name)) throw InvalidInput("held-out entry not in dataset: " + name);
    if (held_out.size() >= universe.size())
      throw InsufficientConcepts("holding out everything leaves no training data");
  }
  std::sort(held_out.begin(), held_out.end());
  return SplitDef{mode, std::move(held_out), fraction, seed};
}

bool in_test_partition(const DatasetManifest& manifest, const SplitDef& split, std::size_t instance_index,
                       const std::string& task) {
  const InstanceEntry& instance = manifest.instances.at(instance_index);
  auto held = [&](const std::string& name) {
    return std::find(split.held_out.begin(), split.held_out.end(), name) != split.held_out.end();
  };
  if (split.mode == "held_out_class") return held(instance.class_id);
  if (split.mode == "held_out_task") return held(task);
  if (split.mode == "held_out_instance") return held(instance.instance_id);
  throw InvalidInput("unknown split mode: " + split.mode);
}

std::vector<Sample> partition_samples(const DatasetManifest& manifest, const SplitDef& split, Partition partition) {
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < manifest.instances.size(); ++i) {
    const auto& instance = manifest.instances[i];
    for (std::size_t g = 0; g < instance.grasps.size(); ++g)
      for (const auto& [task, label] : instance.grasps[g].labels) {
        const bool test = in_test_partition(manifest, split, i, task);
        if ((partition == Partition::Test) == test) samples.push_back({i, g, task});
      }
  }
  return samples;
}

}  // namespace tog::data
