#include "padben/tasks.hpp"

#include <nlohmann/json.hpp>

#include "padben/error.hpp"
#include "padben/jsonl.hpp"
#include "padben/rng.hpp"

namespace padben {

TaskSpec task_spec(int task_id) {
  switch (task_id) {
    case 1: return {1, TextType::type3, TextType::type4};
    case 2: return {2, TextType::type1, TextType::type2};
    case 3: return {3, TextType::type4, TextType::type5_1st};
    case 4: return {4, TextType::type5_1st, TextType::type5_3rd};
    case 5: return {5, TextType::type1, TextType::type5_3rd};
    default: raise(ErrorCode::invalid_argument, "task_id must be in 1..5");
  }
}

std::string to_string(Setting s) {
  switch (s) {
    case Setting::exhaustive: return "exhaustive";
    case Setting::sampling_30: return "sampling_30";
    case Setting::sampling_50: return "sampling_50";
    case Setting::sampling_80: return "sampling_80";
    case Setting::pairs: return "pairs";
  }
  return "?";
}

Setting setting_from_string(const std::string& name) {
  for (int i = 0; i < kNumSettings; ++i) {
    auto s = static_cast<Setting>(i);
    if (to_string(s) == name) return s;
  }
  raise(ErrorCode::invalid_argument, "unknown setting: " + name);
}

double sampling_probability(Setting s) {
  switch (s) {
    case Setting::sampling_30: return 0.3;
    case Setting::sampling_50: return 0.5;
    case Setting::sampling_80: return 0.8;
    default: raise(ErrorCode::invalid_argument, "setting has no sampling probability");
  }
}

namespace {

const std::string& require_field(const SentenceGroup& g, TextType t) {
  const std::string* field = field_of(g, t);
  if (!field) {
    raise(ErrorCode::invalid_argument, "group " + std::to_string(g.group_id) + " missing field " +
                                           to_string(t));
  }
  return *field;
}

// Pinned stream layout: the exhaustive shuffle draws from
// (seed, tasks, 1, task_id); sampled draws from (seed, tasks, 100 + p*100,
// task_id, group_id); pair flips from (seed, tasks, 5, task_id, group_id).
std::uint64_t setting_tag(Setting s) { return static_cast<std::uint64_t>(s) + 1; }

}  // namespace

std::vector<SingleInstance> build_exhaustive(const std::vector<SentenceGroup>& groups,
                                             const TaskSpec& spec, std::uint64_t seed) {
  std::vector<SingleInstance> instances;
  instances.reserve(2 * groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    instances.push_back({static_cast<std::int64_t>(2 * i), require_field(g, spec.type_a), 0});
    instances.push_back({static_cast<std::int64_t>(2 * i + 1), require_field(g, spec.type_b), 1});
  }
  Rng rng(derive_stream(seed, {kStreamTasks, setting_tag(Setting::exhaustive),
                               static_cast<std::uint64_t>(spec.task_id)}));
  rng.shuffle(instances);
  return instances;
}

std::vector<SingleInstance> build_sampled(const std::vector<SentenceGroup>& groups,
                                          const TaskSpec& spec, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) raise(ErrorCode::invalid_argument, "sampling probability outside [0,1]");
  std::uint64_t p_tag = static_cast<std::uint64_t>(p * 100.0 + 0.5);
  std::vector<SingleInstance> instances;
  instances.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    Rng rng(derive_stream(seed, {kStreamTasks, 100 + p_tag, static_cast<std::uint64_t>(spec.task_id),
                                 static_cast<std::uint64_t>(g.group_id)}));
    const double r = rng.next_double();
    if (r < p) {
      instances.push_back({static_cast<std::int64_t>(i), require_field(g, spec.type_b), 1});
    } else {
      instances.push_back({static_cast<std::int64_t>(i), require_field(g, spec.type_a), 0});
    }
  }
  return instances;
}

std::vector<PairInstance> build_pairs(const std::vector<SentenceGroup>& groups,
                                      const TaskSpec& spec, std::uint64_t seed) {
  std::vector<PairInstance> pairs;
  pairs.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    const std::string& a = require_field(g, spec.type_a);
    const std::string& b = require_field(g, spec.type_b);
    Rng rng(derive_stream(seed, {kStreamTasks, setting_tag(Setting::pairs),
                                 static_cast<std::uint64_t>(spec.task_id),
                                 static_cast<std::uint64_t>(g.group_id)}));
    PairInstance pi;
    pi.idx = static_cast<std::int64_t>(i);
    if (rng.next_u64() & 1) {  // flip = 1
      pi.sentence_pair = {b, a};
      pi.label_pair = {1, 0};
    } else {  // flip = 0
      pi.sentence_pair = {a, b};
      pi.label_pair = {0, 1};
    }
    pairs.push_back(std::move(pi));
  }
  return pairs;
}

nlohmann::json single_to_json(const SingleInstance& s) {
  return nlohmann::json{{"idx", s.idx}, {"sentence", s.sentence}, {"label", s.label}};
}

nlohmann::json pair_to_json(const PairInstance& p) {
  return nlohmann::json{
      {"idx", p.idx},
      {"sentence_pair", nlohmann::json::array({p.sentence_pair.first, p.sentence_pair.second})},
      {"label_pair", nlohmann::json::array({p.label_pair.first, p.label_pair.second})}};
}

SingleInstance single_from_json(const nlohmann::json& doc) {
  SingleInstance s;
  s.idx = doc.at("idx").get<std::int64_t>();
  s.sentence = doc.at("sentence").get<std::string>();
  s.label = doc.at("label").get<int>();
  if (s.label != 0 && s.label != 1) raise(ErrorCode::parse, "instance label must be 0 or 1");
  return s;
}

PairInstance pair_from_json(const nlohmann::json& doc) {
  PairInstance p;
  p.idx = doc.at("idx").get<std::int64_t>();
  const auto& sp = doc.at("sentence_pair");
  const auto& lp = doc.at("label_pair");
  if (sp.size() != 2 || lp.size() != 2) raise(ErrorCode::parse, "pair instance must have 2 entries");
  p.sentence_pair = {sp[0].get<std::string>(), sp[1].get<std::string>()};
  p.label_pair = {lp[0].get<int>(), lp[1].get<int>()};
  const auto [l0, l1] = p.label_pair;
  if (!((l0 == 0 && l1 == 1) || (l0 == 1 && l1 == 0))) {
    raise(ErrorCode::parse, "label_pair must be (0,1) or (1,0)");
  }
  return p;
}

std::string task_file_name(int task_id, Setting setting) {
  return "task" + std::to_string(task_id) + "_" + to_string(setting) + ".jsonl";
}

std::vector<std::string> build_task_files(const std::vector<SentenceGroup>& groups,
                                          const std::vector<int>& task_ids,
                                          const std::vector<Setting>& settings, std::uint64_t seed,
                                          const std::string& out_dir) {
  std::vector<std::string> written;
  for (int task_id : task_ids) {
    const TaskSpec spec = task_spec(task_id);
    for (Setting setting : settings) {
      std::vector<nlohmann::json> rows;
      if (setting == Setting::pairs) {
        for (const auto& p : build_pairs(groups, spec, seed)) rows.push_back(pair_to_json(p));
      } else if (setting == Setting::exhaustive) {
        for (const auto& s : build_exhaustive(groups, spec, seed)) rows.push_back(single_to_json(s));
      } else {
        const double p = sampling_probability(setting);
        for (const auto& s : build_sampled(groups, spec, p, seed)) rows.push_back(single_to_json(s));
      }
      const std::string path = out_dir + "/" + task_file_name(task_id, setting);
      write_jsonl(path, rows);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace padben
