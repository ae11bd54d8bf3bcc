#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "padben/corpus.hpp"

namespace padben {

// The fixed task pairings: type_a carries label 0 (less processed), type_b
// label 1 (more processed).
struct TaskSpec {
  int task_id = 0;
  TextType type_a = TextType::type1;
  TextType type_b = TextType::type2;
};

TaskSpec task_spec(int task_id);  // task_id in 1..5

enum class Setting { exhaustive, sampling_30, sampling_50, sampling_80, pairs };
inline constexpr int kNumSettings = 5;
std::string to_string(Setting s);
Setting setting_from_string(const std::string& name);
double sampling_probability(Setting s);  // only for the sampling settings

struct SingleInstance {
  std::int64_t idx = 0;
  std::string sentence;
  int label = 0;
};

struct PairInstance {
  std::int64_t idx = 0;
  std::pair<std::string, std::string> sentence_pair;
  std::pair<int, int> label_pair{0, 1};
};

// 2n instances: instance 2i = (type_a, 0), 2i+1 = (type_b, 1); the final
// order is shuffled with the run seed (idx fields keep their construction
// values). Random draws come from the pinned stream
// (seed, tasks, setting, task_id, ...).
std::vector<SingleInstance> build_exhaustive(const std::vector<SentenceGroup>& groups,
                                             const TaskSpec& spec, std::uint64_t seed);

// One instance per group: r < p selects (type_b, 1), else (type_a, 0), with
// r drawn from the per-(setting, task, group) stream.
std::vector<SingleInstance> build_sampled(const std::vector<SentenceGroup>& groups,
                                          const TaskSpec& spec, double p, std::uint64_t seed);

// One pair per group; a Bernoulli(0.5) flip per group chooses the order:
// flip = 0 -> ([a, b], [0, 1]), flip = 1 -> ([b, a], [1, 0]).
std::vector<PairInstance> build_pairs(const std::vector<SentenceGroup>& groups,
                                      const TaskSpec& spec, std::uint64_t seed);

nlohmann::json single_to_json(const SingleInstance& s);
nlohmann::json pair_to_json(const PairInstance& p);
SingleInstance single_from_json(const nlohmann::json& doc);
PairInstance pair_from_json(const nlohmann::json& doc);

// task{N}_{setting}.jsonl
std::string task_file_name(int task_id, Setting setting);

// Builds and writes every requested (task, setting) dataset under out_dir;
// returns the written file paths.
std::vector<std::string> build_task_files(const std::vector<SentenceGroup>& groups,
                                          const std::vector<int>& task_ids,
                                          const std::vector<Setting>& settings, std::uint64_t seed,
                                          const std::string& out_dir);

}  // namespace padben
