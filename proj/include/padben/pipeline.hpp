#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "padben/gateway.hpp"
#include "padben/provider.hpp"
#include "padben/taxonomy.hpp"
#include "padben/tfidf.hpp"

namespace padben {

// Run configuration: seed, provider bindings per role, generation controls,
// dedup settings, task/setting selection, cache and output directories.
// Parses from a JSON file; unspecified fields keep their defaults.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "runs/out";
  std::string cache_dir;  // defaults to <out_dir>/cache
  bool offline = false;

  std::map<std::string, std::string> source_files;  // source name -> path

  DedupConfig dedup;
  GenControls controls;
  GatewayConfig gateway;

  nlohmann::json providers;  // role -> binding (generator, paraphrasers, ...)
  std::vector<std::string> detectors{"fastdetectgpt", "binoculars", "gltr", "radar", "llm_judge"};
  std::vector<int> tasks{1, 2, 3, 4, 5};
  std::vector<std::string> settings{"exhaustive", "sampling_30", "sampling_50", "sampling_80",
                                    "pairs"};

  GenSelection generate;            // --types / --depths
  std::vector<std::string> qa_scorer_ids;  // --scorers; empty = qa_scorers binding

  bool fastdetect_analytic = true;
  int fastdetect_samples = 10000;
  int kmeans_k = 3;
  bool report_group_sampling = false;
  std::string embeddings_dir;   // when set, analyze loads vectors from files
  std::string analysis_metric = "all";  // cosine | euclidean | manhattan | all

  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
};

// Configuration for the bundled offline demo: mock providers everywhere.
RunConfig demo_config(const std::string& data_dir, const std::string& out_dir, std::uint64_t seed);

inline const std::vector<std::string>& pipeline_stage_names() {
  static const std::vector<std::string> names = {"ingest",     "dedup",    "generate", "qa",
                                                 "build-tasks", "evaluate", "analyze",  "report"};
  return names;
}

// Executes pipeline stages with a content-hash manifest. A stage whose
// recorded signature matches its current inputs and whose outputs still hash
// correctly is skipped; an artifact whose bytes no longer match the manifest
// raises a checksum error naming the file.
class PipelineRun {
 public:
  explicit PipelineRun(RunConfig config);

  // Runs one named stage (always re-validating against the manifest).
  // Returns true if work was done, false if the stage was skipped as
  // up-to-date.
  bool run_stage(const std::string& name);

  // Runs every stage in order; stops at the first failure with the manifest
  // recording the stages that completed.
  void run_all();

  const RunConfig& config() const { return config_; }
  const nlohmann::json& manifest() const { return manifest_; }
  std::string manifest_path() const;

  Gateway& gateway() { return *gateway_; }

 private:
  struct StageIo {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    nlohmann::json config_slice;
  };

  StageIo stage_io(const std::string& name) const;
  std::string stage_signature(const std::string& name, const StageIo& io) const;
  bool outputs_up_to_date(const nlohmann::json& record) const;
  void verify_input_hashes(const std::vector<std::string>& inputs) const;
  void record_stage(const std::string& name, const std::string& signature, const StageIo& io,
                    nlohmann::json extra);
  void record_failure(const std::string& name, const std::string& what);
  void load_manifest();
  void save_manifest();

  void do_ingest(nlohmann::json& extra);
  void do_dedup(nlohmann::json& extra);
  void do_generate(nlohmann::json& extra);
  void do_qa(nlohmann::json& extra);
  void do_build_tasks(nlohmann::json& extra);
  void do_evaluate(nlohmann::json& extra);
  void do_analyze(nlohmann::json& extra);
  void do_report(nlohmann::json& extra);

  ProviderPtr provider_for(const std::string& role) const;
  std::vector<ProviderPtr> provider_pool(const std::string& role) const;

  std::string path(const std::string& rel) const { return config_.out_dir + "/" + rel; }

  RunConfig config_;
  std::shared_ptr<ResponseCache> cache_;
  std::unique_ptr<Gateway> gateway_;
  nlohmann::json manifest_;
};

// Single-source ingest: record file -> quality-filtered groups.jsonl.
std::size_t ingest_file(const std::string& source, const std::string& in_path,
                        const std::string& out_path);

// Merges group files (renumbering ids in input order on collision) and writes
// the deduplicated survivors.
std::size_t dedup_files(const std::vector<std::string>& in_paths, const std::string& out_path,
                        double theta);

// Standalone report over a directory of scores_{detector}_task{t}_{setting}.jsonl
// files; writes report.csv, report_table.csv and report_table.txt.
void report_from_scores(const std::string& scores_dir, const std::string& out_dir,
                        bool group_sampling);

}  // namespace padben
