#include "padben/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>
#include <sstream>

#include "padben/detectors.hpp"
#include "padben/error.hpp"
#include "padben/hashing.hpp"
#include "padben/jsonl.hpp"
#include "padben/metrics.hpp"
#include "padben/provider_factory.hpp"
#include "padben/qa.hpp"
#include "padben/repspace.hpp"
#include "padben/rng.hpp"
#include "padben/tasks.hpp"

namespace padben {

namespace fs = std::filesystem;

// --- RunConfig ---------------------------------------------------------------

RunConfig RunConfig::from_json(const nlohmann::json& doc) {
  RunConfig cfg;
  cfg.seed = doc.value("seed", std::uint64_t{0});
  cfg.out_dir = doc.value("out_dir", std::string("runs/out"));
  cfg.cache_dir = doc.value("cache_dir", std::string());
  if (cfg.cache_dir.empty()) cfg.cache_dir = cfg.out_dir + "/cache";
  cfg.offline = doc.value("offline", false);

  if (doc.contains("data")) {
    for (const auto& [source, path] : doc["data"].items()) {
      cfg.source_files[source] = path.get<std::string>();
    }
  }
  if (doc.contains("dedup")) {
    cfg.dedup.theta = doc["dedup"].value("theta", 0.85);
    if (doc["dedup"].contains("priority")) {
      cfg.dedup.priority.clear();
      for (const auto& name : doc["dedup"]["priority"]) {
        cfg.dedup.priority.push_back(source_from_string(name.get<std::string>()));
      }
    }
  }
  if (doc.contains("controls")) {
    const auto& c = doc["controls"];
    cfg.controls.prefix_ratio = c.value("prefix_ratio", cfg.controls.prefix_ratio);
    cfg.controls.len_tol_type2 = c.value("len_tol_type2", cfg.controls.len_tol_type2);
    cfg.controls.len_tol_type4 = c.value("len_tol_type4", cfg.controls.len_tol_type4);
    cfg.controls.len_tol_type5 = c.value("len_tol_type5", cfg.controls.len_tol_type5);
    cfg.controls.base_temperature = c.value("base_temperature", cfg.controls.base_temperature);
    cfg.controls.temp_increment = c.value("temp_increment", cfg.controls.temp_increment);
    cfg.controls.convergence_sim = c.value("convergence_sim", cfg.controls.convergence_sim);
    cfg.controls.max_paraphrase_retries =
        c.value("max_paraphrase_retries", cfg.controls.max_paraphrase_retries);
  }
  if (doc.contains("gateway")) {
    const auto& g = doc["gateway"];
    cfg.gateway.max_attempts = g.value("max_attempts", cfg.gateway.max_attempts);
    cfg.gateway.backoff_ms = g.value("backoff_ms", cfg.gateway.backoff_ms);
    cfg.gateway.backoff_factor = g.value("backoff_factor", cfg.gateway.backoff_factor);
    cfg.gateway.max_inflight = g.value("max_inflight", cfg.gateway.max_inflight);
  }
  cfg.gateway.offline = cfg.offline;
  if (doc.contains("providers")) cfg.providers = doc["providers"];
  if (doc.contains("detectors")) cfg.detectors = doc["detectors"].get<std::vector<std::string>>();
  if (doc.contains("tasks")) cfg.tasks = doc["tasks"].get<std::vector<int>>();
  if (doc.contains("settings")) cfg.settings = doc["settings"].get<std::vector<std::string>>();
  if (doc.contains("generate")) {
    if (doc["generate"].contains("types")) {
      cfg.generate.types = doc["generate"]["types"].get<std::vector<int>>();
    }
    if (doc["generate"].contains("depths")) {
      cfg.generate.depths = doc["generate"]["depths"].get<std::vector<int>>();
    }
  }
  if (doc.contains("qa")) {
    cfg.qa_scorer_ids = doc["qa"].value("scorers", std::vector<std::string>{});
  }
  if (doc.contains("fastdetect")) {
    cfg.fastdetect_analytic = doc["fastdetect"].value("analytic", true);
    cfg.fastdetect_samples = doc["fastdetect"].value("n_samples", 10000);
  }
  if (doc.contains("analysis")) {
    cfg.kmeans_k = doc["analysis"].value("kmeans_k", 3);
    cfg.embeddings_dir = doc["analysis"].value("embeddings_dir", std::string());
    cfg.analysis_metric = doc["analysis"].value("metric", std::string("all"));
  }
  if (doc.contains("report")) {
    cfg.report_group_sampling = doc["report"].value("group_sampling", false);
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) raise(ErrorCode::parse, path + ": config is not valid JSON");
  return from_json(doc);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json doc;
  doc["seed"] = seed;
  doc["out_dir"] = out_dir;
  doc["cache_dir"] = cache_dir;
  doc["offline"] = offline;
  doc["data"] = source_files;
  nlohmann::json priority = nlohmann::json::array();
  for (Source s : dedup.priority) priority.push_back(to_string(s));
  doc["dedup"] = {{"theta", dedup.theta}, {"priority", std::move(priority)}};
  doc["controls"] = {{"prefix_ratio", controls.prefix_ratio},
                     {"len_tol_type2", controls.len_tol_type2},
                     {"len_tol_type4", controls.len_tol_type4},
                     {"len_tol_type5", controls.len_tol_type5},
                     {"base_temperature", controls.base_temperature},
                     {"temp_increment", controls.temp_increment},
                     {"convergence_sim", controls.convergence_sim},
                     {"max_paraphrase_retries", controls.max_paraphrase_retries}};
  doc["gateway"] = {{"max_attempts", gateway.max_attempts},
                    {"backoff_ms", gateway.backoff_ms},
                    {"backoff_factor", gateway.backoff_factor},
                    {"max_inflight", gateway.max_inflight}};
  doc["providers"] = providers;
  doc["detectors"] = detectors;
  doc["tasks"] = tasks;
  doc["settings"] = settings;
  doc["generate"] = {{"types", generate.types}, {"depths", generate.depths}};
  doc["qa"] = {{"scorers", qa_scorer_ids}};
  doc["fastdetect"] = {{"analytic", fastdetect_analytic}, {"n_samples", fastdetect_samples}};
  doc["analysis"] = {{"kmeans_k", kmeans_k},
                     {"embeddings_dir", embeddings_dir},
                     {"metric", analysis_metric}};
  doc["report"] = {{"group_sampling", report_group_sampling}};
  return doc;
}

RunConfig demo_config(const std::string& data_dir, const std::string& out_dir, std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.out_dir = out_dir;
  cfg.cache_dir = out_dir + "/cache";
  cfg.offline = true;
  cfg.gateway.offline = true;
  cfg.gateway.backoff_ms = 0;
  cfg.source_files = {{"paws", data_dir + "/paws.jsonl"},
                      {"mrpc", data_dir + "/mrpc.jsonl"},
                      {"hlpc", data_dir + "/hlpc.jsonl"}};
  cfg.providers = nlohmann::json{
      {"generator", {{"kind", "mock_completion"}}},
      {"paraphrasers", nlohmann::json::array({{{"kind", "mock_paraphrase"}, {"salt", 1}},
                                              {{"kind", "mock_paraphrase"}, {"salt", 2}},
                                              {{"kind", "mock_paraphrase"}, {"salt", 3}}})},
      {"judge", {{"kind", "mock_judge"}, {"salt", 5}}},
      {"scorer", {{"kind", "mock_logprob"}, {"salt", 7}}},
      {"observer", {{"kind", "mock_logprob"}, {"salt", 11}}},
      {"performer", {{"kind", "mock_logprob"}, {"salt", 13}}},
      {"embedder", {{"kind", "mock_embed"}, {"dim", 16}, {"salt", 15}}},
      {"classifier", {{"kind", "mock_classifier"}, {"salt", 17}}},
      {"qa_scorers", nlohmann::json::array({{{"kind", "mock_logprob"}, {"salt", 7}},
                                            {{"kind", "mock_uniform"}, {"vocab", 100}}})}};
  return cfg;
}

// --- PipelineRun --------------------------------------------------------------

PipelineRun::PipelineRun(RunConfig config) : config_(std::move(config)) {
  fs::create_directories(config_.out_dir);
  cache_ = std::make_shared<ResponseCache>(config_.cache_dir);
  config_.gateway.offline = config_.offline;
  gateway_ = std::make_unique<Gateway>(cache_, config_.gateway);
  load_manifest();
}

std::string PipelineRun::manifest_path() const { return config_.out_dir + "/manifest.json"; }

void PipelineRun::load_manifest() {
  manifest_ = nlohmann::json{{"version", "0.1.0"}, {"seed", config_.seed},
                             {"stages", nlohmann::json::object()}};
  if (fs::exists(manifest_path())) {
    nlohmann::json doc = nlohmann::json::parse(read_file(manifest_path()), nullptr, false);
    if (!doc.is_discarded() && doc.contains("stages")) manifest_ = doc;
  }
}

void PipelineRun::save_manifest() { write_file(manifest_path(), manifest_.dump(2) + "\n"); }

PipelineRun::StageIo PipelineRun::stage_io(const std::string& name) const {
  StageIo io;
  if (name == "ingest") {
    for (const char* source : {"paws", "mrpc", "hlpc"}) {
      if (auto it = config_.source_files.find(source); it != config_.source_files.end()) {
        io.inputs.push_back(it->second);
      }
    }
    io.outputs = {path("groups_raw.jsonl")};
    io.config_slice = {{"sources", config_.source_files}};
  } else if (name == "dedup") {
    io.inputs = {path("groups_raw.jsonl")};
    io.outputs = {path("groups.jsonl")};
    io.config_slice = {{"theta", config_.dedup.theta}};
  } else if (name == "generate") {
    io.inputs = {path("groups.jsonl")};
    io.outputs = {path("groups_full.jsonl")};
    io.config_slice = {{"seed", config_.seed},
                       {"controls", config_.to_json()["controls"]},
                       {"types", config_.generate.types},
                       {"depths", config_.generate.depths},
                       {"generator", config_.providers.value("generator", nlohmann::json())},
                       {"paraphrasers", config_.providers.value("paraphrasers", nlohmann::json())}};
  } else if (name == "qa") {
    io.inputs = {path("groups_full.jsonl")};
    io.outputs = {path("quality_report.csv"), path("jaccard_matrix.csv")};
    io.config_slice = {{"qa_scorers", config_.providers.value("qa_scorers", nlohmann::json())},
                       {"scorer_ids", config_.qa_scorer_ids}};
  } else if (name == "build-tasks") {
    io.inputs = {path("groups_full.jsonl")};
    for (int task : config_.tasks) {
      for (const auto& setting : config_.settings) {
        io.outputs.push_back(path("tasks/" + task_file_name(task, setting_from_string(setting))));
      }
    }
    io.config_slice = {{"seed", config_.seed}, {"tasks", config_.tasks}, {"settings", config_.settings}};
  } else if (name == "evaluate") {
    for (int task : config_.tasks) {
      for (const auto& setting : config_.settings) {
        io.inputs.push_back(path("tasks/" + task_file_name(task, setting_from_string(setting))));
      }
    }
    for (const auto& detector : config_.detectors) {
      for (int task : config_.tasks) {
        for (const auto& setting : config_.settings) {
          io.outputs.push_back(path("scores/scores_" + detector + "_task" + std::to_string(task) +
                                    "_" + setting + ".jsonl"));
        }
      }
    }
    io.config_slice = {{"seed", config_.seed},
                       {"detectors", config_.detectors},
                       {"fastdetect", nlohmann::json{{"analytic", config_.fastdetect_analytic},
                                                     {"n_samples", config_.fastdetect_samples}}},
                       {"providers", config_.providers}};
  } else if (name == "analyze") {
    if (config_.embeddings_dir.empty()) io.inputs = {path("groups_full.jsonl")};
    io.outputs = {path("analysis/distances.csv"),     path("analysis/cluster_types.csv"),
                  path("analysis/pca_coords.csv"),    path("analysis/trajectories.csv"),
                  path("analysis/drift.csv"),         path("analysis/iteration_distances.csv"),
                  path("analysis/sequential_drift.csv")};
    io.config_slice = {{"seed", config_.seed},
                       {"kmeans_k", config_.kmeans_k},
                       {"metric", config_.analysis_metric},
                       {"embedder", config_.providers.value("embedder", nlohmann::json())},
                       {"embeddings_dir", config_.embeddings_dir}};
  } else if (name == "report") {
    for (const auto& detector : config_.detectors) {
      for (int task : config_.tasks) {
        for (const auto& setting : config_.settings) {
          io.inputs.push_back(path("scores/scores_" + detector + "_task" + std::to_string(task) +
                                   "_" + setting + ".jsonl"));
        }
      }
    }
    io.outputs = {path("report.csv"), path("report_table.csv"), path("report_table.txt")};
    io.config_slice = {{"group_sampling", config_.report_group_sampling}};
  } else {
    raise(ErrorCode::invalid_argument, "unknown stage: " + name);
  }
  return io;
}

std::string PipelineRun::stage_signature(const std::string& name, const StageIo& io) const {
  std::ostringstream ss;
  ss << name << '\n' << io.config_slice.dump() << '\n';
  for (const auto& input : io.inputs) {
    if (!fs::exists(input)) raise(ErrorCode::io, name + ": missing input file: " + input);
    ss << input << '=' << sha256_file(input) << '\n';
  }
  return sha256_hex(ss.str());
}

bool PipelineRun::outputs_up_to_date(const nlohmann::json& record) const {
  if (!record.contains("outputs")) return false;
  for (const auto& [file, hash] : record["outputs"].items()) {
    if (!fs::exists(file) || sha256_file(file) != hash.get<std::string>()) return false;
  }
  return true;
}

void PipelineRun::verify_input_hashes(const std::vector<std::string>& inputs) const {
  if (!manifest_.contains("stages")) return;
  for (const auto& input : inputs) {
    for (const auto& [stage, record] : manifest_["stages"].items()) {
      if (!record.contains("outputs")) continue;
      auto it = record["outputs"].find(input);
      if (it != record["outputs"].end() && fs::exists(input)) {
        if (sha256_file(input) != it->get<std::string>()) {
          raise(ErrorCode::checksum, "checksum mismatch: " + input +
                                         " no longer matches the manifest entry written by stage '" +
                                         stage + "'");
        }
      }
    }
  }
}

void PipelineRun::record_stage(const std::string& name, const std::string& signature,
                               const StageIo& io, nlohmann::json extra) {
  nlohmann::json record;
  record["signature"] = signature;
  record["status"] = "ok";
  nlohmann::json outputs = nlohmann::json::object();
  std::vector<std::string> all_outputs = io.outputs;
  if (extra.contains("outputs_extra")) {
    for (const auto& p : extra["outputs_extra"]) all_outputs.push_back(p.get<std::string>());
    extra.erase("outputs_extra");
  }
  for (const auto& output : all_outputs) {
    if (!fs::exists(output)) raise(ErrorCode::internal, name + ": declared output missing: " + output);
    outputs[output] = sha256_file(output);
  }
  record["outputs"] = std::move(outputs);
  record["cache_hits"] = gateway_->stats().cache_hits.load();
  record["provider_calls"] = gateway_->stats().provider_calls.load();
  if (!extra.empty()) record["details"] = std::move(extra);
  manifest_["stages"][name] = std::move(record);
}

bool PipelineRun::run_stage(const std::string& name) {
  try {
    const StageIo io = stage_io(name);
    const std::string signature = stage_signature(name, io);
    if (manifest_["stages"].contains(name)) {
      const auto& record = manifest_["stages"][name];
      if (record.value("status", "") == "ok" && record.value("signature", "") == signature &&
          outputs_up_to_date(record)) {
        return false;  // up to date
      }
    }
    verify_input_hashes(io.inputs);

    nlohmann::json extra;
    if (name == "ingest") do_ingest(extra);
    else if (name == "dedup") do_dedup(extra);
    else if (name == "generate") do_generate(extra);
    else if (name == "qa") do_qa(extra);
    else if (name == "build-tasks") do_build_tasks(extra);
    else if (name == "evaluate") do_evaluate(extra);
    else if (name == "analyze") do_analyze(extra);
    else if (name == "report") do_report(extra);
    record_stage(name, signature, io, std::move(extra));
    save_manifest();
    return true;
  } catch (const std::exception& e) {
    record_failure(name, e.what());
    throw;
  }
}

void PipelineRun::record_failure(const std::string& name, const std::string& what) {
  manifest_["stages"][name] = {{"status", "failed"}, {"error", what}};
  save_manifest();
}

void PipelineRun::run_all() {
  for (const auto& name : pipeline_stage_names()) run_stage(name);
}

ProviderPtr PipelineRun::provider_for(const std::string& role) const {
  if (!config_.providers.contains(role)) {
    raise(ErrorCode::invalid_argument, "no provider bound for role '" + role + "'");
  }
  return make_provider(config_.providers[role]);
}

std::vector<ProviderPtr> PipelineRun::provider_pool(const std::string& role) const {
  if (!config_.providers.contains(role)) {
    raise(ErrorCode::invalid_argument, "no provider pool bound for role '" + role + "'");
  }
  std::vector<ProviderPtr> pool;
  for (const auto& spec : config_.providers[role]) pool.push_back(make_provider(spec));
  return pool;
}

// --- stages -------------------------------------------------------------------

void PipelineRun::do_ingest(nlohmann::json& extra) {
  std::vector<SentenceGroup> all;
  for (const char* source : {"paws", "mrpc", "hlpc"}) {
    auto it = config_.source_files.find(source);
    if (it == config_.source_files.end()) continue;
    auto records = ingest_pairs(it->second, source_from_string(source));
    auto kept = quality_filter(records);
    auto groups = standardize(kept, static_cast<std::int64_t>(all.size()));
    extra[source] = {{"pairs", records.size()}, {"kept", kept.size()}};
    all.insert(all.end(), groups.begin(), groups.end());
  }
  if (all.empty()) raise(ErrorCode::invalid_argument, "ingest: no source files configured");
  write_groups(path("groups_raw.jsonl"), all);
  extra["groups"] = all.size();
}

void PipelineRun::do_dedup(nlohmann::json& extra) {
  auto groups = read_groups(path("groups_raw.jsonl"));
  auto survivors = dedup(groups, config_.dedup);
  write_groups(path("groups.jsonl"), survivors);
  extra["before"] = groups.size();
  extra["after"] = survivors.size();
}

void PipelineRun::do_generate(nlohmann::json& extra) {
  auto groups = read_groups(path("groups.jsonl"));
  auto generator = provider_for("generator");
  auto pool = provider_pool("paraphrasers");
  GenerationSummary summary = generate_all(groups, config_.controls, *gateway_, *generator, pool,
                                           config_.seed, config_.generate);
  write_groups(path("groups_full.jsonl"), groups);
  extra["groups"] = summary.groups;
  extra["length_flagged"] = summary.length_flagged;
  extra["errors"] = summary.errors;
  const std::size_t texts = summary.groups * 5;  // type2 + type4 + up to 3 iterations
  extra["length_flagged_fraction"] =
      texts ? static_cast<double>(summary.length_flagged) / static_cast<double>(texts) : 0.0;
}

void PipelineRun::do_qa(nlohmann::json& extra) {
  auto groups = read_groups(path("groups_full.jsonl"));
  std::vector<ProviderPtr> scorers;
  if (!config_.qa_scorer_ids.empty()) {
    // Resolve requested scorer ids against every provider bound in the config.
    std::vector<ProviderPtr> known;
    for (const auto& [role, spec] : config_.providers.items()) {
      if (spec.is_array()) {
        for (const auto& entry : spec) known.push_back(make_provider(entry));
      } else if (spec.is_object()) {
        known.push_back(make_provider(spec));
      }
    }
    for (const auto& wanted : config_.qa_scorer_ids) {
      auto it = std::find_if(known.begin(), known.end(),
                             [&](const ProviderPtr& p) { return p->id() == wanted; });
      if (it == known.end()) {
        raise(ErrorCode::invalid_argument, "qa: no configured provider has id '" + wanted + "'");
      }
      scorers.push_back(*it);
    }
  } else if (config_.providers.contains("qa_scorers")) {
    scorers = provider_pool("qa_scorers");
  } else {
    scorers.push_back(provider_for("scorer"));
  }
  QualityReport report = quality_report(groups, *gateway_, scorers);
  write_file(path("quality_report.csv"), quality_report_csv(report));
  write_file(path("jaccard_matrix.csv"), jaccard_matrix_csv(report.jaccard));
  extra["scorers"] = scorers.size();
}

void PipelineRun::do_build_tasks(nlohmann::json& extra) {
  auto groups = read_groups(path("groups_full.jsonl"));
  std::vector<Setting> settings;
  for (const auto& s : config_.settings) settings.push_back(setting_from_string(s));
  auto files = build_task_files(groups, config_.tasks, settings, config_.seed, path("tasks"));
  extra["files"] = files.size();
}

void PipelineRun::do_evaluate(nlohmann::json& extra) {
  std::size_t abstentions = 0;
  for (const auto& detector_id : config_.detectors) {
    std::unique_ptr<ScoreDetector> detector;
    ProviderPtr judge;
    if (detector_id == "fastdetectgpt") {
      FastDetectOptions opts;
      opts.analytic = config_.fastdetect_analytic;
      opts.n_samples = config_.fastdetect_samples;
      opts.seed = config_.seed;
      detector = std::make_unique<FastDetectGpt>(*gateway_, provider_for("scorer"), opts);
    } else if (detector_id == "binoculars") {
      detector = std::make_unique<Binoculars>(*gateway_, provider_for("observer"),
                                              provider_for("performer"));
    } else if (detector_id == "gltr") {
      detector = std::make_unique<Gltr>(*gateway_, provider_for("scorer"));
    } else if (detector_id == "radar") {
      detector = std::make_unique<Radar>(*gateway_, provider_for("classifier"));
    } else if (detector_id == "llm_judge") {
      judge = provider_for("judge");
    } else {
      raise(ErrorCode::invalid_argument, "unknown detector: " + detector_id);
    }

    for (int task : config_.tasks) {
      for (const auto& setting_name : config_.settings) {
        const Setting setting = setting_from_string(setting_name);
        const std::string task_path = path("tasks/" + task_file_name(task, setting));
        std::vector<nlohmann::json> rows;
        if (setting == Setting::pairs) {
          std::vector<PairInstance> instances;
          for (const auto& doc : read_jsonl(task_path)) instances.push_back(pair_from_json(doc));
          auto scored = parallel_map<nlohmann::json>(
              instances.size(), config_.gateway.max_inflight, [&](std::size_t i) {
                const auto& inst = instances[i];
                nlohmann::json row{{"idx", inst.idx}, {"label", pair_truth(inst)}};
                if (judge) {
                  JudgeResult r = llm_judge_pair(*gateway_, *judge, inst, task);
                  auto pred = judge_pair_prediction(r, task);
                  // abstentions enter the metrics as decision 0 with score 0.5
                  row["score"] = pred ? static_cast<double>(*pred) : 0.5;
                  row["decision"] = pred ? *pred : 0;
                  row["abstained"] = r.abstained;
                } else {
                  row["score"] = pair_adapter(inst, *detector).score;
                }
                return row;
              });
          rows.assign(scored.begin(), scored.end());
        } else {
          std::vector<SingleInstance> instances;
          for (const auto& doc : read_jsonl(task_path)) instances.push_back(single_from_json(doc));
          auto scored = parallel_map<nlohmann::json>(
              instances.size(), config_.gateway.max_inflight, [&](std::size_t i) {
                const auto& inst = instances[i];
                nlohmann::json row{{"idx", inst.idx}, {"label", inst.label}};
                if (judge) {
                  JudgeResult r = llm_judge_single(*gateway_, *judge, inst, task);
                  row["score"] = judge_score(r);
                  row["decision"] = r.decision ? *r.decision : 0;
                  row["abstained"] = r.abstained;
                } else {
                  row["score"] = detector->score(inst.sentence);
                }
                return row;
              });
          rows.assign(scored.begin(), scored.end());
        }
        for (const auto& row : rows) {
          if (row.value("abstained", false)) ++abstentions;
        }
        write_jsonl(path("scores/scores_" + detector_id + "_task" + std::to_string(task) + "_" +
                         setting_name + ".jsonl"),
                    rows);
      }
    }
  }
  extra["abstentions"] = abstentions;
}

namespace {

EmbeddingSet embed_texts(Gateway& gateway, Provider& embedder, const std::string& tag,
                         const std::vector<std::string>& texts, int max_inflight) {
  if (texts.empty()) raise(ErrorCode::invalid_argument, "embed_texts: no texts for " + tag);
  auto vectors = parallel_map<std::vector<double>>(
      texts.size(), max_inflight, [&](std::size_t i) { return gateway.embed(embedder, texts[i]); });
  EmbeddingSet set;
  set.tag = tag;
  set.vectors.resize(static_cast<Eigen::Index>(vectors.size()),
                     static_cast<Eigen::Index>(vectors.front().size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != vectors.front().size()) {
      raise(ErrorCode::invalid_argument, "embedding dimensions differ within " + tag);
    }
    for (std::size_t j = 0; j < vectors[i].size(); ++j) {
      set.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i][j];
    }
  }
  return set;
}

void write_embedding_set(const std::string& path, const EmbeddingSet& set) {
  std::vector<nlohmann::json> rows;
  for (Eigen::Index i = 0; i < set.vectors.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < set.vectors.cols(); ++j) row.push_back(set.vectors(i, j));
    rows.push_back(std::move(row));
  }
  write_jsonl(path, rows);
}

EmbeddingSet read_embedding_set(const std::string& path, const std::string& tag) {
  auto rows = read_jsonl(path);
  if (rows.empty()) raise(ErrorCode::parse, path + ": empty embedding file");
  EmbeddingSet set;
  set.tag = tag;
  const auto dim = rows.front().size();
  set.vectors.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) raise(ErrorCode::parse, path + ": inconsistent vector sizes");
    for (std::size_t j = 0; j < dim; ++j) {
      set.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
    }
  }
  return set;
}

}  // namespace

void PipelineRun::do_analyze(nlohmann::json& extra) {
  std::vector<EmbeddingSet> categories;
  std::map<std::string, std::vector<EmbeddingSet>> iterations;
  std::vector<std::string> extra_outputs;

  if (!config_.embeddings_dir.empty()) {
    // Vectors supplied as files: <tag>.jsonl for categories,
    // <type>_iter<k>.jsonl for trajectory iterations.
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(config_.embeddings_dir)) {
      if (entry.path().extension() == ".jsonl") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    std::map<std::string, std::map<int, EmbeddingSet>> iter_sets;
    for (const auto& file : files) {
      const std::string stem = fs::path(file).stem().string();
      auto iter_pos = stem.rfind("_iter");
      if (iter_pos != std::string::npos) {
        const std::string type = stem.substr(0, iter_pos);
        const int k = std::stoi(stem.substr(iter_pos + 5));
        iter_sets[type][k] = read_embedding_set(file, stem);
      } else {
        categories.push_back(read_embedding_set(file, stem));
      }
    }
    for (auto& [type, by_iter] : iter_sets) {
      for (auto& [k, set] : by_iter) iterations[type].push_back(std::move(set));
    }
  } else {
    auto groups = read_groups(path("groups_full.jsonl"));
    auto embedder = provider_for("embedder");
    const int inflight = config_.gateway.max_inflight;

    auto texts_of = [&](TextType t) {
      std::vector<std::string> texts;
      for (const auto& g : groups) {
        const std::string* field = field_of(g, t);
        if (!field) {
          raise(ErrorCode::invalid_argument,
                "analyze: group " + std::to_string(g.group_id) + " missing " + to_string(t));
        }
        texts.push_back(*field);
      }
      return texts;
    };

    categories.push_back(embed_texts(*gateway_, *embedder, "human", texts_of(TextType::type1), inflight));
    categories.push_back(
        embed_texts(*gateway_, *embedder, "llm_generated", texts_of(TextType::type2), inflight));
    categories.push_back(
        embed_texts(*gateway_, *embedder, "llm_paraphrased", texts_of(TextType::type4), inflight));

    // Trajectories: human origin (type1 -> type4), LLM origin (type2 -> the
    // Type 5 iteration chain).
    iterations["human_origin"].push_back(
        embed_texts(*gateway_, *embedder, "human_origin_iter0", texts_of(TextType::type1), inflight));
    iterations["human_origin"].push_back(
        embed_texts(*gateway_, *embedder, "human_origin_iter1", texts_of(TextType::type4), inflight));

    std::size_t max_iters = 0;
    for (const auto& g : groups) {
      if (g.type5_meta) max_iters = std::max(max_iters, g.type5_meta->iterations.size());
    }
    iterations["llm_origin"].push_back(
        embed_texts(*gateway_, *embedder, "llm_origin_iter0", texts_of(TextType::type2), inflight));
    for (std::size_t k = 0; k < max_iters; ++k) {
      std::vector<std::string> texts;
      for (const auto& g : groups) {
        if (g.type5_meta && k < g.type5_meta->iterations.size()) {
          texts.push_back(g.type5_meta->iterations[k]);
        } else if (g.type5_3rd) {
          texts.push_back(*g.type5_3rd);  // converged chains hold their last text
        }
      }
      iterations["llm_origin"].push_back(embed_texts(
          *gateway_, *embedder, "llm_origin_iter" + std::to_string(k + 1), texts, inflight));
    }

    for (const auto& set : categories) {
      const std::string out = path("embeddings/" + set.tag + ".jsonl");
      write_embedding_set(out, set);
      extra_outputs.push_back(out);
    }
    for (const auto& [type, sets] : iterations) {
      for (const auto& set : sets) {
        const std::string out = path("embeddings/" + set.tag + ".jsonl");
        write_embedding_set(out, set);
        extra_outputs.push_back(out);
      }
    }
  }

  std::vector<Metric> metrics;
  if (config_.analysis_metric == "all") {
    metrics = {Metric::cosine, Metric::euclidean, Metric::manhattan};
  } else {
    metrics = {metric_from_string(config_.analysis_metric)};
  }

  // Distance tables: both full-pairwise and centroid-based, over the selected
  // metric(s).
  {
    std::ostringstream out;
    out << "pair";
    for (Metric m : metrics) out << ",pairwise_" << to_string(m) << ",centroid_" << to_string(m);
    out << '\n';
    for (std::size_t i = 0; i < categories.size(); ++i) {
      for (std::size_t j = i + 1; j < categories.size(); ++j) {
        out << categories[i].tag << "<->" << categories[j].tag;
        const Eigen::VectorXd ci = centroid(categories[i].vectors);
        const Eigen::VectorXd cj = centroid(categories[j].vectors);
        for (Metric m : metrics) {
          out << ',' << pairwise_mean_distance(categories[i], categories[j], m) << ','
              << distance(ci, cj, m);
        }
        out << '\n';
      }
    }
    write_file(path("analysis/distances.csv"), out.str());
  }

  // Pooled PCA projection + k-means contingency over the category sets.
  {
    Eigen::Index total = 0, dim = categories.front().vectors.cols();
    for (const auto& c : categories) total += c.vectors.rows();
    Eigen::MatrixXd pooled(total, dim);
    std::vector<int> type_index;
    Eigen::Index offset = 0;
    for (std::size_t c = 0; c < categories.size(); ++c) {
      pooled.middleRows(offset, categories[c].vectors.rows()) = categories[c].vectors;
      for (Eigen::Index i = 0; i < categories[c].vectors.rows(); ++i) {
        type_index.push_back(static_cast<int>(c));
      }
      offset += categories[c].vectors.rows();
    }

    Pca2Result pca = pca2(pooled);
    {
      std::ostringstream out;
      out << "category,row,pc1,pc2\n";
      for (Eigen::Index i = 0; i < pca.projected.rows(); ++i) {
        out << categories[static_cast<std::size_t>(type_index[static_cast<std::size_t>(i)])].tag
            << ',' << i << ',' << pca.projected(i, 0) << ',' << pca.projected(i, 1) << '\n';
      }
      write_file(path("analysis/pca_coords.csv"), out.str());
    }

    KMeansResult km = kmeans(pooled, config_.kmeans_k, config_.seed);
    auto counts = cluster_type_matrix(km.assignments, type_index);
    {
      std::ostringstream out;
      out << "cluster";
      for (const auto& c : categories) out << ',' << c.tag;
      out << '\n';
      for (std::size_t k = 0; k < counts.size(); ++k) {
        out << k;
        for (std::size_t t = 0; t < counts[k].size(); ++t) out << ',' << counts[k][t];
        out << '\n';
      }
      write_file(path("analysis/cluster_types.csv"), out.str());
    }
    extra["kmeans_inertia"] = km.inertia;
    extra["pca_explained"] = {pca.explained_variance_ratio(0), pca.explained_variance_ratio(1)};
  }

  // Cross-category distances per iteration: each reference category against
  // every iteration of every chain, full-pairwise (second analysis route).
  {
    std::ostringstream out;
    out << "reference,chain,iteration";
    for (Metric m : metrics) out << ",pairwise_" << to_string(m);
    out << '\n';
    for (const auto& reference : categories) {
      for (const auto& [type, sets] : iterations) {
        for (std::size_t k = 0; k < sets.size(); ++k) {
          out << reference.tag << ',' << type << ',' << k;
          for (Metric m : metrics) out << ',' << pairwise_mean_distance(reference, sets[k], m);
          out << '\n';
        }
      }
    }
    write_file(path("analysis/iteration_distances.csv"), out.str());
  }

  // Consecutive-iteration drift of population centroids in the original
  // embedding space (first analysis route; the PCA-space drift below covers
  // the trajectory view).
  {
    std::ostringstream out;
    out << "chain,step";
    for (Metric m : metrics) out << ',' << to_string(m);
    out << '\n';
    for (const auto& [type, sets] : iterations) {
      std::vector<Eigen::VectorXd> centroids;
      for (const auto& set : sets) centroids.push_back(centroid(set.vectors));
      for (std::size_t i = 0; i + 1 < centroids.size(); ++i) {
        out << type << ',' << i << "->" << (i + 1);
        for (Metric m : metrics) out << ',' << distance(centroids[i], centroids[i + 1], m);
        out << '\n';
      }
    }
    write_file(path("analysis/sequential_drift.csv"), out.str());
  }

  // Iteration trajectories in a shared PCA space.
  {
    TrajectoryAnalysis analysis = trajectory_analysis(iterations);
    std::ostringstream coords, drift;
    coords << "type,iteration,pc1,pc2\n";
    drift << "type,step,drift\n";
    for (const auto& t : analysis.trajectories) {
      for (std::size_t i = 0; i < t.centroids.size(); ++i) {
        coords << t.tag << ',' << i << ',' << t.centroids[i](0) << ',' << t.centroids[i](1) << '\n';
      }
      for (std::size_t i = 0; i < t.drifts.size(); ++i) {
        drift << t.tag << ',' << i << "->" << (i + 1) << ',' << t.drifts[i] << '\n';
      }
      drift << t.tag << ",total," << t.total_drift << '\n';
    }
    write_file(path("analysis/trajectories.csv"), coords.str());
    write_file(path("analysis/drift.csv"), drift.str());
  }

  if (!extra_outputs.empty()) extra["outputs_extra"] = extra_outputs;
}

void PipelineRun::do_report(nlohmann::json& extra) {
  report_from_scores(path("scores"), config_.out_dir, config_.report_group_sampling);
  extra["group_sampling"] = config_.report_group_sampling;
}

// --- standalone file operations ------------------------------------------------

std::size_t ingest_file(const std::string& source, const std::string& in_path,
                        const std::string& out_path) {
  auto records = ingest_pairs(in_path, source_from_string(source));
  auto kept = quality_filter(records);
  auto groups = standardize(kept);
  write_groups(out_path, groups);
  return groups.size();
}

std::size_t dedup_files(const std::vector<std::string>& in_paths, const std::string& out_path,
                        double theta) {
  std::vector<SentenceGroup> all;
  bool collision = false;
  std::set<std::int64_t> seen;
  for (const auto& in : in_paths) {
    for (auto& g : read_groups(in)) {
      if (!seen.insert(g.group_id).second) collision = true;
      all.push_back(std::move(g));
    }
  }
  if (collision) {
    for (std::size_t i = 0; i < all.size(); ++i) all[i].group_id = static_cast<std::int64_t>(i);
  }
  DedupConfig cfg;
  cfg.theta = theta;
  auto survivors = dedup(all, cfg);
  write_groups(out_path, survivors);
  return survivors.size();
}

void report_from_scores(const std::string& scores_dir, const std::string& out_dir,
                        bool group_sampling) {
  if (!fs::is_directory(scores_dir)) {
    raise(ErrorCode::io, "scores directory does not exist: " + scores_dir);
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(scores_dir)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) raise(ErrorCode::io, "no score files in " + scores_dir);

  std::vector<MetricRow> rows;
  for (const auto& file : files) {
    const std::string stem = fs::path(file).stem().string();
    // scores_<detector>_task<t>_<setting>
    if (stem.rfind("scores_", 0) != 0) continue;
    auto task_pos = stem.rfind("_task");
    if (task_pos == std::string::npos) continue;
    const std::string detector = stem.substr(7, task_pos - 7);
    std::size_t cursor = task_pos + 5;
    std::size_t digits = 0;
    while (cursor + digits < stem.size() && std::isdigit(static_cast<unsigned char>(stem[cursor + digits]))) {
      ++digits;
    }
    if (digits == 0 || cursor + digits >= stem.size() || stem[cursor + digits] != '_') continue;
    const int task = std::stoi(stem.substr(cursor, digits));
    const std::string setting = stem.substr(cursor + digits + 1);

    std::vector<double> scores;
    std::vector<int> labels;
    for (const auto& doc : read_jsonl(file)) {
      scores.push_back(doc.at("score").get<double>());
      labels.push_back(doc.at("label").get<int>());
    }
    try {
      rows.push_back(compute_metric_row(detector, task, setting, scores, labels));
    } catch (const Error& e) {
      // A degenerate cell (single-class sample on a tiny corpus) is left out
      // of the grid rather than aborting the whole report.
      if (e.code() != ErrorCode::degenerate) throw;
    }
  }

  write_file(out_dir + "/report.csv", report_csv(rows));
  write_file(out_dir + "/report_table.csv", report_table_csv(rows));
  write_file(out_dir + "/report_table.txt", report_table_text(rows, group_sampling));
}

}  // namespace padben
