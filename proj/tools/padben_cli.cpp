// padben command-line front end. Talks to the shared library exclusively
// through the C API in padben.h.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "padben.h"

namespace {

int fail(padben_status status) {
  std::fprintf(stderr, "error: %s\n", padben_last_error());
  return static_cast<int>(status);
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string json_int_array(const std::vector<int>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out + "]";
}

std::string json_string_array(const std::vector<std::string>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += "\"" + json_escape(values[i]) + "\"";
  }
  return out + "]";
}

// Parses "1-5", "2", or "1,3,5" into a task id list.
std::vector<int> parse_task_selection(const std::string& text) {
  std::vector<int> tasks;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    auto dash = token.find('-');
    if (dash != std::string::npos) {
      const int lo = std::stoi(token.substr(0, dash));
      const int hi = std::stoi(token.substr(dash + 1));
      for (int t = lo; t <= hi; ++t) tasks.push_back(t);
    } else {
      tasks.push_back(std::stoi(token));
    }
    token.clear();
  };
  for (char c : text) {
    if (c == ',') flush();
    else if (!std::isspace(static_cast<unsigned char>(c))) token.push_back(c);
  }
  flush();
  return tasks;
}

struct RunOptions {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string cache_dir;
  std::string out_dir;
  bool offline = false;

  // stage-specific selections (empty = keep the config's values)
  std::vector<int> gen_types;
  std::vector<int> gen_depths;
  std::vector<std::string> qa_scorers;
  std::string tasks_selection;
  std::vector<std::string> settings;
  std::string embeddings_dir;
  std::string metric;
  int kmeans_k = 0;
  int pca_components = 0;

  std::string overrides() const {
    std::string json = "{";
    bool first = true;
    auto add = [&](const std::string& field) {
      if (!first) json += ",";
      json += field;
      first = false;
    };
    if (seed_set) add("\"seed\":" + std::to_string(seed));
    if (!cache_dir.empty()) add("\"cache_dir\":\"" + json_escape(cache_dir) + "\"");
    if (!out_dir.empty()) add("\"out_dir\":\"" + json_escape(out_dir) + "\"");
    if (offline) add("\"offline\":true");

    std::string generate;
    if (!gen_types.empty()) generate += "\"types\":" + json_int_array(gen_types);
    if (!gen_depths.empty()) {
      if (!generate.empty()) generate += ",";
      generate += "\"depths\":" + json_int_array(gen_depths);
    }
    if (!generate.empty()) add("\"generate\":{" + generate + "}");

    if (!qa_scorers.empty()) add("\"qa\":{\"scorers\":" + json_string_array(qa_scorers) + "}");
    if (!tasks_selection.empty()) add("\"tasks\":" + json_int_array(parse_task_selection(tasks_selection)));
    if (!settings.empty()) {
      std::vector<std::string> expanded = settings;
      if (settings.size() == 1 && settings[0] == "all") {
        expanded = {"exhaustive", "sampling_30", "sampling_50", "sampling_80", "pairs"};
      }
      add("\"settings\":" + json_string_array(expanded));
    }

    std::string analysis;
    auto add_analysis = [&](const std::string& field) {
      if (!analysis.empty()) analysis += ",";
      analysis += field;
    };
    if (!embeddings_dir.empty()) add_analysis("\"embeddings_dir\":\"" + json_escape(embeddings_dir) + "\"");
    if (!metric.empty()) add_analysis("\"metric\":\"" + json_escape(metric) + "\"");
    if (kmeans_k > 0) add_analysis("\"kmeans_k\":" + std::to_string(kmeans_k));
    if (!analysis.empty()) add("\"analysis\":{" + analysis + "}");

    json += "}";
    return json;
  }
};

void add_run_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--config", opts.config, "run config JSON file")->required();
  cmd->add_option("--seed", opts.seed, "override the run seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--cache-dir", opts.cache_dir, "override the response cache directory");
  cmd->add_option("--out", opts.out_dir, "override the output directory");
  cmd->add_flag("--offline", opts.offline, "forbid network traffic (cache and mocks only)");
}

int run_stage_command(const RunOptions& opts, const std::string& stage) {
  padben_run* run = nullptr;
  if (auto s = padben_run_open_overrides(opts.config.c_str(), opts.overrides().c_str(), &run);
      s != PADBEN_OK) {
    return fail(s);
  }
  int did_work = 0;
  const padben_status s = padben_run_stage(run, stage.c_str(), &did_work);
  if (s == PADBEN_OK) {
    std::printf("%s: %s\n", stage.c_str(), did_work ? "done" : "up to date");
  }
  padben_run_close(run);
  return s == PADBEN_OK ? 0 : fail(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"padben - paraphrase-attack detection benchmark pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(padben_version()));

  // ingest
  std::string ingest_source, ingest_in, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "standardize one source corpus into groups.jsonl");
  ingest->add_option("--source", ingest_source, "paws | mrpc | hlpc")->required();
  ingest->add_option("--in", ingest_in, "input record file (JSONL)")->required();
  ingest->add_option("--out", ingest_out, "output groups file")->required();

  // dedup
  std::vector<std::string> dedup_in;
  std::string dedup_out;
  double theta = 0.85;
  auto* dedup = app.add_subcommand("dedup", "remove near-duplicate groups across sources");
  dedup->add_option("--in", dedup_in, "input groups file(s)")->required()->expected(-1);
  dedup->add_option("--out", dedup_out, "output groups file")->required();
  dedup->add_option("--theta", theta, "cosine similarity threshold (default 0.85)");

  // config-driven stages
  RunOptions generate_opts, qa_opts, tasks_opts, evaluate_opts, analyze_opts, report_opts,
      pipeline_opts;
  auto* generate = app.add_subcommand("generate", "produce Type 2/4/5 texts for every group");
  add_run_options(generate, generate_opts);
  generate->add_option("--types", generate_opts.gen_types, "taxonomy types to generate (2 4 5)")
      ->delimiter(',');
  generate->add_option("--depths", generate_opts.gen_depths, "Type 5 iteration depths (1 3)")
      ->delimiter(',');
  auto* qa = app.add_subcommand("qa", "compute dataset quality metrics");
  add_run_options(qa, qa_opts);
  qa->add_option("--scorers", qa_opts.qa_scorers, "provider ids used for perplexity scoring")
      ->delimiter(',');
  auto* build_tasks = app.add_subcommand("build-tasks", "materialize task datasets");
  add_run_options(build_tasks, tasks_opts);
  build_tasks->add_option("--tasks", tasks_opts.tasks_selection, "task selection, e.g. 1-5 or 1,3");
  build_tasks->add_option("--settings", tasks_opts.settings,
                          "settings or 'all' (exhaustive sampling_30 sampling_50 sampling_80 pairs)")
      ->delimiter(',');
  auto* evaluate = app.add_subcommand("evaluate", "score detectors over the task datasets");
  add_run_options(evaluate, evaluate_opts);
  auto* analyze = app.add_subcommand("analyze", "representation-space analyses");
  add_run_options(analyze, analyze_opts);
  analyze->add_option("--embeddings", analyze_opts.embeddings_dir,
                      "load vectors from <dir>/*.jsonl instead of embedding texts");
  analyze->add_option("--metric", analyze_opts.metric, "cosine | euclidean | manhattan | all");
  analyze->add_option("--kmeans", analyze_opts.kmeans_k, "number of clusters (default 3)");
  analyze->add_option("--pca", analyze_opts.pca_components, "projection components (2 only)");
  auto* report = app.add_subcommand("report", "aggregate scores into report tables");
  add_run_options(report, report_opts);
  auto* pipeline = app.add_subcommand("pipeline", "run every stage in order");
  add_run_options(pipeline, pipeline_opts);

  // standalone report over a scores directory
  std::string scores_dir, report_out;
  bool group_sampling = false;
  auto* report_dir = app.add_subcommand("report-dir", "report over an existing scores directory");
  report_dir->add_option("--in", scores_dir, "scores directory")->required();
  report_dir->add_option("--out", report_out, "output directory")->required();
  report_dir->add_flag("--group-sampling", group_sampling,
                       "pool the sampling setups when marking best results");

  // demo
  std::string demo_data = "data/demo";
  std::string demo_out = "runs/demo";
  std::uint64_t demo_seed = 42;
  auto* demo = app.add_subcommand("demo", "offline end-to-end run on the bundled corpus");
  demo->add_option("--data-dir", demo_data, "bundled demo corpus directory");
  demo->add_option("--out", demo_out, "output directory");
  demo->add_option("--seed", demo_seed, "run seed");

  CLI11_PARSE(app, argc, argv);

  if (ingest->parsed()) {
    size_t n = 0;
    if (auto s = padben_ingest(ingest_source.c_str(), ingest_in.c_str(), ingest_out.c_str(), &n);
        s != PADBEN_OK) {
      return fail(s);
    }
    std::printf("ingested %zu groups from %s\n", n, ingest_source.c_str());
    return 0;
  }
  if (dedup->parsed()) {
    std::vector<const char*> inputs;
    for (const auto& p : dedup_in) inputs.push_back(p.c_str());
    size_t n = 0;
    if (auto s = padben_dedup(inputs.data(), inputs.size(), dedup_out.c_str(), theta, &n);
        s != PADBEN_OK) {
      return fail(s);
    }
    std::printf("%zu groups survive dedup at theta=%g\n", n, theta);
    return 0;
  }
  if (generate->parsed()) return run_stage_command(generate_opts, "generate");
  if (qa->parsed()) return run_stage_command(qa_opts, "qa");
  if (build_tasks->parsed()) return run_stage_command(tasks_opts, "build-tasks");
  if (evaluate->parsed()) return run_stage_command(evaluate_opts, "evaluate");
  if (analyze->parsed()) {
    if (analyze_opts.pca_components != 0 && analyze_opts.pca_components != 2) {
      std::fprintf(stderr, "error: only --pca 2 is supported\n");
      return 2;
    }
    return run_stage_command(analyze_opts, "analyze");
  }
  if (report->parsed()) return run_stage_command(report_opts, "report");
  if (pipeline->parsed()) {
    padben_run* run = nullptr;
    if (auto s = padben_run_open_overrides(pipeline_opts.config.c_str(),
                                           pipeline_opts.overrides().c_str(), &run);
        s != PADBEN_OK) {
      return fail(s);
    }
    const padben_status s = padben_run_pipeline(run);
    if (s == PADBEN_OK) std::printf("pipeline complete; manifest: %s\n", padben_run_manifest_path(run));
    padben_run_close(run);
    return s == PADBEN_OK ? 0 : fail(s);
  }
  if (report_dir->parsed()) {
    if (auto s = padben_report(scores_dir.c_str(), report_out.c_str(), group_sampling ? 1 : 0);
        s != PADBEN_OK) {
      return fail(s);
    }
    std::printf("report written to %s\n", report_out.c_str());
    return 0;
  }
  if (demo->parsed()) {
    padben_run* run = nullptr;
    if (auto s = padben_run_open_demo(demo_data.c_str(), demo_out.c_str(), demo_seed, &run);
        s != PADBEN_OK) {
      return fail(s);
    }
    const padben_status s = padben_run_pipeline(run);
    if (s == PADBEN_OK) {
      std::printf("demo complete; report at %s/report_table.txt, manifest %s\n", demo_out.c_str(),
                  padben_run_manifest_path(run));
    }
    padben_run_close(run);
    return s == PADBEN_OK ? 0 : fail(s);
  }
  return 0;
}
