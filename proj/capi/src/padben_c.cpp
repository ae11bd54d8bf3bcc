#include "padben.h"

#include <cstring>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "padben/detectors.hpp"
#include "padben/error.hpp"
#include "padben/jsonl.hpp"
#include "padben/metrics.hpp"
#include "padben/pipeline.hpp"
#include "padben/repspace.hpp"
#include "padben/textutil.hpp"

namespace {

thread_local std::string t_last_error;

padben_status status_of(padben::ErrorCode code) {
  using padben::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return PADBEN_ERR_INVALID_ARGUMENT;
    case ErrorCode::io: return PADBEN_ERR_IO;
    case ErrorCode::parse: return PADBEN_ERR_PARSE;
    case ErrorCode::transport: return PADBEN_ERR_TRANSPORT;
    case ErrorCode::refusal: return PADBEN_ERR_REFUSAL;
    case ErrorCode::capability: return PADBEN_ERR_CAPABILITY;
    case ErrorCode::degenerate: return PADBEN_ERR_DEGENERATE;
    case ErrorCode::checksum: return PADBEN_ERR_CHECKSUM;
    case ErrorCode::internal: return PADBEN_ERR_INTERNAL;
  }
  return PADBEN_ERR_INTERNAL;
}

template <typename Fn>
padben_status wrap(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return PADBEN_OK;
  } catch (const padben::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return PADBEN_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return PADBEN_ERR_INTERNAL;
  }
}

padben_status require(bool cond, const char* message) {
  if (cond) return PADBEN_OK;
  t_last_error = message;
  return PADBEN_ERR_INVALID_ARGUMENT;
}

Eigen::VectorXd to_vector(const double* data, size_t dim) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  std::memcpy(v.data(), data, dim * sizeof(double));
  return v;
}

}  // namespace

struct padben_run {
  padben::PipelineRun run;
  std::string manifest_path;
};

extern "C" {

const char* padben_version(void) { return "0.1.0"; }

const char* padben_last_error(void) { return t_last_error.c_str(); }

padben_status padben_ingest(const char* source, const char* in_path, const char* out_path,
                            size_t* n_groups_out) {
  if (auto s = require(source && in_path && out_path, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] {
    const std::size_t n = padben::ingest_file(source, in_path, out_path);
    if (n_groups_out) *n_groups_out = n;
  });
}

padben_status padben_dedup(const char* const* in_paths, size_t n_inputs, const char* out_path,
                           double theta, size_t* n_groups_out) {
  if (auto s = require(in_paths && n_inputs > 0 && out_path, "null argument"); s != PADBEN_OK) {
    return s;
  }
  return wrap([&] {
    std::vector<std::string> inputs(in_paths, in_paths + n_inputs);
    const std::size_t n = padben::dedup_files(inputs, out_path, theta);
    if (n_groups_out) *n_groups_out = n;
  });
}

padben_status padben_auroc(const double* scores, const int32_t* labels, size_t n, double* out) {
  if (auto s = require(scores && labels && out, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] {
    std::vector<double> sv(scores, scores + n);
    std::vector<int> lv(labels, labels + n);
    *out = padben::auroc(sv, lv);
  });
}

padben_status padben_tpr_at_fpr(const double* scores, const int32_t* labels, size_t n,
                                double fpr_cap, double* out) {
  if (auto s = require(scores && labels && out, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] {
    std::vector<double> sv(scores, scores + n);
    std::vector<int> lv(labels, labels + n);
    *out = padben::tpr_at_fpr(sv, lv, fpr_cap);
  });
}

padben_status padben_cosine_distance(const double* u, const double* v, size_t dim, double* out) {
  if (auto s = require(u && v && out && dim > 0, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] { *out = padben::cosine_dist(to_vector(u, dim), to_vector(v, dim)); });
}

padben_status padben_euclidean_distance(const double* u, const double* v, size_t dim, double* out) {
  if (auto s = require(u && v && out && dim > 0, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] { *out = padben::euclidean_dist(to_vector(u, dim), to_vector(v, dim)); });
}

padben_status padben_manhattan_distance(const double* u, const double* v, size_t dim, double* out) {
  if (auto s = require(u && v && out && dim > 0, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] { *out = padben::manhattan_dist(to_vector(u, dim), to_vector(v, dim)); });
}

padben_status padben_jaccard(const char* a, const char* b, double* out) {
  if (auto s = require(a && b && out, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] { *out = padben::jaccard_tokens(a, b); });
}

padben_status padben_trigram_similarity(const char* a, const char* b, double* out) {
  if (auto s = require(a && b && out, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] { *out = padben::trigram_similarity(a, b); });
}

padben_status padben_radar_prob(const double* logits, size_t n, double* out) {
  if (auto s = require(logits && out, "null argument"); s != PADBEN_OK) return s;
  if (auto s = require(n == 2, "logit vector must have length 2"); s != PADBEN_OK) return s;
  return wrap([&] { *out = padben::radar_prob_from_logits({logits[0], logits[1]}); });
}

padben_status padben_fastdetect_criterion(double logp_x, double mu, double sigma, double* out) {
  if (auto s = require(out != nullptr, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] { *out = padben::fastdetect_criterion(logp_x, mu, sigma); });
}

padben_status padben_run_open(const char* config_path, padben_run** out) {
  return padben_run_open_overrides(config_path, nullptr, out);
}

padben_status padben_run_open_overrides(const char* config_path, const char* overrides_json,
                                        padben_run** out) {
  if (auto s = require(config_path && out, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] {
    nlohmann::json doc = nlohmann::json::parse(padben::read_file(config_path), nullptr, false);
    if (doc.is_discarded()) {
      padben::raise(padben::ErrorCode::parse, std::string(config_path) + ": config is not valid JSON");
    }
    if (overrides_json && *overrides_json) {
      nlohmann::json overrides = nlohmann::json::parse(overrides_json, nullptr, false);
      if (overrides.is_discarded() || !overrides.is_object()) {
        padben::raise(padben::ErrorCode::parse, "overrides must be a JSON object");
      }
      doc.update(overrides, /*merge_objects=*/true);
    }
    auto config = padben::RunConfig::from_json(doc);
    *out = new padben_run{padben::PipelineRun(std::move(config)), {}};
  });
}

padben_status padben_run_open_demo(const char* data_dir, const char* out_dir, uint64_t seed,
                                   padben_run** out) {
  if (auto s = require(data_dir && out_dir && out, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] {
    auto config = padben::demo_config(data_dir, out_dir, seed);
    *out = new padben_run{padben::PipelineRun(std::move(config)), {}};
  });
}

void padben_run_close(padben_run* run) { delete run; }

padben_status padben_run_stage(padben_run* run, const char* stage, int* did_work_out) {
  if (auto s = require(run && stage, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] {
    const bool did_work = run->run.run_stage(stage);
    if (did_work_out) *did_work_out = did_work ? 1 : 0;
  });
}

padben_status padben_run_pipeline(padben_run* run) {
  if (auto s = require(run != nullptr, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] { run->run.run_all(); });
}

const char* padben_run_manifest_path(padben_run* run) {
  if (!run) return "";
  run->manifest_path = run->run.manifest_path();
  return run->manifest_path.c_str();
}

padben_status padben_report(const char* scores_dir, const char* out_dir, int group_sampling) {
  if (auto s = require(scores_dir && out_dir, "null argument"); s != PADBEN_OK) return s;
  return wrap([&] { padben::report_from_scores(scores_dir, out_dir, group_sampling != 0); });
}

}  // extern "C"
