#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "padben/gateway.hpp"
#include "padben/provider.hpp"
#include "padben/tasks.hpp"

namespace padben {

struct DetectorScore {
  std::int64_t idx = 0;
  double score = 0.0;  // higher = more machine-like
  std::optional<int> decision;
  bool abstained = false;
  std::string detector;
  std::string challenge;  // "single" | "pair"
};

// A detector producing a real-valued machine-likeness score per text.
class ScoreDetector {
 public:
  virtual ~ScoreDetector() = default;
  virtual std::string id() const = 0;
  virtual double score(const std::string& text) = 0;
};

// --- Fast-DetectGPT -------------------------------------------------------

struct FastDetectState {
  double logp_x = 0.0;  // sum of realized-token logprobs
  double mu = 0.0;      // mean of resampled total log-likelihood
  double sigma = 0.0;   // stddev of resampled total log-likelihood
  int n_samples = 10000;
};

// (logp_x - mu) / sigma; raises "degenerate distribution" when sigma == 0.
double fastdetect_criterion(double logp_x, double mu, double sigma);

struct FastDetectOptions {
  bool analytic = true;   // closed-form mu/sigma from the per-position distributions
  int n_samples = 10000;  // Monte-Carlo sample count when analytic is off
  std::uint64_t seed = 0;
};

// Computes the criterion state for `text` from per-position conditional
// distributions (topk, normalized to a proper distribution). Analytic mode
// uses mu = sum E[logp], sigma^2 = sum Var[logp] under token-wise independent
// resampling; sampling mode estimates both with n_samples draws.
FastDetectState fastdetect_state(const TokenScoreList& scores, const FastDetectOptions& opts);

class FastDetectGpt : public ScoreDetector {
 public:
  FastDetectGpt(Gateway& gateway, ProviderPtr scorer, FastDetectOptions opts = {});
  std::string id() const override { return "fastdetectgpt"; }
  double score(const std::string& text) override;

 private:
  Gateway& gateway_;
  ProviderPtr scorer_;
  FastDetectOptions opts_;
};

// --- Binoculars -----------------------------------------------------------

// raw score = PPL_observer / XPPL, where XPPL is the exponentiated mean
// cross-entropy of the realized tokens under the performer (the performer's
// log-probability of each realized token, averaged and negated). Lower raw
// score = more machine-like; the paper's global threshold is 0.9015 and
// score() returns the negated raw score so that higher = more machine-like.
inline constexpr double kBinocularsGlobalThreshold = 0.9015;

class Binoculars : public ScoreDetector {
 public:
  Binoculars(Gateway& gateway, ProviderPtr observer, ProviderPtr performer,
             double threshold = kBinocularsGlobalThreshold);
  std::string id() const override { return "binoculars"; }
  double raw_score(const std::string& text);
  double score(const std::string& text) override { return -raw_score(text); }
  int decision(const std::string& text);  // 1 = machine (raw score < threshold)

 private:
  Gateway& gateway_;
  ProviderPtr observer_;
  ProviderPtr performer_;
  double threshold_;
};

// --- GLTR -----------------------------------------------------------------

// Rank histogram bins: 1-10, 11-100, 101-1000, >1000 (normalized over scored
// tokens); scalar score = fraction of tokens in the top bin.
struct GltrResult {
  double score = 0.0;
  std::array<double, 4> histogram{};
};

GltrResult gltr_from_ranks(const std::vector<int>& ranks);

class Gltr : public ScoreDetector {
 public:
  Gltr(Gateway& gateway, ProviderPtr scorer);
  std::string id() const override { return "gltr"; }
  GltrResult analyze(const std::string& text);
  double score(const std::string& text) override { return analyze(text).score; }

 private:
  Gateway& gateway_;
  ProviderPtr scorer_;
};

// --- RADAR ----------------------------------------------------------------

// P(AI) = exp(log_softmax(logits)[0]) for 2-class logits.
double radar_prob_from_logits(const std::array<double, 2>& logits);

class Radar : public ScoreDetector {
 public:
  Radar(Gateway& gateway, ProviderPtr classifier);
  std::string id() const override { return "radar"; }
  double score(const std::string& text) override;

 private:
  Gateway& gateway_;
  ProviderPtr classifier_;
};

// --- Prompt-based judges ----------------------------------------------------

struct JudgeResult {
  std::optional<int> decision;  // empty on abstention
  bool abstained = false;
  int prompts_used = 0;
};

// Runs the task's multi-turn conversation, parses a strict "0"/"1" reply,
// re-prompts once on malformed output, then records an abstention.
JudgeResult llm_judge_single(Gateway& gateway, Provider& judge, const SingleInstance& instance,
                             int task_id);

// Pair variant; the decision refers to the position named by the task's pair
// instructions (see pair_reply_indexes_label1).
JudgeResult llm_judge_pair(Gateway& gateway, Provider& judge, const PairInstance& instance,
                           int task_id);

// Judge decisions as AUROC-compatible scores: 0, 1, or 0.5 for abstentions.
double judge_score(const JudgeResult& result);

// --- Pair adapter -----------------------------------------------------------

// Reduces a pair instance to one comparative score for a single-text
// detector: s(second) - s(first). Ground truth = 1 iff the second sentence is
// the machine-like one (label_pair == (0,1)).
DetectorScore pair_adapter(const PairInstance& instance, ScoreDetector& detector);

int pair_truth(const PairInstance& instance);

// For judges on pairs: predicted "second is machine" indicator from the
// task-specific reply convention.
std::optional<int> judge_pair_prediction(const JudgeResult& result, int task_id);

}  // namespace padben
