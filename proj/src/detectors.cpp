#include "padben/detectors.hpp"

#include <algorithm>
#include <cmath>

#include "padben/error.hpp"
#include "padben/prompts.hpp"
#include "padben/rng.hpp"
#include "padben/textutil.hpp"

namespace padben {

double fastdetect_criterion(double logp_x, double mu, double sigma) {
  if (sigma <= 0.0) raise(ErrorCode::degenerate, "degenerate distribution: sigma is zero");
  return (logp_x - mu) / sigma;
}

namespace {

// Normalized per-position distribution: probabilities p_i and the log-density
// each draw contributes, log(p_i).
struct PositionDist {
  std::vector<double> probs;
  std::vector<double> logps;
};

PositionDist normalize_topk(const TokenScore& s) {
  if (s.topk.size() < 2) {
    raise(ErrorCode::invalid_argument,
          "missing distributions: fastdetectgpt needs per-position topk with >= 2 entries");
  }
  PositionDist dist;
  double max_lp = s.topk.front().second;
  for (const auto& [tok, lp] : s.topk) max_lp = std::max(max_lp, lp);
  double z = 0.0;
  for (const auto& [tok, lp] : s.topk) z += std::exp(lp - max_lp);
  const double log_z = max_lp + std::log(z);
  for (const auto& [tok, lp] : s.topk) {
    const double log_p = lp - log_z;
    dist.logps.push_back(log_p);
    dist.probs.push_back(std::exp(log_p));
  }
  return dist;
}

}  // namespace

FastDetectState fastdetect_state(const TokenScoreList& scores, const FastDetectOptions& opts) {
  if (scores.scores.empty()) raise(ErrorCode::invalid_argument, "fastdetect_state: no token scores");
  FastDetectState state;
  state.n_samples = opts.n_samples;
  std::vector<PositionDist> dists;
  dists.reserve(scores.scores.size());
  for (const auto& s : scores.scores) {
    state.logp_x += s.logprob;
    dists.push_back(normalize_topk(s));
  }

  if (opts.analytic) {
    // Independent positions: mean and variance of the total are the sums of
    // per-position means and variances. Zero-probability alternatives
    // contribute nothing (their logp is -inf).
    double mu = 0.0, var = 0.0;
    for (const auto& d : dists) {
      double e = 0.0, e2 = 0.0;
      for (std::size_t i = 0; i < d.probs.size(); ++i) {
        if (d.probs[i] == 0.0) continue;
        e += d.probs[i] * d.logps[i];
        e2 += d.probs[i] * d.logps[i] * d.logps[i];
      }
      mu += e;
      var += e2 - e * e;
    }
    state.mu = mu;
    state.sigma = std::sqrt(std::max(var, 0.0));
    return state;
  }

  if (opts.n_samples < 1) raise(ErrorCode::invalid_argument, "n_samples must be >= 1");
  Rng rng(derive_stream(opts.seed, {kStreamDetectors, 1}));
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < opts.n_samples; ++s) {
    double total = 0.0;
    for (const auto& d : dists) {
      double u = rng.next_double();
      std::size_t pick = d.probs.size();
      double acc = 0.0;
      for (std::size_t i = 0; i < d.probs.size(); ++i) {
        acc += d.probs[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
      if (pick == d.probs.size()) {  // rounding spill: take the last non-zero entry
        pick = d.probs.size() - 1;
        while (pick > 0 && d.probs[pick] == 0.0) --pick;
      }
      total += d.logps[pick];
    }
    sum += total;
    sum_sq += total * total;
  }
  const double n = static_cast<double>(opts.n_samples);
  state.mu = sum / n;
  state.sigma = std::sqrt(std::max(sum_sq / n - state.mu * state.mu, 0.0));
  return state;
}

FastDetectGpt::FastDetectGpt(Gateway& gateway, ProviderPtr scorer, FastDetectOptions opts)
    : gateway_(gateway), scorer_(std::move(scorer)), opts_(opts) {}

double FastDetectGpt::score(const std::string& text) {
  TokenScoreList scores = gateway_.score_tokens(*scorer_, text);
  FastDetectState state = fastdetect_state(scores, opts_);
  return fastdetect_criterion(state.logp_x, state.mu, state.sigma);
}

Binoculars::Binoculars(Gateway& gateway, ProviderPtr observer, ProviderPtr performer,
                       double threshold)
    : gateway_(gateway), observer_(std::move(observer)), performer_(std::move(performer)),
      threshold_(threshold) {}

double Binoculars::raw_score(const std::string& text) {
  TokenScoreList obs = gateway_.score_tokens(*observer_, text);
  TokenScoreList perf = gateway_.score_tokens(*performer_, text);
  if (obs.scores.size() != perf.scores.size()) {
    raise(ErrorCode::invalid_argument, "binoculars: observer/performer tokenizations differ (" +
                                           std::to_string(obs.scores.size()) + " vs " +
                                           std::to_string(perf.scores.size()) + " tokens)");
  }
  for (std::size_t i = 0; i < obs.scores.size(); ++i) {
    if (obs.scores[i].token != perf.scores[i].token) {
      raise(ErrorCode::invalid_argument,
            "binoculars: observer/performer tokenizations differ at position " + std::to_string(i));
    }
  }
  if (obs.scores.empty()) raise(ErrorCode::degenerate, "binoculars: no scored tokens");
  double obs_sum = 0.0, perf_sum = 0.0;
  for (const auto& s : obs.scores) obs_sum += s.logprob;
  for (const auto& s : perf.scores) perf_sum += s.logprob;
  const double n = static_cast<double>(obs.scores.size());
  const double observer_ppl = std::exp(-obs_sum / n);
  const double cross_ppl = std::exp(-perf_sum / n);
  return observer_ppl / cross_ppl;
}

int Binoculars::decision(const std::string& text) {
  return raw_score(text) < threshold_ ? 1 : 0;
}

GltrResult gltr_from_ranks(const std::vector<int>& ranks) {
  if (ranks.empty()) raise(ErrorCode::invalid_argument, "gltr: missing ranks");
  GltrResult result;
  for (int r : ranks) {
    if (r < 1) raise(ErrorCode::invalid_argument, "gltr: rank must be >= 1");
    if (r <= 10) ++result.histogram[0];
    else if (r <= 100) ++result.histogram[1];
    else if (r <= 1000) ++result.histogram[2];
    else ++result.histogram[3];
  }
  const double n = static_cast<double>(ranks.size());
  for (auto& bin : result.histogram) bin /= n;
  result.score = result.histogram[0];
  return result;
}

Gltr::Gltr(Gateway& gateway, ProviderPtr scorer) : gateway_(gateway), scorer_(std::move(scorer)) {}

GltrResult Gltr::analyze(const std::string& text) {
  TokenScoreList scores = gateway_.score_tokens(*scorer_, text);
  std::vector<int> ranks;
  ranks.reserve(scores.scores.size());
  for (const auto& s : scores.scores) ranks.push_back(s.rank);
  return gltr_from_ranks(ranks);
}

double radar_prob_from_logits(const std::array<double, 2>& logits) {
  if (!std::isfinite(logits[0]) || !std::isfinite(logits[1])) {
    raise(ErrorCode::invalid_argument, "radar: logits must be finite");
  }
  const double m = std::max(logits[0], logits[1]);
  const double log_z = m + std::log(std::exp(logits[0] - m) + std::exp(logits[1] - m));
  return std::exp(logits[0] - log_z);
}

Radar::Radar(Gateway& gateway, ProviderPtr classifier)
    : gateway_(gateway), classifier_(std::move(classifier)) {}

double Radar::score(const std::string& text) {
  std::string input = text;
  // Truncate to the classifier's input window.
  const int max_tokens = classifier_->max_input_tokens();
  if (max_tokens > 0) {
    auto tokens = ws_tokens(text);
    if (tokens.size() > static_cast<std::size_t>(max_tokens)) {
      tokens.resize(static_cast<std::size_t>(max_tokens));
      input = join(tokens, " ");
    }
  }
  return radar_prob_from_logits(gateway_.classify(*classifier_, input).logits);
}

namespace {

std::optional<int> parse_judge_reply(const std::string& reply) {
  const std::string t = trim(reply);
  if (t == "0") return 0;
  if (t == "1") return 1;
  return std::nullopt;
}

JudgeResult run_judge(Gateway& gateway, Provider& judge, std::vector<ChatMessage> messages) {
  GenerationRequest opts;
  opts.temperature = 0.0;
  opts.max_tokens = 4;

  JudgeResult result;
  std::string reply = gateway.chat(judge, messages, opts);
  result.prompts_used = 1;
  if (auto decision = parse_judge_reply(reply)) {
    result.decision = decision;
    return result;
  }
  // One corrective re-prompt, then abstain.
  messages.push_back({"assistant", reply});
  messages.push_back({"user", judge_retry_message()});
  reply = gateway.chat(judge, messages, opts);
  result.prompts_used = 2;
  if (auto decision = parse_judge_reply(reply)) {
    result.decision = decision;
    return result;
  }
  result.abstained = true;
  return result;
}

}  // namespace

JudgeResult llm_judge_single(Gateway& gateway, Provider& judge, const SingleInstance& instance,
                             int task_id) {
  return run_judge(gateway, judge, judge_conversation_single(task_id, instance.sentence));
}

JudgeResult llm_judge_pair(Gateway& gateway, Provider& judge, const PairInstance& instance,
                           int task_id) {
  return run_judge(gateway, judge,
                   judge_conversation_pair(task_id, instance.sentence_pair.first,
                                           instance.sentence_pair.second));
}

double judge_score(const JudgeResult& result) {
  if (result.abstained || !result.decision) return 0.5;
  return static_cast<double>(*result.decision);
}

DetectorScore pair_adapter(const PairInstance& instance, ScoreDetector& detector) {
  DetectorScore out;
  out.idx = instance.idx;
  out.detector = detector.id();
  out.challenge = "pair";
  out.score = detector.score(instance.sentence_pair.second) -
              detector.score(instance.sentence_pair.first);
  return out;
}

int pair_truth(const PairInstance& instance) {
  return instance.label_pair.first == 0 && instance.label_pair.second == 1 ? 1 : 0;
}

std::optional<int> judge_pair_prediction(const JudgeResult& result, int task_id) {
  if (result.abstained || !result.decision) return std::nullopt;
  const int reply = *result.decision;
  return pair_reply_indexes_label1(task_id) ? reply : 1 - reply;
}

}  // namespace padben
