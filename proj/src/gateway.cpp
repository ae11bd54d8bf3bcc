#include "padben/gateway.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <thread>

#include "padben/error.hpp"
#include "padben/hashing.hpp"

namespace padben {

namespace {

nlohmann::json request_json(const GenerationRequest& req) {
  nlohmann::json j{{"prompt", req.prompt},
                   {"temperature", req.temperature},
                   {"max_tokens", req.max_tokens}};
  if (req.seed) j["seed"] = *req.seed;
  return j;
}

// JSON has no +-inf; zero-probability alternatives (logprob -inf) must still
// survive the cache round-trip.
nlohmann::json logprob_json(double lp) {
  if (std::isfinite(lp)) return lp;
  return lp < 0 ? "-inf" : "inf";
}

double logprob_from_json(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  const double inf = std::numeric_limits<double>::infinity();
  return v.get<std::string>() == "-inf" ? -inf : inf;
}

nlohmann::json token_scores_json(const TokenScoreList& list) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : list.scores) {
    nlohmann::json t{{"token", s.token}, {"logprob", logprob_json(s.logprob)}, {"rank", s.rank}};
    if (!s.topk.empty()) {
      nlohmann::json topk = nlohmann::json::array();
      for (const auto& [tok, lp] : s.topk) {
        topk.push_back(nlohmann::json::array({tok, logprob_json(lp)}));
      }
      t["topk"] = std::move(topk);
    }
    arr.push_back(std::move(t));
  }
  return nlohmann::json{{"scores", std::move(arr)},
                        {"first_token_excluded", list.first_token_excluded}};
}

TokenScoreList token_scores_from_json(const nlohmann::json& doc) {
  TokenScoreList list;
  list.first_token_excluded = doc.value("first_token_excluded", false);
  for (const auto& t : doc.at("scores")) {
    TokenScore s;
    s.token = t.at("token").get<std::string>();
    s.logprob = logprob_from_json(t.at("logprob"));
    s.rank = t.at("rank").get<int>();
    if (t.contains("topk")) {
      for (const auto& e : t["topk"]) {
        s.topk.emplace_back(e.at(0).get<std::string>(), logprob_from_json(e.at(1)));
      }
    }
    list.scores.push_back(std::move(s));
  }
  return list;
}

}  // namespace

std::string canonical_generate_request(const std::string& provider_id, const GenerationRequest& req) {
  nlohmann::json j{{"op", "generate"}, {"provider", provider_id}, {"request", request_json(req)}};
  return j.dump();
}

std::string canonical_chat_request(const std::string& provider_id,
                                   const std::vector<ChatMessage>& messages,
                                   const GenerationRequest& opts) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"content", m.content}, {"role", m.role}});
  nlohmann::json j{{"messages", std::move(msgs)},
                   {"op", "chat"},
                   {"provider", provider_id},
                   {"request", request_json(opts)}};
  return j.dump();
}

std::string canonical_score_request(const std::string& provider_id, const std::string& text) {
  return nlohmann::json{{"op", "score_tokens"}, {"provider", provider_id}, {"text", text}}.dump();
}

std::string canonical_embed_request(const std::string& provider_id, const std::string& text) {
  return nlohmann::json{{"op", "embed"}, {"provider", provider_id}, {"text", text}}.dump();
}

std::string canonical_classify_request(const std::string& provider_id, const std::string& text) {
  return nlohmann::json{{"op", "classify"}, {"provider", provider_id}, {"text", text}}.dump();
}

Gateway::Gateway(std::shared_ptr<ResponseCache> cache, GatewayConfig cfg)
    : cache_(std::move(cache)), cfg_(cfg) {
  if (cfg_.max_attempts < 1) cfg_.max_attempts = 1;
}

std::string Gateway::with_retries(Provider& provider, const std::function<std::string()>& call) {
  int delay_ms = cfg_.backoff_ms;
  for (int attempt = 1;; ++attempt) {
    try {
      stats_.provider_calls.fetch_add(1);
      std::string out = call();
      if (log_) {
        log_(provider.id() + " attempt " + std::to_string(attempt) + "/" +
             std::to_string(cfg_.max_attempts) + ": ok");
      }
      return out;
    } catch (const Error& e) {
      if (log_) {
        log_(provider.id() + " attempt " + std::to_string(attempt) + "/" +
             std::to_string(cfg_.max_attempts) + ": " + e.what());
      }
      if (e.code() != ErrorCode::transport || attempt >= cfg_.max_attempts) throw;
      stats_.retries.fetch_add(1);
      if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      delay_ms = static_cast<int>(std::lround(delay_ms * cfg_.backoff_factor));
    }
  }
}

std::string Gateway::cached_call(Provider& provider, const std::string& canonical_request,
                                 const std::function<std::string()>& call) {
  const std::string key = sha256_hex(canonical_request);
  if (auto hit = cache_->get(key)) {
    nlohmann::json entry = nlohmann::json::parse(*hit, nullptr, false);
    if (!entry.is_discarded() && entry.contains("response")) {
      stats_.cache_hits.fetch_add(1);
      return entry["response"].dump();
    }
    // A truncated or garbled entry is a miss; the fresh response overwrites it.
  }
  if (cfg_.offline && provider.is_remote()) {
    raise(ErrorCode::transport, provider.id() + ": offline and not cached");
  }
  std::string response = with_retries(provider, call);
  nlohmann::json entry{{"request", nlohmann::json::parse(canonical_request)},
                       {"response", nlohmann::json::parse(response)}};
  cache_->put(key, entry.dump());
  return response;
}

std::string Gateway::generate(Provider& provider, const GenerationRequest& req) {
  std::string response = cached_call(provider, canonical_generate_request(provider.id(), req), [&] {
    std::string text = provider.generate(req);
    if (text.empty()) raise(ErrorCode::refusal, provider.id() + ": empty generation");
    return nlohmann::json(text).dump();
  });
  return nlohmann::json::parse(response).get<std::string>();
}

std::string Gateway::chat(Provider& provider, const std::vector<ChatMessage>& messages,
                          const GenerationRequest& opts) {
  std::string response =
      cached_call(provider, canonical_chat_request(provider.id(), messages, opts), [&] {
        return nlohmann::json(provider.chat(messages, opts)).dump();
      });
  return nlohmann::json::parse(response).get<std::string>();
}

TokenScoreList Gateway::score_tokens(Provider& provider, const std::string& text) {
  if (text.empty()) raise(ErrorCode::invalid_argument, "score_tokens: empty text");
  std::string response = cached_call(provider, canonical_score_request(provider.id(), text), [&] {
    return token_scores_json(provider.score_tokens(text)).dump();
  });
  return token_scores_from_json(nlohmann::json::parse(response));
}

std::vector<double> Gateway::embed(Provider& provider, const std::string& text) {
  std::string response = cached_call(provider, canonical_embed_request(provider.id(), text), [&] {
    return nlohmann::json(provider.embed(text)).dump();
  });
  return nlohmann::json::parse(response).get<std::vector<double>>();
}

ClassifierOutput Gateway::classify(Provider& provider, const std::string& text) {
  std::string response = cached_call(provider, canonical_classify_request(provider.id(), text), [&] {
    const auto out = provider.classify(text);
    return nlohmann::json{{"logits", out.logits}}.dump();
  });
  auto doc = nlohmann::json::parse(response);
  ClassifierOutput out;
  auto logits = doc.at("logits").get<std::vector<double>>();
  if (logits.size() != 2) raise(ErrorCode::parse, "classifier logits must have length 2");
  out.logits = {logits[0], logits[1]};
  return out;
}

}  // namespace padben
