#include "padben/http_provider.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>

#include "padben/error.hpp"
#include "padben/textutil.hpp"

namespace padben {

std::string parse_chat_completion_response(const nlohmann::json& body) {
  if (!body.contains("choices") || body["choices"].empty()) {
    raise(ErrorCode::parse, "chat response has no choices");
  }
  const auto& choice = body["choices"][0];
  if (choice.contains("message")) return choice["message"].value("content", "");
  raise(ErrorCode::parse, "chat response choice has no message");
}

std::string parse_completion_response(const nlohmann::json& body) {
  if (!body.contains("choices") || body["choices"].empty()) {
    raise(ErrorCode::parse, "completion response has no choices");
  }
  const auto& choice = body["choices"][0];
  if (choice.contains("text")) return choice["text"].get<std::string>();
  if (choice.contains("message")) return choice["message"].value("content", "");
  raise(ErrorCode::parse, "completion response choice has neither text nor message");
}

TokenScoreList parse_logprobs_response(const nlohmann::json& body) {
  if (!body.contains("choices") || body["choices"].empty()) {
    raise(ErrorCode::parse, "logprobs response has no choices");
  }
  const auto& choice = body["choices"][0];
  if (!choice.contains("logprobs")) raise(ErrorCode::capability, "provider returned no logprobs");
  const auto& lp = choice["logprobs"];

  TokenScoreList list;
  // Completions-style: parallel arrays tokens/token_logprobs/top_logprobs.
  if (lp.contains("tokens")) {
    const auto& tokens = lp["tokens"];
    const auto& logprobs = lp["token_logprobs"];
    if (tokens.size() != logprobs.size()) {
      raise(ErrorCode::parse, "token/count mismatch in logprobs response");
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (logprobs[i].is_null()) {
        // First token conditioned on nothing; recorded, not scored.
        list.first_token_excluded = true;
        continue;
      }
      TokenScore s;
      s.token = tokens[i].get<std::string>();
      s.logprob = logprobs[i].get<double>();
      if (lp.contains("top_logprobs") && i < lp["top_logprobs"].size() &&
          lp["top_logprobs"][i].is_object()) {
        for (const auto& [tok, v] : lp["top_logprobs"][i].items()) {
          s.topk.emplace_back(tok, v.get<double>());
        }
        std::sort(s.topk.begin(), s.topk.end(),
                  [](const auto& a, const auto& b) { return a.second > b.second; });
        s.rank = static_cast<int>(s.topk.size()) + 1;
        for (std::size_t k = 0; k < s.topk.size(); ++k) {
          if (s.topk[k].first == s.token) {
            s.rank = static_cast<int>(k) + 1;
            break;
          }
        }
      }
      list.scores.push_back(std::move(s));
    }
    return list;
  }
  // Chat-style: logprobs.content[] with top_logprobs objects.
  if (lp.contains("content")) {
    for (const auto& entry : lp["content"]) {
      TokenScore s;
      s.token = entry.at("token").get<std::string>();
      s.logprob = entry.at("logprob").get<double>();
      if (entry.contains("top_logprobs")) {
        for (const auto& alt : entry["top_logprobs"]) {
          s.topk.emplace_back(alt.at("token").get<std::string>(), alt.at("logprob").get<double>());
        }
        std::sort(s.topk.begin(), s.topk.end(),
                  [](const auto& a, const auto& b) { return a.second > b.second; });
        s.rank = static_cast<int>(s.topk.size()) + 1;
        for (std::size_t k = 0; k < s.topk.size(); ++k) {
          if (s.topk[k].first == s.token) {
            s.rank = static_cast<int>(k) + 1;
            break;
          }
        }
      }
      list.scores.push_back(std::move(s));
    }
    return list;
  }
  raise(ErrorCode::parse, "unrecognized logprobs layout");
}

std::vector<double> parse_embedding_response(const nlohmann::json& body) {
  if (!body.contains("data") || body["data"].empty()) {
    raise(ErrorCode::parse, "embedding response has no data");
  }
  return body["data"][0].at("embedding").get<std::vector<double>>();
}

namespace {

class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.api_key_env.empty()) {
      std::string upper = cfg_.name;
      for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      cfg_.api_key_env = "PADBEN_" + upper + "_API_KEY";
    }
  }

  std::string id() const override { return cfg_.name; }
  bool is_remote() const override { return true; }
  Capabilities capabilities() const override {
    return {.generate = true, .chat = true, .logprobs = true, .embeddings = true};
  }
  int max_input_tokens() const override { return cfg_.max_input_tokens; }

  std::string generate(const GenerationRequest& req) override {
    nlohmann::json payload{{"model", cfg_.model},
                           {"messages", nlohmann::json::array({{{"role", "user"}, {"content", req.prompt}}})},
                           {"temperature", req.temperature},
                           {"max_tokens", req.max_tokens}};
    if (req.seed) payload["seed"] = *req.seed;
    return parse_chat_completion_response(post("/chat/completions", payload));
  }

  std::string chat(const std::vector<ChatMessage>& messages, const GenerationRequest& opts) override {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    nlohmann::json payload{{"model", cfg_.model},
                           {"messages", std::move(msgs)},
                           {"temperature", opts.temperature},
                           {"max_tokens", opts.max_tokens}};
    if (opts.seed) payload["seed"] = *opts.seed;
    return parse_chat_completion_response(post("/chat/completions", payload));
  }

  TokenScoreList score_tokens(const std::string& text) override {
    // Echo-scoring via the completions endpoint: ask for zero new tokens and
    // the logprobs of the prompt itself.
    nlohmann::json payload{{"model", cfg_.model}, {"prompt", text},    {"max_tokens", 0},
                           {"echo", true},        {"logprobs", cfg_.logprobs_topk},
                           {"temperature", 0.0}};
    return parse_logprobs_response(post("/completions", payload));
  }

  std::vector<double> embed(const std::string& text) override {
    nlohmann::json payload{{"model", cfg_.model}, {"input", text}};
    return parse_embedding_response(post("/embeddings", payload));
  }

 private:
  nlohmann::json post(const std::string& path, const nlohmann::json& payload) {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (!key) {
      raise(ErrorCode::transport, cfg_.name + ": credential env var " + cfg_.api_key_env + " not set");
    }
    httplib::Client client(cfg_.base_url);
    client.set_connection_timeout(cfg_.timeout_seconds);
    client.set_read_timeout(cfg_.timeout_seconds);
    client.set_bearer_token_auth(key);
    auto res = client.Post(path, payload.dump(), "application/json");
    if (!res) raise(ErrorCode::transport, cfg_.name + ": request failed: " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500) {
      raise(ErrorCode::transport, cfg_.name + ": HTTP " + std::to_string(res->status));
    }
    if (res->status != 200) {
      raise(ErrorCode::refusal, cfg_.name + ": HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded()) raise(ErrorCode::parse, cfg_.name + ": response is not JSON");
    return body;
  }

  HttpProviderConfig cfg_;
};

}  // namespace

ProviderPtr make_http_provider(const HttpProviderConfig& cfg) {
  return std::make_shared<HttpProvider>(cfg);
}

}  // namespace padben
