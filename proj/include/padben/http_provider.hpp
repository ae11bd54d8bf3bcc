#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "padben/provider.hpp"

namespace padben {

// Binding for a chat/completions-style HTTP endpoint with per-token logprob
// fields. Credentials come from the environment variable
// PADBEN_<PROVIDER>_API_KEY (provider name uppercased).
struct HttpProviderConfig {
  std::string name;        // provider name, also the id
  std::string base_url;    // e.g. https://api.example.com/v1
  std::string model;
  std::string api_key_env; // defaults to PADBEN_<NAME>_API_KEY
  int timeout_seconds = 60;
  int logprobs_topk = 5;
  int max_input_tokens = 0;
};

ProviderPtr make_http_provider(const HttpProviderConfig& cfg);

// Response decoding, exposed separately so it is testable without a network.
std::string parse_chat_completion_response(const nlohmann::json& body);
std::string parse_completion_response(const nlohmann::json& body);
TokenScoreList parse_logprobs_response(const nlohmann::json& body);
std::vector<double> parse_embedding_response(const nlohmann::json& body);

}  // namespace padben
