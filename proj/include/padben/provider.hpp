#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace padben {

struct GenerationRequest {
  std::string prompt;
  double temperature = 0.8;
  int max_tokens = 512;
  std::optional<std::uint64_t> seed;
};

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

// Per-token scoring output. logprob is the natural log of the probability the
// model assigned to the realized token; rank is its position in the model's
// next-token distribution (1 = most likely). topk, when present, lists
// (token, logprob) alternatives sorted by descending logprob.
struct TokenScore {
  std::string token;
  double logprob = 0.0;
  int rank = 1;
  std::vector<std::pair<std::string, double>> topk;
};

struct TokenScoreList {
  std::vector<TokenScore> scores;
  bool first_token_excluded = false;  // provider could not condition on empty context
};

// Two-class logits; index 0 = AI-generated class, index 1 = human class.
struct ClassifierOutput {
  std::array<double, 2> logits{0.0, 0.0};
};

struct Capabilities {
  bool generate = false;
  bool chat = false;
  bool logprobs = false;
  bool embeddings = false;
  bool classify = false;
};

// A single external model capability bundle. Implementations raise
// ErrorCode::transport for network-level failures (retryable),
// ErrorCode::refusal for declined requests, and ErrorCode::capability when
// asked for something they do not support.
class Provider {
 public:
  virtual ~Provider() = default;

  virtual std::string id() const = 0;
  virtual Capabilities capabilities() const = 0;
  // True for providers that hit the network (subject to --offline and retries).
  virtual bool is_remote() const { return false; }

  virtual std::string generate(const GenerationRequest& req);
  virtual std::string chat(const std::vector<ChatMessage>& messages, const GenerationRequest& opts);
  virtual TokenScoreList score_tokens(const std::string& text);
  virtual std::vector<double> embed(const std::string& text);
  virtual ClassifierOutput classify(const std::string& text);

  // Soft limit on input tokens for classify-style providers (0 = unlimited).
  virtual int max_input_tokens() const { return 0; }
};

using ProviderPtr = std::shared_ptr<Provider>;

}  // namespace padben
