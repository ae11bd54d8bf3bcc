#include "padben/mocks.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "padben/error.hpp"
#include "padben/gateway.hpp"
#include "padben/hashing.hpp"
#include "padben/jsonl.hpp"
#include "padben/prompts.hpp"
#include "padben/rng.hpp"
#include "padben/textutil.hpp"

namespace padben {

const std::vector<std::string>& mock_model_vocab() {
  static const std::vector<std::string> vocab = {
      "moreover",  "framework",  "systematic", "optimal",    "comprehensive", "facilitate",
      "leverage",  "furthermore","methodology","subsequent", "utilize",       "paradigm",
      "robust",    "holistic",   "streamline", "synergy",    "innovative",    "strategic",
      "pivotal",   "nuanced",    "seamless",   "dynamic",    "integral",      "notably",
      "intricate", "cohesive",   "elevate",    "foster",     "underscore",    "envision",
      "catalyze",  "augment",    "delineate",  "expedite",   "galvanize",     "harmonize",
      "iterate",   "juxtapose",  "mitigate",   "navigate",   "orchestrate",   "prioritize",
      "quantify",  "reinforce",  "synthesize", "transform",  "validate",      "amplify",
  };
  return vocab;
}

namespace {

std::string strip_punct_lower(const std::string& token) {
  std::size_t b = 0, e = token.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(token[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(token[e - 1]))) --e;
  return to_lower_ascii(token.substr(b, e - b));
}

bool in_model_vocab(const std::string& token) {
  const auto& vocab = mock_model_vocab();
  return std::find(vocab.begin(), vocab.end(), strip_punct_lower(token)) != vocab.end();
}

double model_vocab_fraction(const std::string& text) {
  auto tokens = ws_tokens(text);
  if (tokens.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    if (in_model_vocab(t)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

class EchoProvider : public Provider {
 public:
  explicit EchoProvider(std::string id) : id_(std::move(id)) {}
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.generate = true, .chat = true}; }
  std::string generate(const GenerationRequest& req) override { return req.prompt; }
  std::string chat(const std::vector<ChatMessage>& messages, const GenerationRequest&) override {
    return messages.empty() ? std::string() : messages.back().content;
  }

 private:
  std::string id_;
};

class MockCompletionProvider : public Provider {
 public:
  MockCompletionProvider(std::uint64_t salt, std::string id) : salt_(salt), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.generate = true}; }

  std::string generate(const GenerationRequest& req) override {
    auto parts = parse_completion_prompt(req.prompt);
    if (!parts) raise(ErrorCode::refusal, id_ + ": prompt is not a completion template");
    const auto& vocab = mock_model_vocab();
    Rng rng(splitmix64_mix(fnv1a64(req.prompt) ^ salt_));
    std::string out = parts->prefix;
    std::size_t kw = 0;
    // Grow toward the target; keywords go in first, then vocabulary filler.
    while (utf8_length(out) + 4 < parts->target_length) {
      out += ' ';
      if (kw < parts->keywords.size()) {
        out += parts->keywords[kw++];
      } else {
        out += vocab[rng.next_below(vocab.size())];
      }
    }
    out += '.';
    return out;
  }

 private:
  std::uint64_t salt_;
  std::string id_;
};

class MockParaphraseProvider : public Provider {
 public:
  MockParaphraseProvider(std::uint64_t salt, bool identity, std::string id)
      : salt_(salt), identity_(identity), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.generate = true}; }

  std::string generate(const GenerationRequest& req) override {
    auto text = parse_paraphrase_prompt(req.prompt);
    if (!text) raise(ErrorCode::refusal, id_ + ": prompt is not a paraphrase template");
    if (identity_) return *text;
    const auto& vocab = mock_model_vocab();
    auto temp_key = static_cast<std::uint64_t>(std::llround(req.temperature * 1000.0));
    Rng rng(derive_stream(fnv1a64(*text), {salt_, temp_key}));
    auto words = ws_tokens(*text);
    for (auto& w : words) {
      if (rng.next_double() < 0.28) w = vocab[rng.next_below(vocab.size())];
    }
    return join(words, " ");
  }

 private:
  std::uint64_t salt_;
  bool identity_;
  std::string id_;
};

class MockLogprobProvider : public Provider {
 public:
  MockLogprobProvider(std::uint64_t salt, std::string id) : salt_(salt), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.logprobs = true}; }

  TokenScoreList score_tokens(const std::string& text) override {
    auto tokens = ws_tokens(text);
    if (tokens.empty()) raise(ErrorCode::invalid_argument, id_ + ": no tokens to score");
    TokenScoreList list;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      Rng rng(derive_stream(fnv1a64(strip_punct_lower(tokens[i])), {salt_, i}));
      TokenScore s;
      s.token = tokens[i];
      if (in_model_vocab(tokens[i])) {
        s.logprob = -0.2 - 0.6 * rng.next_double();
        s.rank = 1 + static_cast<int>(rng.next_below(8));
      } else {
        s.logprob = -1.5 - 4.5 * rng.next_double();
        s.rank = 11 + static_cast<int>(rng.next_below(1990));
      }
      // A 4-way conditional distribution around the realized token.
      s.topk.emplace_back(s.token, s.logprob);
      for (int k = 1; k < 4; ++k) {
        s.topk.emplace_back("alt" + std::to_string(k),
                            s.logprob - 0.5 * k - 0.4 * rng.next_double());
      }
      list.scores.push_back(std::move(s));
    }
    return list;
  }

 private:
  std::uint64_t salt_;
  std::string id_;
};

class UniformLogprobProvider : public Provider {
 public:
  UniformLogprobProvider(int vocab_size, std::string id)
      : vocab_size_(vocab_size), id_(std::move(id)) {
    if (vocab_size_ < 1) raise(ErrorCode::invalid_argument, "vocab_size must be >= 1");
  }
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.logprobs = true}; }

  TokenScoreList score_tokens(const std::string& text) override {
    auto tokens = ws_tokens(text);
    if (tokens.empty()) raise(ErrorCode::invalid_argument, id_ + ": no tokens to score");
    const double lp = -std::log(static_cast<double>(vocab_size_));
    TokenScoreList list;
    for (auto& t : tokens) {
      TokenScore s;
      s.token = t;
      s.logprob = lp;
      s.rank = 1;
      int k = std::min(vocab_size_, 4);
      for (int j = 0; j < k; ++j) s.topk.emplace_back("v" + std::to_string(j), lp);
      list.scores.push_back(std::move(s));
    }
    return list;
  }

 private:
  int vocab_size_;
  std::string id_;
};

class MockEmbedProvider : public Provider {
 public:
  MockEmbedProvider(int dim, std::uint64_t salt, std::string id)
      : dim_(dim), salt_(salt), id_(std::move(id)) {
    if (dim_ < 2) raise(ErrorCode::invalid_argument, "embedding dim must be >= 2");
  }
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.embeddings = true}; }

  std::vector<double> embed(const std::string& text) override {
    std::vector<double> v(static_cast<std::size_t>(dim_), 0.0);
    for (const auto& token : word_tokens(text)) {
      std::uint64_t h = splitmix64_mix(fnv1a64(token) ^ salt_);
      for (int j = 0; j < dim_; ++j) {
        std::uint64_t u = splitmix64_mix(h + static_cast<std::uint64_t>(j) * kSplitMixGolden);
        v[static_cast<std::size_t>(j)] += 2.0 * (static_cast<double>(u >> 11) * 0x1.0p-53) - 1.0;
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      v[0] = 1.0;
    } else {
      for (double& x : v) x /= norm;
    }
    return v;
  }

 private:
  int dim_;
  std::uint64_t salt_;
  std::string id_;
};

class ConstEmbedProvider : public Provider {
 public:
  ConstEmbedProvider(std::vector<double> vec, std::string id)
      : vec_(std::move(vec)), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.embeddings = true}; }
  std::vector<double> embed(const std::string&) override { return vec_; }

 private:
  std::vector<double> vec_;
  std::string id_;
};

class MockClassifierProvider : public Provider {
 public:
  MockClassifierProvider(std::uint64_t salt, std::string id) : salt_(salt), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.classify = true}; }
  int max_input_tokens() const override { return 512; }

  ClassifierOutput classify(const std::string& text) override {
    Rng rng(splitmix64_mix(fnv1a64(text) ^ salt_));
    ClassifierOutput out;
    out.logits[0] = 4.0 * model_vocab_fraction(text) - 1.0 + 0.5 * (rng.next_double() - 0.5);
    out.logits[1] = 0.0;
    return out;
  }

 private:
  std::uint64_t salt_;
  std::string id_;
};

class ConstClassifierProvider : public Provider {
 public:
  ConstClassifierProvider(double ai, double human, std::string id)
      : ai_(ai), human_(human), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.classify = true}; }
  ClassifierOutput classify(const std::string&) override { return {.logits = {ai_, human_}}; }

 private:
  double ai_, human_;
  std::string id_;
};

class MockJudgeProvider : public Provider {
 public:
  MockJudgeProvider(std::uint64_t salt, std::string id) : salt_(salt), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.chat = true}; }

  std::string chat(const std::vector<ChatMessage>& messages, const GenerationRequest&) override {
    if (messages.empty()) raise(ErrorCode::refusal, id_ + ": empty conversation");
    const std::string& query = messages.back().content;
    auto first = extract_quoted(query, "Sentence 1: \"");
    auto second = extract_quoted(query, "Sentence 2: \"");
    if (first && second) {
      return machine_score(*second) > machine_score(*first) ? "1" : "0";
    }
    auto single = extract_quoted(query, "Text: \"");
    if (!single) raise(ErrorCode::refusal, id_ + ": unrecognized judge query");
    return machine_score(*single) > 0.22 ? "1" : "0";
  }

 private:
  std::optional<std::string> extract_quoted(const std::string& s, const std::string& head) const {
    auto pos = s.find(head);
    if (pos == std::string::npos) return std::nullopt;
    pos += head.size();
    auto end = s.find('"', pos);
    if (end == std::string::npos) return std::nullopt;
    return s.substr(pos, end - pos);
  }

  double machine_score(const std::string& text) const {
    Rng rng(splitmix64_mix(fnv1a64(text) ^ salt_));
    return model_vocab_fraction(text) + 0.05 * (rng.next_double() - 0.5);
  }

  std::uint64_t salt_;
  std::string id_;
};

class ScriptFileProvider : public Provider {
 public:
  ScriptFileProvider(const std::string& path, std::string id) : id_(std::move(id)) {
    script_ = nlohmann::json::parse(read_file(path));
    if (!script_.is_object()) raise(ErrorCode::parse, path + ": script must be a JSON object");
  }
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.generate = true, .chat = true}; }

  std::string generate(const GenerationRequest& req) override {
    return lookup(sha256_hex(canonical_generate_request(id_, req)));
  }
  std::string chat(const std::vector<ChatMessage>& messages, const GenerationRequest& opts) override {
    return lookup(sha256_hex(canonical_chat_request(id_, messages, opts)));
  }

 private:
  std::string lookup(const std::string& key) const {
    if (auto it = script_.find(key); it != script_.end()) return it->get<std::string>();
    if (auto it = script_.find("*"); it != script_.end()) return it->get<std::string>();
    raise(ErrorCode::refusal, id_ + ": no scripted response for request " + key);
  }

  nlohmann::json script_;
  std::string id_;
};

class FlakyProvider : public Provider {
 public:
  FlakyProvider(ProviderPtr inner, int failures) : inner_(std::move(inner)), failures_(failures) {}
  std::string id() const override { return inner_->id(); }
  Capabilities capabilities() const override { return inner_->capabilities(); }
  bool is_remote() const override { return inner_->is_remote(); }

  std::string generate(const GenerationRequest& req) override {
    maybe_fail();
    return inner_->generate(req);
  }
  std::string chat(const std::vector<ChatMessage>& m, const GenerationRequest& o) override {
    maybe_fail();
    return inner_->chat(m, o);
  }
  TokenScoreList score_tokens(const std::string& text) override {
    maybe_fail();
    return inner_->score_tokens(text);
  }
  std::vector<double> embed(const std::string& text) override {
    maybe_fail();
    return inner_->embed(text);
  }
  ClassifierOutput classify(const std::string& text) override {
    maybe_fail();
    return inner_->classify(text);
  }

 private:
  void maybe_fail() {
    if (remaining_ > 0) {
      --remaining_;
      raise(ErrorCode::transport, id() + ": simulated transport failure");
    }
  }

  ProviderPtr inner_;
  int failures_;
  int remaining_ = failures_;
};

}  // namespace

ProviderPtr make_echo_provider(const std::string& id) { return std::make_shared<EchoProvider>(id); }

ProviderPtr make_mock_completion_provider(std::uint64_t salt, const std::string& id) {
  return std::make_shared<MockCompletionProvider>(salt, id);
}

ProviderPtr make_mock_paraphrase_provider(std::uint64_t salt, const std::string& id) {
  return std::make_shared<MockParaphraseProvider>(salt, false, id);
}

ProviderPtr make_identity_paraphrase_provider(const std::string& id) {
  return std::make_shared<MockParaphraseProvider>(0, true, id);
}

ProviderPtr make_mock_logprob_provider(std::uint64_t salt, const std::string& id) {
  return std::make_shared<MockLogprobProvider>(salt, id);
}

ProviderPtr make_uniform_logprob_provider(int vocab_size, const std::string& id) {
  return std::make_shared<UniformLogprobProvider>(vocab_size, id);
}

ProviderPtr make_mock_embed_provider(int dim, std::uint64_t salt, const std::string& id) {
  return std::make_shared<MockEmbedProvider>(dim, salt, id);
}

ProviderPtr make_const_embed_provider(std::vector<double> vec, const std::string& id) {
  return std::make_shared<ConstEmbedProvider>(std::move(vec), id);
}

ProviderPtr make_mock_classifier_provider(std::uint64_t salt, const std::string& id) {
  return std::make_shared<MockClassifierProvider>(salt, id);
}

ProviderPtr make_const_classifier_provider(double logit_ai, double logit_human,
                                           const std::string& id) {
  return std::make_shared<ConstClassifierProvider>(logit_ai, logit_human, id);
}

ProviderPtr make_mock_judge_provider(std::uint64_t salt, const std::string& id) {
  return std::make_shared<MockJudgeProvider>(salt, id);
}

ScriptedChatProvider::ScriptedChatProvider(std::vector<std::string> replies, std::string id)
    : replies_(std::move(replies)), id_(std::move(id)) {}

std::string ScriptedChatProvider::chat(const std::vector<ChatMessage>&, const GenerationRequest&) {
  if (static_cast<std::size_t>(calls_) >= replies_.size()) {
    raise(ErrorCode::refusal, id_ + ": script exhausted");
  }
  return replies_[static_cast<std::size_t>(calls_++)];
}

ProviderPtr make_script_file_provider(const std::string& path, const std::string& id) {
  return std::make_shared<ScriptFileProvider>(path, id);
}

ProviderPtr make_flaky_provider(ProviderPtr inner, int failures) {
  return std::make_shared<FlakyProvider>(std::move(inner), failures);
}

}  // namespace padben
