#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "padben/provider.hpp"

namespace padben {

// Deterministic offline providers. Every output is a pure function of the
// request (plus a fixed salt), so cached and uncached runs are byte-identical
// and the whole primary test suite runs without network access.
//
// The mocks share a small built-in "model vocabulary": the paraphrase mock
// substitutes words from it, and the scorer/classifier mocks treat vocabulary
// words as high-probability. Iteratively paraphrased mock text therefore
// drifts measurably toward "machine-like" under the mock detectors, which
// keeps the demo pipeline's metrics and trajectories non-degenerate.

const std::vector<std::string>& mock_model_vocab();

// generate() echoes the prompt back verbatim.
ProviderPtr make_echo_provider(const std::string& id = "mock_echo");

// Understands the sentence-completion prompt template: returns the quoted
// prefix followed by deterministic filler (keywords first) up to the target
// character length.
ProviderPtr make_mock_completion_provider(std::uint64_t salt = 0,
                                          const std::string& id = "mock_completion");

// Understands the paraphrase prompt template; rewrites a deterministic
// fraction of words using the model vocabulary, keyed by (text, temperature,
// salt) so successive iterations keep moving.
ProviderPtr make_mock_paraphrase_provider(std::uint64_t salt = 0,
                                          const std::string& id = "mock_paraphrase");

// Paraphrase mock that returns the input text unchanged (forces convergence).
ProviderPtr make_identity_paraphrase_provider(const std::string& id = "mock_identity");

// Token scorer with hash-derived logprobs/ranks; vocabulary words score as
// likely (low rank), other words as unlikely. Provides 4-way topk
// distributions per position.
ProviderPtr make_mock_logprob_provider(std::uint64_t salt = 0,
                                       const std::string& id = "mock_logprob");

// Uniform scorer over a vocabulary of `vocab_size`: every token has
// logprob = -ln(vocab_size) and rank 1.
ProviderPtr make_uniform_logprob_provider(int vocab_size,
                                          const std::string& id = "mock_uniform");

// Bag-of-words hashed embeddings, L2-normalized, dimension `dim`.
ProviderPtr make_mock_embed_provider(int dim = 16, std::uint64_t salt = 0,
                                     const std::string& id = "mock_embed");

// Embeds every text as the same fixed vector.
ProviderPtr make_const_embed_provider(std::vector<double> vec,
                                      const std::string& id = "mock_const_embed");

// Two-class logits driven by the fraction of model-vocabulary words.
ProviderPtr make_mock_classifier_provider(std::uint64_t salt = 0,
                                          const std::string& id = "mock_classifier");

// Classifier that always returns the given logits.
ProviderPtr make_const_classifier_provider(double logit_ai, double logit_human,
                                           const std::string& id = "mock_const_classifier");

// Chat judge: extracts the quoted sentence(s) from the last user turn and
// replies "0"/"1" from a deterministic machine-likeness statistic.
ProviderPtr make_mock_judge_provider(std::uint64_t salt = 0, const std::string& id = "mock_judge");

// Chat provider that replays a fixed list of replies in order; raises a
// refusal when the script is exhausted. `calls()` exposes the number of chat
// calls made so far.
class ScriptedChatProvider : public Provider {
 public:
  ScriptedChatProvider(std::vector<std::string> replies, std::string id = "mock_scripted");
  std::string id() const override { return id_; }
  Capabilities capabilities() const override { return {.chat = true}; }
  std::string chat(const std::vector<ChatMessage>&, const GenerationRequest&) override;
  int calls() const { return calls_; }

 private:
  std::vector<std::string> replies_;
  std::string id_;
  int calls_ = 0;
};

// Mock provider configured from a script file mapping sha256(canonical
// request) to a response string; key "*" is the fallback. Supports generate
// and chat.
ProviderPtr make_script_file_provider(const std::string& path, const std::string& id);

// Wraps a provider and fails the first `failures` calls of each operation
// with a transport error before delegating.
ProviderPtr make_flaky_provider(ProviderPtr inner, int failures);

}  // namespace padben
