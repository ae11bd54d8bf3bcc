#include "padben/provider.hpp"

#include "padben/error.hpp"

namespace padben {

std::string Provider::generate(const GenerationRequest&) {
  raise(ErrorCode::capability, id() + ": text generation not supported");
}

std::string Provider::chat(const std::vector<ChatMessage>&, const GenerationRequest&) {
  raise(ErrorCode::capability, id() + ": chat completion not supported");
}

TokenScoreList Provider::score_tokens(const std::string&) {
  raise(ErrorCode::capability, id() + ": token logprobs not supported");
}

std::vector<double> Provider::embed(const std::string&) {
  raise(ErrorCode::capability, id() + ": embeddings not supported");
}

ClassifierOutput Provider::classify(const std::string&) {
  raise(ErrorCode::capability, id() + ": classification not supported");
}

}  // namespace padben
